#include "smrsd/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "smrsd/version.hpp"

namespace smrsd {

namespace {

using nlohmann::json;

constexpr std::int64_t kBatchTrials = 4096;

constexpr const char* kCsvHeader =
    "snr_db,decoder,psi_row,psi_col,ber_sim,ber_se,ber_bound,nodes_paper,"
    "nodes_total,nodes_theory,reduction_sim,reduction_theory,trials";

std::string fmt_g9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void reject_unknown_keys(const json& obj,
                         std::initializer_list<const char*> allowed,
                         const char* where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw SpecError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
T require_field(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key)) {
    throw SpecError(std::string("missing key '") + key + "' in " + where);
  }
  return obj.at(key).get<T>();
}

template <typename T>
T optional_field(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

bool has_decoder(const ExperimentSpec& spec, const std::string& name) {
  return std::find(spec.decoders.begin(), spec.decoders.end(), name) !=
         spec.decoders.end();
}

}  // namespace

void ExperimentSpec::validate() const {
  try {
    system.validate();
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  if (snr_points_db.empty()) {
    throw SpecError("snr_points_db must be non-empty");
  }
  for (std::size_t i = 1; i < snr_points_db.size(); ++i) {
    if (!(snr_points_db[i] > snr_points_db[i - 1])) {
      throw SpecError("snr_points_db must be strictly increasing");
    }
  }
  if (min_trials < 1) throw SpecError("min_trials must be >= 1");
  if (min_bit_errors < 0) throw SpecError("min_bit_errors must be >= 0");
  if (max_trials < min_trials) {
    throw SpecError("max_trials must be >= min_trials");
  }
  if (decoders.empty()) throw SpecError("decoders must be non-empty");
  for (const std::string& d : decoders) {
    if (d != "ML" && d != "RSD") {
      throw SpecError("unknown decoder '" + d + "' (expected ML or RSD)");
    }
  }
  if (has_decoder(*this, "RSD")) {
    if (rsd_psi_row_list.empty()) {
      throw SpecError("rsd_psi_row_list must be non-empty when RSD is run");
    }
    for (const int pr : rsd_psi_row_list) {
      if (pr < 1 || pr > system.num_rx) {
        throw SpecError("rsd_psi_row_list entries must lie in [1, num_rx]");
      }
    }
  }
  if (quadrature_order < 1 || quadrature_order > 64) {
    throw SpecError("quadrature_order must lie in [1, 64]");
  }
  if (channel_samples_theory < 1) {
    throw SpecError("channel_samples_theory must be >= 1");
  }
}

ExperimentSpec parse_spec_text(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SpecError(std::string("spec is not valid JSON: ") + e.what());
  }
  try {
    reject_unknown_keys(root,
                        {"system", "snr_points_db", "min_trials",
                         "min_bit_errors", "max_trials", "decoders",
                         "rsd_psi_row_list", "outputs", "quadrature_order",
                         "channel_samples_theory"},
                        "spec");
    ExperimentSpec spec;
    if (!root.contains("system")) throw SpecError("missing key 'system'");
    const json& sys = root.at("system");
    reject_unknown_keys(sys,
                        {"qam_order", "num_tx", "num_rx", "snr_db", "psi_row",
                         "psi_col", "seed"},
                        "system");
    spec.system.qam_order = require_field<int>(sys, "qam_order", "system");
    spec.system.num_tx = require_field<int>(sys, "num_tx", "system");
    spec.system.num_rx = require_field<int>(sys, "num_rx", "system");
    spec.system.snr_db = optional_field<double>(sys, "snr_db", 0.0);
    spec.system.psi_row = require_field<int>(sys, "psi_row", "system");
    spec.system.psi_col = require_field<int>(sys, "psi_col", "system");
    spec.system.seed = require_field<std::uint64_t>(sys, "seed", "system");

    spec.snr_points_db =
        require_field<std::vector<double>>(root, "snr_points_db", "spec");
    spec.min_trials =
        optional_field<std::int64_t>(root, "min_trials", spec.min_trials);
    spec.min_bit_errors = optional_field<std::int64_t>(root, "min_bit_errors",
                                                       spec.min_bit_errors);
    spec.max_trials =
        optional_field<std::int64_t>(root, "max_trials", spec.max_trials);
    spec.decoders = optional_field<std::vector<std::string>>(root, "decoders",
                                                             spec.decoders);
    spec.rsd_psi_row_list = optional_field<std::vector<int>>(
        root, "rsd_psi_row_list", {spec.system.psi_row});
    if (root.contains("outputs")) {
      const json& out = root.at("outputs");
      reject_unknown_keys(
          out, {"sim_csv", "theory_csv", "sim_manifest", "theory_manifest"},
          "outputs");
      spec.outputs.sim_csv =
          optional_field<std::string>(out, "sim_csv", spec.outputs.sim_csv);
      spec.outputs.theory_csv = optional_field<std::string>(
          out, "theory_csv", spec.outputs.theory_csv);
      spec.outputs.sim_manifest = optional_field<std::string>(
          out, "sim_manifest", spec.outputs.sim_manifest);
      spec.outputs.theory_manifest = optional_field<std::string>(
          out, "theory_manifest", spec.outputs.theory_manifest);
    }
    spec.quadrature_order =
        optional_field<int>(root, "quadrature_order", spec.quadrature_order);
    spec.channel_samples_theory = optional_field<std::int64_t>(
        root, "channel_samples_theory", spec.channel_samples_theory);
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed spec value: ") + e.what());
  }
}

ExperimentSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_spec_text(buffer.str());
}

std::string spec_to_json(const ExperimentSpec& spec) {
  json root;
  root["system"] = {{"qam_order", spec.system.qam_order},
                    {"num_tx", spec.system.num_tx},
                    {"num_rx", spec.system.num_rx},
                    {"snr_db", spec.system.snr_db},
                    {"psi_row", spec.system.psi_row},
                    {"psi_col", spec.system.psi_col},
                    {"seed", spec.system.seed}};
  root["snr_points_db"] = spec.snr_points_db;
  root["min_trials"] = spec.min_trials;
  root["min_bit_errors"] = spec.min_bit_errors;
  root["max_trials"] = spec.max_trials;
  root["decoders"] = spec.decoders;
  root["rsd_psi_row_list"] = spec.rsd_psi_row_list;
  root["outputs"] = {{"sim_csv", spec.outputs.sim_csv},
                     {"theory_csv", spec.outputs.theory_csv},
                     {"sim_manifest", spec.outputs.sim_manifest},
                     {"theory_manifest", spec.outputs.theory_manifest}};
  root["quadrature_order"] = spec.quadrature_order;
  root["channel_samples_theory"] = spec.channel_samples_theory;
  return root.dump(2) + "\n";
}

std::vector<std::string> preset_names() { return {"paper-8x8", "paper-16x16"}; }

ExperimentSpec preset_spec(const std::string& name) {
  ExperimentSpec spec;
  spec.snr_points_db = {0.0, 3.0, 6.0, 9.0, 12.0, 15.0, 18.0};
  spec.system.qam_order = 16;
  spec.system.snr_db = 0.0;
  spec.system.seed = 20250809;
  spec.quadrature_order = 7;
  if (name == "paper-8x8") {
    spec.system.num_tx = 8;
    spec.system.num_rx = 8;
    spec.system.psi_row = 8;
    spec.system.psi_col = 70;
    spec.min_trials = 10000;
    spec.min_bit_errors = 200;
    spec.max_trials = 1000000;
    spec.rsd_psi_row_list = {1, 2, 4, 8};
    spec.channel_samples_theory = 1000;
    spec.outputs = {"paper_8x8_sim.csv", "paper_8x8_theory.csv",
                    "paper_8x8_sim_manifest.json",
                    "paper_8x8_theory_manifest.json"};
  } else if (name == "paper-16x16") {
    spec.system.num_tx = 16;
    spec.system.num_rx = 16;
    spec.system.psi_row = 16;
    spec.system.psi_col = 180;
    // The larger system runs a fixed, reduced trial budget per point.
    spec.min_trials = 10000;
    spec.min_bit_errors = 0;
    spec.max_trials = 10000;
    spec.rsd_psi_row_list = {1, 2, 4, 8, 16};
    spec.channel_samples_theory = 300;
    spec.outputs = {"paper_16x16_sim.csv", "paper_16x16_theory.csv",
                    "paper_16x16_sim_manifest.json",
                    "paper_16x16_theory_manifest.json"};
  } else {
    throw SpecError("unknown preset '" + name + "'");
  }
  return spec;
}

namespace {

struct DecoderTask {
  std::string label;
  bool is_ml = false;
  int psi_row = 0;
  int psi_col = 0;
  bool active = true;
  std::int64_t trials = 0;
  std::int64_t bit_errors = 0;
  std::int64_t nodes_paper = 0;
  std::int64_t nodes_total = 0;
};

}  // namespace

std::vector<SweepRecord> run_sweep(const ExperimentSpec& spec, int workers) {
  spec.validate();
  const SystemConfig& base = spec.system;
  const Constellation constellation = build_qam(base.qam_order);
  const int count = base.hypotheses();
  const int bits = base.bits_per_message();
  const int num_workers = std::max(1, workers);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<std::uint32_t> labels(count);
  for (int j = 0; j < count; ++j) {
    labels[j] = message_label(j, base, constellation);
  }

  std::vector<SweepRecord> records;
  for (std::size_t s = 0; s < spec.snr_points_db.size(); ++s) {
    const double snr_db = spec.snr_points_db[s];
    const double noise_var = snr_to_noise_var(snr_db);

    std::vector<DecoderTask> tasks;
    if (has_decoder(spec, "ML")) {
      tasks.push_back({"ML", true, base.num_rx, count});
    }
    if (has_decoder(spec, "RSD")) {
      for (const int pr : spec.rsd_psi_row_list) {
        tasks.push_back({"RSD", false, pr, base.psi_col});
      }
    }

    std::int64_t next_trial = 0;
    while (true) {
      std::vector<int> active_ids;
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].active) active_ids.push_back(static_cast<int>(i));
      }
      if (active_ids.empty()) break;

      const std::int64_t batch =
          std::min<std::int64_t>(kBatchTrials, spec.max_trials - next_trial);
      const std::int64_t chunk = (batch + num_workers - 1) / num_workers;

      // (bit errors, paper nodes, total nodes) per worker and active task.
      std::vector<std::vector<std::array<std::int64_t, 3>>> partial(
          num_workers, std::vector<std::array<std::int64_t, 3>>(
                           active_ids.size(), {0, 0, 0}));

      auto work = [&](int w) {
        const std::int64_t lo = next_trial + w * chunk;
        const std::int64_t hi = std::min(next_trial + batch, lo + chunk);
        if (lo >= hi) return;
        CandidateSet candidates;
        ChannelMatrix channel(base.num_rx, base.num_tx);
        Eigen::VectorXcd received(base.num_rx);
        RsdWorkspace workspace;
        for (std::int64_t t = lo; t < hi; ++t) {
          Stream rng = Stream::derive(base.seed, StreamKind::SimTrial,
                                      static_cast<std::uint64_t>(s),
                                      static_cast<std::uint64_t>(t));
          const std::uint32_t word = rng.bits(bits);
          const SmMessage msg = map_bits(word, base, constellation);
          const int true_index = flat_index(msg, base.qam_order);
          draw_channel_into(channel, rng);
          build_candidates_into(candidates, channel, constellation);
          received = candidates.vectors.col(true_index);
          for (int n = 0; n < base.num_rx; ++n) {
            received(n) += rng.cgauss(noise_var);
          }
          for (std::size_t ti = 0; ti < active_ids.size(); ++ti) {
            const DecoderTask& task = tasks[active_ids[ti]];
            const DecodeOutcome outcome =
                task.is_ml ? ml_decode(received, candidates)
                           : rsd_decode(received, candidates, task.psi_row,
                                        task.psi_col, &workspace);
            auto& acc = partial[w][ti];
            acc[0] += std::popcount(labels[outcome.estimated_index] ^
                                    msg.label);
            acc[1] += outcome.visited_paper;
            acc[2] += outcome.visited_total;
          }
        }
      };

      if (num_workers == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        pool.reserve(num_workers);
        for (int w = 0; w < num_workers; ++w) {
          pool.emplace_back(work, w);
        }
        for (std::thread& th : pool) th.join();
      }

      for (int w = 0; w < num_workers; ++w) {
        for (std::size_t ti = 0; ti < active_ids.size(); ++ti) {
          DecoderTask& task = tasks[active_ids[ti]];
          task.bit_errors += partial[w][ti][0];
          task.nodes_paper += partial[w][ti][1];
          task.nodes_total += partial[w][ti][2];
        }
      }
      next_trial += batch;
      for (const int i : active_ids) {
        DecoderTask& task = tasks[i];
        task.trials = next_trial;
        const bool satisfied = task.trials >= spec.min_trials &&
                               task.bit_errors >= spec.min_bit_errors;
        task.active = !satisfied && task.trials < spec.max_trials;
      }
    }

    for (const DecoderTask& task : tasks) {
      SweepRecord rec;
      rec.snr_db = snr_db;
      rec.decoder = task.label;
      rec.psi_row = task.psi_row;
      rec.psi_col = task.psi_col;
      const double total_bits = static_cast<double>(task.trials) * bits;
      rec.ber_sim = static_cast<double>(task.bit_errors) / total_bits;
      rec.ber_se =
          std::sqrt(rec.ber_sim * (1.0 - rec.ber_sim) / total_bits);
      rec.ber_bound = nan;
      rec.nodes_paper = static_cast<double>(task.nodes_paper) /
                        static_cast<double>(task.trials);
      rec.nodes_total = static_cast<double>(task.nodes_total) /
                        static_cast<double>(task.trials);
      rec.nodes_theory = nan;
      rec.reduction_sim = reduction_ratio(rec.nodes_paper, base);
      rec.reduction_theory = nan;
      rec.trials = task.trials;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::vector<SweepRecord> run_theory(const ExperimentSpec& spec) {
  spec.validate();
  const SystemConfig& base = spec.system;
  const Constellation constellation = build_qam(base.qam_order);
  const int count = base.hypotheses();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double full_nodes = static_cast<double>(count) * base.num_rx;
  const QuadratureRule rule = gauss_laguerre(spec.quadrature_order);
  const std::span<const double> grid(spec.snr_points_db);

  // Level-1 miss probability per SNR point, shared by every psi_row row.
  std::vector<double> term2(grid.size(), 0.0);
  if (has_decoder(spec, "RSD")) {
    for (std::size_t s = 0; s < grid.size(); ++s) {
      SystemConfig cfg = base;
      cfg.snr_db = grid[s];
      term2[s] = estimate_term2(cfg, constellation,
                                spec.channel_samples_theory)
                     .probability;
    }
  }

  const std::vector<double> ml_bound =
      has_decoder(spec, "ML")
          ? ml_ber_bound(base, constellation, grid)
          : std::vector<double>(grid.size(), nan);

  struct RsdTheory {
    std::vector<double> bound;
    std::vector<double> nodes;
    std::vector<double> node_se;
  };
  std::vector<RsdTheory> rsd(spec.rsd_psi_row_list.size());
  if (has_decoder(spec, "RSD")) {
    for (std::size_t r = 0; r < spec.rsd_psi_row_list.size(); ++r) {
      SystemConfig cfg = base;
      cfg.psi_row = spec.rsd_psi_row_list[r];
      rsd[r].bound = rsd_ber_bound(cfg, constellation, grid, term2,
                                   PairSummation::Full);
      rsd[r].nodes.resize(grid.size());
      rsd[r].node_se.resize(grid.size());
      for (std::size_t s = 0; s < grid.size(); ++s) {
        SystemConfig point = cfg;
        point.snr_db = grid[s];
        const ComplexityEstimate est = expected_complexity_semianalytic(
            point, constellation, spec.channel_samples_theory, rule);
        rsd[r].nodes[s] = est.expected_nodes;
        rsd[r].node_se[s] = est.std_error;
      }
    }
  }

  std::vector<SweepRecord> records;
  for (std::size_t s = 0; s < grid.size(); ++s) {
    if (has_decoder(spec, "ML")) {
      SweepRecord rec;
      rec.snr_db = grid[s];
      rec.decoder = "ML";
      rec.psi_row = base.num_rx;
      rec.psi_col = count;
      rec.ber_sim = nan;
      rec.ber_se = nan;
      rec.ber_bound = ml_bound[s];
      rec.nodes_paper = nan;
      rec.nodes_total = nan;
      rec.nodes_theory = full_nodes;
      rec.reduction_sim = nan;
      rec.reduction_theory = 0.0;
      rec.trials = 0;
      records.push_back(std::move(rec));
    }
    if (has_decoder(spec, "RSD")) {
      for (std::size_t r = 0; r < spec.rsd_psi_row_list.size(); ++r) {
        SweepRecord rec;
        rec.snr_db = grid[s];
        rec.decoder = "RSD";
        rec.psi_row = spec.rsd_psi_row_list[r];
        rec.psi_col = base.psi_col;
        rec.ber_sim = nan;
        rec.ber_se = nan;
        rec.ber_bound = rsd[r].bound[s];
        rec.nodes_paper = nan;
        rec.nodes_total = nan;
        rec.nodes_theory = rsd[r].nodes[s];
        rec.reduction_sim = nan;
        rec.reduction_theory =
            1.0 - std::min(rsd[r].nodes[s], full_nodes) / full_nodes;
        rec.trials = spec.channel_samples_theory;
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

std::string render_csv(std::span<const SweepRecord> records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const SweepRecord& rec : records) {
    out += fmt_g9(rec.snr_db);
    out += ',';
    out += rec.decoder;
    out += ',';
    out += std::to_string(rec.psi_row);
    out += ',';
    out += std::to_string(rec.psi_col);
    for (const double v :
         {rec.ber_sim, rec.ber_se, rec.ber_bound, rec.nodes_paper,
          rec.nodes_total, rec.nodes_theory, rec.reduction_sim,
          rec.reduction_theory}) {
      out += ',';
      out += fmt_g9(v);
    }
    out += ',';
    out += std::to_string(rec.trials);
    out += '\n';
  }
  return out;
}

void write_csv(std::span<const SweepRecord> records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << render_csv(records);
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

std::vector<SweepRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("unexpected CSV header in " + path);
  }
  std::vector<SweepRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 13) {
      throw std::runtime_error("malformed CSV row in " + path + ": " + line);
    }
    SweepRecord rec;
    rec.snr_db = std::strtod(fields[0].c_str(), nullptr);
    rec.decoder = fields[1];
    rec.psi_row = std::stoi(fields[2]);
    rec.psi_col = std::stoi(fields[3]);
    rec.ber_sim = std::strtod(fields[4].c_str(), nullptr);
    rec.ber_se = std::strtod(fields[5].c_str(), nullptr);
    rec.ber_bound = std::strtod(fields[6].c_str(), nullptr);
    rec.nodes_paper = std::strtod(fields[7].c_str(), nullptr);
    rec.nodes_total = std::strtod(fields[8].c_str(), nullptr);
    rec.nodes_theory = std::strtod(fields[9].c_str(), nullptr);
    rec.reduction_sim = std::strtod(fields[10].c_str(), nullptr);
    rec.reduction_theory = std::strtod(fields[11].c_str(), nullptr);
    rec.trials = std::stoll(fields[12]);
    records.push_back(std::move(rec));
  }
  return records;
}

void write_manifest(const ExperimentSpec& spec, const std::string& command,
                    const std::string& path, int workers,
                    double elapsed_seconds) {
  json root;
  root["tool"] = "smrsd";
  root["version"] = kVersion;
  root["command"] = command;
  root["seed"] = spec.system.seed;
  root["workers"] = workers;
  root["elapsed_seconds"] = elapsed_seconds;
  root["created_unix"] = static_cast<std::int64_t>(std::time(nullptr));
  root["spec"] = json::parse(spec_to_json(spec));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open manifest file: " + path);
  out << root.dump(2) << '\n';
}

CompareReport compare(std::span<const SweepRecord> sim,
                      std::span<const SweepRecord> theory,
                      const CompareOptions& options) {
  const auto key = [](const SweepRecord& rec) {
    return rec.decoder + "|" + std::to_string(rec.psi_row) + "|" +
           std::to_string(rec.psi_col) + "|" + fmt_g9(rec.snr_db);
  };
  std::map<std::string, const SweepRecord*> theory_by_key;
  for (const SweepRecord& rec : theory) theory_by_key[key(rec)] = &rec;
  if (theory_by_key.size() != theory.size()) {
    throw std::runtime_error("compare: duplicate rows in theory records");
  }

  std::set<double> snrs;
  for (const SweepRecord& rec : sim) snrs.insert(rec.snr_db);
  double cutoff = options.high_snr_from_db;
  if (std::isnan(cutoff)) {
    std::vector<double> sorted(snrs.begin(), snrs.end());
    cutoff = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
  }

  CompareReport report;
  std::ostringstream text;
  text << "comparison (high-SNR region: snr_db >= " << fmt_g9(cutoff)
       << ", bound slack " << options.ber_sigma
       << " sigma, complexity tolerance " << options.complexity_tol * 100.0
       << "%)\n";

  std::size_t matched = 0;
  for (const SweepRecord& rec : sim) {
    const auto it = theory_by_key.find(key(rec));
    if (it == theory_by_key.end()) {
      throw std::runtime_error("compare: no theory row for sim row " +
                               key(rec));
    }
    ++matched;
    const SweepRecord& th = *it->second;
    const bool high_snr = rec.snr_db >= cutoff;

    text << "snr=" << fmt_g9(rec.snr_db) << " " << rec.decoder << "("
         << rec.psi_row << "," << rec.psi_col << ")";
    if (std::isfinite(th.ber_bound) && std::isfinite(rec.ber_sim)) {
      const double delta = th.ber_bound - rec.ber_sim;
      const bool violated =
          high_snr && th.ber_bound < rec.ber_sim - options.ber_sigma *
                                                        rec.ber_se;
      text << " ber_sim=" << fmt_g9(rec.ber_sim)
           << " bound=" << fmt_g9(th.ber_bound)
           << " delta=" << fmt_g9(delta);
      if (violated) {
        text << " BOUND-VIOLATION";
        ++report.violations;
      }
    }
    if (std::isfinite(th.nodes_theory) && std::isfinite(rec.nodes_paper) &&
        rec.nodes_paper > 0.0) {
      const double rel =
          std::abs(th.nodes_theory - rec.nodes_paper) / rec.nodes_paper;
      const bool violated = high_snr && rel > options.complexity_tol;
      text << " nodes_sim=" << fmt_g9(rec.nodes_paper)
           << " nodes_theory=" << fmt_g9(th.nodes_theory)
           << " rel=" << fmt_g9(rel);
      if (violated) {
        text << " COMPLEXITY-MISMATCH";
        ++report.violations;
      }
    }
    text << '\n';
  }
  if (matched != theory.size()) {
    throw std::runtime_error(
        "compare: theory records contain rows absent from the simulation");
  }
  text << (report.violations == 0
               ? "no violations\n"
               : std::to_string(report.violations) + " violation(s)\n");
  report.text = text.str();
  return report;
}

}  // namespace smrsd
