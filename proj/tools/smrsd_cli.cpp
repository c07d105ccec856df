// Command-line front end: Monte Carlo sweeps, theory curves, and
// simulation-vs-theory comparison for SM-MIMO detection experiments.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "smrsd/harness.hpp"
#include "smrsd/version.hpp"

namespace {

// Exit codes: 0 success, 1 invalid spec, 2 runtime failure,
// 3 comparison tolerance violation.
constexpr int kExitOk = 0;
constexpr int kExitInvalidSpec = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitViolations = 3;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

int run_simulate(const std::string& spec_path, int workers) {
  const smrsd::ExperimentSpec spec = smrsd::parse_spec_file(spec_path);
  const auto start = std::chrono::steady_clock::now();
  const std::vector<smrsd::SweepRecord> records =
      smrsd::run_sweep(spec, workers);
  smrsd::write_csv(records, spec.outputs.sim_csv);
  smrsd::write_manifest(spec, "simulate", spec.outputs.sim_manifest, workers,
                        seconds_since(start));
  std::cout << "wrote " << records.size() << " records to "
            << spec.outputs.sim_csv << "\n";
  return kExitOk;
}

int run_theory_cmd(const std::string& spec_path) {
  const smrsd::ExperimentSpec spec = smrsd::parse_spec_file(spec_path);
  const auto start = std::chrono::steady_clock::now();
  const std::vector<smrsd::SweepRecord> records = smrsd::run_theory(spec);
  smrsd::write_csv(records, spec.outputs.theory_csv);
  smrsd::write_manifest(spec, "theory", spec.outputs.theory_manifest, 1,
                        seconds_since(start));
  std::cout << "wrote " << records.size() << " records to "
            << spec.outputs.theory_csv << "\n";
  return kExitOk;
}

int run_compare(const std::string& sim_path, const std::string& theory_path,
                const smrsd::CompareOptions& options) {
  const std::vector<smrsd::SweepRecord> sim = smrsd::read_csv(sim_path);
  const std::vector<smrsd::SweepRecord> theory = smrsd::read_csv(theory_path);
  const smrsd::CompareReport report = smrsd::compare(sim, theory, options);
  std::cout << report.text;
  return report.violations == 0 ? kExitOk : kExitViolations;
}

int run_preset(const std::string& name, const std::string& out_path) {
  const smrsd::ExperimentSpec spec = smrsd::preset_spec(name);
  const std::string text = smrsd::spec_to_json(spec);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out << text;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial-modulation MIMO detection experiments"};
  app.set_version_flag("--version", smrsd::kVersion);
  app.require_subcommand(1);

  std::string spec_path;
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run the Monte Carlo BER/complexity sweep for a spec file");
  simulate->add_option("spec", spec_path, "JSON experiment spec")->required();
  simulate->add_option("--workers", workers,
                       "worker threads (output is worker-count invariant)");

  std::string theory_spec_path;
  CLI::App* theory = app.add_subcommand(
      "theory", "Evaluate BER bounds and expected complexity for a spec file");
  theory->add_option("spec", theory_spec_path, "JSON experiment spec")
      ->required();

  std::string sim_csv, theory_csv;
  smrsd::CompareOptions copts;
  CLI::App* cmp = app.add_subcommand(
      "compare", "Compare a simulated sweep against a theory sweep");
  cmp->add_option("sim", sim_csv, "simulated sweep CSV")->required();
  cmp->add_option("theory", theory_csv, "theory sweep CSV")->required();
  cmp->add_option("--high-snr-db", copts.high_snr_from_db,
                  "start of the high-SNR region (default: grid median)");
  cmp->add_option("--ber-sigma", copts.ber_sigma,
                  "bound-violation slack in standard errors");
  cmp->add_option("--complexity-tol", copts.complexity_tol,
                  "relative node-count mismatch tolerance");

  std::string preset_name, preset_out;
  CLI::App* preset =
      app.add_subcommand("preset", "Print a built-in experiment spec");
  preset->add_option("name", preset_name, "preset name: paper-8x8, paper-16x16")
      ->required();
  preset->add_option("-o,--output", preset_out, "write the spec to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(spec_path, workers);
    if (theory->parsed()) return run_theory_cmd(theory_spec_path);
    if (cmp->parsed()) return run_compare(sim_csv, theory_csv, copts);
    if (preset->parsed()) return run_preset(preset_name, preset_out);
  } catch (const smrsd::SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitInvalidSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
