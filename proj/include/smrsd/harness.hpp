#ifndef SMRSD_HARNESS_HPP
#define SMRSD_HARNESS_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "smrsd/analysis.hpp"
#include "smrsd/model.hpp"

namespace smrsd {

/// Invalid configuration or spec file (CLI exit code 1).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputPaths {
  std::string sim_csv = "sim.csv";
  std::string theory_csv = "theory.csv";
  std::string sim_manifest = "sim_manifest.json";
  std::string theory_manifest = "theory_manifest.json";
};

/// One experiment: a system, an SNR grid, stopping rules, decoder set and
/// output locations. JSON spec files mirror this struct field-for-field;
/// unknown keys are rejected.
struct ExperimentSpec {
  SystemConfig system;
  std::vector<double> snr_points_db;
  std::int64_t min_trials = 1000;
  std::int64_t min_bit_errors = 200;
  std::int64_t max_trials = 10000000;
  std::vector<std::string> decoders = {"ML", "RSD"};
  std::vector<int> rsd_psi_row_list;
  OutputPaths outputs;
  int quadrature_order = 7;
  std::int64_t channel_samples_theory = 1000;

  void validate() const;  // throws SpecError
};

ExperimentSpec parse_spec_text(const std::string& json_text);
ExperimentSpec parse_spec_file(const std::string& path);
std::string spec_to_json(const ExperimentSpec& spec);

/// Built-in experiment configurations ("paper-8x8", "paper-16x16").
ExperimentSpec preset_spec(const std::string& name);
std::vector<std::string> preset_names();

/// One CSV row: a (snr, decoder, psi_row, psi_col) cell with simulated
/// and/or theoretical quantities. Fields not produced by a run are NaN.
struct SweepRecord {
  double snr_db = 0.0;
  std::string decoder;
  int psi_row = 0;
  int psi_col = 0;
  double ber_sim = 0.0;
  double ber_se = 0.0;
  double ber_bound = 0.0;
  double nodes_paper = 0.0;
  double nodes_total = 0.0;
  double nodes_theory = 0.0;
  double reduction_sim = 0.0;
  double reduction_theory = 0.0;
  std::int64_t trials = 0;
};

/// Monte Carlo BER / complexity sweep. Per-trial draws depend only on
/// (seed, SNR index, trial index); batches are the only synchronization
/// points and all counters are exact integers, so the output is identical
/// for any worker count.
std::vector<SweepRecord> run_sweep(const ExperimentSpec& spec, int workers);

/// Analytical sweep: union bounds with the measured level-1 miss
/// probability, and semi-analytic expected complexity.
std::vector<SweepRecord> run_theory(const ExperimentSpec& spec);

std::string render_csv(std::span<const SweepRecord> records);
void write_csv(std::span<const SweepRecord> records, const std::string& path);
std::vector<SweepRecord> read_csv(const std::string& path);

void write_manifest(const ExperimentSpec& spec, const std::string& command,
                    const std::string& path, int workers,
                    double elapsed_seconds);

struct CompareOptions {
  double high_snr_from_db =
      std::numeric_limits<double>::quiet_NaN();  // NaN: median of the grid
  double ber_sigma = 3.0;
  double complexity_tol = 0.10;
};

struct CompareReport {
  std::string text;
  int violations = 0;
};

/// Per-point deltas between a simulated and a theoretical sweep sharing a
/// grid. Flags bound-ordering violations and complexity mismatches in the
/// configured high-SNR region. Throws std::runtime_error on grid mismatch.
CompareReport compare(std::span<const SweepRecord> sim,
                      std::span<const SweepRecord> theory,
                      const CompareOptions& options = {});

}  // namespace smrsd

#endif  // SMRSD_HARNESS_HPP
