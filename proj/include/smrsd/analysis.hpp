#ifndef SMRSD_ANALYSIS_HPP
#define SMRSD_ANALYSIS_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "smrsd/decoders.hpp"
#include "smrsd/model.hpp"
#include "smrsd/numerics.hpp"

namespace smrsd {

/// Pairwise-error parameters for one ordered hypothesis pair.
/// mu = 0.5 (1 - sqrt(sigma_sq / (1 + sigma_sq))) with
/// sigma_sq = rho (|s_a|^2 + |s_b|^2) / 4.
struct PepParams {
  double mu = 0.5;
  double sigma_sq = 0.0;
  double rho = 0.0;
};

PepParams pep_params(std::complex<double> symbol_a,
                     std::complex<double> symbol_b, double rho_linear);

/// Diversity-L pairwise error probability:
/// mu^L * sum_{k=0}^{L-1} C(L-1+k, k) (1 - mu)^k.
double term1_pep(double mu, int level_count);

/// Union bound on the ML bit error rate, one value per SNR point.
std::vector<double> ml_ber_bound(const SystemConfig& config,
                                 const Constellation& constellation,
                                 std::span<const double> snr_points_db);

/// Pair-summation range for the reduced-search bound. Full sums every
/// ordered hypothesis pair; Literal restricts both indices to the first
/// psi_col flat indices.
enum class PairSummation { Full, Literal };

/// Union bound on the reduced-search bit error rate: the diversity term at
/// depth psi_row plus the per-SNR probability that the optimum is screened
/// out at level 1.
std::vector<double> rsd_ber_bound(const SystemConfig& config,
                                  const Constellation& constellation,
                                  std::span<const double> snr_points_db,
                                  std::span<const double> term2,
                                  PairSummation mode = PairSummation::Full);

/// True when the full-depth exhaustive argmin survives the level-1
/// screening with the given retained count.
bool ml_optimum_in_kept(const Eigen::VectorXcd& received,
                        const CandidateSet& candidates, int psi_col);

struct Term2Estimate {
  double probability = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

/// Monte Carlo estimate of the probability that the exhaustive argmin is
/// not among the psi_col smallest level-1 metrics, at config's SNR. Draws
/// depend only on (config.seed, trial index), never on psi_col, so
/// estimates across psi_col values share instances.
Term2Estimate estimate_term2(const SystemConfig& config,
                             const Constellation& constellation,
                             std::int64_t trials);

enum class ComplexityMethod { ClosedForm, Quadrature };

struct ComplexityEstimate {
  double expected_nodes = 0.0;
  ComplexityMethod method = ComplexityMethod::Quadrature;
  int psi_row = 0;
  int psi_col = 0;
  std::int64_t channel_samples = 1;
  double std_error = 0.0;
  bool used_series_fallback = false;  // closed form deferred to quadrature
};

/// Expected visited-node count for one channel realization via the
/// hypergeometric closed form. Per-node probabilities are evaluated in the
/// log domain and clamped to [0, 1]; nodes whose series fails to converge
/// fall back to the quadrature route and are flagged.
ComplexityEstimate expected_complexity_closed(const CandidateSet& candidates,
                                              int true_index,
                                              double noise_var, int psi_row,
                                              int psi_col,
                                              std::span<const int> kept);

/// Same expectation via Gauss-Laguerre quadrature of the Marcum Q tail
/// against the depth-psi_row noise-energy density.
ComplexityEstimate expected_complexity_quadrature(
    const CandidateSet& candidates, int true_index, double noise_var,
    int psi_row, int psi_col, std::span<const int> kept,
    const QuadratureRule& rule);

/// Quadrature estimate averaged over freshly drawn channel/message pairs,
/// with the retained set formed from noiseless level-1 metrics. Reports
/// the sample mean and its standard error.
ComplexityEstimate expected_complexity_semianalytic(
    const SystemConfig& config, const Constellation& constellation,
    std::int64_t channel_samples, const QuadratureRule& rule);

/// 1 - nodes / (qam_order * num_tx * num_rx). Throws if nodes is outside
/// [0, qam_order * num_tx * num_rx].
double reduction_ratio(double expected_or_measured_nodes,
                       const SystemConfig& config);

}  // namespace smrsd

#endif  // SMRSD_ANALYSIS_HPP
