#include "smrsd/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace smrsd {

namespace {

// log( (i)_n / (2^n n!) ) built incrementally over n.
double log_sum_exp(const std::vector<double>& logs) {
  double peak = -std::numeric_limits<double>::infinity();
  for (const double v : logs) peak = std::max(peak, v);
  if (std::isinf(peak)) return peak;
  double acc = 0.0;
  for (const double v : logs) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

// P(v(i,j) <= zeta) marginalized over the depth-L noise-energy law, via
// the hypergeometric closed form. Returns a clamped probability; sets
// series_ok = false when any 1F1 evaluation hits its term cap.
double node_visit_prob_closed(int level, double gamma_sq, double noise_var,
                              int psi_row, bool& series_ok) {
  const double c = gamma_sq / noise_var;
  const double z = 0.5 * c;
  std::vector<double> logs;
  logs.reserve(psi_row);
  double log_coef = 0.0;
  for (int n = 0; n < psi_row; ++n) {
    if (n > 0) {
      log_coef += std::log(static_cast<double>(level) + n - 1.0) -
                  std::log(2.0) - std::log(static_cast<double>(n));
    }
    const LogKummerResult f =
        kummer_1f1_log(static_cast<double>(n + level),
                       static_cast<double>(level), z);
    if (!f.converged) {
      series_ok = false;
      return 0.0;
    }
    logs.push_back(log_coef + f.log_value);
  }
  const double log_p =
      -c - level * std::log(2.0) + log_sum_exp(logs);
  return std::clamp(std::exp(log_p), 0.0, 1.0);
}

// Effective weights g_k = w_k z_k^(L-1) / (L-1)! of the noise-energy
// density under the Gauss-Laguerre substitution.
std::vector<double> density_weights(const QuadratureRule& rule, int psi_row) {
  std::vector<double> g(rule.order);
  const double log_fact = std::lgamma(static_cast<double>(psi_row));
  for (int k = 0; k < rule.order; ++k) {
    g[k] = std::exp(std::log(rule.weights(k)) +
                    (psi_row - 1.0) * std::log(rule.nodes(k)) - log_fact);
  }
  return g;
}

double node_visit_prob_quadrature(int level, double gamma_sq,
                                  double noise_var,
                                  const QuadratureRule& rule,
                                  const std::vector<double>& g) {
  double a = 0.0;
  if (gamma_sq > 0.0) {
    if (noise_var <= 0.0) return 0.0;  // noiseless: metric exceeds any radius
    a = std::sqrt(2.0 * gamma_sq / noise_var);
  }
  double expected_q = 0.0;
  for (int k = 0; k < rule.order; ++k) {
    expected_q += g[k] * marcum_q(level, a, std::sqrt(2.0 * rule.nodes(k)));
  }
  return std::clamp(1.0 - expected_q, 0.0, 1.0);
}

// Squared distance prefixes between the true candidate and candidate j.
void gamma_sq_prefixes(const CandidateSet& candidates, int true_index, int j,
                       int psi_row, std::vector<double>& out) {
  out.resize(psi_row);
  double acc = 0.0;
  for (int n = 0; n < psi_row; ++n) {
    acc += abs2(candidates.vectors(n, true_index) - candidates.vectors(n, j));
    out[n] = acc;
  }
}

}  // namespace

PepParams pep_params(std::complex<double> symbol_a,
                     std::complex<double> symbol_b, double rho_linear) {
  if (rho_linear < 0.0) {
    throw std::invalid_argument("pep_params: rho must be nonnegative");
  }
  PepParams p;
  p.rho = rho_linear;
  p.sigma_sq = rho_linear * (abs2(symbol_a) + abs2(symbol_b)) / 4.0;
  p.mu = 0.5 * (1.0 - std::sqrt(p.sigma_sq / (1.0 + p.sigma_sq)));
  return p;
}

double term1_pep(double mu, int level_count) {
  if (level_count < 1) {
    throw std::invalid_argument("term1_pep: level count must be >= 1");
  }
  // sum_{k=0}^{L-1} C(L-1+k, k) (1-mu)^k, binomials built by recurrence.
  double coeff = 1.0;
  double sum = 1.0;
  const double q = 1.0 - mu;
  double q_pow = 1.0;
  for (int k = 1; k < level_count; ++k) {
    coeff *= static_cast<double>(level_count - 1 + k) / static_cast<double>(k);
    q_pow *= q;
    sum += coeff * q_pow;
  }
  return std::pow(mu, level_count) * sum;
}

namespace {

// Shared union-bound kernel: per-pair Hamming distance times the
// diversity-L pairwise term, normalized by hypotheses * bits.
std::vector<double> union_bound(const SystemConfig& config,
                                const Constellation& constellation,
                                std::span<const double> snr_points_db,
                                int level_count, std::span<const double> term2,
                                int pair_limit) {
  const int order = config.qam_order;
  const int count = config.hypotheses();
  const int bits = config.bits_per_message();
  std::vector<std::uint32_t> labels(count);
  for (int j = 0; j < count; ++j) {
    labels[j] = message_label(j, config, constellation);
  }

  std::vector<double> bound(snr_points_db.size(), 0.0);
  std::vector<double> pep_table(order * order);
  for (std::size_t s = 0; s < snr_points_db.size(); ++s) {
    const double rho = 1.0 / snr_to_noise_var(snr_points_db[s]);
    for (int m = 0; m < order; ++m) {
      for (int mh = 0; mh < order; ++mh) {
        const PepParams p = pep_params(constellation.points(m),
                                       constellation.points(mh), rho);
        pep_table[m * order + mh] = term1_pep(p.mu, level_count);
      }
    }
    const double t2 = term2.empty() ? 0.0 : term2[s];
    double acc = 0.0;
    for (int j = 0; j < pair_limit; ++j) {
      for (int jh = 0; jh < pair_limit; ++jh) {
        if (j == jh) continue;
        const int delta = std::popcount(labels[j] ^ labels[jh]);
        const double pep =
            pep_table[symbol_of(j, order) * order + symbol_of(jh, order)];
        acc += delta * (pep + t2);
      }
    }
    bound[s] = acc / (static_cast<double>(count) * bits);
  }
  return bound;
}

}  // namespace

std::vector<double> ml_ber_bound(const SystemConfig& config,
                                 const Constellation& constellation,
                                 std::span<const double> snr_points_db) {
  return union_bound(config, constellation, snr_points_db, config.num_rx,
                     {}, config.hypotheses());
}

std::vector<double> rsd_ber_bound(const SystemConfig& config,
                                  const Constellation& constellation,
                                  std::span<const double> snr_points_db,
                                  std::span<const double> term2,
                                  PairSummation mode) {
  const int limit = mode == PairSummation::Full ? config.hypotheses()
                                                : config.psi_col;
  return union_bound(config, constellation, snr_points_db, config.psi_row,
                     term2, limit);
}

bool ml_optimum_in_kept(const Eigen::VectorXcd& received,
                        const CandidateSet& candidates, int psi_col) {
  const DecodeOutcome ml = ml_decode(received, candidates);
  Eigen::VectorXd level1(candidates.count());
  const std::complex<double> y0 = received(0);
  for (int j = 0; j < candidates.count(); ++j) {
    level1(j) = abs2(y0 - candidates.vectors(0, j));
  }
  const std::vector<int> kept = select_kept_branches(level1, psi_col);
  return std::binary_search(kept.begin(), kept.end(), ml.estimated_index);
}

Term2Estimate estimate_term2(const SystemConfig& config,
                             const Constellation& constellation,
                             std::int64_t trials) {
  if (trials < 1) {
    throw std::invalid_argument("estimate_term2: trials must be >= 1");
  }
  const double noise_var = snr_to_noise_var(config.snr_db);
  const std::uint64_t snr_key = std::bit_cast<std::uint64_t>(config.snr_db);
  std::int64_t misses = 0;
  CandidateSet candidates;
  for (std::int64_t t = 0; t < trials; ++t) {
    Stream rng = Stream::derive(config.seed, StreamKind::Term2, snr_key,
                                static_cast<std::uint64_t>(t));
    const std::uint32_t word = rng.bits(config.bits_per_message());
    const SmMessage msg = map_bits(word, config, constellation);
    const ChannelMatrix channel =
        draw_channel(config.num_rx, config.num_tx, rng);
    build_candidates_into(candidates, channel, constellation);
    const Eigen::VectorXcd y = simulate_transmission(
        candidates, flat_index(msg, config.qam_order), noise_var, rng);
    if (!ml_optimum_in_kept(y, candidates, config.psi_col)) ++misses;
  }
  Term2Estimate est;
  est.trials = trials;
  est.probability = static_cast<double>(misses) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.probability * (1.0 - est.probability) /
                            static_cast<double>(trials));
  return est;
}

ComplexityEstimate expected_complexity_closed(const CandidateSet& candidates,
                                              int true_index,
                                              double noise_var, int psi_row,
                                              int psi_col,
                                              std::span<const int> kept) {
  if (noise_var <= 0.0) {
    throw std::invalid_argument(
        "expected_complexity_closed: noise_var must be positive");
  }
  ComplexityEstimate est;
  est.method = ComplexityMethod::ClosedForm;
  est.psi_row = psi_row;
  est.psi_col = psi_col;

  QuadratureRule fallback_rule;
  std::vector<double> fallback_g;

  double nodes = static_cast<double>(psi_col);
  std::vector<double> gamma_sq;
  for (const int j : kept) {
    gamma_sq_prefixes(candidates, true_index, j, psi_row, gamma_sq);
    for (int i = 1; i <= psi_row; ++i) {
      bool series_ok = true;
      double p = node_visit_prob_closed(i, gamma_sq[i - 1], noise_var,
                                        psi_row, series_ok);
      if (!series_ok) {
        est.used_series_fallback = true;
        if (fallback_g.empty()) {
          fallback_rule = gauss_laguerre(32);
          fallback_g = density_weights(fallback_rule, psi_row);
        }
        p = node_visit_prob_quadrature(i, gamma_sq[i - 1], noise_var,
                                       fallback_rule, fallback_g);
      }
      nodes += p;
    }
  }
  est.expected_nodes = nodes;
  return est;
}

ComplexityEstimate expected_complexity_quadrature(
    const CandidateSet& candidates, int true_index, double noise_var,
    int psi_row, int psi_col, std::span<const int> kept,
    const QuadratureRule& rule) {
  ComplexityEstimate est;
  est.method = ComplexityMethod::Quadrature;
  est.psi_row = psi_row;
  est.psi_col = psi_col;

  const std::vector<double> g = density_weights(rule, psi_row);
  double nodes = static_cast<double>(psi_col);
  std::vector<double> gamma_sq;
  for (const int j : kept) {
    gamma_sq_prefixes(candidates, true_index, j, psi_row, gamma_sq);
    for (int i = 1; i <= psi_row; ++i) {
      nodes += node_visit_prob_quadrature(i, gamma_sq[i - 1], noise_var,
                                          rule, g);
    }
  }
  est.expected_nodes = nodes;
  return est;
}

ComplexityEstimate expected_complexity_semianalytic(
    const SystemConfig& config, const Constellation& constellation,
    std::int64_t channel_samples, const QuadratureRule& rule) {
  if (channel_samples < 1) {
    throw std::invalid_argument(
        "expected_complexity_semianalytic: need at least one sample");
  }
  const double noise_var = snr_to_noise_var(config.snr_db);
  const std::uint64_t snr_key = std::bit_cast<std::uint64_t>(config.snr_db);

  double mean = 0.0;
  double m2 = 0.0;
  CandidateSet candidates;
  Eigen::VectorXd level1;
  for (std::int64_t s = 0; s < channel_samples; ++s) {
    Stream rng = Stream::derive(config.seed, StreamKind::TheoryChannel,
                                snr_key, static_cast<std::uint64_t>(s));
    const std::uint32_t word = rng.bits(config.bits_per_message());
    const SmMessage msg = map_bits(word, config, constellation);
    const int true_index = flat_index(msg, config.qam_order);
    const ChannelMatrix channel =
        draw_channel(config.num_rx, config.num_tx, rng);
    build_candidates_into(candidates, channel, constellation);

    // Screening modeled on noiseless level-1 metrics; the true branch has
    // metric zero and is always retained.
    level1.resize(candidates.count());
    for (int j = 0; j < candidates.count(); ++j) {
      level1(j) =
          abs2(candidates.vectors(0, true_index) - candidates.vectors(0, j));
    }
    const std::vector<int> kept =
        select_kept_branches(level1, config.psi_col);

    const ComplexityEstimate one = expected_complexity_quadrature(
        candidates, true_index, noise_var, config.psi_row, config.psi_col,
        kept, rule);
    const double delta = one.expected_nodes - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (one.expected_nodes - mean);
  }

  ComplexityEstimate est;
  est.method = ComplexityMethod::Quadrature;
  est.psi_row = config.psi_row;
  est.psi_col = config.psi_col;
  est.channel_samples = channel_samples;
  est.expected_nodes = mean;
  if (channel_samples > 1) {
    est.std_error = std::sqrt(
        m2 / (static_cast<double>(channel_samples - 1) *
              static_cast<double>(channel_samples)));
  }
  return est;
}

double reduction_ratio(double expected_or_measured_nodes,
                       const SystemConfig& config) {
  const double full =
      static_cast<double>(config.hypotheses()) * config.num_rx;
  if (!(expected_or_measured_nodes >= 0.0) ||
      expected_or_measured_nodes > full) {
    throw std::invalid_argument(
        "reduction_ratio: node count outside [0, hypotheses*num_rx]");
  }
  return 1.0 - expected_or_measured_nodes / full;
}

}  // namespace smrsd
