#include "smrsd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smrsd {

namespace {

constexpr double kSeriesTol = 1e-15;
constexpr int kSeriesCap = 10000;

// Poisson(mean) pmf at integer k, evaluated in the log domain.
double poisson_pmf(double mean, double k) {
  if (mean == 0.0) return k == 0.0 ? 1.0 : 0.0;
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

// Upper regularized gamma Q(n, x) for integer n >= 1: the probability that
// a Poisson(x) variate is at most n-1. Summed over the Poisson mass window
// only, so the cost is O(sqrt(x)) regardless of n.
double upper_gamma_q(std::int64_t n, double x) {
  if (x <= 0.0) return 1.0;
  const double spread = 45.0 * std::sqrt(x) + 45.0;
  const double r_hi = x + spread;
  if (static_cast<double>(n - 1) >= r_hi) return 1.0;
  const double r_lo = std::max(0.0, std::floor(x - spread));
  if (static_cast<double>(n - 1) < r_lo) return 0.0;

  // Start at the in-window mode and recur outward; all terms positive.
  const std::int64_t top = n - 1;
  const std::int64_t mode =
      std::clamp(static_cast<std::int64_t>(std::floor(x)),
                 static_cast<std::int64_t>(r_lo), top);
  double sum = 0.0;
  double term = poisson_pmf(x, static_cast<double>(mode));
  for (std::int64_t r = mode; r <= top; ++r) {
    sum += term;
    term *= x / static_cast<double>(r + 1);
    if (term < kSeriesTol * sum) break;
  }
  term = poisson_pmf(x, static_cast<double>(mode));
  for (std::int64_t r = mode - 1; r >= static_cast<std::int64_t>(r_lo); --r) {
    term *= static_cast<double>(r + 1) / x;
    sum += term;
    if (term < kSeriesTol * sum) break;
  }
  return std::min(sum, 1.0);
}

// Laguerre polynomial L_n and value of L_{n-1} at x via the three-term
// recurrence.
struct LaguerrePair {
  double ln;
  double lnm1;
};
LaguerrePair laguerre_eval(int n, double x) {
  double p0 = 1.0;
  double p1 = 1.0 - x;
  if (n == 0) return {p0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double p2 =
        ((2.0 * k + 1.0 - x) * p1 - static_cast<double>(k) * p0) /
        static_cast<double>(k + 1);
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

// Golub-Welsch: eigen-decomposition of the Jacobi matrix of the Laguerre
// recurrence. Used when Newton refinement fails to settle.
QuadratureRule laguerre_by_jacobi(int beta) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(beta, beta);
  for (int k = 0; k < beta; ++k) {
    jacobi(k, k) = 2.0 * k + 1.0;
    if (k + 1 < beta) {
      jacobi(k, k + 1) = static_cast<double>(k + 1);
      jacobi(k + 1, k) = static_cast<double>(k + 1);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gauss_laguerre: Jacobi eigensolve failed");
  }
  QuadratureRule rule;
  rule.order = beta;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(beta);
  for (int k = 0; k < beta; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights(k) = v0 * v0;  // mu_0 = integral of exp(-x) = 1
  }
  return rule;
}

}  // namespace

double pochhammer(double a, int n) {
  double prod = 1.0;
  for (int k = 0; k < n; ++k) prod *= a + static_cast<double>(k);
  return prod;
}

std::optional<double> kummer_1f1(double a, double b, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < kSeriesCap; ++n) {
    const double ratio = (a + n) * z / ((b + n) * (n + 1.0));
    term *= ratio;
    sum += term;
    if (std::abs(term) <= kSeriesTol * std::abs(sum) && std::abs(ratio) < 1.0) {
      return sum;
    }
  }
  return std::nullopt;
}

LogKummerResult kummer_1f1_log(double a, double b, double z) {
  // Positive-term series with periodic rescaling; log_scale carries the
  // factored-out magnitude.
  double term = 1.0;
  double sum = 1.0;
  double log_scale = 0.0;
  for (int n = 0; n < kSeriesCap; ++n) {
    const double ratio = (a + n) * z / ((b + n) * (n + 1.0));
    term *= ratio;
    sum += term;
    if (sum > 1e280) {
      sum *= 1e-280;
      term *= 1e-280;
      log_scale += 280.0 * std::log(10.0);
    }
    if (term <= kSeriesTol * sum && ratio < 1.0) {
      return {std::log(sum) + log_scale, true};
    }
  }
  return {std::log(sum) + log_scale, false};
}

double marcum_q(int m, double a, double b) {
  if (m < 1) throw std::invalid_argument("marcum_q: order must be >= 1");
  if (!(a >= 0.0) || !(b >= 0.0)) {
    throw std::invalid_argument("marcum_q: arguments must be nonnegative");
  }
  if (b == 0.0) return 1.0;
  if (std::isinf(a)) return 1.0;
  if (std::isinf(b)) return 0.0;

  const double b_sq = b * b;
  const double mean = 2.0 * m + a * a;
  const double sd = 2.0 * std::sqrt(static_cast<double>(m) + a * a);
  if (b_sq <= mean - 45.0 * sd) return 1.0;
  if (b_sq >= mean + 45.0 * sd + 100.0) return 0.0;

  const double x = 0.5 * b_sq;
  if (a == 0.0) return upper_gamma_q(m, x);

  const double lam = 0.5 * a * a;
  const std::int64_t k0 = static_cast<std::int64_t>(std::floor(lam));

  const double p0 = poisson_pmf(lam, static_cast<double>(k0));
  const double g0 = upper_gamma_q(m + k0, x);
  const double d0 = poisson_pmf(x, static_cast<double>(m + k0));

  double sum = 0.0;
  // Upward from the Poisson mode of lambda.
  {
    double p = p0, g = g0, d = d0;
    for (std::int64_t k = k0;; ++k) {
      sum += p * g;
      if (p < 1e-20 && k > k0) break;
      if (k - k0 > 2000000) break;
      g = std::min(g + d, 1.0);
      d *= x / static_cast<double>(m + k + 1);
      p *= lam / static_cast<double>(k + 1);
    }
  }
  // Downward (terms for k < k0).
  {
    double p = p0, g = g0, d = d0;
    for (std::int64_t k = k0 - 1; k >= 0; --k) {
      p *= static_cast<double>(k + 1) / lam;
      d *= static_cast<double>(m + k + 1) / x;
      g = std::max(g - d, 0.0);
      sum += p * g;
      if (p < 1e-20) break;
    }
  }
  return std::clamp(sum, 0.0, 1.0);
}

double noncentral_chi2_cdf(int half_dof, double gamma_sq, double zeta,
                           double sigma_g_sq) {
  if (half_dof < 1) {
    throw std::invalid_argument("noncentral_chi2_cdf: half_dof must be >= 1");
  }
  if (sigma_g_sq <= 0.0) {
    // Degenerate noiseless limit: v equals gamma_sq exactly.
    return gamma_sq <= zeta ? 1.0 : 0.0;
  }
  const double a = gamma_sq > 0.0
                       ? std::sqrt(2.0 * gamma_sq / sigma_g_sq)
                       : 0.0;
  const double b = zeta > 0.0 ? std::sqrt(2.0 * zeta / sigma_g_sq) : 0.0;
  return std::clamp(1.0 - marcum_q(half_dof, a, b), 0.0, 1.0);
}

QuadratureRule gauss_laguerre(int beta) {
  if (beta < 1 || beta > 64) {
    throw std::invalid_argument("gauss_laguerre: order must be in [1, 64]");
  }
  QuadratureRule rule;
  rule.order = beta;
  rule.nodes.resize(beta);
  rule.weights.resize(beta);

  bool newton_ok = true;
  double z = 0.0;
  for (int i = 0; i < beta && newton_ok; ++i) {
    // Stroud/Secrest style initial guesses.
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * beta);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * beta);
    } else {
      const double ai = static_cast<double>(i - 1);
      z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes(i - 2));
    }
    bool settled = false;
    for (int it = 0; it < 100; ++it) {
      const LaguerrePair lp = laguerre_eval(beta, z);
      const double deriv = beta * (lp.ln - lp.lnm1) / z;
      const double step = lp.ln / deriv;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(z, 1.0)) {
        settled = true;
        break;
      }
    }
    if (!settled || !(z > 0.0) || !std::isfinite(z)) {
      newton_ok = false;
      break;
    }
    rule.nodes(i) = z;
    const double lnp1 = laguerre_eval(beta + 1, z).ln;
    rule.weights(i) = z / ((beta + 1.0) * (beta + 1.0) * lnp1 * lnp1);
  }

  if (newton_ok) {
    for (int i = 1; i < beta; ++i) {
      if (!(rule.nodes(i) > rule.nodes(i - 1))) {
        newton_ok = false;
        break;
      }
    }
  }
  if (!newton_ok) {
    rule = laguerre_by_jacobi(beta);
  }

  // Self-check against the exact zeroth and first moments of exp(-x).
  const double w_sum = rule.weights.sum();
  const double wz_sum = rule.weights.dot(rule.nodes);
  if (std::abs(w_sum - 1.0) > 1e-12 || std::abs(wz_sum - 1.0) > 1e-11) {
    rule = laguerre_by_jacobi(beta);
    const double w2 = rule.weights.sum();
    const double wz2 = rule.weights.dot(rule.nodes);
    if (std::abs(w2 - 1.0) > 1e-12 || std::abs(wz2 - 1.0) > 1e-11) {
      throw std::runtime_error("gauss_laguerre: rule failed moment checks");
    }
  }
  return rule;
}

}  // namespace smrsd
