#ifndef SMRSD_NUMERICS_HPP
#define SMRSD_NUMERICS_HPP

#include <Eigen/Dense>

#include <optional>

namespace smrsd {

/// Rising factorial a(a+1)...(a+n-1); 1 for n = 0.
double pochhammer(double a, int n);

/// Kummer confluent hypergeometric 1F1(a; b; z) by direct series.
///
/// Terms are accumulated until the running term falls below 1e-15 of the
/// partial sum; nullopt is returned if the 10000-term cap is reached while
/// terms are still growing (callers switch to a quadrature route then).
std::optional<double> kummer_1f1(double a, double b, double z);

/// log(1F1(a; b; z)) for a, b, z > 0 (all series terms positive).
/// Internally rescaled so the result is finite even where 1F1 overflows.
struct LogKummerResult {
  double log_value;
  bool converged;
};
LogKummerResult kummer_1f1_log(double a, double b, double z);

/// Generalized Marcum Q-function of integer order m >= 1.
///
/// Q_m(a, b) is the upper tail at b^2 of a noncentral chi-square law with
/// 2m degrees of freedom and noncentrality a^2. Evaluated by the Poisson
/// mixture of regularized gamma tails, summed outward from the Poisson
/// mode with log-domain starting values; large-argument regions where the
/// result is 1 or 0 to within 1e-15 are short-circuited. Always finite,
/// always in [0, 1].
double marcum_q(int m, double a, double b);

/// P(v <= zeta) where v is a sum of i squared magnitudes of independent
/// complex Gaussians with per-entry variance sigma_g_sq and total squared
/// mean offset gamma_sq. Equals 1 - Q_i(sqrt(2 gamma_sq)/sigma_g,
/// sqrt(2 zeta)/sigma_g).
double noncentral_chi2_cdf(int half_dof, double gamma_sq, double zeta,
                           double sigma_g_sq);

/// Nodes and weights for integration against exp(-x) on (0, inf).
struct QuadratureRule {
  int order = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Gauss-Laguerre rule of the given order, 1 <= beta <= 64. Nodes are the
/// roots of the degree-beta Laguerre polynomial, found by Newton iteration
/// from standard initial guesses with a Jacobi-matrix eigensolve fallback.
QuadratureRule gauss_laguerre(int beta);

}  // namespace smrsd

#endif  // SMRSD_NUMERICS_HPP
