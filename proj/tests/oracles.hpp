// Test-only reference implementations: adaptive quadrature and handbook
// densities used as independent oracles. Nothing here is shared with the
// library's computation paths.
#ifndef SMRSD_TESTS_ORACLES_HPP
#define SMRSD_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <stdexcept>

namespace oracles {

// Adaptive Simpson on [a, b] with absolute tolerance.
inline double adaptive_simpson_impl(const std::function<double(double)>& f,
                                    double a, double b, double fa, double fm,
                                    double fb, double whole, double tol,
                                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, 0.5 * tol,
                               depth - 1) +
         adaptive_simpson_impl(f, m, b, fm, frm, fb, right, 0.5 * tol,
                               depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol = 1e-12,
                               int depth = 48) {
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_impl(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Density of a noncentral chi-square law with dof degrees of freedom and
// noncentrality lambda (Bessel form; central branch for lambda = 0).
inline double noncentral_chi2_pdf(double x, int dof, double lambda) {
  if (x < 0.0) return 0.0;
  const double half_dof = 0.5 * dof;
  if (lambda == 0.0) {
    if (x == 0.0) return dof == 2 ? 0.5 : 0.0;
    return std::exp((half_dof - 1.0) * std::log(x) - 0.5 * x -
                    half_dof * std::log(2.0) - std::lgamma(half_dof));
  }
  if (x == 0.0) return dof == 2 ? 0.5 * std::exp(-0.5 * lambda) : 0.0;
  const double nu = half_dof - 1.0;
  const double z = std::sqrt(lambda * x);
  return 0.5 * std::exp(-0.5 * (x + lambda)) *
         std::pow(x / lambda, 0.5 * nu) * std::cyl_bessel_i(nu, z);
}

// Right tail of the noncentral chi-square law at threshold y, integrated
// numerically. Matches the Marcum Q parameterization via
// Q_m(a, b) = tail(dof = 2m, lambda = a^2, y = b^2).
inline double marcum_q_by_integration(int order, double a, double b,
                                      double tol = 1e-12) {
  const int dof = 2 * order;
  const double lambda = a * a;
  const double y = b * b;
  const double mean = dof + lambda;
  const double sd = std::sqrt(2.0 * (dof + 2.0 * lambda));
  const double upper = std::max(y, mean) + 60.0 * sd + 60.0;
  if (y >= upper) return 0.0;
  const auto pdf = [dof, lambda](double x) {
    return noncentral_chi2_pdf(x, dof, lambda);
  };
  // Piecewise over knots bracketing the density bump, so the subdivision
  // never terminates early on a wide, mostly-flat interval.
  double knots[] = {y,
                    mean - 4.0 * sd,
                    mean - 2.0 * sd,
                    mean,
                    mean + 2.0 * sd,
                    mean + 6.0 * sd,
                    mean + 20.0 * sd,
                    upper};
  for (double& k : knots) k = std::min(std::max(k, y), upper);
  std::sort(std::begin(knots), std::end(knots));
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < std::size(knots); ++i) {
    if (knots[i + 1] > knots[i]) {
      total += adaptive_simpson(pdf, knots[i], knots[i + 1], tol);
    }
  }
  return total;
}

}  // namespace oracles

#endif  // SMRSD_TESTS_ORACLES_HPP
