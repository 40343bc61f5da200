#ifndef HYPERBALL_KERNELS_HPP
#define HYPERBALL_KERNELS_HPP

// Closed-form kernels on the ball: hyperbolic and Euclidean Poisson kernels
// and the radial kernel eta that carries one into the other.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hyperball/errors.hpp"
#include "hyperball/quadrature.hpp"
#include "hyperball/specfun.hpp"
#include "hyperball/vec.hpp"

namespace hyperball {

/// A radius r in [0, 1) and two boundary directions; t = <zeta, xi>.
class KernelPoint {
 public:
  KernelPoint(double r, const Vec& zeta, const Vec& xi) : r_(r), n_(zeta.dim()), t_(zeta.dot(xi)) {
    if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("kernel radius must lie in [0, 1)");
    if (zeta.dim() != xi.dim()) throw std::invalid_argument("kernel directions differ in dimension");
    t_ = std::clamp(t_, -1.0, 1.0);
  }
  /// Direct (r, t) form for zonal evaluations.
  KernelPoint(int n, double r, double t) : r_(r), n_(n), t_(t) {
    if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("kernel radius must lie in [0, 1)");
    if (std::abs(t) > 1.0) throw std::domain_error("|t| must not exceed 1");
  }
  double r() const { return r_; }
  double t() const { return t_; }
  int dim() const { return n_; }

 private:
  double r_;
  int n_;
  double t_;
};

/// 1 + r^2 - 2rt written as (1-r)^2 + 2r(1-t), which keeps full relative
/// accuracy near r = 1, t = 1.
inline double kernel_denominator(double r, double t) {
  const double a = 1.0 - r;
  return a * a + 2.0 * r * (1.0 - t);
}

inline double poisson_h(int n, double r, double t) {
  return std::pow((1.0 - r) * (1.0 + r) / kernel_denominator(r, t), n - 1);
}

inline double poisson_e(int n, double r, double t) {
  return (1.0 - r) * (1.0 + r) / std::pow(kernel_denominator(r, t), 0.5 * n);
}

inline double poisson_h(const KernelPoint& p) { return poisson_h(p.dim(), p.r(), p.t()); }
inline double poisson_e(const KernelPoint& p) { return poisson_e(p.dim(), p.r(), p.t()); }

/// P_h(x, xi) for x in the ball and xi on the sphere.
inline double poisson_h(const Vec& x, const Vec& xi) {
  const double r = x.norm();
  if (r == 0.0) return 1.0;
  return poisson_h(x.dim(), r, std::clamp(x.dot(xi) / r, -1.0, 1.0));
}

inline double poisson_e(const Vec& x, const Vec& xi) {
  const double r = x.norm();
  if (r == 0.0) return 1.0;
  return poisson_e(x.dim(), r, std::clamp(x.dot(xi) / r, -1.0, 1.0));
}

/// c_n = 1 / B(n/2 - 1, n/2).
inline double eta_constant(int n) { return 1.0 / beta_function(0.5 * n - 1.0, 0.5 * n); }

/// eta(r, s) = c_n (1-r^2) (1-r^2 s^2)^{2-n} [(1-s)(1-s r^2)]^{n/2-2} s^{n/2-1}.
/// At s = 0 and s = 1 the limit is returned when finite; for n = 3 the s = 1
/// endpoint is an integrable singularity and evaluates to +inf.
inline double eta(int n, double r, double s) {
  if (n < 3) throw UnsupportedDimension("eta needs n >= 3");
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("eta needs 0 <= r < 1");
  if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("eta needs 0 <= s <= 1");
  const double half = 0.5 * n;
  if (s == 0.0) return 0.0;
  const double r2 = r * r;
  const double q = (1.0 - s) * (1.0 - s * r2);
  if (q == 0.0 && half - 2.0 < 0.0) return std::numeric_limits<double>::infinity();
  return eta_constant(n) * (1.0 - r2) * std::pow(1.0 - r2 * s * s, 2.0 - n) * std::pow(q, half - 2.0) *
         std::pow(s, half - 1.0);
}

/// Rule on [0, 1] suited to eta's endpoint powers (s^{n/2-1} at 0, (1-s)^{n/2-2} at 1).
inline LineRule eta_rule(int per_half = 48) { return endpoint_graded_rule(per_half); }

/// int_0^1 eta(r, s) u(s) ds, where u(s) stands for u(r s zeta).
template <typename RadialLine>
double eta_transform(int n, RadialLine&& u, double r, const LineRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double s = rule.nodes[i];
    if (s <= 0.0 || s >= 1.0) continue;
    sum += rule.weights[i] * eta(n, r, s) * u(s);
  }
  return sum;
}

}  // namespace hyperball

#endif  // HYPERBALL_KERNELS_HPP
