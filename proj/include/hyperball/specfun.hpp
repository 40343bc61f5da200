#ifndef HYPERBALL_SPECFUN_HPP
#define HYPERBALL_SPECFUN_HPP

// Scalar special functions: Pochhammer symbols, the Gauss series 2F1, the
// radial coefficients of H-harmonic extensions and Gegenbauer polynomials.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "hyperball/errors.hpp"

namespace hyperball {

/// Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
inline double pochhammer(double a, int k) {
  double p = 1.0;
  for (int j = 0; j < k; ++j) p *= a + j;
  return p;
}

/// Truncation policy shared by every series in the library.
struct SeriesControl {
  double rel_tol = 1e-13;
  double abs_tol = 1e-300;
  std::int64_t max_terms = 1'000'000;
};

/// Neumaier's compensated sum; order of additions is the order of calls.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

namespace detail {

// Returns m >= 0 when v is the non-positive integer -m.
inline std::optional<std::int64_t> nonpositive_integer(double v) {
  if (v <= 0.0 && v == std::floor(v) && v > -1e15) return static_cast<std::int64_t>(-v);
  return std::nullopt;
}

}  // namespace detail

/// Parameters (a, b, c) of Gauss' series. Rejects a pole in (c)_k that the
/// series would actually reach.
class HypergeoParams {
 public:
  HypergeoParams(double a, double b, double c) : a_(a), b_(b), c_(c) {
    if (auto mc = detail::nonpositive_integer(c)) {
      const auto t = terminating_index();
      if (!t || *t > *mc)
        throw std::domain_error("2F1: c = " + std::to_string(c) +
                                " is a non-positive integer reached before the series terminates");
    }
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

  /// Last index with a nonzero term, when a or b is a non-positive integer.
  std::optional<std::int64_t> terminating_index() const {
    auto ma = detail::nonpositive_integer(a_);
    auto mb = detail::nonpositive_integer(b_);
    if (ma && mb) return std::min(*ma, *mb);
    return ma ? ma : mb;
  }

 private:
  double a_, b_, c_;
};

namespace detail {

// Sums  sum_k t_k x^k w(k)  where t_k are the 2F1 coefficients and w is a
// per-term weight (used for the N^k derivatives). Ascending k, compensated.
template <typename Weight>
double hypergeometric_series(const HypergeoParams& p, double x, Weight&& weight,
                             const SeriesControl& ctl, std::int64_t* terms_used = nullptr) {
  const auto last = p.terminating_index();
  if (!last && x == 1.0 && p.c() - p.a() - p.b() <= 0.0)
    throw NonConvergent("2F1 diverges at x = 1 when c - a - b <= 0");
  if (!last && std::abs(x) > 1.0) throw NonConvergent("2F1 series diverges for |x| > 1");

  CompensatedSum sum;
  double coeff = 1.0;  // t_k x^k
  std::int64_t k = 0;
  for (;; ++k) {
    const double term = coeff * weight(k);
    sum.add(term);
    if (last && k >= *last) break;
    const double kd = static_cast<double>(k);
    coeff *= (p.a() + kd) * (p.b() + kd) / ((p.c() + kd) * (kd + 1.0)) * x;
    if (coeff == 0.0) break;
    const double next = coeff * weight(k + 1);
    if (std::abs(next) < ctl.rel_tol * std::abs(sum.value()) + ctl.abs_tol) {
      sum.add(next);
      ++k;
      break;
    }
    if (k + 1 >= ctl.max_terms)
      throw ToleranceNotReached("2F1 series: term cap reached before tolerance");
  }
  if (terms_used) *terms_used = k + 1;
  return sum.value();
}

}  // namespace detail

/// Gauss' hypergeometric series 2F1(a, b; c; x) for x in [0, 1].
inline double gauss_2f1(const HypergeoParams& p, double x, const SeriesControl& ctl = {}) {
  return detail::hypergeometric_series(p, x, [](std::int64_t) { return 1.0; }, ctl);
}

/// Gauss' summation 2F1(a,b;c;1) = G(c)G(c-a-b) / (G(c-a)G(c-b)), evaluated
/// with log-Gamma. Requires c, c-a, c-b and c-a-b positive.
inline double gauss_sum_at_one(const HypergeoParams& p) {
  const double c = p.c(), a = p.a(), b = p.b();
  if (!(c > 0 && c - a > 0 && c - b > 0 && c - a - b > 0))
    throw std::domain_error("gauss_sum_at_one: arguments outside the positive Gamma range");
  return std::exp(std::lgamma(c) + std::lgamma(c - a - b) - std::lgamma(c - a) - std::lgamma(c - b));
}

/// F_l(x) = 2F1(l, 1 - n/2; l + n/2; x); terminates when n is even.
class RadialCoefficient {
 public:
  RadialCoefficient(int n, int l) : n_(n), l_(l), params_(l, 1.0 - 0.5 * n, l + 0.5 * n) {
    if (n < 3) throw UnsupportedDimension("radial coefficient needs n >= 3");
    if (l < 0) throw std::domain_error("negative degree");
    // F_0 == 1; avoids the Gamma(l) pole in the closed forms.
    f_at_one_ = (l == 0) ? 1.0 : gauss_sum_at_one(params_);
  }

  int dim() const { return n_; }
  int degree() const { return l_; }
  bool terminating() const { return n_ % 2 == 0; }
  const HypergeoParams& params() const { return params_; }
  double at_one() const { return f_at_one_; }

  double F(double x, const SeriesControl& ctl = {}) const { return gauss_2f1(params_, x, ctl); }
  double f(double x, const SeriesControl& ctl = {}) const { return F(x, ctl) / f_at_one_; }

  /// (N^k [f_l(s^2) s^l])(r) with N = r d/dr, summed term by term:
  /// t_j r^{2j+l} maps to t_j (2j+l)^k r^{2j+l}.
  double normal_derivative(int k, double r, const SeriesControl& ctl = {},
                           std::int64_t* terms_used = nullptr) const {
    if (r < 0.0 || r > 1.0) throw std::domain_error("radial coefficient needs 0 <= r <= 1");
    if (k == 0 && r == 1.0) return 1.0;
    if (r == 0.0) return (l_ == 0 && k == 0) ? 1.0 : 0.0;
    const int l = l_;
    auto weight = [k, l](std::int64_t j) {
      const double m = 2.0 * static_cast<double>(j) + l;
      double w = 1.0;
      for (int i = 0; i < k; ++i) w *= m;
      return w;
    };
    const double s =
        detail::hypergeometric_series(params_, r * r, weight, ctl, terms_used);
    return s * std::pow(r, l_) / f_at_one_;
  }

 private:
  int n_;
  int l_;
  HypergeoParams params_;
  double f_at_one_ = 1.0;
};

/// f_l(r^2) r^l, the radial factor multiplying the degree-l boundary component.
inline double radial_coeff(int n, int l, double r, const SeriesControl& ctl = {}) {
  return RadialCoefficient(n, l).normal_derivative(0, r, ctl);
}

/// N^k applied to the radial factor, term-wise exact.
inline double radial_coeff_nk(int n, int l, int k, double r, const SeriesControl& ctl = {}) {
  return RadialCoefficient(n, l).normal_derivative(k, r, ctl);
}

/// Gegenbauer polynomial C_l^lambda(t) by the three-term recurrence.
inline double gegenbauer(double lambda, int l, double t) {
  if (l == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * lambda * t;
  for (int k = 2; k <= l; ++k) {
    const double next = (2.0 * t * (k + lambda - 1.0) * cur - (k + 2.0 * lambda - 2.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Beta function via log-Gamma, positive arguments.
inline double beta_function(double x, double y) {
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

}  // namespace hyperball

#endif  // HYPERBALL_SPECFUN_HPP
