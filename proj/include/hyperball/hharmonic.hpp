#ifndef HYPERBALL_HHARMONIC_HPP
#define HYPERBALL_HHARMONIC_HPP

// H-harmonic extensions of finite boundary expansions and the operators that
// act on them degree by degree: N^k, polynomials in the tangential Laplacian,
// the radial-tangential form of D, boundary pairings, the boundary
// polynomials Q_k, growth classification of radial profiles, the Euclidean
// companion with multiplier Gamma(l+n-1)/(Gamma(n-1)Gamma(l)) and mean values.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hyperball/errors.hpp"
#include "hyperball/kernels.hpp"
#include "hyperball/parallel.hpp"
#include "hyperball/quadrature.hpp"
#include "hyperball/specfun.hpp"
#include "hyperball/spheregeom.hpp"
#include "hyperball/vec.hpp"

namespace hyperball {

// ---------------------------------------------------------------------------
// Radial factors

/// N^k [f_l(r^2) r^l], the H-harmonic radial factor.
class HyperbolicRadial {
 public:
  HyperbolicRadial(int n, int l) : rc_(n, l) {}
  double operator()(int k, double r, const SeriesControl& ctl) const { return rc_.normal_derivative(k, r, ctl); }

 private:
  RadialCoefficient rc_;
};

/// N^k [r^l] = l^k r^l, the Euclidean-harmonic radial factor.
class EuclideanRadial {
 public:
  EuclideanRadial(int /*n*/, int l) : l_(l) {}
  double operator()(int k, double r, const SeriesControl& /*ctl*/) const {
    if (l_ == 0) return k == 0 ? 1.0 : 0.0;
    return std::pow(static_cast<double>(l_), k) * std::pow(r, l_);
  }

 private:
  int l_;
};

/// u(r zeta) = sum_l R_l(r) phi_l(zeta) for a finite boundary expansion and a
/// family of radial factors R_l.
template <typename Radial>
class SeparatedExtension {
 public:
  explicit SeparatedExtension(BoundaryExpansion phi, SeriesControl ctl = {}) : phi_(std::move(phi)), ctl_(ctl) {
    for (const auto& [l, c] : phi_.components()) {
      degrees_.push_back(l);
      comps_.push_back(c);
      radial_.emplace_back(phi_.dim(), l);
    }
  }

  int dim() const { return phi_.dim(); }
  const BoundaryExpansion& boundary() const { return phi_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<DegreeComponent>& components() const { return comps_; }
  const SeriesControl& series_control() const { return ctl_; }

  /// N^k of the radial factor at degree index i.
  double radial_at(std::size_t i, int k, double r) const { return radial_[i](k, r, ctl_); }

  double radial(int l, int k, double r) const {
    for (std::size_t i = 0; i < degrees_.size(); ++i)
      if (degrees_[i] == l) return radial_at(i, k, r);
    return Radial(dim(), l)(k, r, ctl_);
  }

  /// (N^k u)(r zeta).
  double eval(double r, const Vec& zeta, int k = 0) const {
    double s = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const double y = comps_[i](zeta);
      if (y != 0.0) s += radial_at(i, k, r) * y;
    }
    return s;
  }

  double operator()(const Vec& x) const { return eval_nk(x, 0); }

  double eval_nk(const Vec& x, int k) const {
    const double r = x.norm();
    if (r == 0.0) return k == 0 ? phi_.mean() : 0.0;
    return eval(r, (1.0 / r) * x, k);
  }

  /// The boundary trace sum_l phi_l(zeta).
  double trace(const Vec& zeta) const { return phi_(zeta); }

  double at_origin() const { return phi_.mean(); }

 private:
  BoundaryExpansion phi_;
  SeriesControl ctl_;
  std::vector<int> degrees_;
  std::vector<DegreeComponent> comps_;
  std::vector<Radial> radial_;
};

using HHarmonicFunction = SeparatedExtension<HyperbolicRadial>;
using EuclideanHarmonicFunction = SeparatedExtension<EuclideanRadial>;

inline HHarmonicFunction extend(const BoundaryExpansion& phi, const SeriesControl& ctl = {}) {
  return HHarmonicFunction(phi, ctl);
}

inline EuclideanHarmonicFunction extend_euclidean(const BoundaryExpansion& phi) {
  return EuclideanHarmonicFunction(phi);
}

/// x -> (N^k u)(x), evaluated term-wise.
template <typename Radial>
class NormalDerivative {
 public:
  NormalDerivative(SeparatedExtension<Radial> u, int k) : u_(std::move(u)), k_(k) {
    if (k < 0) throw std::domain_error("N^k needs k >= 0");
  }
  double operator()(const Vec& x) const { return u_.eval_nk(x, k_); }
  double eval(double r, const Vec& zeta) const { return u_.eval(r, zeta, k_); }
  int order() const { return k_; }
  int dim() const { return u_.dim(); }
  const SeparatedExtension<Radial>& base() const { return u_; }

 private:
  SeparatedExtension<Radial> u_;
  int k_;
};

template <typename Radial>
NormalDerivative<Radial> apply_N(const SeparatedExtension<Radial>& u, int k) {
  return NormalDerivative<Radial>(u, k);
}

// ---------------------------------------------------------------------------
// Polynomials in Delta_sigma

/// Real polynomial, coefficients ascending in X.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double x) const {
    double s = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) s = s * x + coeffs[i];
    return s;
  }
  static Polynomial identity() { return Polynomial{{0.0, 1.0}}; }
  static Polynomial constant(double c) { return Polynomial{{c}}; }
};

inline double tangential_eigenvalue(int n, int l) { return -static_cast<double>(l) * (l + n - 2); }

/// Q(Delta_sigma) phi: degree l scaled by Q(-l(l+n-2)).
inline BoundaryExpansion apply_tangential_laplacian(const BoundaryExpansion& phi, const Polynomial& q) {
  const int n = phi.dim();
  return phi.multiplied([&](int l) { return q(tangential_eigenvalue(n, l)); });
}

template <typename Radial>
SeparatedExtension<Radial> apply_tangential_laplacian(const SeparatedExtension<Radial>& u, const Polynomial& q) {
  return SeparatedExtension<Radial>(apply_tangential_laplacian(u.boundary(), q), u.series_control());
}

/// |[(1-r^2) N^2 + (n-2)(1+r^2) N + (1-r^2) Delta_sigma] u| at x, each piece
/// exact per degree.
template <typename Radial>
double d_residual(const SeparatedExtension<Radial>& u, const Vec& x) {
  const double r = x.norm();
  if (!(r > 0.0 && r < 1.0)) throw std::domain_error("d_residual needs 0 < |x| < 1");
  const int n = u.dim();
  const Vec zeta = (1.0 / r) * x;
  const double a = (1.0 - r) * (1.0 + r);
  const double b = (n - 2.0) * (1.0 + r * r);
  double s = 0.0;
  for (std::size_t i = 0; i < u.components().size(); ++i) {
    const double y = u.components()[i](zeta);
    const int l = u.degrees()[i];
    const double r0 = u.radial_at(i, 0, r);
    const double r1 = u.radial_at(i, 1, r);
    const double r2 = u.radial_at(i, 2, r);
    s += y * (a * r2 + b * r1 + a * tangential_eigenvalue(n, l) * r0);
  }
  return std::abs(s);
}

// ---------------------------------------------------------------------------
// Poisson integral by quadrature

enum class ResolutionPolicy { warn, strict, silent };

/// Rule-of-thumb resolution check for the peaked kernel: (1-r) * degree >= 4.
inline bool poisson_resolved(double r, int exact_degree) { return (1.0 - r) * exact_degree >= 4.0; }

template <typename Phi>
double eval_poisson_integral(Phi&& phi, const Vec& x, const QuadratureRule& quad,
                             ResolutionPolicy policy = ResolutionPolicy::warn) {
  const double r = x.norm();
  if (!(r < 1.0)) throw std::domain_error("eval_poisson_integral needs |x| < 1");
  if (!poisson_resolved(r, quad.exact_degree)) {
    const std::string msg = "Poisson integral at r = " + std::to_string(r) +
                            " is under-resolved by a rule of degree " + std::to_string(quad.exact_degree);
    if (policy == ResolutionPolicy::strict) throw ResolutionError(msg);
    if (policy == ResolutionPolicy::warn) std::clog << "warning: " << msg << '\n';
  }
  double s = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) s += quad.weights[i] * poisson_h(x, quad.nodes[i]) * phi(quad.nodes[i]);
  return s;
}

// ---------------------------------------------------------------------------
// Boundary pairings

/// int u(r zeta) Phi(zeta) dsigma(zeta) by direct quadrature; u any callable on the ball.
template <typename U, typename Phi>
double boundary_pairing(const U& u, Phi&& Phi_, double r, const QuadratureRule& quad) {
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("boundary_pairing needs 0 <= r < 1");
  double s = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) s += quad.weights[i] * u(r * quad.nodes[i]) * Phi_(quad.nodes[i]);
  return s;
}

/// Per-degree pairings c_l = int phi_l Phi dsigma; the pairing of N^k u at
/// radius r is then sum_l R_l^{(k)}(r) c_l, the same quadrature sum regrouped.
template <typename Radial, typename Phi>
std::vector<double> degree_pairings(const SeparatedExtension<Radial>& u, Phi&& Phi_, const QuadratureRule& quad) {
  std::vector<double> phi_vals(quad.size());
  for (std::size_t q = 0; q < quad.size(); ++q) phi_vals[q] = quad.weights[q] * Phi_(quad.nodes[q]);
  std::vector<double> out(u.components().size(), 0.0);
  parallel_for(out.size(), [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q)
      if (phi_vals[q] != 0.0) s += phi_vals[q] * u.components()[i](quad.nodes[q]);
    out[i] = s;
  });
  return out;
}

template <typename Radial, typename Phi>
double boundary_pairing(const SeparatedExtension<Radial>& u, Phi&& Phi_, double r, const QuadratureRule& quad) {
  const auto c = degree_pairings(u, Phi_, quad);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += u.radial_at(i, 0, r) * c[i];
  return s;
}

template <typename Radial, typename Phi>
double boundary_pairing(const NormalDerivative<Radial>& v, Phi&& Phi_, double r, const QuadratureRule& quad) {
  const auto c = degree_pairings(v.base(), Phi_, quad);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += v.base().radial_at(i, v.order(), r) * c[i];
  return s;
}

// ---------------------------------------------------------------------------
// Radial profiles and growth classification

struct RadialProfile {
  std::vector<double> r_grid;
  std::vector<double> values;

  void validate() const {
    if (r_grid.size() != values.size()) throw std::invalid_argument("profile grid and values differ in length");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
      if (!(r_grid[i] > 0.0 && r_grid[i] < 1.0)) throw std::invalid_argument("profile radii must lie in (0, 1)");
      if (i > 0 && !(r_grid[i] > r_grid[i - 1])) throw std::invalid_argument("profile grid must increase");
      if (!std::isfinite(values[i])) throw std::invalid_argument("profile values must be finite");
    }
  }
};

/// m radii with 1 - r spaced geometrically from `gap_max` down to `gap_min`.
inline std::vector<double> geometric_r_grid(int m, double gap_max = 1e-1, double gap_min = 1e-4) {
  if (m < 2) throw std::invalid_argument("geometric_r_grid needs m >= 2");
  std::vector<double> g(static_cast<std::size_t>(m));
  const double a = std::log10(gap_max), b = std::log10(gap_min);
  for (int i = 0; i < m; ++i) g[i] = 1.0 - std::pow(10.0, a + (b - a) * i / (m - 1));
  return g;
}

/// r -> sum_l R_l^{(k)}(r) c_l on a grid, c from degree_pairings.
template <typename Radial>
RadialProfile pairing_profile(const SeparatedExtension<Radial>& u, int k, const std::vector<double>& pairings,
                              const std::vector<double>& r_grid) {
  RadialProfile p{r_grid, std::vector<double>(r_grid.size(), 0.0)};
  parallel_for(r_grid.size(), [&](std::size_t j) {
    CompensatedSum s;
    for (std::size_t i = 0; i < pairings.size(); ++i)
      if (pairings[i] != 0.0) s.add(u.radial_at(i, k, r_grid[j]) * pairings[i]);
    p.values[j] = s.value();
  });
  return p;
}

enum class GrowthKind { bounded_limit, logarithmic, power };

inline const char* to_string(GrowthKind k) {
  switch (k) {
    case GrowthKind::bounded_limit: return "bounded-limit";
    case GrowthKind::logarithmic: return "logarithmic";
    case GrowthKind::power: return "power";
  }
  return "?";
}

/// Model families on the fit window, L = log(1/(1-r)):
///   bounded-limit  B + C (1-r) L + D (1-r)   coefficient = B (the limit)
///   logarithmic    A L + B                   coefficient = A
///   power          C (1-r)^{-A}              coefficient = A
struct GrowthClass {
  GrowthKind kind = GrowthKind::bounded_limit;
  double coefficient = 0.0;
  double fit_residual = 0.0;
  double bounded_residual = 0.0;
  double log_residual = 0.0;
  double power_residual = 0.0;
  double log_coefficient = 0.0;
  double limit = 0.0;
  double power_exponent = 0.0;
};

inline constexpr int kMinProfilePoints = 20;
inline constexpr double kMinProfileDepth = 0.999;

inline GrowthClass growth_classify(const RadialProfile& p) {
  p.validate();
  if (p.r_grid.size() < static_cast<std::size_t>(kMinProfilePoints))
    throw InsufficientGrid("growth_classify needs at least 20 grid points");
  if (p.r_grid.back() < kMinProfileDepth) throw InsufficientGrid("growth_classify needs the grid to reach r >= 0.999");

  const std::size_t m = p.r_grid.size();
  const std::size_t start = m / 2;
  const std::size_t w = m - start;
  Eigen::VectorXd f(w), L(w), g(w);
  for (std::size_t i = 0; i < w; ++i) {
    const double r = p.r_grid[start + i];
    f(i) = p.values[start + i];
    g(i) = 1.0 - r;
    L(i) = -std::log1p(-r);
  }
  auto rms = [&](const Eigen::VectorXd& fit) { return std::sqrt((f - fit).squaredNorm() / static_cast<double>(w)); };

  GrowthClass out;
  {
    Eigen::MatrixXd a(w, 3);
    a.col(0).setOnes();
    a.col(1) = g.cwiseProduct(L);
    a.col(2) = g;
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(f);
    out.limit = c(0);
    out.bounded_residual = rms(a * c);
  }
  {
    Eigen::MatrixXd a(w, 2);
    a.col(0) = L;
    a.col(1).setOnes();
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(f);
    out.log_coefficient = c(0);
    out.log_residual = rms(a * c);
  }
  {
    const bool positive = (f.array() > 0.0).all();
    const bool negative = (f.array() < 0.0).all();
    if (positive || negative) {
      const double sign = positive ? 1.0 : -1.0;
      Eigen::MatrixXd a(w, 2);
      a.col(0) = L;
      a.col(1).setOnes();
      const Eigen::VectorXd logf = (sign * f).array().log().matrix();
      const Eigen::VectorXd c = a.colPivHouseholderQr().solve(logf);
      out.power_exponent = c(0);
      const Eigen::VectorXd fit = sign * (a * c).array().exp().matrix();
      out.power_residual = rms(fit);
    } else {
      out.power_residual = std::numeric_limits<double>::infinity();
    }
  }
  const double best = std::min({out.bounded_residual, out.log_residual, out.power_residual});
  const double slack = 1e-12 * f.cwiseAbs().maxCoeff() + 1e-300;
  const double accept = 1.05 * best + slack;
  // A power fit that clearly decays, (1-r)^a with a > 1/4, has limit 0 and belongs
  // to the bounded family.
  const bool decaying = out.power_exponent < -0.25 && std::isfinite(out.power_residual);
  if (decaying && out.power_residual < out.bounded_residual && out.power_residual <= accept) {
    out.kind = GrowthKind::bounded_limit;
    out.limit = 0.0;
    out.coefficient = 0.0;
    out.fit_residual = out.power_residual;
  } else if (out.bounded_residual <= accept) {
    out.kind = GrowthKind::bounded_limit;
    out.coefficient = out.limit;
    out.fit_residual = out.bounded_residual;
  } else if (out.log_residual <= accept) {
    out.kind = GrowthKind::logarithmic;
    out.coefficient = out.log_coefficient;
    out.fit_residual = out.log_residual;
  } else {
    out.kind = GrowthKind::power;
    out.coefficient = out.power_exponent;
    out.fit_residual = out.power_residual;
  }
  return out;
}

/// Classifies r -> <N^{n-1} u(r .), Phi>.
struct ScanResult {
  RadialProfile profile;
  GrowthClass growth;
};

template <typename Phi>
ScanResult theorem8_scan(const HHarmonicFunction& u, Phi&& Phi_, const QuadratureRule& quad,
                         const std::vector<double>& r_grid) {
  const int k = u.dim() - 1;
  const auto c = degree_pairings(u, Phi_, quad);
  ScanResult out;
  out.profile = pairing_profile(u, k, c, r_grid);
  out.growth = growth_classify(out.profile);
  return out;
}

// ---------------------------------------------------------------------------
// Exact rational arithmetic for the boundary polynomials

class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1) : num_(num), den_(den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    normalize();
  }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    return Rational(add(mul(a.num_, b.den_ / g), mul(b.num_, a.den_ / g)), mul(a.den_ / g, b.den_));
  }
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    const std::int64_t g1 = std::gcd(a.num_, b.den_), g2 = std::gcd(b.num_, a.den_);
    const std::int64_t d1 = g1 == 0 ? 1 : g1, d2 = g2 == 0 ? 1 : g2;
    return Rational(mul(a.num_ / d1, b.num_ / d2), mul(a.den_ / d2, b.den_ / d1));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return a * Rational(b.den_, b.num_);
  }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  std::string str() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }

 private:
  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
  }
  static std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
  }
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

/// Polynomial in X with rational coefficients, ascending.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
  static RationalPolynomial constant(Rational c) { return RationalPolynomial({c}); }
  static RationalPolynomial x() { return RationalPolynomial({Rational(0), Rational(1)}); }

  const std::vector<Rational>& coeffs() const { return c_; }
  /// Degree of the zero polynomial is -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rational coeff(int i) const { return i < static_cast<int>(c_.size()) ? c_[i] : Rational(0); }
  bool is_zero() const { return c_.empty(); }

  RationalPolynomial operator+(const RationalPolynomial& o) const {
    std::vector<Rational> c(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
    return RationalPolynomial(std::move(c));
  }
  RationalPolynomial operator*(const Rational& s) const {
    std::vector<Rational> c = c_;
    for (auto& v : c) v = v * s;
    return RationalPolynomial(std::move(c));
  }
  RationalPolynomial times_x() const {
    std::vector<Rational> c;
    c.reserve(c_.size() + 1);
    c.emplace_back(0);
    c.insert(c.end(), c_.begin(), c_.end());
    return RationalPolynomial(std::move(c));
  }
  Polynomial to_double() const {
    Polynomial p;
    for (const auto& v : c_) p.coeffs.push_back(v.value());
    return p;
  }
  bool operator==(const RationalPolynomial& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!(c_[i] == o.c_[i])) return false;
    return true;
  }
  std::string str() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c_[i].str() + ")";
      if (i > 0) s += i == 1 ? "X" : "X^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rational> c_;
};

struct PkPolynomial {
  int n = 0;
  int k = 0;
  RationalPolynomial coeffs;

  int degree() const { return coeffs.degree(); }
  Rational constant_term() const { return coeffs.coeff(0); }
  Polynomial to_double() const { return coeffs.to_double(); }
};

namespace detail {

inline std::int64_t factorial(int m) {
  std::int64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

inline std::int64_t pow2(int m) { return std::int64_t{1} << m; }

inline std::int64_t binomial(int m, int j) {
  std::int64_t b = 1;
  for (int i = 1; i <= j; ++i) b = b * (m - j + i) / i;
  return b;
}

}  // namespace detail

enum class PkSumLimit {
  k_minus_2,  // X P_j sum runs to k-2
  k_minus_3,  // X P_j sum runs to k-3
};

/// The recursion
///   P_k = 2^{k-1}(k-1)! sum_{j=2}^{k-2} [n(j-1)-(n-2)k] / (2^j (n-j-1)(k-j+1)!(j-1)!) P_j
///       + 2^{k-2}(k-1)! sum_{j=2}^{J} 1 / (2^j (n-j-1)(k-j-1)! j!) X P_j
///       + 2^{k-1} X,
/// P_0 = 2(n-1), P_1 = 0, with J = k-2 or k-3. Needs n - j - 1 != 0 for the
/// j used, i.e. k <= n.
inline PkPolynomial pk_polynomial(int n, int k, PkSumLimit limit = PkSumLimit::k_minus_2) {
  using detail::factorial;
  using detail::pow2;
  if (n < 3) throw UnsupportedDimension("pk_polynomial needs n >= 3");
  if (k < 0) throw OrderOutOfRange("pk_polynomial needs k >= 0");
  if (k > n) throw OrderOutOfRange("pk_polynomial: the recursion divides by n - j - 1 = 0 for k > n");
  if (k > 20) throw OrderOutOfRange("pk_polynomial supports k <= 20");
  std::vector<RationalPolynomial> P;
  P.push_back(RationalPolynomial::constant(Rational(2 * (n - 1))));
  P.emplace_back();
  for (int m = 2; m <= k; ++m) {
    RationalPolynomial acc = RationalPolynomial::x() * Rational(pow2(m - 1));
    const Rational lead1(pow2(m - 1) * factorial(m - 1));
    for (int j = 2; j <= m - 2; ++j) {
      const Rational c = lead1 * Rational(n * (j - 1) - (n - 2) * m) /
                         Rational(pow2(j) * (n - j - 1) * factorial(m - j + 1) * factorial(j - 1));
      acc = acc + P[j] * c;
    }
    const Rational lead2(pow2(m - 2) * factorial(m - 1));
    const int upper = limit == PkSumLimit::k_minus_2 ? m - 2 : m - 3;
    for (int j = 2; j <= upper; ++j) {
      const Rational c = lead2 / Rational(pow2(j) * (n - j - 1) * factorial(m - j - 1) * factorial(j));
      acc = acc + P[j].times_x() * c;
    }
    P.push_back(acc);
  }
  return PkPolynomial{n, k, P[k]};
}

/// P_k / (2(n-k-1)) from the closed recursion; defined for 0 <= k <= n-2.
inline RationalPolynomial qk_from_pk(int n, int k, PkSumLimit limit = PkSumLimit::k_minus_2) {
  if (k < 0 || k > n - 2) throw OrderOutOfRange("Q_k needs 0 <= k <= n-2");
  return pk_polynomial(n, k, limit).coeffs * (Rational(1) / Rational(2 * (n - k - 1)));
}

/// Boundary polynomial Q_k with N^k u = Q_k(Delta_sigma) u on the boundary,
/// obtained from the order-k-1 derivative of the radial-tangential equation
/// at r = 1:
///   2(n-k-1) Q_k = sum_{j=0}^{k-3} C(k-1,j) 2^{k-j-1} Q_{j+2}
///                + sum_{j=0}^{k-2} C(k-1,j) 2^{k-j-1} X Q_j
///                - (n-2) sum_{j=0}^{k-2} C(k-1,j) 2^{k-j-1} Q_{j+1},
/// Q_0 = 1, Q_1 = 0. Defined for 0 <= k <= n-2.
inline RationalPolynomial q_boundary_polynomial(int n, int k) {
  using detail::binomial;
  using detail::pow2;
  if (n < 3) throw UnsupportedDimension("q_boundary_polynomial needs n >= 3");
  if (k < 0 || k > n - 2) throw OrderOutOfRange("Q_k needs 0 <= k <= n-2");
  std::vector<RationalPolynomial> Q;
  Q.push_back(RationalPolynomial::constant(Rational(1)));
  Q.emplace_back();
  for (int m = 2; m <= k; ++m) {
    RationalPolynomial acc;
    for (int j = 0; j <= m - 3; ++j) acc = acc + Q[j + 2] * Rational(binomial(m - 1, j) * pow2(m - j - 1));
    for (int j = 0; j <= m - 2; ++j) {
      const Rational c(binomial(m - 1, j) * pow2(m - j - 1));
      acc = acc + Q[j].times_x() * c;
      acc = acc + Q[j + 1] * (c * Rational(-(n - 2)));
    }
    Q.push_back(acc * (Rational(1) / Rational(2 * (n - m - 1))));
  }
  return Q[k];
}

enum class BoundaryPolynomialForm { derived, closed_recursion };

struct Corollary7Profile {
  RadialProfile profile;
  /// max over the grid of |<N^k u, Phi>| and |<Q_k(Delta_sigma) u, Phi>|.
  double scale = 0.0;
};

/// r -> <(N^k u - Q_k(Delta_sigma) u)(r .), Phi>.
template <typename Phi>
Corollary7Profile corollary7_residual(const HHarmonicFunction& u, int k, Phi&& Phi_, const std::vector<double>& r_grid,
                                      const QuadratureRule& quad,
                                      BoundaryPolynomialForm form = BoundaryPolynomialForm::derived) {
  const int n = u.dim();
  if (k < 1 || k > n - 2) throw OrderOutOfRange("corollary7_residual needs 1 <= k <= n-2");
  const Polynomial q = (form == BoundaryPolynomialForm::derived ? q_boundary_polynomial(n, k) : qk_from_pk(n, k)).to_double();
  const auto c = degree_pairings(u, Phi_, quad);
  std::vector<double> cq(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) cq[i] = c[i] * q(tangential_eigenvalue(n, u.degrees()[i]));
  const RadialProfile nk = pairing_profile(u, k, c, r_grid);
  const RadialProfile qk = pairing_profile(u, 0, cq, r_grid);
  Corollary7Profile out;
  out.profile.r_grid = r_grid;
  out.profile.values.resize(r_grid.size());
  for (std::size_t j = 0; j < r_grid.size(); ++j) {
    out.profile.values[j] = nk.values[j] - qk.values[j];
    out.scale = std::max({out.scale, std::abs(nk.values[j]), std::abs(qk.values[j])});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Euclidean companion

/// Gamma(l+n-1) / (Gamma(n-1) Gamma(l)) for l >= 1, and 0 at l = 0.
inline double lemma9_multiplier(int n, int l) {
  if (l == 0) return 0.0;
  return std::exp(std::lgamma(l + n - 1.0) - std::lgamma(n - 1.0) - std::lgamma(static_cast<double>(l)));
}

/// v = sum_{l>=1} m_l r^l phi_l, with v(0) = 0.
inline EuclideanHarmonicFunction lemma9_pair(const HHarmonicFunction& u) {
  const int n = u.dim();
  return EuclideanHarmonicFunction(u.boundary().multiplied([n](int l) { return lemma9_multiplier(n, l); }));
}

/// u0 + int_0^1 v(r t zeta) [(1-t)(1-t r^2)]^{n/2-1} dt / t.
inline double lemma9_reconstruct(const EuclideanHarmonicFunction& v, double u0, double r, const Vec& zeta,
                                 const LineRule& rule) {
  const int n = v.dim();
  const double e = 0.5 * n - 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i];
    if (t <= 0.0 || t >= 1.0) continue;
    s += rule.weights[i] * v.eval(r * t, zeta) * std::pow((1.0 - t) * (1.0 - t * r * r), e) / t;
  }
  return u0 + s;
}

// ---------------------------------------------------------------------------
// Mean value over invariant balls

struct MeanValueResult {
  double estimate = 0.0;
  double mc_error = 0.0;
  double target = 0.0;  // u(g.0)
};

/// Ratio estimate of (1/mu(B)) int_{B(0,eps)} u(g.y) dmu(y), y uniform in the
/// Euclidean ball, weights (1-|y|^2)^{-n}; delta-method standard error.
template <typename U>
MeanValueResult mean_value_check(const U& u, const LorentzMap& g, double eps, int samples, std::uint64_t seed = 7) {
  if (samples < 2) throw std::invalid_argument("mean_value_check needs at least 2 samples");
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("mean_value_check needs 0 < eps < 1");
  const int n = g.dim();
  std::mt19937_64 rng(seed);
  std::vector<double> w(static_cast<std::size_t>(samples)), f(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const Vec y = random_in_ball(n, eps, rng);
    w[i] = invariant_measure_density(y);
    f[i] = u(lorentz_act(g, y));
  }
  double sw = 0.0, swf = 0.0;
  for (int i = 0; i < samples; ++i) {
    sw += w[i];
    swf += w[i] * f[i];
  }
  const double est = swf / sw;
  const double mean_w = sw / samples;
  double var = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double d = w[i] * (f[i] - est);
    var += d * d;
  }
  var /= (samples - 1.0);
  MeanValueResult out;
  out.estimate = est;
  out.mc_error = std::sqrt(var / samples) / mean_w;
  out.target = u(lorentz_act(g, Vec(n)));
  return out;
}

}  // namespace hyperball

#endif  // HYPERBALL_HHARMONIC_HPP
