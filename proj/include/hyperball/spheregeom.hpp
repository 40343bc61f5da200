#ifndef HYPERBALL_SPHEREGEOM_HPP
#define HYPERBALL_SPHEREGEOM_HPP

// Geometry of the sphere S^{n-1} and the ball B^n: points, caps, zonal
// harmonics and degree projections, the SO(n,1) action and its invariant
// measure.

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperball/errors.hpp"
#include "hyperball/quadrature.hpp"
#include "hyperball/specfun.hpp"
#include "hyperball/vec.hpp"

namespace hyperball {

class SpherePoint {
 public:
  explicit SpherePoint(Vec coords) : v_(coords) {
    if (std::abs(v_.norm() - 1.0) > 1e-12) throw InvariantViolation("SpherePoint must have unit norm");
  }
  static SpherePoint normalize(const Vec& v) { return SpherePoint(v.normalized()); }
  const Vec& coords() const { return v_; }
  int dim() const { return v_.dim(); }

 private:
  Vec v_;
};

class BallPoint {
 public:
  explicit BallPoint(Vec coords) : v_(coords) {
    if (!(v_.norm() < 1.0)) throw InvariantViolation("BallPoint must lie in the open unit ball");
  }
  BallPoint(double r, const SpherePoint& direction) : BallPoint(r * direction.coords()) {}
  const Vec& coords() const { return v_; }
  int dim() const { return v_.dim(); }
  double radius() const { return v_.norm(); }
  /// Undefined at the origin.
  SpherePoint direction() const { return SpherePoint::normalize(v_); }

 private:
  Vec v_;
};

/// Geodesic cap B~(center, radius) on S^{n-1}, radius in (0, pi].
class Cap {
 public:
  Cap(SpherePoint center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0 && radius <= std::numbers::pi)) throw InvariantViolation("cap radius must be in (0, pi]");
  }
  const Vec& center() const { return center_.coords(); }
  double radius() const { return radius_; }
  int dim() const { return center_.dim(); }
  double measure() const { return cap_measure(dim(), radius_); }
  bool contains(const Vec& xi) const { return xi.dot(center()) >= std::cos(radius_); }

 private:
  SpherePoint center_;
  double radius_;
};

// ---------------------------------------------------------------------------
// Zonal harmonics

/// dim H_l^n = (2l+n-2)(l+n-3)! / (l!(n-2)!).
inline double harmonic_space_dim(int n, int l) {
  double binom = 1.0;  // C(l+n-3, l)
  for (int i = 1; i <= l; ++i) binom = binom * (n - 3 + i) / i;
  return (2.0 * l + n - 2.0) / (n - 2.0) * binom;
}

/// Reproducing kernel of the degree-l harmonics under the normalized measure:
/// Z_l(t) = dim(H_l^n) C_l^{(n-2)/2}(t) / C_l^{(n-2)/2}(1).
class ZonalKernel {
 public:
  ZonalKernel(int n, int l) : n_(n), l_(l), lambda_(0.5 * (n - 2)) {
    if (n < 3) throw UnsupportedDimension("zonal harmonics need n >= 3");
    scale_ = harmonic_space_dim(n, l) / gegenbauer(lambda_, l, 1.0);
  }
  double operator()(double t) const { return scale_ * gegenbauer(lambda_, l_, t); }
  int dim() const { return n_; }
  int degree() const { return l_; }

 private:
  int n_, l_;
  double lambda_;
  double scale_ = 1.0;
};

inline double zonal(int n, int l, double t) { return ZonalKernel(n, l)(t); }

/// A degree-l spherical harmonic stored as sum_j c_j Z_l(<., pole_j>).
class DegreeComponent {
 public:
  DegreeComponent(int n, int l) : kernel_(n, l) {}

  void add(const Vec& pole, double coeff) {
    poles_.push_back(pole);
    coeffs_.push_back(coeff);
  }

  int dim() const { return kernel_.dim(); }
  int degree() const { return kernel_.degree(); }
  const std::vector<Vec>& poles() const { return poles_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  double operator()(const Vec& zeta) const {
    double s = 0.0;
    for (std::size_t j = 0; j < poles_.size(); ++j) s += coeffs_[j] * kernel_(zeta.dot(poles_[j]));
    return s;
  }

  DegreeComponent scaled(double s) const {
    DegreeComponent out = *this;
    for (auto& c : out.coeffs_) c *= s;
    return out;
  }

  /// Exact L^2(sigma) inner product via the reproducing property
  /// int Z_l(<z,a>) Z_l(<z,b>) dsigma(z) = Z_l(<a,b>).
  double inner(const DegreeComponent& o) const {
    if (o.degree() != degree()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < poles_.size(); ++i)
      for (std::size_t j = 0; j < o.poles_.size(); ++j)
        s += coeffs_[i] * o.coeffs_[j] * kernel_(poles_[i].dot(o.poles_[j]));
    return s;
  }

 private:
  ZonalKernel kernel_;
  std::vector<Vec> poles_;
  std::vector<double> coeffs_;
};

/// Finite spherical-harmonic decomposition of boundary data, degree by degree.
class BoundaryExpansion {
 public:
  explicit BoundaryExpansion(int n) : n_(n) {
    if (n < 3) throw UnsupportedDimension("boundary expansions need n >= 3");
  }

  int dim() const { return n_; }
  const std::map<int, DegreeComponent>& components() const { return comps_; }
  bool empty() const { return comps_.empty(); }
  int max_degree() const { return comps_.empty() ? 0 : comps_.rbegin()->first; }

  void add(int l, const Vec& pole, double coeff) { slot(l).add(pole, coeff); }

  void add_component(const DegreeComponent& c) {
    DegreeComponent& dst = slot(c.degree());
    for (std::size_t j = 0; j < c.poles().size(); ++j) dst.add(c.poles()[j], c.coeffs()[j]);
  }

  double component(int l, const Vec& zeta) const {
    auto it = comps_.find(l);
    return it == comps_.end() ? 0.0 : it->second(zeta);
  }

  double operator()(const Vec& zeta) const {
    double s = 0.0;
    for (const auto& [l, c] : comps_) s += c(zeta);
    return s;
  }

  /// Mean of the boundary data (the degree-0 coefficient).
  double mean() const { return component(0, Vec::unit(n_, 0)); }

  /// Multiplies the degree-l component by m(l); drops components where m(l) == 0.
  template <typename Multiplier>
  BoundaryExpansion multiplied(Multiplier&& m) const {
    BoundaryExpansion out(n_);
    for (const auto& [l, c] : comps_) {
      const double s = m(l);
      if (s != 0.0) out.add_component(c.scaled(s));
    }
    return out;
  }

  BoundaryExpansion scaled(double s) const {
    return multiplied([s](int) { return s; });
  }

  BoundaryExpansion operator+(const BoundaryExpansion& o) const {
    BoundaryExpansion out = *this;
    for (const auto& [l, c] : o.comps_) out.add_component(c);
    return out;
  }

  /// Exact L^2 inner product (degrees are orthogonal).
  double inner(const BoundaryExpansion& o) const {
    double s = 0.0;
    for (const auto& [l, c] : comps_) {
      auto it = o.comps_.find(l);
      if (it != o.comps_.end()) s += c.inner(it->second);
    }
    return s;
  }

  static BoundaryExpansion constant(int n, double value) {
    BoundaryExpansion e(n);
    e.add(0, Vec::unit(n, 0), value);
    return e;
  }

  /// The coordinate function xi_axis, a degree-1 harmonic: xi_i = Z_1(<xi, e_i>) / n.
  static BoundaryExpansion coordinate(int n, int axis) {
    BoundaryExpansion e(n);
    e.add(1, Vec::unit(n, axis), 1.0 / n);
    return e;
  }

 private:
  DegreeComponent& slot(int l) {
    auto it = comps_.find(l);
    if (it == comps_.end()) it = comps_.emplace(l, DegreeComponent(n_, l)).first;
    return it->second;
  }

  int n_;
  std::map<int, DegreeComponent> comps_;
};

// ---------------------------------------------------------------------------
// Random sampling helpers (seeded generators only)

inline Vec random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  for (;;) {
    for (int i = 0; i < n; ++i) v[i] = g(rng);
    const double nv = v.norm();
    if (nv > 1e-8) return (1.0 / nv) * v;
  }
}

/// Uniform (Lebesgue) point in the Euclidean ball of the given radius.
inline Vec random_in_ball(int n, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = radius * std::pow(u(rng), 1.0 / n);
  return rho * random_unit(n, rng);
}

/// Random degree-l component: a few zonal terms with random poles and O(1) coefficients.
inline DegreeComponent random_component(int n, int l, std::mt19937_64& rng, int terms = 3) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DegreeComponent c(n, l);
  const double norm = 1.0 / harmonic_space_dim(n, l);
  for (int j = 0; j < terms; ++j) c.add(random_unit(n, rng), u(rng) * norm * 2.0);
  return c;
}

inline BoundaryExpansion random_expansion(int n, int max_degree, std::mt19937_64& rng, int terms = 3) {
  BoundaryExpansion e(n);
  for (int l = 0; l <= max_degree; ++l) e.add_component(random_component(n, l, rng, terms));
  return e;
}

// ---------------------------------------------------------------------------
// Degree projection

/// zeta -> int Z_l(<zeta, xi>) phi(xi) dsigma(xi), evaluated by `quad`. The
/// result is itself stored as a zonal combination with the nodes as poles.
template <typename Phi>
DegreeComponent project_component(Phi&& phi, int l, const QuadratureRule& quad) {
  DegreeComponent c(quad.dim, l);
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const double v = quad.weights[i] * phi(quad.nodes[i]);
    if (v != 0.0) c.add(quad.nodes[i], v);
  }
  return c;
}

/// Spherical-harmonic expansion of a callable up to max_degree.
template <typename Phi>
BoundaryExpansion expand(Phi&& phi, int max_degree, const QuadratureRule& quad) {
  std::vector<double> values(quad.size());
  for (std::size_t i = 0; i < quad.size(); ++i) values[i] = phi(quad.nodes[i]);
  BoundaryExpansion e(quad.dim);
  for (int l = 0; l <= max_degree; ++l) {
    DegreeComponent c(quad.dim, l);
    for (std::size_t i = 0; i < quad.size(); ++i)
      if (values[i] != 0.0) c.add(quad.nodes[i], quad.weights[i] * values[i]);
    e.add_component(c);
  }
  return e;
}

// ---------------------------------------------------------------------------
// SO(n,1) and its action on the ball

/// Element of SO(n,1): an (n+1)x(n+1) matrix preserving -x0^2 + x1^2 + ... + xn^2,
/// with g00 >= 1 and det g = 1.
class LorentzMap {
 public:
  explicit LorentzMap(Eigen::MatrixXd m) : m_(std::move(m)) {
    const Eigen::Index d = m_.rows();
    if (d != m_.cols() || d < 2) throw InvariantViolation("Lorentz matrix must be square");
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(d, d);
    j(0, 0) = -1.0;
    if ((m_.transpose() * j * m_ - j).cwiseAbs().maxCoeff() > 1e-10)
      throw InvariantViolation("matrix does not preserve the Lorentz form");
    if (m_(0, 0) < 1.0 - 1e-12) throw InvariantViolation("g00 must be >= 1");
    if (std::abs(m_.determinant() - 1.0) > 1e-8) throw InvariantViolation("det g must be 1");
  }

  static LorentzMap identity(int n) { return LorentzMap(Eigen::MatrixXd::Identity(n + 1, n + 1)); }

  /// Hyperbolic rotation of rapidity tau in the (x0, x_axis) plane, axis in 1..n.
  static LorentzMap boost(int n, double tau, int axis = 1) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n + 1, n + 1);
    m(0, 0) = m(axis, axis) = std::cosh(tau);
    m(0, axis) = m(axis, 0) = std::sinh(tau);
    return LorentzMap(std::move(m));
  }

  /// Embeds a rotation Q in SO(n).
  static LorentzMap rotation(const Eigen::MatrixXd& q) {
    const Eigen::Index n = q.rows();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n + 1, n + 1);
    m.block(1, 1, n, n) = q;
    return LorentzMap(std::move(m));
  }

  /// Haar rotation (orthogonalized Gaussian matrix) composed with an e1-boost of
  /// rapidity drawn uniformly from [0, max_tau].
  static LorentzMap random(int n, std::mt19937_64& rng, double max_tau = 3.0) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
      if (r(j, j) < 0) q.col(j) *= -1.0;
    if (q.determinant() < 0) q.col(0) *= -1.0;
    std::uniform_real_distribution<double> u(0.0, max_tau);
    return rotation(q) * boost(n, u(rng));
  }

  int dim() const { return static_cast<int>(m_.rows()) - 1; }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  friend LorentzMap operator*(const LorentzMap& a, const LorentzMap& b) {
    Eigen::MatrixXd m = a.m_ * b.m_;
    return LorentzMap(std::move(m));
  }

  /// g^{-1} = J g^T J.
  LorentzMap inverse() const {
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(m_.rows(), m_.cols());
    j(0, 0) = -1.0;
    return LorentzMap(j * m_.transpose() * j);
  }

 private:
  Eigen::MatrixXd m_;
};

/// Conformal action y = g.x on the ball.
inline Vec lorentz_act(const LorentzMap& g, const Vec& x) {
  const int n = x.dim();
  const double s = x.norm2();
  const double a = 0.5 * (1.0 + s);
  double den = 0.5 * (1.0 - s) + a * g(0, 0);
  for (int l = 1; l <= n; ++l) den += g(0, l) * x[l - 1];
  if (den < 1e-14) throw DegenerateDenominator("Lorentz action denominator vanished");
  Vec y(n);
  for (int p = 1; p <= n; ++p) {
    double num = a * g(p, 0);
    for (int l = 1; l <= n; ++l) num += g(p, l) * x[l - 1];
    y[p - 1] = num / den;
  }
  return y;
}

inline BallPoint lorentz_act(const LorentzMap& g, const BallPoint& x) {
  return BallPoint(lorentz_act(g, x.coords()));
}

/// Density of the SO(n,1)-invariant measure w.r.t. Lebesgue measure:
/// (1-|x|^2)^{-n}, the inverse n-th power of the conformal factor.
inline double invariant_measure_density(const Vec& x) {
  return std::pow(1.0 - x.norm2(), -static_cast<double>(x.dim()));
}

inline double invariant_measure_density(const BallPoint& x) { return invariant_measure_density(x.coords()); }

/// Samples both inclusions B(x0, (sqrt2/8)(1-|x0|^2)eps) in g.B(0,eps) in
/// B(x0, 6(1-|x0|^2)eps), x0 = g.0, with `samples` points per set (half on the
/// bounding sphere, half inside).
inline bool fact1_check(const LorentzMap& g, double eps, int samples = 1000, std::uint64_t seed = 1) {
  if (!(eps > 0.0 && eps < 1.0 / 6.0)) throw std::domain_error("fact1_check needs 0 < eps < 1/6");
  const int n = g.dim();
  std::mt19937_64 rng(seed);
  const Vec x0 = lorentz_act(g, Vec(n));
  const double conf = 1.0 - x0.norm2();
  const double outer = 6.0 * conf * eps;
  const double inner = std::numbers::sqrt2 / 8.0 * conf * eps;
  const LorentzMap ginv = g.inverse();
  for (int i = 0; i < samples; ++i) {
    const Vec y = (i % 2 == 0) ? eps * random_unit(n, rng) : random_in_ball(n, eps, rng);
    if ((lorentz_act(g, y) - x0).norm() > outer) return false;
  }
  for (int i = 0; i < samples; ++i) {
    const Vec d = (i % 2 == 0) ? inner * random_unit(n, rng) : random_in_ball(n, inner, rng);
    if (lorentz_act(ginv, x0 + d).norm() > eps * (1.0 + 1e-12)) return false;
  }
  return true;
}

}  // namespace hyperball

#endif  // HYPERBALL_SPHEREGEOM_HPP
