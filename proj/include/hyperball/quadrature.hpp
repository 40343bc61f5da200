#ifndef HYPERBALL_QUADRATURE_HPP
#define HYPERBALL_QUADRATURE_HPP

// One-dimensional Gauss rules and product rules on spheres and caps. All
// sphere rules integrate against the normalized surface measure
// (sigma(S^{n-1}) = 1).

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "hyperball/errors.hpp"
#include "hyperball/vec.hpp"

namespace hyperball {

/// Nodes and weights on a real interval.
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <typename F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }

  void append(const LineRule& other) {
    nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
    weights.insert(weights.end(), other.weights.begin(), other.weights.end());
  }
};

/// Gauss-Jacobi rule for the weight (1-t)^alpha (1+t)^beta on [-1, 1], weights
/// normalized to sum 1. Golub-Welsch on the Jacobi matrix.
inline LineRule gauss_jacobi(int m, double alpha, double beta) {
  if (m < 1) throw std::invalid_argument("gauss_jacobi needs at least one node");
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max(m - 1, 1));
  const double ab = alpha + beta;
  for (int k = 0; k < m; ++k) {
    if (k == 0)
      diag(k) = (beta - alpha) / (ab + 2.0);
    else
      diag(k) = (beta * beta - alpha * alpha) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0));
  }
  for (int k = 1; k < m; ++k) {
    const double kk = k;
    const double s = 2.0 * kk + ab;
    double num = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab);
    double den = s * s * (s + 1.0) * (s - 1.0);
    sub(k - 1) = std::sqrt(num / den);
  }
  LineRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  if (m == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = 1.0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(m - 1), Eigen::ComputeEigenvectors);
  for (int i = 0; i < m; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = v0 * v0;
  }
  // symmetric weights: enforce exact symmetry of the nodes
  if (alpha == beta) {
    for (int i = 0; i < m / 2; ++i) {
      auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(m - 1 - i);
      const double x = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
      const double w = 0.5 * (rule.weights[hi] + rule.weights[lo]);
      rule.nodes[lo] = -x;
      rule.nodes[hi] = x;
      rule.weights[lo] = rule.weights[hi] = w;
    }
    if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
  }
  const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  for (auto& w : rule.weights) w /= total;
  return rule;
}

/// Gauss-Legendre on [a, b] with weights summing to b - a.
inline LineRule gauss_legendre(int m, double a, double b) {
  LineRule rule = gauss_jacobi(m, 0.0, 0.0);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= (b - a);
  }
  return rule;
}

/// Composite Gauss-Legendre over consecutive breakpoints.
inline LineRule composite_gauss_legendre(const std::vector<double>& breaks, int per_interval) {
  LineRule rule;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (breaks[i + 1] > breaks[i]) rule.append(gauss_legendre(per_interval, breaks[i], breaks[i + 1]));
  return rule;
}

/// Rule on [0, 1] for integrands with algebraic endpoint behaviour s^a (1-s)^b,
/// a, b >= -1/2: Gauss-Legendre after s = w^2 on [0, 1/2] and s = 1 - w^2 on
/// [1/2, 1], which makes half-integer powers smooth.
inline LineRule endpoint_graded_rule(int per_half) {
  LineRule rule;
  const LineRule g = gauss_legendre(per_half, 0.0, std::sqrt(0.5));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = g.nodes[i];
    rule.nodes.push_back(w * w);
    rule.weights.push_back(2.0 * w * g.weights[i]);
  }
  for (std::size_t i = g.size(); i-- > 0;) {
    const double w = g.nodes[i];
    rule.nodes.push_back(1.0 - w * w);
    rule.weights.push_back(2.0 * w * g.weights[i]);
  }
  return rule;
}

/// Nodes and weights on S^{dim-1} for the normalized surface measure.
struct QuadratureRule {
  int dim = 0;
  int exact_degree = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <typename F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }

  double total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

  /// Same rule carried by an orthogonal map sending the north pole e_dim to `pole`.
  QuadratureRule aligned_to(const Vec& pole) const {
    QuadratureRule out = *this;
    const Frame frame(pole);
    for (auto& x : out.nodes) x = frame.to_ambient(x);
    return out;
  }
};

/// Normalizing constant  int_0^pi sin^{k}(theta) d theta.
inline double sine_power_integral(int k) {
  return std::sqrt(std::numbers::pi) * std::exp(std::lgamma(0.5 * (k + 1)) - std::lgamma(0.5 * k + 1.0));
}

namespace detail {

// Product rule on S^{k-1} in R^k: S^0 is {-1, 1}; S^1 uses equispaced angles;
// higher spheres put a Gauss-Gegenbauer rule (weight (1-t^2)^{(k-3)/2}) in the
// last coordinate and recurse on the equator.
inline QuadratureRule sphere_product_rule(int k, int degree) {
  QuadratureRule rule;
  rule.dim = k;
  rule.exact_degree = degree;
  if (k == 1) {
    rule.nodes = {Vec{-1.0}, Vec{1.0}};
    rule.weights = {0.5, 0.5};
    return rule;
  }
  if (k == 2) {
    const int m = degree + 1;
    for (int i = 0; i < m; ++i) {
      const double phi = 2.0 * std::numbers::pi * (i + 0.5) / m;
      rule.nodes.push_back(Vec{std::cos(phi), std::sin(phi)});
      rule.weights.push_back(1.0 / m);
    }
    return rule;
  }
  const int m = degree / 2 + 1;
  const double alpha = 0.5 * (k - 3);
  const LineRule polar = gauss_jacobi(m, alpha, alpha);
  const QuadratureRule equator = sphere_product_rule(k - 1, degree);
  rule.nodes.reserve(polar.size() * equator.size());
  for (std::size_t i = 0; i < polar.size(); ++i) {
    const double t = polar.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (std::size_t j = 0; j < equator.size(); ++j) {
      Vec x(k);
      for (int c = 0; c < k - 1; ++c) x[c] = s * equator.nodes[j][c];
      x[k - 1] = t;
      rule.nodes.push_back(x);
      rule.weights.push_back(polar.weights[i] * equator.weights[j]);
    }
  }
  return rule;
}

}  // namespace detail

inline constexpr int kMinQuadDim = 3;
inline constexpr int kMaxQuadDim = 6;
inline constexpr int kMaxQuadDegree = 60;

/// Product rule on S^{n-1}, exact for polynomials of coordinate degree
/// <= exact_degree. Supported range 3 <= n <= 6, exact_degree <= 60.
inline QuadratureRule build_quadrature(int n, int exact_degree) {
  if (n < kMinQuadDim || n > kMaxQuadDim)
    throw UnsupportedDimension("build_quadrature supports 3 <= n <= 6, got n = " + std::to_string(n));
  if (exact_degree < 0 || exact_degree > kMaxQuadDegree)
    throw std::domain_error("build_quadrature supports exact_degree in [0, 60]");
  return detail::sphere_product_rule(n, exact_degree);
}

/// Internal variant without the public range limits (used for equators of
/// lower-dimensional slices and for high-degree polar refinements).
inline QuadratureRule sphere_rule(int k, int degree) { return detail::sphere_product_rule(k, degree); }

/// Rule on S^{n-1} in polar form around `pole`: polar angles from `polar`
/// (a rule on a subset of [0, pi]) times an equatorial rule of the given degree.
/// Weights carry sin^{n-2} / Z so that a full-range polar rule sums to 1.
inline QuadratureRule polar_rule(int n, const Vec& pole, const LineRule& polar, int equator_degree) {
  QuadratureRule rule;
  rule.dim = n;
  rule.exact_degree = equator_degree;
  const QuadratureRule equator = sphere_rule(n - 1, equator_degree);
  const double z = sine_power_integral(n - 2);
  const Frame frame(pole);
  for (std::size_t i = 0; i < polar.size(); ++i) {
    const double th = polar.nodes[i];
    const double st = std::sin(th), ct = std::cos(th);
    const double w = polar.weights[i] * std::pow(st, n - 2) / z;
    for (std::size_t j = 0; j < equator.size(); ++j) {
      Vec local(n);
      for (int c = 0; c < n - 1; ++c) local[c] = st * equator.nodes[j][c];
      local[n - 1] = ct;
      rule.nodes.push_back(frame.to_ambient(local));
      rule.weights.push_back(w * equator.weights[j]);
    }
  }
  return rule;
}

/// sigma(cap) for a geodesic cap of radius theta0 on S^{n-1}, by Gauss-Legendre
/// quadrature of the latitude density sin^{n-2}.
inline double cap_measure(int n, double theta0) {
  if (theta0 >= std::numbers::pi) return 1.0;
  const LineRule g = gauss_legendre(64, 0.0, theta0);
  const double num = g.integrate([n](double t) { return std::pow(std::sin(t), n - 2); });
  return num / sine_power_integral(n - 2);
}

/// Rule covering the cap B(center, theta0) only; weights sum to sigma(cap).
inline QuadratureRule cap_rule(int n, const Vec& center, double theta0, int polar_nodes, int equator_degree) {
  return polar_rule(n, center, gauss_legendre(polar_nodes, 0.0, theta0), equator_degree);
}

/// Whole-sphere rule refined around `center` on the scale theta0: polar
/// breakpoints at theta0/2, theta0, 3theta0/2, 2theta0 and then doubling to pi.
inline QuadratureRule graded_cap_rule(int n, const Vec& center, double theta0, int per_interval,
                                      int equator_degree) {
  std::vector<double> breaks = {0.0};
  for (double b : {0.5 * theta0, theta0, 1.5 * theta0, 2.0 * theta0})
    if (b < std::numbers::pi) breaks.push_back(b);
  for (double b = 4.0 * theta0; b < std::numbers::pi; b *= 2.0) breaks.push_back(b);
  breaks.push_back(std::numbers::pi);
  return polar_rule(n, center, composite_gauss_legendre(breaks, per_interval), equator_degree);
}

}  // namespace hyperball

#endif  // HYPERBALL_QUADRATURE_HPP
