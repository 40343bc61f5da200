#ifndef HYPERBALL_HARDY_HPP
#define HYPERBALL_HARDY_HPP

// Hardy-space machinery on the ball: radial maximal functions, H^p
// quasi-norms, p-atoms with vanishing moments, their H-Poisson extensions and
// finite atomic sums.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hyperball/errors.hpp"
#include "hyperball/kernels.hpp"
#include "hyperball/parallel.hpp"
#include "hyperball/quadrature.hpp"
#include "hyperball/spheregeom.hpp"
#include "hyperball/vec.hpp"

namespace hyperball {

/// Smallest integer strictly greater than (n-1)(1/p - 1).
inline int kp_for(int n, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("kp_for needs 0 < p <= 1");
  const double x = (n - 1) * (1.0 / p - 1.0);
  const double nearest = std::round(x);
  if (std::abs(x - nearest) < 1e-9) return static_cast<int>(nearest) + 1;
  return static_cast<int>(std::floor(x)) + 1;
}

/// 1 - r grid 2^{-j}, j = j_min..j_max.
inline std::vector<double> dyadic_r_grid(int j_min = 1, int j_max = 13) {
  std::vector<double> g;
  for (int j = j_min; j <= j_max; ++j) g.push_back(1.0 - std::ldexp(1.0, -j));
  return g;
}

namespace detail {

// Exponent vectors of all monomials in `vars` variables of total degree <= deg,
// ordered by degree then lexicographically.
inline std::vector<std::vector<int>> monomial_exponents(int vars, int deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(vars), 0);
  for (int total = 0; total <= deg; ++total) {
    auto rec = [&](auto&& self, int pos, int left) -> void {
      if (pos == vars - 1) {
        e[pos] = left;
        out.push_back(e);
        return;
      }
      for (int v = left; v >= 0; --v) {
        e[pos] = v;
        self(self, pos + 1, left - v);
      }
    };
    if (vars > 0) rec(rec, 0, total);
  }
  return out;
}

inline double monomial(const std::vector<int>& e, const Vec& x) {
  double v = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (int k = 0; k < e[i]; ++k) v *= x[static_cast<int>(i)];
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Atoms

struct AtomOptions {
  /// Highest degree of vanishing moments; defaults to kp. Negative: none.
  std::optional<int> moment_degree;
  int gram_polar_nodes = 24;
  int sup_polar_nodes = 96;
  int max_rounds = 5;
  double moment_tol = 1e-10;
};

/// A p-atom on S^{n-1}: either the constant 1, or
///   a = scale * chi * (A - sum_i c_i P_i)
/// on the cap, where chi = (1-s)^6 with s = (1-<xi,xi0>)/(1-cos r0), A is a
/// seeded sum of plane waves in local cap coordinates, and the P_i are the
/// monomials of degree <= moment_degree in those coordinates.
class Atom {
 public:
  static Atom constant(int n, double p) {
    Atom a;
    a.n_ = n;
    a.p_ = p;
    a.kp_ = kp_for(n, p);
    a.moment_degree_ = -1;
    return a;
  }

  int dim() const { return n_; }
  double p() const { return p_; }
  int kp() const { return kp_; }
  int moment_degree() const { return moment_degree_; }
  bool is_constant() const { return !cap_.has_value(); }
  const std::optional<Cap>& cap() const { return cap_; }
  std::uint64_t seed() const { return seed_; }

  /// sigma(cap)^{-1/p}, or 1 for the constant atom.
  double size_bound() const { return cap_ ? std::pow(cap_->measure(), -1.0 / p_) : 1.0; }

  double operator()(const Vec& xi) const {
    if (!cap_) return 1.0;
    const double z = xi.dot(cap_->center());
    if (z <= cos_r0_) return 0.0;
    return scale_ * unscaled(xi);
  }

  // chi * (A - sum c_i P_i), without the final scale.
  double unscaled(const Vec& xi) const {
    const Vec loc = local(xi);
    if (loc[n_ - 1] <= 0.0) return 0.0;
    return std::pow(loc[n_ - 1], 6) * core(loc);
  }

 private:
  friend Atom make_atom(const Cap&, double, std::uint64_t, const AtomOptions&, const QuadratureRule*);

  // Local coordinates (y_1..y_{n-1}, z~): tangent components over sin r0 and
  // z~ = (<xi,xi0> - cos r0)/(1 - cos r0), which is 1 - s.
  Vec local(const Vec& xi) const {
    const Vec w = frame_.to_local(xi);
    Vec loc(n_);
    for (int j = 0; j < n_ - 1; ++j) loc[j] = w[j] / sin_r0_;
    loc[n_ - 1] = (w[n_ - 1] - cos_r0_) / (1.0 - cos_r0_);
    return loc;
  }

  double core(const Vec& loc) const {
    double v = amplitude(loc);
    for (std::size_t i = 0; i < corr_.size(); ++i) v -= corr_[i] * detail::monomial(exps_[i], loc);
    return v;
  }

  double amplitude(const Vec& loc) const {
    double v = amp0_;
    for (std::size_t m = 0; m < wave_amp_.size(); ++m) v += wave_amp_[m] * std::cos(wave_dir_[m].dot(loc) + wave_phase_[m]);
    return v;
  }

  int n_ = 0;
  double p_ = 1.0;
  int kp_ = 1;
  int moment_degree_ = -1;
  std::optional<Cap> cap_;
  std::uint64_t seed_ = 0;
  Frame frame_;
  double cos_r0_ = 1.0, sin_r0_ = 0.0;
  double amp0_ = 1.5;
  std::vector<double> wave_amp_, wave_phase_;
  std::vector<Vec> wave_dir_;
  std::vector<std::vector<int>> exps_;
  std::vector<double> corr_;
  double scale_ = 1.0;
};

inline Atom make_constant_atom(int n, double p = 1.0) { return Atom::constant(n, p); }

/// Cap rule used for atom construction: at least 400 nodes whatever the cap size.
inline QuadratureRule atom_gram_rule(const Cap& cap, int polar_nodes) {
  const int n = cap.dim();
  const int eq = n == 3 ? 23 : (n == 4 ? 12 : 14);
  return cap_rule(n, cap.center(), cap.radius(), polar_nodes, eq);
}

inline double atom_sup_estimate(const Atom& a, int polar_nodes) {
  if (a.is_constant()) return 1.0;
  const Cap& cap = *a.cap();
  const int n = a.dim();
  const int eq = n == 3 ? 95 : (n == 4 ? 32 : 16);
  const QuadratureRule fine = cap_rule(n, cap.center(), cap.radius(), polar_nodes, eq);
  double m = 0.0;
  for (const auto& x : fine.nodes) m = std::max(m, std::abs(a(x)));
  return m;
}

struct AtomCheck {
  double max_moment = 0.0;      // max |int a xi^alpha dsigma| over |alpha| <= moment degree
  double l1_norm = 0.0;         // int |a| dsigma
  double sup_ratio = 0.0;       // max |a| / sigma(cap)^{-1/p} on the check nodes
  bool support_ok = true;       // a vanishes outside the cap
  bool moments_ok = true;
  bool size_ok = true;
  bool ok() const { return support_ok && moments_ok && size_ok; }
};

/// Checks conditions (1) and (3) against ambient monomials xi^alpha using `quad`,
/// which should be independent of the construction rule.
inline AtomCheck verify_atom(const Atom& a, const QuadratureRule& quad, double moment_tol = 1e-10) {
  AtomCheck c;
  if (a.is_constant()) return c;
  const auto exps = detail::monomial_exponents(a.dim(), std::max(a.moment_degree(), 0));
  std::vector<double> mom(exps.size(), 0.0);
  const double bound = a.size_bound();
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const double v = a(quad.nodes[i]);
    if (v != 0.0 && !a.cap()->contains(quad.nodes[i])) c.support_ok = false;
    c.l1_norm += quad.weights[i] * std::abs(v);
    c.sup_ratio = std::max(c.sup_ratio, std::abs(v) / bound);
    if (a.moment_degree() >= 0)
      for (std::size_t j = 0; j < exps.size(); ++j) mom[j] += quad.weights[i] * v * detail::monomial(exps[j], quad.nodes[i]);
  }
  for (double m : mom) c.max_moment = std::max(c.max_moment, std::abs(m));
  c.moments_ok = c.max_moment <= moment_tol * std::max(1.0, c.l1_norm);
  c.size_ok = c.sup_ratio <= 1.0 + 1e-12;
  return c;
}

/// Independent check rule for an atom's cap (different node counts from the
/// construction rule).
inline QuadratureRule atom_check_rule(const Cap& cap) {
  const int n = cap.dim();
  const int eq = n == 3 ? 41 : (n == 4 ? 20 : (n == 5 ? 18 : 16));
  return cap_rule(n, cap.center(), cap.radius(), 40, eq);
}

/// Builds a p-atom on `cap`. `gram_quad`, when given, replaces the internal
/// cap rule for the moment projection and must place at least 100 nodes in the cap.
inline Atom make_atom(const Cap& cap, double p, std::uint64_t seed, const AtomOptions& opt = {},
                      const QuadratureRule* gram_quad = nullptr) {
  const int n = cap.dim();
  if (n < 3 || n > kMaxQuadDim) throw UnsupportedDimension("atoms support 3 <= n <= 6");
  Atom a;
  a.n_ = n;
  a.p_ = p;
  a.kp_ = kp_for(n, p);
  a.moment_degree_ = opt.moment_degree.value_or(a.kp_);
  a.cap_ = cap;
  a.seed_ = seed;
  a.frame_ = Frame(cap.center());
  a.cos_r0_ = std::cos(cap.radius());
  a.sin_r0_ = std::sin(cap.radius());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int m = 0; m < 3; ++m) {
    const double freq = 1.5 + 2.0 * u01(rng);
    a.wave_dir_.push_back(freq * random_unit(n, rng));
    a.wave_phase_.push_back(2.0 * std::numbers::pi * u01(rng));
    a.wave_amp_.push_back(0.5 + u01(rng));
  }

  QuadratureRule rule;
  if (gram_quad) {
    std::size_t inside = 0;
    for (const auto& x : gram_quad->nodes)
      if (cap.contains(x)) ++inside;
    if (inside < 100) throw ResolutionError("make_atom needs at least 100 quadrature nodes inside the cap");
    rule = *gram_quad;
  } else {
    rule = atom_gram_rule(cap, opt.gram_polar_nodes);
  }

  const QuadratureRule check = atom_check_rule(cap);
  if (a.moment_degree_ >= 0) {
    a.exps_ = detail::monomial_exponents(n, a.moment_degree_);
    a.corr_.assign(a.exps_.size(), 0.0);
    const std::size_t m = a.exps_.size();
    bool converged = false;
    for (int round = 0; round < opt.max_rounds && !converged; ++round) {
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
      Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
      std::vector<double> basis(m);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec& x = rule.nodes[q];
        if (!cap.contains(x)) continue;
        const Vec loc = a.local(x);
        if (loc[n - 1] <= 0.0) continue;
        const double wchi = rule.weights[q] * std::pow(loc[n - 1], 6);
        const double resid = a.core(loc);
        for (std::size_t i = 0; i < m; ++i) basis[i] = detail::monomial(a.exps_[i], loc);
        for (std::size_t i = 0; i < m; ++i) {
          b(static_cast<Eigen::Index>(i)) += wchi * resid * basis[i];
          for (std::size_t j = 0; j <= i; ++j) g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += wchi * basis[i] * basis[j];
        }
      }
      g = g.selfadjointView<Eigen::Lower>();
      const Eigen::VectorXd c = g.completeOrthogonalDecomposition().solve(b);
      for (std::size_t i = 0; i < m; ++i) a.corr_[i] += c(static_cast<Eigen::Index>(i));
      a.scale_ = 1.0;
      a.scale_ = a.size_bound() / atom_sup_estimate(a, opt.sup_polar_nodes);
      converged = verify_atom(a, check, opt.moment_tol).moments_ok;
    }
    if (!converged) throw ConstructionFailed("atom moments did not vanish within the allowed rounds");
  } else {
    a.scale_ = 1.0;
    a.scale_ = a.size_bound() / atom_sup_estimate(a, opt.sup_polar_nodes);
  }
  const AtomCheck final_check = verify_atom(a, check, opt.moment_tol);
  if (!final_check.size_ok || !final_check.support_ok) {
    // The check rule found a larger value than the sup sampling; shrink to it.
    a.scale_ /= std::max(final_check.sup_ratio, 1.0) * (1.0 + 1e-12);
  }
  return a;
}

inline Atom make_atom(const Cap& cap, double p, const QuadratureRule& quad, std::uint64_t seed,
                      const AtomOptions& opt = {}) {
  return make_atom(cap, p, seed, opt, &quad);
}

// ---------------------------------------------------------------------------
// H-Poisson extension of an atom

/// Node counts for AtomExtension; negative entries take a per-dimension default.
struct RayRuleOptions {
  int per_interval = -1;  // Gauss-Legendre nodes per polar-angle interval
  int slice_angle_nodes = -1;
  int slice_equator_degree = -1;
  int full_slice_degree = -1;
};

/// theta-dependent part of P_h: ((1-r^2) / ((1-r)^2 + 4r sin^2(theta/2)))^{n-1}.
inline double poisson_h_angle(int n, double r, double theta) {
  const double s = std::sin(0.5 * theta);
  const double a = 1.0 - r;
  return std::pow(a * (1.0 + r) / (a * a + 4.0 * r * s * s), n - 1);
}

/// A = P_h[a] evaluated along rays. For a direction zeta the integral over
/// xi is written in polar coordinates about zeta, restricted to the polar
/// angles where the slice meets the cap; each slice is integrated with a rule
/// on the part of S^{n-2} inside the cap. The kernel depends only on the polar
/// angle, so one set of slice integrals serves every radius.
class AtomExtension {
 public:
  explicit AtomExtension(Atom atom, RayRuleOptions opt = {}) : atom_(std::move(atom)), opt_(opt) {
    const int n = atom_.dim();
    if (opt_.per_interval < 0) opt_.per_interval = n == 3 ? 10 : 8;
    if (opt_.slice_angle_nodes < 0) opt_.slice_angle_nodes = n == 3 ? 12 : 10;
    if (opt_.slice_equator_degree < 0) opt_.slice_equator_degree = n == 3 ? 1 : (n == 4 ? 12 : 8);
    if (opt_.full_slice_degree < 0) opt_.full_slice_degree = n == 3 ? 16 : (n == 4 ? 8 : 6);
    if (!atom_.is_constant()) {
      full_slice_ = sphere_rule(n - 1, opt_.full_slice_degree);
      if (n >= 4) ring_ = sphere_rule(n - 2, opt_.slice_equator_degree);
      else ring_ = sphere_rule(1, 1);
      angle_norm_ = sine_power_integral(n - 3);
      polar_norm_ = sine_power_integral(n - 2);
    }
  }

  const Atom& atom() const { return atom_; }
  int dim() const { return atom_.dim(); }

  std::vector<double> ray(const Vec& zeta, const std::vector<double>& radii) const {
    std::vector<double> out(radii.size(), 1.0);
    if (atom_.is_constant()) return out;
    const int n = atom_.dim();
    const Cap& cap = *atom_.cap();
    const double r0 = cap.radius();
    const double cd = std::clamp(zeta.dot(cap.center()), -1.0, 1.0);
    const double d = std::acos(cd);
    const double sd = std::sin(d);

    // Orthonormal basis: zeta, e (towards the cap centre), then the complement.
    std::array<Vec, kMaxDim> basis{};
    basis[0] = zeta;
    Vec e = cap.center() - cd * zeta;
    if (e.norm() < 1e-12) {
      for (int ax = 0; ax < n; ++ax) {
        e = Vec::unit(n, ax) - zeta[ax] * zeta;
        if (e.norm() > 0.5) break;
      }
    }
    basis[1] = e.normalized();
    int filled = 2;
    for (int ax = 0; ax < n && filled < n; ++ax) {
      Vec v = Vec::unit(n, ax);
      for (int j = 0; j < filled; ++j) v -= v.dot(basis[j]) * basis[j];
      if (v.norm() > 1e-6) basis[filled++] = v.normalized();
    }

    const double ta = std::max(0.0, d - r0);
    const double tb = std::min(std::numbers::pi, d + r0);
    double h = 1.0;
    for (double r : radii) h = std::min(h, 1.0 - r);
    h = std::max(h, 1e-14);
    std::vector<double> br = {ta, tb};
    for (double b = h; b < tb; b *= 2.0)
      if (b > ta) br.push_back(b);
    if (r0 - d > ta && r0 - d < tb) br.push_back(r0 - d);
    std::sort(br.begin(), br.end());
    std::vector<double> breaks;
    const double max_len = 0.5 * r0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      const double lo = br[i], hi = br[i + 1];
      if (hi <= lo) continue;
      const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_len)));
      for (int k = 0; k < pieces; ++k) breaks.push_back(lo + (hi - lo) * k / pieces);
    }
    breaks.push_back(tb);
    const LineRule polar = composite_gauss_legendre(breaks, opt_.per_interval);

    const double cr0 = std::cos(r0);
    std::vector<double> slice(polar.size());
    for (std::size_t i = 0; i < polar.size(); ++i) {
      const double th = polar.nodes[i];
      const double st = std::sin(th), ct = std::cos(th);
      double s = 0.0;
      double cmin;
      if (sd < 1e-14) {
        cmin = (ct * cd >= cr0) ? -2.0 : 2.0;
      } else {
        cmin = (cr0 - ct * cd) / (st * sd);
      }
      if (cmin >= 1.0) {
        s = 0.0;
      } else if (cmin <= -1.0) {
        for (std::size_t q = 0; q < full_slice_.size(); ++q) {
          Vec x = ct * basis[0];
          for (int j = 0; j < n - 1; ++j) x += (st * full_slice_.nodes[q][j]) * basis[j + 1];
          s += full_slice_.weights[q] * atom_(x);
        }
      } else {
        const double amax = std::acos(cmin);
        const LineRule ang = gauss_legendre(opt_.slice_angle_nodes, 0.0, amax);
        for (std::size_t k = 0; k < ang.size(); ++k) {
          const double al = ang.nodes[k];
          const double wa = ang.weights[k] * std::pow(std::sin(al), n - 3) / angle_norm_;
          const Vec base = ct * basis[0] + (st * std::cos(al)) * basis[1];
          const double sa = st * std::sin(al);
          double ring = 0.0;
          for (std::size_t q = 0; q < ring_.size(); ++q) {
            Vec x = base;
            for (int j = 0; j < n - 2; ++j) x += (sa * ring_.nodes[q][j]) * basis[j + 2];
            ring += ring_.weights[q] * atom_(x);
          }
          s += wa * ring;
        }
      }
      slice[i] = polar.weights[i] * std::pow(st, n - 2) / polar_norm_ * s;
    }
    for (std::size_t j = 0; j < radii.size(); ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < polar.size(); ++i)
        if (slice[i] != 0.0) v += poisson_h_angle(n, radii[j], polar.nodes[i]) * slice[i];
      out[j] = v;
    }
    return out;
  }

  double operator()(const Vec& x) const {
    const double r = x.norm();
    if (atom_.is_constant()) return 1.0;
    if (r == 0.0) {
      const QuadratureRule q = atom_check_rule(*atom_.cap());
      return q.integrate(atom_);
    }
    return ray((1.0 / r) * x, {r})[0];
  }

 private:
  Atom atom_;
  RayRuleOptions opt_;
  QuadratureRule full_slice_;
  QuadratureRule ring_;
  double angle_norm_ = 1.0;
  double polar_norm_ = 1.0;
};

// ---------------------------------------------------------------------------
// Maximal functions and quasi-norms

/// Values of u(r zeta) over `radii`. Types with a ray(zeta, radii) member
/// evaluate whole rays at once; anything else callable on the ball is sampled
/// point by point.
template <typename U>
std::vector<double> make_ray_values(const U& u, const Vec& zeta, const std::vector<double>& radii) {
  if constexpr (requires { u.ray(zeta, radii); }) {
    return u.ray(zeta, radii);
  } else {
    std::vector<double> out(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) out[i] = u(radii[i] * zeta);
    return out;
  }
}

/// max over the grid of |u(r zeta)|, a lower bound for the radial maximal function.
template <typename U>
double radial_max(const U& u, const Vec& zeta, const std::vector<double>& r_grid) {
  double m = 0.0;
  for (double v : make_ray_values(u, zeta, r_grid)) m = std::max(m, std::abs(v));
  return m;
}

/// (int radial_max(u, zeta)^p dsigma(zeta))^{1/p}.
template <typename U>
double hp_quasinorm(const U& u, double p, const QuadratureRule& quad, const std::vector<double>& r_grid) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("hp_quasinorm needs 0 < p <= 1");
  std::vector<double> terms(quad.size());
  parallel_for(quad.size(), [&](std::size_t i) {
    terms[i] = quad.weights[i] * std::pow(radial_max(u, quad.nodes[i], r_grid), p);
  });
  double s = 0.0;
  for (double t : terms) s += t;
  return std::pow(s, 1.0 / p);
}

/// Outer rule for an atom's maximal function: graded around the cap centre.
inline QuadratureRule atom_norm_rule(const Atom& a) {
  const int n = a.dim();
  const int per_interval = n == 3 ? 8 : 6;
  const int eq = n == 3 ? 24 : (n == 4 ? 8 : 6);
  if (a.is_constant()) return build_quadrature(n, 8);
  return graded_cap_rule(n, a.cap()->center(), a.cap()->radius(), per_interval, eq);
}

inline double atom_extension_norm(const Atom& a, const QuadratureRule& quad, const std::vector<double>& r_grid,
                                  const RayRuleOptions& opt = {}) {
  return hp_quasinorm(AtomExtension(a, opt), a.p(), quad, r_grid);
}

inline double atom_extension_norm(const Atom& a, const std::vector<double>& r_grid = dyadic_r_grid(),
                                  const RayRuleOptions& opt = {}) {
  return atom_extension_norm(a, atom_norm_rule(a), r_grid, opt);
}

// ---------------------------------------------------------------------------
// Atomic sums

class AtomicSum {
 public:
  AtomicSum() = default;
  AtomicSum(std::vector<double> lambdas, std::vector<Atom> atoms, RayRuleOptions opt = {}) : lambdas_(std::move(lambdas)) {
    if (lambdas_.size() != atoms.size()) throw std::invalid_argument("one coefficient per atom");
    for (auto& a : atoms) ext_.emplace_back(std::move(a), opt);
  }

  std::size_t size() const { return ext_.size(); }
  const std::vector<double>& lambdas() const { return lambdas_; }
  const Atom& atom(std::size_t j) const { return ext_[j].atom(); }
  const AtomExtension& extension(std::size_t j) const { return ext_[j]; }

  /// (sum |lambda_j|^p)^{1/p}.
  double coefficient_quasinorm(double p) const {
    double s = 0.0;
    for (double l : lambdas_) s += std::pow(std::abs(l), p);
    return std::pow(s, 1.0 / p);
  }

  std::vector<double> ray(const Vec& zeta, const std::vector<double>& radii) const {
    std::vector<double> out(radii.size(), 0.0);
    for (std::size_t j = 0; j < ext_.size(); ++j) {
      const auto v = ext_[j].ray(zeta, radii);
      for (std::size_t i = 0; i < radii.size(); ++i) out[i] += lambdas_[j] * v[i];
    }
    return out;
  }

  double operator()(const Vec& x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < ext_.size(); ++j) s += lambdas_[j] * ext_[j](x);
    return s;
  }

  /// sum lambda_j a_j(zeta).
  double trace(const Vec& zeta) const {
    double s = 0.0;
    for (std::size_t j = 0; j < ext_.size(); ++j) s += lambdas_[j] * ext_[j].atom()(zeta);
    return s;
  }

 private:
  std::vector<double> lambdas_;
  std::vector<AtomExtension> ext_;
};

inline double atomic_sum_eval(const AtomicSum& s, const Vec& x) { return s(x); }

inline double atomic_sum_norm(const AtomicSum& s, double p, const QuadratureRule& quad, const std::vector<double>& r_grid) {
  return hp_quasinorm(s, p, quad, r_grid);
}

// ---------------------------------------------------------------------------
// CSV serialization

/// Line 1: "# n=<n> p=<p> kp=<kp> center=<c1;...;cn> radius=<r0>" (center=none,
/// radius=0 for the constant atom). Line 2: "x1,...,xn,weight,value". Then one
/// row per node of `quad`. Numbers carry 17 significant digits.
inline void write_atom_csv(std::ostream& os, const Atom& a, const QuadratureRule& quad) {
  const auto old_prec = os.precision(17);
  os << "# n=" << a.dim() << " p=" << a.p() << " kp=" << a.kp() << " center=";
  if (a.is_constant()) {
    os << "none radius=0\n";
  } else {
    for (int i = 0; i < a.dim(); ++i) os << (i ? ";" : "") << a.cap()->center()[i];
    os << " radius=" << a.cap()->radius() << '\n';
  }
  for (int i = 0; i < a.dim(); ++i) os << 'x' << (i + 1) << ',';
  os << "weight,value\n";
  for (std::size_t q = 0; q < quad.size(); ++q) {
    for (int i = 0; i < a.dim(); ++i) os << quad.nodes[q][i] << ',';
    os << quad.weights[q] << ',' << a(quad.nodes[q]) << '\n';
  }
  os.precision(old_prec);
}

struct SampledAtom {
  int n = 0;
  double p = 1.0;
  int kp = 0;
  std::optional<Vec> center;
  double radius = 0.0;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  std::vector<double> values;
};

inline SampledAtom read_atom_csv(std::istream& is) {
  SampledAtom s;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw std::invalid_argument("atom CSV: missing header line");
  std::istringstream hs(line.substr(2));
  std::string tok;
  bool have_n = false;
  std::string center_text;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("atom CSV: malformed header token " + tok);
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "n") {
      s.n = std::stoi(val);
      have_n = true;
    } else if (key == "p") {
      s.p = std::stod(val);
    } else if (key == "kp") {
      s.kp = std::stoi(val);
    } else if (key == "center") {
      center_text = val;
    } else if (key == "radius") {
      s.radius = std::stod(val);
    } else {
      throw std::invalid_argument("atom CSV: unknown header key " + key);
    }
  }
  if (!have_n || s.n < 1 || s.n > kMaxDim) throw std::invalid_argument("atom CSV: bad dimension");
  if (center_text != "none" && !center_text.empty()) {
    Vec c(s.n);
    std::istringstream cs(center_text);
    std::string part;
    int i = 0;
    while (std::getline(cs, part, ';')) {
      if (i >= s.n) throw std::invalid_argument("atom CSV: center has too many coordinates");
      c[i++] = std::stod(part);
    }
    if (i != s.n) throw std::invalid_argument("atom CSV: center has too few coordinates");
    s.center = c;
  }
  if (!std::getline(is, line)) throw std::invalid_argument("atom CSV: missing column line");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream rs(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(rs, cell, ',')) cells.push_back(std::stod(cell));
    if (static_cast<int>(cells.size()) != s.n + 2) throw std::invalid_argument("atom CSV: wrong column count");
    Vec x(s.n);
    for (int i = 0; i < s.n; ++i) x[i] = cells[static_cast<std::size_t>(i)];
    s.nodes.push_back(x);
    s.weights.push_back(cells[static_cast<std::size_t>(s.n)]);
    s.values.push_back(cells[static_cast<std::size_t>(s.n) + 1]);
  }
  return s;
}

}  // namespace hyperball

#endif  // HYPERBALL_HARDY_HPP
