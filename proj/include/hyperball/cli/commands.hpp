#ifndef HYPERBALL_CLI_COMMANDS_HPP
#define HYPERBALL_CLI_COMMANDS_HPP

// Experiment suites behind the command-line driver. Each command returns a
// Report: a pass flag, CSV text with a fixed column order, and summary lines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hyperball/cli/config.hpp"
#include "hyperball/hardy.hpp"
#include "hyperball/hharmonic.hpp"
#include "hyperball/kernels.hpp"
#include "hyperball/quadrature.hpp"
#include "hyperball/spheregeom.hpp"

namespace hyperball::cli {

struct Report {
  bool pass = true;
  std::string csv;
  std::vector<std::string> summary;
};

/// Shortest text that round-trips: 17 significant digits.
inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<const char*> columns) {
    bool first = true;
    for (const char* c : columns) {
      text_ += first ? "" : ",";
      text_ += c;
      first = false;
    }
    text_ += '\n';
  }
  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((text_ += (first ? "" : ","), text_ += cell(cells), first = false), ...);
    text_ += '\n';
  }
  const std::string& text() const { return text_; }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  static std::string cell(bool v) { return v ? "true" : "false"; }
  std::string text_;
};

/// Generator seeded from the base seed and a case label, independent of the
/// order in which cases run.
inline std::mt19937_64 case_rng(std::uint64_t seed, std::initializer_list<std::uint32_t> label) {
  std::vector<std::uint32_t> words = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  words.insert(words.end(), label.begin(), label.end());
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

inline std::vector<int> sweep_dims(const ExperimentConfig& cfg, std::vector<int> defaults) {
  if (cfg.n) return {*cfg.n};
  if (!cfg.dims.empty()) return cfg.dims;
  return defaults;
}

// ---------------------------------------------------------------------------

/// D residual on a 5 x 32 (radius x direction) grid for single-degree data,
/// plus agreement of the series extension with the quadrature Poisson integral.
/// CSV: n,l,r,residual,tolerance,pass where residual is
/// max over directions of d_residual / (1 + |u|).
inline Report cmd_verify_dirichlet(const ExperimentConfig& cfg) {
  Report rep;
  CsvWriter csv({"n", "l", "r", "residual", "tolerance", "pass"});
  const std::vector<double> radii = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (int n : sweep_dims(cfg, {3, 4, 5})) {
    auto dir_rng = case_rng(cfg.seed, {1u, static_cast<std::uint32_t>(n)});
    std::vector<Vec> dirs;
    for (int i = 0; i < 32; ++i) dirs.push_back(random_unit(n, dir_rng));
    double worst = 0.0;
    int failed = 0;
    for (int l = 0; l <= cfg.max_degree; ++l) {
      auto rng = case_rng(cfg.seed, {2u, static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(l)});
      BoundaryExpansion phi(n);
      phi.add_component(random_component(n, l, rng));
      for (double r : radii) {
        double res = 0.0;
        for (const Vec& z : dirs) {
          const Vec x = r * z;
          double d, uval;
          if (cfg.corrupt_radial) {
            const EuclideanHarmonicFunction v(phi);
            d = d_residual(v, x);
            uval = v(x);
          } else {
            const HHarmonicFunction u(phi);
            d = d_residual(u, x);
            uval = u(x);
          }
          res = std::max(res, d / (1.0 + std::abs(uval)));
        }
        const bool ok = res <= cfg.tolerance;
        if (!ok) ++failed;
        worst = std::max(worst, res);
        csv.row(n, l, r, res, cfg.tolerance, ok);
      }
    }
    rep.pass = rep.pass && failed == 0;
    rep.summary.push_back("verify-dirichlet n=" + std::to_string(n) + ": max relative D residual " + num(worst) +
                          (failed ? " (" + std::to_string(failed) + " rows above tolerance)" : ""));

    // Extension consistency against the quadrature Poisson integral.
    const int lc = std::min(cfg.max_degree, 6);
    auto rng = case_rng(cfg.seed, {3u, static_cast<std::uint32_t>(n)});
    const BoundaryExpansion phi = random_expansion(n, lc, rng);
    const int qdeg = n <= 4 ? 60 : (n == 5 ? 32 : 20);
    const std::vector<double> cradii = n <= 4 ? std::vector<double>{0.3, 0.5, 0.7}
                                              : (n == 5 ? std::vector<double>{0.3} : std::vector<double>{0.2});
    const QuadratureRule quad = build_quadrature(n, qdeg);
    std::vector<double> phi_at(quad.size());
    for (std::size_t i = 0; i < quad.size(); ++i) phi_at[i] = phi(quad.nodes[i]);
    double cons = 0.0;
    for (double r : cradii)
      for (int i = 0; i < 8; ++i) {
        const Vec x = r * dirs[static_cast<std::size_t>(i)];
        double pi = 0.0;
        for (std::size_t q = 0; q < quad.size(); ++q) pi += quad.weights[q] * poisson_h(x, quad.nodes[q]) * phi_at[q];
        const double series = cfg.corrupt_radial ? EuclideanHarmonicFunction(phi)(x) : HHarmonicFunction(phi)(x);
        cons = std::max(cons, std::abs(series - pi));
      }
    const bool cons_ok = cons <= 1e-6;
    rep.pass = rep.pass && cons_ok;
    rep.summary.push_back("verify-dirichlet n=" + std::to_string(n) + ": extension vs Poisson quadrature max error " +
                          num(cons) + (cons_ok ? " (ok)" : " (FAIL, bound 1e-6)"));
  }
  rep.csv = csv.text();
  return rep;
}

// ---------------------------------------------------------------------------

/// Growth of r -> <N^{n-1} u(r .), Phi> for constant, degree-1 and degree-2 data.
/// CSV: n,l,r,pairing,fitted_class,coefficient.
inline Report cmd_parity_scan(const ExperimentConfig& cfg) {
  Report rep;
  CsvWriter csv({"n", "l", "r", "pairing", "fitted_class", "coefficient"});
  const auto grid = geometric_r_grid(cfg.r_points, 1e-1, cfg.r_gap_min);
  for (int n : sweep_dims(cfg, {3, 4})) {
    const QuadratureRule quad = build_quadrature(n, std::max(cfg.quad_degree, 6));
    for (int l = 0; l <= 2; ++l) {
      BoundaryExpansion phi(n);
      if (l == 0) {
        phi = BoundaryExpansion::constant(n, 1.0);
      } else {
        auto rng = case_rng(cfg.seed, {4u, static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(l)});
        phi.add_component(random_component(n, l, rng));
      }
      const HHarmonicFunction u(phi);
      const ScanResult s = theorem8_scan(u, [&](const Vec& z) { return phi(z); }, quad, grid);
      const bool want_log = (n % 2 == 1) && l >= 1;
      bool ok;
      if (want_log)
        ok = s.growth.kind == GrowthKind::logarithmic && std::abs(s.growth.coefficient) >= 10.0 * s.growth.fit_residual;
      else
        ok = s.growth.kind == GrowthKind::bounded_limit;
      rep.pass = rep.pass && ok;
      for (std::size_t j = 0; j < grid.size(); ++j)
        csv.row(n, l, grid[j], s.profile.values[j], std::string(to_string(s.growth.kind)), s.growth.coefficient);
      rep.summary.push_back("parity-scan n=" + std::to_string(n) + " l=" + std::to_string(l) + ": " +
                            to_string(s.growth.kind) + " coefficient " + num(s.growth.coefficient) + " residual " +
                            num(s.growth.fit_residual) + (ok ? " (expected)" : " (UNEXPECTED)"));
    }
  }
  rep.csv = csv.text();
  return rep;
}

// ---------------------------------------------------------------------------

/// P_e(r zeta, xi) against int_0^1 eta(r,s) P_h(r s zeta, xi) ds on an (n, r, t)
/// grid, and the mass identity int eta = 1. CSV: n,r,t,lhs,rhs,abserr.
inline Report cmd_kernel_identity(const ExperimentConfig& cfg) {
  Report rep;
  CsvWriter csv({"n", "r", "t", "lhs", "rhs", "abserr"});
  const LineRule rule = eta_rule();
  for (int n : sweep_dims(cfg, {3, 4, 5})) {
    double worst = 0.0;
    bool ok = true;
    for (double r : {0.0, 0.3, 0.6, 0.9})
      for (double t : {-0.9, 0.0, 0.5, 0.99}) {
        const double lhs = poisson_e(n, r, t);
        const double rhs = eta_transform(n, [&](double s) { return poisson_h(n, r * s, t); }, r, rule);
        const double err = std::abs(lhs - rhs);
        worst = std::max(worst, err / (1.0 + lhs));
        ok = ok && err <= 1e-6 * (1.0 + lhs);
        csv.row(n, r, t, lhs, rhs, err);
      }
    double mass = 0.0;
    for (double r : {0.0, 0.25, 0.5, 0.75, 0.95})
      mass = std::max(mass, std::abs(eta_transform(n, [](double) { return 1.0; }, r, rule) - 1.0));
    const bool mass_ok = mass <= 1e-8;
    rep.pass = rep.pass && ok && mass_ok;
    rep.summary.push_back("kernel-identity n=" + std::to_string(n) + ": max |Pe - int eta Ph| / (1 + Pe) " + num(worst) +
                          ", max |int eta - 1| " + num(mass) + ((ok && mass_ok) ? " (ok)" : " (FAIL)"));
  }
  rep.csv = csv.text();
  return rep;
}

// ---------------------------------------------------------------------------

inline std::vector<AtomFamily> atom_families(const ExperimentConfig& cfg) {
  std::vector<AtomFamily> fams = cfg.atom_families;
  if (fams.empty()) fams = {{3, 1.0, "1"}, {3, 2.0 / 3.0, "2/3"}, {4, 1.0, "1"}};
  if (cfg.n) {
    std::vector<AtomFamily> keep;
    for (const auto& f : fams)
      if (f.n == *cfg.n) keep.push_back(f);
    fams = keep;
  }
  return fams;
}

inline const std::vector<double>& atom_cap_scales() {
  static const std::vector<double> s = {0.8, 0.4, 0.2, 0.1};
  return s;
}

inline const std::vector<double>& negative_control_scales() {
  static const std::vector<double> s = {0.8, 0.4, 0.2, 0.1, 0.05, 0.025};
  return s;
}

/// The negative control: n = 3, p = 2/3 "atoms" with no vanishing moments.
inline Atom negative_control_atom(const ExperimentConfig& cfg, double r0, std::size_t idx) {
  auto rng = case_rng(cfg.seed, {7u, static_cast<std::uint32_t>(idx)});
  AtomOptions opt;
  opt.moment_degree = -1;
  return make_atom(Cap(SpherePoint(random_unit(3, rng)), r0), 2.0 / 3.0, cfg.seed, opt);
}

/// H^p norms of P_h[a] over cap scales and seeds. CSV: n,p,cap_radius,seed,norm.
/// The constant atom has cap_radius 0 and seed 0; negative-control rows have seed -1.
inline Report cmd_atom_bound(const ExperimentConfig& cfg) {
  Report rep;
  CsvWriter csv({"n", "p", "cap_radius", "seed", "norm"});
  const auto grid = dyadic_r_grid();
  const auto fams = atom_families(cfg);
  for (std::size_t fi = 0; fi < fams.size(); ++fi) {
    const AtomFamily& f = fams[fi];
    std::vector<double> norms;
    for (std::size_t si = 0; si < atom_cap_scales().size(); ++si)
      for (int j = 0; j < cfg.atom_seeds; ++j) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(j);
        auto rng = case_rng(cfg.seed, {5u, static_cast<std::uint32_t>(f.n), static_cast<std::uint32_t>(fi),
                                       static_cast<std::uint32_t>(si), static_cast<std::uint32_t>(j)});
        const Cap cap(SpherePoint(random_unit(f.n, rng)), atom_cap_scales()[si]);
        const Atom a = make_atom(cap, f.p, seed);
        const double v = atom_extension_norm(a, grid);
        norms.push_back(v);
        csv.row(f.n, f.p, cap.radius(), static_cast<long long>(seed), v);
      }
    const double mx = *std::max_element(norms.begin(), norms.end());
    const double mn = *std::min_element(norms.begin(), norms.end());
    const double ratio = mx / mn;
    const bool ok = std::isfinite(ratio) && mn > 0.0 && ratio <= 10.0;
    rep.pass = rep.pass && ok;
    rep.summary.push_back("atom-bound n=" + std::to_string(f.n) + " p=" + f.p_text + ": " +
                          std::to_string(norms.size()) + " atoms, norms in [" + num(mn) + ", " + num(mx) +
                          "], max/min " + num(ratio) + (ok ? " (within 10)" : " (OUTSIDE 10)"));

    const double cn = atom_extension_norm(make_constant_atom(f.n, f.p), grid);
    const bool cok = std::abs(cn - 1.0) <= 1e-12;
    rep.pass = rep.pass && cok;
    csv.row(f.n, f.p, 0.0, 0LL, cn);
    rep.summary.push_back("atom-bound n=" + std::to_string(f.n) + " p=" + f.p_text + ": constant atom norm " + num(cn) +
                          (cok ? " (ok)" : " (FAIL)"));
  }
  if (cfg.negative_control && (!cfg.n || *cfg.n == 3)) {
    std::vector<double> norms;
    for (std::size_t i = 0; i < negative_control_scales().size(); ++i) {
      const double r0 = negative_control_scales()[i];
      const double v = atom_extension_norm(negative_control_atom(cfg, r0, i), grid);
      norms.push_back(v);
      csv.row(3, 2.0 / 3.0, r0, -1LL, v);
    }
    const double ratio = *std::max_element(norms.begin(), norms.end()) / *std::min_element(norms.begin(), norms.end());
    const bool flagged = ratio > 10.0;
    rep.pass = rep.pass && flagged;
    rep.summary.push_back("atom-bound negative control n=3 p=2/3 without moments: max/min " + num(ratio) +
                          (flagged ? " (flagged: exceeds 10)" : " (NOT flagged)"));
  }
  rep.csv = csv.text();
  return rep;
}

// ---------------------------------------------------------------------------

/// r -> <(N^k u - Q_k(Delta_sigma) u)(r .), Phi> for every valid (n, k).
/// CSV: n,k,r,residual,class.
inline Report cmd_boundary_ops(const ExperimentConfig& cfg) {
  Report rep;
  CsvWriter csv({"n", "k", "r", "residual", "class"});
  const auto grid = geometric_r_grid(cfg.r_points, 1e-1, cfg.r_gap_min);
  for (int n : sweep_dims(cfg, {3, 4, 5})) {
    const int L = std::min(cfg.max_degree, 3);
    const QuadratureRule quad = build_quadrature(n, std::max(cfg.quad_degree, 2 * L + 2));
    for (int k = 1; k <= n - 2; ++k) {
      auto rng = case_rng(cfg.seed, {6u, static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(k)});
      const BoundaryExpansion phi = random_expansion(n, L, rng);
      const BoundaryExpansion test = random_expansion(n, L, rng);
      const HHarmonicFunction u(phi);
      const Corollary7Profile p = corollary7_residual(u, k, [&](const Vec& z) { return test(z); }, grid, quad);
      const GrowthClass g = growth_classify(p.profile);
      const bool ok = g.kind == GrowthKind::bounded_limit && std::abs(g.limit) <= 1e-3 * p.scale;
      rep.pass = rep.pass && ok;
      for (std::size_t j = 0; j < grid.size(); ++j) csv.row(n, k, grid[j], p.profile.values[j], std::string(to_string(g.kind)));
      rep.summary.push_back("boundary-ops n=" + std::to_string(n) + " k=" + std::to_string(k) + ": " + to_string(g.kind) +
                            " limit " + num(g.limit) + " scale " + num(p.scale) + (ok ? " (ok)" : " (FAIL)"));
    }
  }
  rep.csv = csv.text();
  return rep;
}

}  // namespace hyperball::cli

#endif  // HYPERBALL_CLI_COMMANDS_HPP
