#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "hyperball/cli/commands.hpp"
#include "hyperball/hyperball.hpp"

using namespace hyperball;
using namespace hyperball::cli;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string join(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += (s.empty() ? "" : "; ") + l;
  return s;
}

BoundaryExpansion single(int n, int l, std::mt19937_64& rng) {
  BoundaryExpansion phi(n);
  phi.add_component(random_component(n, l, rng));
  return phi;
}

Outcome dirichlet_residual() {
  ExperimentConfig cfg;
  cfg.max_degree = 8;
  cfg.tolerance = 1e-9;
  const Report r = cmd_verify_dirichlet(cfg);
  double worst = 0.0;
  std::istringstream is(r.csv);
  std::string line;
  std::getline(is, line);
  int rows = 0;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    worst = std::max(worst, std::stod(cells.at(3)));
    ++rows;
  }
  return {r.pass, std::to_string(rows) + " (n, l, r) cells, worst relative residual " + fmt(worst)};
}

Outcome poisson_reproduction() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int n : {3, 4}) {
    const QuadratureRule quad = build_quadrature(n, 60);
    for (int l = 0; l <= 6; ++l) {
      const BoundaryExpansion y = single(n, l, rng);
      for (double r : {0.1, 0.3, 0.5, 0.7})
        for (int i = 0; i < 4; ++i) {
          const Vec z = random_unit(n, rng);
          const double got = eval_poisson_integral(y, r * z, quad, ResolutionPolicy::strict);
          worst = std::max(worst, std::abs(got - radial_coeff(n, l, r) * y(z)));
        }
    }
  }
  return {worst <= 1e-6, "worst error " + fmt(worst)};
}

Outcome kernel_mass() {
  double worst = 0.0;
  std::mt19937_64 rng(102);
  for (int n = 3; n <= 5; ++n) {
    const Vec z = random_unit(n, rng);
    const QuadratureRule quad = graded_cap_rule(n, z, 0.1, 24, 4);
    for (double r : {0.0, 0.25, 0.5, 0.75, 0.9}) {
      const double m = quad.integrate([&](const Vec& xi) { return poisson_h(KernelPoint(r, z, xi)); });
      worst = std::max(worst, std::abs(m - 1.0));
    }
  }
  return {worst <= 1e-8, "n = 3..5, worst |mass - 1| " + fmt(worst)};
}

Outcome intertwining() {
  const Report r = cmd_kernel_identity(ExperimentConfig{});
  double worst = 0.0;
  std::istringstream is(r.csv);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) worst = std::max(worst, std::stod(line.substr(line.rfind(',') + 1)));
  const LineRule rule = eta_rule();
  double mass = 0.0;
  for (int n = 3; n <= 6; ++n)
    for (double rr : {0.0, 0.25, 0.5, 0.75, 0.95})
      mass = std::max(mass, std::abs(eta_transform(n, [](double) { return 1.0; }, rr, rule) - 1.0));
  const bool ok = worst <= 1e-6 && mass <= 1e-8;
  return {ok, "worst identity error " + fmt(worst) + ", worst eta mass error " + fmt(mass)};
}

Outcome boundary_operators() {
  const Report r = cmd_boundary_ops(ExperimentConfig{});
  bool structure = true;
  for (int n = 8; n <= 10; ++n)
    for (int k = 2; k <= 6; ++k) {
      const PkPolynomial p = pk_polynomial(n, k);
      structure = structure && p.degree() == k / 2 && p.constant_term().is_zero();
    }
  for (int n = 3; n <= 10; ++n) {
    structure = structure && pk_polynomial(n, 1).coeffs.is_zero();
    structure = structure && pk_polynomial(n, 0).constant_term() == Rational(2 * (n - 1));
  }
  return {r.pass && structure, join(r.summary) + "; P_k structure " + (structure ? "exact" : "WRONG")};
}

Outcome parity() {
  ExperimentConfig cfg;
  cfg.dims = {3, 4};
  const Report r = cmd_parity_scan(cfg);
  return {r.pass, join(r.summary)};
}

Outcome lemma9_round_trip() {
  const LineRule rule = eta_rule(64);
  std::mt19937_64 rng(103);
  double worst = 0.0;
  for (int n : {3, 4})
    for (int trial = 0; trial < 4; ++trial) {
      const auto u = extend(random_expansion(n, 4, rng));
      const auto v = lemma9_pair(u);
      for (int i = 0; i < 8; ++i) {
        const Vec z = random_unit(n, rng);
        worst = std::max(worst, std::abs(lemma9_reconstruct(v, u.at_origin(), 0.5, z, rule) - u.eval(0.5, z)));
      }
    }
  return {worst <= 1e-7, "worst disagreement " + fmt(worst)};
}

Outcome mean_value() {
  std::mt19937_64 rng(104);
  const auto u = extend(random_expansion(3, 4, rng));
  double worst = 0.0;
  bool ok = true;
  for (int i = 0; i < 5; ++i) {
    const LorentzMap g = LorentzMap::random(3, rng, 2.0);
    const MeanValueResult m = mean_value_check(u, g, 0.1, 100000, 200 + i);
    const double z = std::abs(m.estimate - m.target) / m.mc_error;
    worst = std::max(worst, z);
    ok = ok && z <= 3.0;
  }
  return {ok, "5 boosts, worst deviation " + fmt(worst) + " standard errors"};
}

Outcome fact1() {
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> eps_dist(1e-3, 1.0 / 6.0 - 1e-3);
  int good = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 3 + i % 4;
    const LorentzMap g = LorentzMap::random(n, rng);
    if (fact1_check(g, eps_dist(rng), 1000, 300 + i)) ++good;
  }
  return {good == 20, std::to_string(good) + "/20 pairs"};
}

Outcome atoms() {
  const Report r = cmd_atom_bound(ExperimentConfig{});

  // Suite constant: the largest norm in the tested family of each (n, p).
  struct Case {
    int n;
    double p;
    int sums;
    double constant = 0.0;
  };
  std::vector<Case> cases = {{3, 1.0, 4}, {3, 2.0 / 3.0, 3}, {4, 1.0, 3}};
  std::istringstream is(r.csv);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    const int n = std::stoi(cells[0]);
    const double p = std::stod(cells[1]);
    if (std::stoll(cells[3]) < 0) continue;
    for (Case& c : cases)
      if (c.n == n && std::abs(c.p - p) < 1e-12) c.constant = std::max(c.constant, std::stod(cells[4]));
  }

  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> radius(0.4, 0.8), lam(-1.0, 1.0);
  std::uniform_int_distribution<int> count(2, 4);
  const auto grid = dyadic_r_grid();
  bool ok = r.pass;
  double worst = 0.0;
  for (const Case& c : cases) {
    const QuadratureRule quad = build_quadrature(c.n, c.n == 3 ? 40 : 20);
    for (int s = 0; s < c.sums; ++s) {
      std::vector<Atom> as;
      std::vector<double> ls;
      const int m = count(rng);
      for (int j = 0; j < m; ++j) {
        as.push_back(make_atom(Cap(SpherePoint(random_unit(c.n, rng)), radius(rng)), c.p, 1000 + 10 * s + j));
        ls.push_back(lam(rng));
      }
      const AtomicSum sum(ls, as);
      const double ratio = atomic_sum_norm(sum, c.p, quad, grid) / (c.constant * sum.coefficient_quasinorm(c.p));
      worst = std::max(worst, ratio);
      ok = ok && c.constant > 0.0 && ratio <= 1.0;
    }
  }
  return {ok, join(r.summary) + "; 10 atomic sums, worst norm / (C * coefficient quasi-norm) " + fmt(worst)};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  const std::string cli = HYPERBALL_CLI_PATH;
  const std::string dir = HYPERBALL_CONFIG_DIR;
  const std::vector<std::pair<std::string, std::string>> cmds = {
      {"verify-dirichlet", "small.cfg"}, {"parity-scan", "small.cfg"}, {"kernel-identity", "small.cfg"},
      {"boundary-ops", "small.cfg"},     {"atom-bound", "atoms_small.cfg"}};
  bool ok = true;
  int same = 0;
  for (const auto& [cmd, cfg] : cmds) {
    std::string outs[2];
    for (int k = 0; k < 2; ++k) {
      const std::string path = "acceptance_" + cmd + "_" + std::to_string(k) + ".csv";
      const int rc = run(cli + " " + cmd + " --quiet --config " + dir + "/" + cfg + " --out " + path);
      ok = ok && rc == 0;
      outs[k] = slurp(path);
      std::remove(path.c_str());
    }
    if (!outs[0].empty() && outs[0] == outs[1]) ++same;
  }
  ok = ok && same == static_cast<int>(cmds.size());
  return {ok, std::to_string(same) + "/" + std::to_string(cmds.size()) + " commands byte-identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Dirichlet residual", dirichlet_residual},
      {"Poisson reproduction", poisson_reproduction},
      {"kernel mass", kernel_mass},
      {"kernel intertwining and eta mass", intertwining},
      {"boundary operators and P_k structure", boundary_operators},
      {"parity of the N^{n-1} pairing", parity},
      {"Euclidean companion round trip", lemma9_round_trip},
      {"mean value over invariant balls", mean_value},
      {"invariant ball inclusions", fact1},
      {"atom norms and atomic sums", atoms},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[PRIMARY] %zu %s: %s (%s; %.1f s)\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
