#include <cmath>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"
#include "hyperball/hharmonic.hpp"

using namespace hyperball;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

BoundaryExpansion single(int n, int l, std::mt19937_64& rng) {
  BoundaryExpansion phi(n);
  phi.add_component(random_component(n, l, rng));
  return phi;
}

RationalPolynomial poly(std::vector<Rational> c) { return RationalPolynomial(std::move(c)); }

}  // namespace

TEST_CASE("extension: constants, single degrees, value at the origin") {
  std::mt19937_64 rng(1);
  for (int n = 3; n <= 6; ++n) {
    const auto c = extend(BoundaryExpansion::constant(n, 2.75));
    const auto phi = random_expansion(n, 5, rng);
    const auto u = extend(phi);
    CHECK_THAT(u(Vec(n)), WithinAbs(phi.mean(), 1e-15));
    for (int i = 0; i < 10; ++i) {
      const Vec x = random_in_ball(n, 0.99, rng);
      CHECK_THAT(c(x), WithinAbs(2.75, 1e-14));
    }
    for (int l = 0; l <= 6; ++l) {
      const auto y = single(n, l, rng);
      const Vec z = random_unit(n, rng);
      for (double r : {0.2, 0.7, 0.95}) CHECK_THAT(extend(y).eval(r, z), WithinAbs(radial_coeff(n, l, r) * y(z), 1e-13));
    }
    const Vec z = random_unit(n, rng);
    CHECK_THAT(u.eval(1.0, z), WithinAbs(u.trace(z), 1e-12));
  }
}

TEST_CASE("Poisson integral by quadrature") {
  std::mt19937_64 rng(2);
  const auto q3 = build_quadrature(3, 40);
  const Vec z = random_unit(3, rng);
  CHECK_THAT(eval_poisson_integral([](const Vec&) { return -1.25; }, 0.6 * z, q3), WithinAbs(-1.25, 1e-8));
  for (int l = 0; l <= 6; ++l) {
    const auto y = single(3, l, rng);
    const Vec w = random_unit(3, rng);
    CHECK_THAT(eval_poisson_integral(y, 0.5 * w, q3), WithinAbs(radial_coeff(3, l, 0.5) * y(w), 1e-7));
  }
  const Vec c = random_unit(3, rng);
  auto bump = [&](const Vec& x) { return std::exp(-4.0 * (1.0 - x.dot(c))); };
  double lo = 1e300, hi = -1e300;
  for (const Vec& x : q3.nodes) {
    lo = std::min(lo, bump(x));
    hi = std::max(hi, bump(x));
  }
  for (int i = 0; i < 20; ++i) {
    const double v = eval_poisson_integral(bump, random_in_ball(3, 0.8, rng), q3);
    CHECK(v >= lo);
    CHECK(v <= hi);
  }
  CHECK_THROWS_AS(eval_poisson_integral(bump, 0.95 * c, q3, ResolutionPolicy::strict), ResolutionError);
  CHECK_NOTHROW(eval_poisson_integral(bump, 0.95 * c, q3, ResolutionPolicy::silent));
}

TEST_CASE("extension agrees with the Poisson integral") {
  std::mt19937_64 rng(3);
  for (int n : {3, 4, 5}) {
    const auto q = build_quadrature(n, n == 5 ? 32 : 60);
    const auto phi = random_expansion(n, 6, rng);
    const auto u = extend(phi);
    for (double r : n == 5 ? std::vector<double>{0.3} : std::vector<double>{0.3, 0.5, 0.7}) {
      const Vec x = r * random_unit(n, rng);
      CHECK_THAT(eval_poisson_integral(phi, x, q), WithinAbs(u(x), 1e-6));
    }
  }
}

TEST_CASE("normal derivatives") {
  std::mt19937_64 rng(4);
  for (int n = 3; n <= 6; ++n) {
    const auto u = extend(random_expansion(n, 5, rng));
    const Vec x = 0.5 * random_unit(n, rng);
    CHECK(apply_N(u, 0)(x) == u(x));
    for (int k = 1; k <= 4; ++k) CHECK(apply_N(extend(BoundaryExpansion::constant(n, 3.0)), k)(x) == 0.0);
    const double h = 1e-5, r = 0.5;
    const Vec z = (1.0 / r) * x;
    const double fd = r * (u.eval(r + h, z) - u.eval(r - h, z)) / (2 * h);
    CHECK_THAT(apply_N(u, 1)(x), WithinAbs(fd, 1e-6));
  }
}

TEST_CASE("tangential Laplacian multipliers") {
  std::mt19937_64 rng(5);
  const auto phi = random_expansion(3, 4, rng);
  const Vec z = random_unit(3, rng);
  const auto lap = apply_tangential_laplacian(phi, Polynomial::identity());
  CHECK(lap.components().count(0) == 0);
  CHECK_THAT(lap.component(1, z), WithinAbs(-2.0 * phi.component(1, z), 1e-14));
  CHECK_THAT(apply_tangential_laplacian(phi, Polynomial::constant(1.0))(z), WithinAbs(phi(z), 1e-14));
}

TEST_CASE("tangential Laplacian eigenvalue by finite differences on S^2") {
  std::mt19937_64 rng(6);
  const double h = 1e-3;
  for (int l = 0; l <= 4; ++l) {
    const auto y = random_component(3, l, rng);
    auto f = [&](double th, double ph) {
      return y(Vec{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
    };
    for (int i = 0; i < 5; ++i) {
      const double th = std::uniform_real_distribution<double>(0.5, 2.6)(rng);
      const double ph = std::uniform_real_distribution<double>(0.0, 6.28)(rng);
      const double d_th = (std::sin(th + h / 2) * (f(th + h, ph) - f(th, ph)) -
                           std::sin(th - h / 2) * (f(th, ph) - f(th - h, ph))) /
                          (h * h * std::sin(th));
      const double d_ph = (f(th, ph + h) - 2 * f(th, ph) + f(th, ph - h)) / (h * h * std::sin(th) * std::sin(th));
      INFO("l = " << l);
      CHECK_THAT(d_th + d_ph, WithinAbs(tangential_eigenvalue(3, l) * f(th, ph), 1e-4 * (1 + std::abs(f(th, ph)))));
    }
  }
}

TEST_CASE("D residual") {
  std::mt19937_64 rng(7);
  for (int n = 3; n <= 6; ++n) {
    const Vec x = 0.6 * random_unit(n, rng);
    CHECK(d_residual(extend(BoundaryExpansion::constant(n, 4.0)), x) == 0.0);
    for (int l = 0; l <= 8; ++l) {
      const auto y = single(n, l, rng);
      const auto u = extend(y);
      for (double r : {0.1, 0.5, 0.9}) {
        const Vec p = r * random_unit(n, rng);
        CHECK(d_residual(u, p) <= 1e-9 * (1 + std::abs(u(p))));
        const Vec zeta = (1.0 / r) * p;
        const double expected = 2.0 * (n - 2) * l * std::pow(r, l + 2) * std::abs(y(zeta));
        CHECK_THAT(d_residual(extend_euclidean(y), p), WithinAbs(expected, 1e-10 * (1 + expected)));
      }
    }
  }
  CHECK_THROWS(d_residual(extend(BoundaryExpansion::constant(3, 1.0)), Vec(3)));
}

TEST_CASE("boundary pairings") {
  std::mt19937_64 rng(8);
  const int n = 4;
  const auto q = build_quadrature(n, 20);
  const auto Phi = random_expansion(n, 3, rng);
  const double mass = q.integrate(Phi);
  CHECK_THAT(boundary_pairing([](const Vec&) { return 1.5; }, Phi, 0.8, q), WithinAbs(1.5 * mass, 1e-12));
  for (int l = 1; l <= 4; ++l) {
    const auto y = single(n, l, rng);
    const auto u = extend(y);
    const double norm2 = y.inner(y);
    CHECK_THAT(boundary_pairing(u, y, 0.7, q), WithinAbs(radial_coeff(n, l, 0.7) * norm2, 1e-10 * (1 + norm2)));
    const auto y2 = single(n, l + 1, rng);
    CHECK_THAT(boundary_pairing(u, y2, 0.7, q), WithinAbs(0.0, 1e-9));
    // the generic quadrature path and the degree-wise path agree
    CHECK_THAT(boundary_pairing([&](const Vec& x) { return u(x); }, y, 0.7, q),
               WithinAbs(boundary_pairing(u, y, 0.7, q), 1e-10));
  }
}

TEST_CASE("P_k polynomials: anchors") {
  for (int n = 3; n <= 9; ++n) {
    CHECK(pk_polynomial(n, 0).coeffs == poly({Rational(2 * (n - 1))}));
    CHECK(pk_polynomial(n, 1).coeffs.is_zero());
    CHECK(pk_polynomial(n, 2).coeffs == poly({Rational(0), Rational(2)}));
  }
  CHECK_THROWS_AS(pk_polynomial(5, 6), OrderOutOfRange);
  CHECK_THROWS_AS(qk_from_pk(5, 4), OrderOutOfRange);
}

TEST_CASE("P_k polynomials: degree floor(k/2) and zero constant term for k <= 6") {
  for (int n = 7; n <= 10; ++n)
    for (int k = 2; k <= 6; ++k) {
      const auto p = pk_polynomial(n, k);
      INFO("n = " << n << ", k = " << k << ", P_k = " << p.coeffs.str());
      CHECK(p.degree() == k / 2);
      CHECK(p.constant_term().is_zero());
    }
  CHECK(pk_polynomial(8, 4).coeffs == poly({Rational(0), Rational(-24, 5), Rational(6, 5)}));
  CHECK(pk_polynomial(8, 6).coeffs == poly({Rational(0), Rational(-648, 5), Rational(-4), Rational(2)}));
}

TEST_CASE("P_k polynomials: the k-3 reading drops the top degree") {
  const auto p = pk_polynomial(8, 4, PkSumLimit::k_minus_3);
  CHECK(p.coeffs == poly({Rational(0), Rational(-24, 5)}));
  CHECK(p.degree() == 1);
}

TEST_CASE("boundary polynomials Q_k") {
  for (int n = 4; n <= 9; ++n) {
    CHECK(q_boundary_polynomial(n, 1).is_zero());
    CHECK(q_boundary_polynomial(n, 2) == poly({Rational(0), Rational(1, n - 3)}));
    CHECK(q_boundary_polynomial(n, 2) == qk_from_pk(n, 2));
    for (int k = 3; k <= n - 2; k += 2) CHECK(q_boundary_polynomial(n, k).is_zero());
  }
  CHECK(q_boundary_polynomial(6, 4) == poly({Rational(0), Rational(-8, 3), Rational(1)}));
  CHECK(q_boundary_polynomial(6, 4) == qk_from_pk(6, 4));
  CHECK_THROWS_AS(q_boundary_polynomial(3, 2), OrderOutOfRange);
}

TEST_CASE("Q_k matches the boundary values of N^k on each degree") {
  for (int n = 4; n <= 8; n += 2)
    for (int k = 1; k <= n - 2; ++k) {
      const Polynomial q = q_boundary_polynomial(n, k).to_double();
      for (int l = 0; l <= 5; ++l) {
        const double want = q(tangential_eigenvalue(n, l));
        INFO("n = " << n << ", k = " << k << ", l = " << l);
        CHECK_THAT(radial_coeff_nk(n, l, k, 1.0), WithinAbs(want, 1e-9 * (1 + std::abs(want))));
      }
    }
}

TEST_CASE("Q_k is the limit of N^k at the boundary for odd n") {
  // the approach is O((1 - r) log(1 - r)): a tenfold smaller gap shrinks the error at least 1.2e-5 / 1.15e-4,
  // above the series truncation floor of about rel_tol / (1 - r^2)
  SeriesControl deep;
  deep.max_terms = 100'000'000;
  for (int n = 5; n <= 7; n += 2)
    for (int k = 1; k <= n - 2; ++k) {
      const Polynomial q = q_boundary_polynomial(n, k).to_double();
      for (int l = 0; l <= 5; ++l) {
        const double want = q(tangential_eigenvalue(n, l));
        const double e1 = radial_coeff_nk(n, l, k, 1.0 - 1e-5, deep) - want;
        const double e2 = radial_coeff_nk(n, l, k, 1.0 - 1e-6, deep) - want;
        INFO("n = " << n << ", k = " << k << ", l = " << l << ", errors " << e1 << ", " << e2);
        CHECK(std::abs(e2) <= 0.13 * std::abs(e1) + 1e-7 * (1 + std::abs(want)));
      }
    }
}

TEST_CASE("growth classifier on model profiles") {
  const auto grid = geometric_r_grid(40);
  RadialProfile c{grid, std::vector<double>(grid.size(), 3.5)};
  const auto gc = growth_classify(c);
  CHECK(gc.kind == GrowthKind::bounded_limit);
  CHECK_THAT(gc.coefficient, WithinAbs(3.5, 1e-12));

  RadialProfile lg{grid, {}};
  for (double r : grid) lg.values.push_back(-std::log1p(-r));
  const auto gl = growth_classify(lg);
  CHECK(gl.kind == GrowthKind::logarithmic);
  CHECK_THAT(gl.coefficient, WithinAbs(1.0, 0.05));

  for (int n = 3; n <= 6; ++n) {
    RadialProfile ph{grid, {}};
    for (double r : grid) ph.values.push_back(poisson_h(n, r, 1.0));
    const auto gp = growth_classify(ph);
    CHECK(gp.kind == GrowthKind::power);
    CHECK_THAT(gp.coefficient, WithinAbs(n - 1.0, 0.1));
  }

  RadialProfile decay{grid, {}};
  for (double r : grid) decay.values.push_back(2.0 * std::pow(1 - r, 1.5));
  const auto gd = growth_classify(decay);
  CHECK(gd.kind == GrowthKind::bounded_limit);
  CHECK(gd.limit == 0.0);

  CHECK_THROWS_AS(growth_classify(RadialProfile{geometric_r_grid(10), std::vector<double>(10, 1.0)}), InsufficientGrid);
  CHECK_THROWS_AS(growth_classify(RadialProfile{geometric_r_grid(30, 0.1, 0.01), std::vector<double>(30, 1.0)}),
                  InsufficientGrid);
  CHECK_THROWS(growth_classify(RadialProfile{{0.5, 0.4}, {1.0, 1.0}}));
}

TEST_CASE("parity of the N^{n-1} pairing") {
  std::mt19937_64 rng(9);
  const auto grid = geometric_r_grid(40);
  for (int n : {3, 4, 5, 6}) {
    const auto q = build_quadrature(n, 8);
    for (int l = 1; l <= 2; ++l) {
      const auto y = single(n, l, rng);
      const auto s = theorem8_scan(extend(y), y, q, grid);
      INFO("n = " << n << ", l = " << l);
      if (n % 2) {
        CHECK(s.growth.kind == GrowthKind::logarithmic);
        CHECK(std::abs(s.growth.coefficient) >= 10 * s.growth.fit_residual);
      } else {
        CHECK(s.growth.kind == GrowthKind::bounded_limit);
      }
    }
    const auto one = BoundaryExpansion::constant(n, 1.0);
    CHECK(theorem8_scan(extend(one), one, q, grid).growth.kind == GrowthKind::bounded_limit);
  }
}

TEST_CASE("n = 5: N^k pairings stay bounded for k < 4 and grow logarithmically at k = 4") {
  std::mt19937_64 rng(10);
  const auto y = single(5, 1, rng);
  const auto u = extend(y);
  const auto q = build_quadrature(5, 6);
  const auto grid = geometric_r_grid(40);
  const auto c = degree_pairings(u, y, q);
  for (int k = 1; k <= 3; ++k) CHECK(growth_classify(pairing_profile(u, k, c, grid)).kind == GrowthKind::bounded_limit);
  CHECK(growth_classify(pairing_profile(u, 4, c, grid)).kind == GrowthKind::logarithmic);
}

TEST_CASE("N vanishes at the boundary only for the hyperbolic extension") {
  std::mt19937_64 rng(11);
  const auto q = build_quadrature(3, 8);
  SeriesControl deep;
  deep.max_terms = 100'000'000;
  for (int l = 1; l <= 3; ++l) {
    const auto y = single(3, l, rng);
    const double norm2 = y.inner(y);
    const double hyp = boundary_pairing(apply_N(extend(y, deep), 1), y, 1.0 - 1e-6, q);
    const double euc = boundary_pairing(apply_N(extend_euclidean(y), 1), y, 1.0 - 1e-6, q);
    CHECK(std::abs(hyp) <= 1e-3 * norm2);
    CHECK_THAT(euc, WithinRel(l * norm2, 1e-4));
  }
}

TEST_CASE("boundary operator residuals") {
  std::mt19937_64 rng(12);
  const auto grid = geometric_r_grid(40);
  for (int n = 3; n <= 6; ++n) {
    const auto q = build_quadrature(n, 8);
    for (int k = 1; k <= n - 2; ++k) {
      const auto u = extend(random_expansion(n, 3, rng));
      const auto Phi = random_expansion(n, 3, rng);
      const auto p = corollary7_residual(u, k, Phi, grid, q);
      const auto g = growth_classify(p.profile);
      INFO("n = " << n << ", k = " << k);
      CHECK(g.kind == GrowthKind::bounded_limit);
      CHECK(std::abs(g.limit) <= 1e-3 * p.scale);
      const auto zero = corollary7_residual(extend(BoundaryExpansion::constant(n, 2.0)), k, Phi, grid, q);
      for (double v : zero.profile.values) CHECK(v == 0.0);
    }
  }
  CHECK_THROWS_AS(corollary7_residual(extend(BoundaryExpansion::constant(3, 1.0)), 2,
                                      [](const Vec&) { return 1.0; }, grid, build_quadrature(3, 4)),
                  OrderOutOfRange);
}

TEST_CASE("boundary operator residual for n = 4, k = 2, degree 1") {
  std::mt19937_64 rng(13);
  const auto y = single(4, 1, rng);
  const auto u = extend(y);
  const auto q = build_quadrature(4, 6);
  const auto grid = geometric_r_grid(40);
  const auto p = corollary7_residual(u, 2, y, grid, q);
  // u = (3r/2 - r^3/2) Y, so the residual is 12 (1 - r) |Y|^2 to first order
  const double gap = 1.0 - grid.back();
  CHECK(std::abs(p.profile.values.back()) <= 13.0 * gap * y.inner(y));
  CHECK(std::abs(p.profile.values.back()) >= 11.0 * gap * y.inner(y));
  const double side = q_boundary_polynomial(4, 2).to_double()(-3.0) * y.inner(y);
  CHECK(std::abs(side) > 0.1 * y.inner(y));
  CHECK_THAT(boundary_pairing(apply_N(u, 2), y, 1.0 - 1e-9, q), WithinAbs(side, 1e-6 * (1 + std::abs(side))));
}

TEST_CASE("Euclidean companion") {
  CHECK(lemma9_multiplier(3, 0) == 0.0);
  CHECK_THAT(lemma9_multiplier(3, 1), WithinRel(2.0, 1e-14));
  CHECK_THAT(lemma9_multiplier(4, 2), WithinRel(12.0, 1e-13));  // Gamma(5) / (Gamma(3) Gamma(2))
  const LineRule rule = eta_rule(64);
  std::mt19937_64 rng(14);
  const auto c = extend(BoundaryExpansion::constant(3, 0.8));
  const auto v0 = lemma9_pair(c);
  CHECK(v0.boundary().components().empty());
  CHECK(lemma9_reconstruct(v0, 0.8, 0.5, Vec::unit(3, 0), rule) == 0.8);
  for (int n : {3, 4}) {
    const auto u = extend(random_expansion(n, 4, rng));
    const auto v = lemma9_pair(u);
    CHECK(v(Vec(n)) == 0.0);
    for (int i = 0; i < 5; ++i) {
      const Vec z = random_unit(n, rng);
      CHECK_THAT(lemma9_reconstruct(v, u.at_origin(), 0.5, z, rule), WithinAbs(u.eval(0.5, z), 1e-7));
    }
  }
}

TEST_CASE("mean value over invariant balls") {
  std::mt19937_64 rng(15);
  const auto c = extend(BoundaryExpansion::constant(3, 1.7));
  const auto mc = mean_value_check(c, LorentzMap::identity(3), 0.1, 1000);
  CHECK_THAT(mc.estimate, WithinAbs(1.7, 1e-12));
  const auto y1 = extend(single(3, 1, rng));
  const auto m0 = mean_value_check(y1, LorentzMap::identity(3), 0.1, 20000);
  CHECK(std::abs(m0.estimate - 0.0) <= 3 * m0.mc_error);
  const auto m1 = mean_value_check(y1, LorentzMap::boost(3, 1.0), 0.05, 100000);
  CHECK(std::abs(m1.estimate - m1.target) <= 3 * m1.mc_error);
}

TEST_CASE("finite expansions stay bounded up to the boundary") {
  std::mt19937_64 rng(16);
  for (int n = 3; n <= 5; ++n) {
    const auto u = extend(random_expansion(n, 6, rng));
    const auto grid = geometric_r_grid(30, 0.5, 1e-4);
    for (int d = 0; d < 8; ++d) {
      const Vec z = random_unit(n, rng);
      double best = 0.0, at = 0.0;
      for (double r : grid) {
        const double v = std::abs(u.eval(r, z)) * std::pow(1 - r, (n - 1) / 2.0);
        if (v > best) {
          best = v;
          at = r;
        }
      }
      CHECK(std::isfinite(best));
      CHECK(at < 0.999);
    }
  }
}
