#include <doctest.h>

#include "taillab/atom.hpp"
#include "taillab/error.hpp"
#include "taillab/tailfit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

using namespace taillab;
using namespace taillab::atom;

namespace {

RadialGrid test_grid(double Z = 1.0, double r_max = 60.0, std::size_t n = 4000) {
  return RadialGrid::log_uniform(1e-6 / Z, r_max, n);
}

ExchangeSource zero_source(const RadialGrid &g) { return {g, std::vector<double>(g.size(), 0.0), {}}; }

// Manufactured problem: xi* = r^2 e^-r with Z = 1, l = 0, E = -0.8.
struct Manufactured {
  RadialGrid grid = test_grid(1.0, 40.0);
  EffectivePotential pot = coulomb_potential(1.0, 0, grid);
  double E = -0.8;
  std::vector<double> exact, K;

  Manufactured() {
    const auto u = pot.ueff();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = grid.r(i);
      exact.push_back(r * r * std::exp(-r));
      // -1/2 xi'' + (U_eff - E) xi with xi'' = (2 - 4r + r^2) e^-r
      K.push_back(-0.5 * (2.0 - 4.0 * r + r * r) * std::exp(-r) + (u[i] - E) * exact.back());
    }
  }
};

double max_abs(const std::vector<double> &v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

} // namespace

TEST_CASE("hydrogenic orbitals") {
  const auto g = test_grid();
  const auto s1 = hydrogenic_orbital(1.0, 1, 0, g);
  const std::size_t i1 = g.index_above(1.0);
  const double r = g.r(i1);
  CHECK(s1.xi[i1] == doctest::Approx(2.0 * r * std::exp(-r)).epsilon(1e-12));
  CHECK(s1.energy == -0.5);
  CHECK(s1.normalized);
  CHECK(moment_b(s1, s1, 0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(s1.xi.front()) < 1e-5);

  const auto xe = hydrogenic_orbital(54.0, 1, 0, default_grid(54.0, 1.0));
  CHECK(xe.energy == -1458.0);
  CHECK(xe.energy * 27.211386 == doctest::Approx(-3.97e4).epsilon(0.01));

  const auto p2 = hydrogenic_orbital(1.0, 2, 1, g);
  CHECK(count_nodes(g.r(), p2.xi, g.r_min(), g.r_max()) == 0);
  const auto g5 = test_grid(5.0, 200.0);
  const auto p5 = hydrogenic_orbital(5.0, 5, 1, g5);
  CHECK(count_nodes(g5.r(), p5.xi, g5.r_min(), g5.r_max()) == 3);
  CHECK(moment_b(p5, p5, 0) == doctest::Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_AS(hydrogenic_orbital(1.0, 1, 1, g), Error);
  CHECK_THROWS_AS(hydrogenic_orbital(-1.0, 1, 0, g), Error);
  try {
    hydrogenic_orbital(54.0, 1, 0, RadialGrid::log_uniform(1.0, 1000.0, 600));
    FAIL("expected a resolution error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::Resolution);
  }
}

TEST_CASE("radial moments") {
  const auto g = test_grid();
  const auto s1 = hydrogenic_orbital(1.0, 1, 0, g);
  const auto s2 = hydrogenic_orbital(1.0, 2, 0, g);
  const auto p2 = hydrogenic_orbital(1.0, 2, 1, g);
  CHECK(std::abs(moment_b(s1, s2, 0)) < 1e-8);
  // int (1/sqrt 6) r^4 e^{-3r/2} dr = 768 / (243 sqrt 6)
  CHECK(moment_b(p2, s1, 1) == doctest::Approx(768.0 / (243.0 * std::sqrt(6.0))).epsilon(1e-9));
  const auto other = hydrogenic_orbital(1.0, 1, 0, test_grid(1.0, 50.0));
  try {
    moment_b(s1, other, 0);
    FAIL("expected a grid mismatch");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::GridMismatch);
  }
  CHECK_THROWS_AS(moment_b(s1, s1, -1), Error);
}

TEST_CASE("orthogonality of distinct same-l orbitals") {
  const auto g = test_grid(2.0, 150.0);
  for (int l = 0; l <= 2; ++l)
    for (int n1 = l + 1; n1 <= 4; ++n1)
      for (int n2 = n1 + 1; n2 <= 5; ++n2)
        CHECK(std::abs(moment_b(hydrogenic_orbital(2.0, n1, l, g), hydrogenic_orbital(2.0, n2, l, g), 0)) < 1e-8);
}

TEST_CASE("angular coefficients") {
  CHECK(three_j_zero(1, 1, 0) == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(three_j_zero(1, 1, 2) == doctest::Approx(std::sqrt(2.0 / 15.0)));
  CHECK(three_j_zero(2, 2, 2) == doctest::Approx(-std::sqrt(2.0 / 35.0)));
  CHECK(three_j_zero(1, 1, 1) == 0.0); // odd sum
  CHECK(three_j_zero(0, 1, 3) == 0.0); // triangle
  CHECK(standard_coefficient(0, 1, 1) == doctest::Approx(1.0));
  CHECK(standard_coefficient(0, 1, 1, 0.5) == doctest::Approx(0.5));
  CHECK(standard_coefficient(0, 0, 1) == 0.0);
  CHECK(standard_coefficient(0, 1, 2) == 0.0);
  CHECK(standard_coefficient(1, 1, 2) == doctest::Approx(3.0 * 2.0 / 15.0));
}

TEST_CASE("exchange source") {
  const auto g = test_grid(1.0, 150.0);
  const auto s1 = hydrogenic_orbital(1.0, 1, 0, g);
  const auto s5 = hydrogenic_orbital(1.0, 5, 0, g);
  const auto p2 = hydrogenic_orbital(1.0, 2, 1, g);

  SUBCASE("s-s coupling vanishes") {
    const std::vector<OccupiedShell> occ{{s5, 1.0}};
    const auto src = exchange_source(s1, occ, 3);
    CHECK(src.terms.empty());
    CHECK(max_abs(src.K) == 0.0);
  }
  SUBCASE("dipole-only source from a p shell") {
    const std::vector<OccupiedShell> occ{{p2, 1.0}};
    const auto src = exchange_source(s1, occ, 3);
    REQUIRE(src.terms.size() == 1);
    CHECK(src.terms[0].k == 1);
    CHECK(src.terms[0].coefficient == doctest::Approx(1.0));
    const double b = moment_b(p2, s1, 1);
    CHECK(src.terms[0].moment == doctest::Approx(b));
    for (std::size_t i = 0; i < g.size(); i += 97) {
      const double expect = b * p2.xi[i] / (g.r(i) * g.r(i));
      CHECK(std::abs(src.K[i] - expect) <= 1e-12 * std::abs(expect) + 1e-300);
    }
  }
  SUBCASE("K equals the sum of its recorded terms") {
    const auto d3 = hydrogenic_orbital(1.0, 3, 2, g);
    const std::vector<OccupiedShell> occ{{p2, 1.0}, {d3, 0.4}};
    const auto target = hydrogenic_orbital(1.0, 2, 1, g);
    const auto src = exchange_source(target, occ, 4);
    CHECK(src.terms.size() == 3); // p-p: k=2; p-d: k=1, 3
    std::vector<double> sum(g.size(), 0.0);
    for (const auto &t : src.terms) {
      const auto &orb = t.label == p2.label ? p2 : d3;
      for (std::size_t i = 0; i < g.size(); ++i)
        sum[i] += t.coefficient * t.moment * orb.xi[i] / std::pow(g.r(i), t.k + 1);
    }
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(std::abs(src.K[i] - sum[i]) <= 1e-12 * std::abs(sum[i]) + 1e-300);
  }
  SUBCASE("empty occupied list and injectable coefficients") {
    const auto src = exchange_source(s1, {}, 2);
    CHECK(max_abs(src.K) == 0.0);
    const std::vector<OccupiedShell> occ{{s5, 1.0}};
    const auto forced = exchange_source(s1, occ, 1, [](const Orbital &, const OccupiedShell &, int) { return 1.0; });
    REQUIRE(forced.terms.size() == 1);
    CHECK(forced.terms[0].coefficient == 1.0);
    CHECK(max_abs(forced.K) > 0.0);
  }
  CHECK_THROWS_AS(exchange_source(s1, {}, 0), Error);
}

TEST_CASE("turning point") {
  const auto g = default_grid(54.0, 1.0);
  const auto pot = coulomb_potential(54.0, 0, g);
  const auto tp = turning_point(pot, -1458.0);
  REQUIRE(tp.has_value());
  CHECK(*tp == doctest::Approx(54.0 / 1458.0).epsilon(1e-5));
  EffectivePotential flat{g, std::vector<double>(g.size(), 1.0), 0};
  CHECK_FALSE(turning_point(flat, -1.0).has_value());
}

TEST_CASE("inversion series") {
  const auto g = test_grid();
  EffectivePotential pot{g, std::vector<double>(g.size(), 2.0), 0};
  CHECK(max_abs(solve_induced_series(zero_source(g), pot, -1.0, 2)) == 0.0);

  ExchangeSource c{g, std::vector<double>(g.size(), 0.7), {}};
  const auto s2 = solve_induced_series(c, pot, -1.0, 2);
  for (double v : s2) CHECK(std::abs(v - 0.7 / 3.0) < 1e-9);

  CHECK_THROWS_AS(solve_induced_series(c, pot, -1.0, 3), Error);
  // U_eff - E changes sign inside the grid
  const auto coul = coulomb_potential(1.0, 0, g);
  try {
    solve_induced_series(c, coul, -0.5, 1);
    FAIL("expected a singular denominator");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::SingularDenominator);
    CHECK(std::string(e.what()).find("r = ") != std::string::npos);
  }
}

TEST_CASE("direct solve: zero source, manufactured solution and linearity") {
  Manufactured m;
  CHECK(max_abs(solve_induced_direct(zero_source(m.grid), m.pot, m.E)) == 0.0);

  ExchangeSource src{m.grid, m.K, {}};
  const auto xi = solve_induced_direct(src, m.pot, m.E);
  double err = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) err = std::max(err, std::abs(xi[i] - m.exact[i]));
  CHECK(err / max_abs(m.exact) < 1e-6);

  ExchangeSource a{m.grid, m.K, {}}, b{m.grid, {}, {}}, ab{m.grid, {}, {}};
  for (std::size_t i = 0; i < m.grid.size(); ++i) {
    const double r = m.grid.r(i);
    b.K.push_back(std::sin(r) * std::exp(-0.3 * r));
    ab.K.push_back(a.K[i] + b.K.back());
  }
  const auto xa = solve_induced_direct(a, m.pot, m.E);
  const auto xb = solve_induced_direct(b, m.pot, m.E);
  const auto xab = solve_induced_direct(ab, m.pot, m.E);
  double lin = 0.0;
  for (std::size_t i = 0; i < xab.size(); ++i) lin = std::max(lin, std::abs(xab[i] - xa[i] - xb[i]));
  CHECK(lin / max_abs(xab) < 1e-10);
}

TEST_CASE("direct solve: domain and conditioning errors") {
  Manufactured m;
  ExchangeSource src{m.grid, m.K, {}};
  try {
    solve_induced_direct(src, m.pot, 0.1);
    FAIL("expected a domain error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
  // E on the 1s level of the homogeneous problem
  try {
    solve_induced_direct(src, m.pot, -0.5);
    FAIL("expected a conditioning error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::Conditioning);
  }
}

TEST_CASE("node counting and composition") {
  const auto g = RadialGrid::uniform(0.1, 10.0, 1000);
  std::vector<double> s(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s[i] = std::sin(g.r(i));
  CHECK(count_nodes(g.r(), s, 0.1, 10.0) == 3);
  CHECK_THROWS_AS(count_nodes(g.r(), s, 1.0, 1.5), Error);

  const auto gg = test_grid();
  const auto s1 = hydrogenic_orbital(1.0, 1, 0, gg);
  CHECK(count_nodes(gg.r(), s1.xi, gg.r_min(), gg.r_max()) == 0);
  const auto same = compose_orbital(s1, std::vector<double>(gg.size(), 0.0));
  CHECK(same.xi == s1.xi);
  CHECK_FALSE(same.crossover.has_value());
  CHECK_THROWS_AS(compose_orbital(s1, std::vector<double>(3, 0.0)), Error);
}

TEST_CASE("local envelope") {
  const auto g = test_grid();
  const std::vector<double> c(g.size(), -2.5);
  for (double v : local_envelope(g.r(), c)) CHECK(v == 2.5);
}

TEST_CASE("heavy-atom model: tail law, nodes and crossover") {
  const TailModelConfig cfg;
  const auto res = run_tail_model(cfg);
  CHECK(res.energy == -1458.0);
  CHECK(res.turning_point == doctest::Approx(54.0 / 1458.0).epsilon(1e-4));
  REQUIRE(res.crossover.has_value());
  CHECK(*res.crossover > res.turning_point);
  CHECK(res.nodes_free == 0);
  CHECK(res.nodes_total >= res.nodes_free + 1);
  CHECK(res.tail_constant_spread < 0.02);

  const auto [lo, hi] = outer_decade(res);
  CHECK(hi / lo == doctest::Approx(10.0));
  std::vector<double> r, ratio, bare;
  for (std::size_t i = 0; i < res.grid.size(); ++i)
    if (res.grid.r(i) >= lo && res.grid.r(i) <= hi) {
      r.push_back(res.grid.r(i));
      ratio.push_back(res.direct[i] * r.back() * r.back() / res.source.xi[i]);
      bare.push_back(res.direct[i] / res.source.xi[i]);
    }
  CHECK(std::abs(tailfit::fit_plain_power(r, ratio).exponent) < 0.05);
  CHECK(std::abs(tailfit::fit_plain_power(r, bare).exponent + 2.0) < 0.05);

  // bare 1s: xi/r decays as e^{-Z r}
  std::vector<double> x, y;
  for (std::size_t i = 0; i < res.grid.size(); ++i)
    if (res.grid.r(i) > 2.0 / cfg.Z && res.grid.r(i) < 10.0 / cfg.Z) {
      x.push_back(res.grid.r(i));
      y.push_back(std::log(res.free.xi[i] / res.grid.r(i)));
    }
  const double slope = (y.back() - y.front()) / (x.back() - x.front());
  CHECK(slope == doctest::Approx(-cfg.Z).epsilon(1e-6));
}

TEST_CASE("series accuracy improves with binding energy") {
  double prev1 = 1e9, prev2 = 1e9;
  for (double Z : {20.0, 54.0, 90.0}) {
    TailModelConfig cfg;
    cfg.Z = Z;
    const auto res = run_tail_model(cfg);
    const auto acc = series_accuracy(res, cfg);
    MESSAGE("Z = " << Z << " order1 " << acc.order1 << " order2 " << acc.order2);
    CHECK(acc.order1 < 0.05);
    CHECK(acc.order1 < prev1);
    CHECK(acc.order2 < prev2);
    if (Z == 54.0) {
      CHECK(acc.order2 < 0.01);
      CHECK(acc.order1 < 0.01);
    }
    prev1 = acc.order1;
    prev2 = acc.order2;
  }
}

TEST_CASE("induced tail is insensitive to the outer boundary") {
  TailModelConfig near_cfg, far_cfg;
  far_cfg.rmax_factor = 2.0 * near_cfg.rmax_factor;
  // same log spacing on both grids
  const double r_min = 1e-6 / near_cfg.Z;
  const double outer = hydrogenic_mean_radius(near_cfg.source_Z, near_cfg.source_n, near_cfg.source_l);
  const double span_near = std::log(near_cfg.rmax_factor * outer / r_min);
  const double span_far = std::log(far_cfg.rmax_factor * outer / r_min);
  far_cfg.grid_points = std::size_t(std::lround((near_cfg.grid_points - 1) * span_far / span_near)) + 1;
  const auto a = run_tail_model(near_cfg);
  const auto b = run_tail_model(far_cfg);

  const auto env = local_envelope(a.grid.r(), a.direct);
  const double r0 = a.grid.r(a.window_begin);
  const double r_inner = r0 * std::pow(a.grid.r_max() / r0, 0.8);
  double worst = 0.0;
  std::size_t j = 0;
  for (std::size_t i = a.window_begin; i < a.grid.size() && a.grid.r(i) <= r_inner; ++i) {
    const double r = a.grid.r(i);
    while (b.grid.r(j + 1) < r) ++j;
    const double t = std::log(r / b.grid.r(j)) / std::log(b.grid.r(j + 1) / b.grid.r(j));
    const double vb = (1 - t) * b.direct[j] + t * b.direct[j + 1];
    worst = std::max(worst, std::abs(a.direct[i] - vb) / env[i]);
  }
  MESSAGE("largest change relative to the local envelope: " << worst);
  CHECK(worst < 1e-3);
}

TEST_CASE("screened potential") {
  const auto g = test_grid(10.0, 100.0);
  const auto pot = coulomb_potential(10.0, 0, g, 0.5);
  CHECK(pot.U.back() * g.r_max() == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(pot.U.front() * g.r_min() == doctest::Approx(-10.0).epsilon(1e-6));
  const auto p = coulomb_potential(1.0, 2, g);
  const auto u = p.ueff();
  CHECK(u[100] == doctest::Approx(p.U[100] + 3.0 / (g.r(100) * g.r(100))));
}
