// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [--known-red i,j,...]
// Exits 0 when every failing criterion is listed as known red (and every listed
// one actually fails), 1 otherwise.

#include "taillab/atom.hpp"
#include "taillab/crystal.hpp"
#include "taillab/kernels.hpp"
#include "taillab/scenario.hpp"
#include "taillab/tightbinding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace taillab;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::map<int, bool> results;

void report(int id, const std::string &title, bool pass, const std::string &detail) {
  results[id] = pass;
  std::printf("%s %2d %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Timed {
  scenario::ScenarioReport report;
  double seconds;
};

std::map<std::string, Timed> scenarios;

const scenario::ScenarioReport &run(const std::string &name) {
  auto it = scenarios.find(name);
  if (it == scenarios.end()) {
    const auto t0 = Clock::now();
    auto r = scenario::run_scenario(name, {".", 0, false});
    it = scenarios.emplace(name, Timed{std::move(r), seconds_since(t0)}).first;
  }
  return it->second.report;
}

const scenario::ClaimCheck &check(const std::string &scen, const std::string &name) {
  const auto &r = run(scen);
  for (const auto &c : r.checks)
    if (c.name == name) return c;
  std::fprintf(stderr, "scenario %s has no check %s\n", scen.c_str(), name.c_str());
  std::exit(1);
}

void exponent_law() {
  const double expected[] = {3.0, 3.5, 4.0};
  bool pass = true;
  std::string detail;
  for (int d = 1; d <= 3; ++d) {
    const std::string name = "crystal-" + std::to_string(d) + "d";
    const auto &c = check(name, "envelope_exponent");
    const double t = scenarios[name].seconds;
    const bool ok = std::abs(c.measured - expected[d - 1]) <= 0.1 && t < 60.0;
    pass = pass && ok;
    detail += fmt("%snu_%dd = %.4f (expect %.1f +- 0.1, %.1f s)", d > 1 ? "; " : "", d, c.measured,
                  expected[d - 1], t);
  }
  report(1, "envelope exponent (5+d)/2", pass, detail);
}

void wavevector() {
  bool pass = true;
  std::string detail;
  for (const std::string name : {"crystal-1d", "crystal-2d", "crystal-3d", "tb-partial"}) {
    const auto &c = check(name, "oscillation_wavevector");
    const double rel = std::abs(c.measured - c.claimed) / c.claimed;
    pass = pass && rel <= 0.02;
    detail += fmt("%s%s k = %.5f (claimed %.5f, rel %.1e)", detail.empty() ? "" : "; ", name.c_str(),
                  c.measured, c.claimed, rel);
  }
  report(2, "oscillation wavevector k_F and f pi / a within 2%", pass, detail);
}

void kernel_oracle() {
  const auto t0 = Clock::now();
  const double box[] = {200.0, 120.0, 60.0};
  const auto seps = crystal::linspace(1.0, 20.0, 20);
  bool pass = true;
  std::string detail;
  for (int d = 1; d <= 3; ++d) {
    const kernels::DiscreteBand band(d, box[d - 1], 1.0);
    const kernels::KernelSpec nominal{d, 1.0, kernels::Normalization::OracleNormalized};
    const kernels::KernelSpec effective{d, band.effective_k_f(), kernels::Normalization::OracleNormalized};
    double mean = 0.0, mean_eff = 0.0;
    for (double R : seps) {
      const double o = kernels::g_oracle(band, {R, 0.0, 0.0});
      mean += std::abs(o - kernels::g_closed(nominal, R)) / std::abs(kernels::g_closed(nominal, R));
      mean_eff += std::abs(o - kernels::g_closed(effective, R)) / std::abs(kernels::g_closed(effective, R));
    }
    mean /= double(seps.size());
    mean_eff /= double(seps.size());
    pass = pass && mean < 1e-3;
    detail += fmt("%sd=%d L=%g mean rel err %.3g (effective k_F %.3g)", d > 1 ? "; " : "", d,
                  box[d - 1], mean, mean_eff);
  }
  const double t = seconds_since(t0);
  pass = pass && t < 120.0;
  report(3, "plane-wave sum matches closed kernel to 1e-3", pass, detail + fmt(" (%.1f s)", t));
}

void tight_binding_exactness() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  bool zero_exact = true, filling_exact = true;
  for (long N = 1; N <= 64; ++N)
    for (long F = 0; F <= N; ++F) {
      const tb::BandSpec spec{N, F};
      filling_exact = filling_exact && tb::B_exact(spec, 0) == tb::cplx(double(F) / double(N), 0.0);
      for (long l = -(N - 1); l < N; ++l) {
        worst = std::max(worst, std::abs(tb::B_exact(spec, l) - tb::B_sum_oracle(spec, l)));
        if (F == N && l != 0) zero_exact = zero_exact && tb::B_exact(spec, l) == tb::cplx(0.0, 0.0);
      }
    }
  double sum_rule = 0.0;
  for (long N = 1; N <= 32; ++N)
    for (long F = 0; F <= N; ++F) {
      const tb::BandSpec spec{N, F};
      for (long m = 0; m < N; ++m) {
        tb::cplx s = 0.0;
        for (long l = 0; l < N; ++l)
          s += tb::B_exact(spec, l) * std::polar(1.0, -2.0 * M_PI * double((m * l) % N) / double(N));
        sum_rule = std::max(sum_rule, std::abs(s - (m < F ? 1.0 : 0.0)));
      }
    }
  const double t = seconds_since(t0);
  const bool pass = worst < 1e-12 && zero_exact && filling_exact && sum_rule < 1e-12 && t < 10.0;
  report(4, "tight-binding closed sum exactness", pass,
         fmt("max |closed - sum| = %.2e, B(0) = f exact: %s, complete band zero exact: %s, "
             "sum rule max err %.2e (%.2f s)",
             worst, filling_exact ? "yes" : "no", zero_exact ? "yes" : "no", sum_rule, t));
}

void complete_band() {
  const auto &ratio = check("tb-complete", "complete_band_ratio");
  const auto &mono = check("tb-thermal", "monotonic_in_T");
  const auto &act = check("tb-thermal", "activation_vs_cold");
  const bool pass = ratio.pass && mono.pass && act.pass;
  const auto &peaks = run("tb-thermal").details["max_abs_K"];
  std::ostringstream p;
  for (std::size_t i = 0; i < peaks.size(); ++i) p << (i ? ", " : "") << peaks[i].get<double>();
  report(5, "complete band cancels, temperature reactivates the tail", pass,
         fmt("complete/partial max|K| = %.2e (< 1e-10); max|K| at T = {1e-6, 0.05, 0.1, 0.2} t: %s; "
             "smallest successive ratio %.3g",
             ratio.measured, p.str().c_str(), mono.measured));
}

void atom_series() {
  const auto &o2 = check("atom-tail", "series_order2_deviation");
  const auto &o1 = check("atom-tail", "series_order1_deviation");
  const double t = scenarios["atom-tail"].seconds;
  report(6, "two-term inversion series within 1% of the direct solve", o2.pass && o1.pass && t < 30.0,
         fmt("order 2 beyond turning point %.3e, order 1 for r > 10/Z %.3e (< 1e-2, %.2f s)", o2.measured,
             o1.measured, t));
}

void atom_tail_law() {
  const auto &c = check("atom-tail", "tail_ratio_exponent");
  report(7, "induced tail follows xi_source / r^2", c.pass,
         fmt("slope of xi_ind r^2 / xi_source over the outer decade = %.4f (0 +- 0.05)", c.measured));
}

void extra_nodes() {
  const auto &c = check("atom-tail", "extra_nodes");
  const auto &s = run("atom-tail").details["summary"];
  report(8, "induced tail adds nodes to the 1s orbital", c.pass,
         fmt("bare 1s nodes %d, composed nodes %d, extra %g (>= 1)", s["nodes_free"].get<int>(),
             s["nodes_total"].get<int>(), c.measured));
}

void correlation() {
  const auto &s = check("corr-suppression", "suppression_at_1_bohr");
  const auto &e = check("corr-suppression", "extra_decay_power");
  const double rel = std::abs(s.measured - 4.0 / 2916.0) / (4.0 / 2916.0);
  report(9, "correlation suppression 4/Z^2 and one extra power of 1/r", rel <= 1e-6 && e.pass,
         fmt("suppression %.6e (4/2916 = %.6e, rel %.1e); extra decay power %.4f (1 +- 0.05)", s.measured,
             4.0 / 2916.0, rel, e.measured));
}

void manufactured_solution() {
  const auto grid = RadialGrid::log_uniform(1e-6, 40.0, 4000);
  const auto pot = atom::coulomb_potential(1.0, 0, grid);
  const auto u = pot.ueff();
  const double E = -0.8;
  std::vector<double> exact, K, K2, Ksum;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    exact.push_back(r * r * std::exp(-r));
    K.push_back(-0.5 * (2.0 - 4.0 * r + r * r) * std::exp(-r) + (u[i] - E) * exact.back());
    K2.push_back(std::sin(r) * std::exp(-0.3 * r));
    Ksum.push_back(K.back() + K2.back());
  }
  const auto xi = atom::solve_induced_direct({grid, K, {}}, pot, E);
  const auto x2 = atom::solve_induced_direct({grid, K2, {}}, pot, E);
  const auto xs = atom::solve_induced_direct({grid, Ksum, {}}, pot, E);
  double err = 0.0, scale = 0.0, lin = 0.0, lin_scale = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    err = std::max(err, std::abs(xi[i] - exact[i]));
    scale = std::max(scale, std::abs(exact[i]));
    lin = std::max(lin, std::abs(xs[i] - xi[i] - x2[i]));
    lin_scale = std::max(lin_scale, std::abs(xs[i]));
  }
  const bool pass = err / scale < 1e-6 && lin / lin_scale < 1e-10;
  report(10, "direct solver recovers a manufactured solution", pass,
         fmt("max-norm rel err %.2e (< 1e-6) on %zu points; linearity %.2e (< 1e-10)", err / scale,
             grid.size(), lin / lin_scale));
}

} // namespace

int main(int argc, char **argv) {
  std::set<int> known_red;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--known-red") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) known_red.insert(std::stoi(tok));
    } else {
      std::fprintf(stderr, "usage: acceptance [--known-red i,j,...]\n");
      return 2;
    }
  }
  try {
    exponent_law();
    wavevector();
    kernel_oracle();
    tight_binding_exactness();
    complete_band();
    atom_series();
    atom_tail_law();
    extra_nodes();
    correlation();
    manufactured_solution();
  } catch (const std::exception &e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 1;
  }
  int failed = 0, unexpected = 0;
  for (const auto &[id, pass] : results) {
    if (!pass) ++failed;
    if (pass == bool(known_red.count(id))) {
      ++unexpected;
      std::printf("unexpected: criterion %d %s\n", id, pass ? "passed but is listed as known red" : "failed");
    }
  }
  std::printf("%zu criteria, %d passed, %d failed (%zu listed as known red)\n", results.size(),
              int(results.size()) - failed, failed, known_red.size());
  return unexpected == 0 ? 0 : 1;
}
