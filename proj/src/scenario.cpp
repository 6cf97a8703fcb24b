#include "taillab/scenario.hpp"

#include "taillab/correlation.hpp"
#include "taillab/crystal.hpp"
#include "taillab/error.hpp"
#include "taillab/tightbinding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace taillab::scenario {

namespace {

using std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct Context {
  const ScenarioOptions &options;
  ScenarioReport &report;

  void csv(const std::string &file, const io::Table &table) {
    if (options.write_artifacts) io::write_csv(options.out_dir / file, table);
    report.artifacts.push_back(file);
  }
};

std::vector<double> site_positions(double a, double lo, double hi) {
  std::vector<double> out;
  for (long j = long(std::ceil(lo / a)); double(j) * a <= hi; ++j)
    if (double(j) * a >= lo) out.push_back(double(j) * a);
  return out;
}

double max_abs(const std::vector<tb::cplx> &v) {
  double m = 0.0;
  for (const auto &z : v) m = std::max(m, std::abs(z));
  return m;
}

std::vector<double> real_parts(const std::vector<tb::cplx> &v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
  return out;
}

io::Table complex_table(const std::vector<double> &r, const std::vector<tb::cplx> &K) {
  io::Table t;
  t.add_column("r", r);
  t.add_column("K_re", real_parts(K));
  std::vector<double> im(K.size());
  for (std::size_t i = 0; i < K.size(); ++i) im[i] = K[i].imag();
  t.add_column("K_im", im);
  return t;
}

// ---------------------------------------------------------------------------

void atom_tail(Context &ctx) {
  const atom::TailModelConfig cfg;
  const auto res = atom::run_tail_model(cfg);
  const auto acc = atom::series_accuracy(res, cfg);
  const auto [lo, hi] = atom::outer_decade(res);

  std::vector<double> ratio_r, ratio;
  for (std::size_t i = 0; i < res.grid.size(); ++i) {
    const double r = res.grid.r(i);
    if (r < lo || r > hi || res.source.xi[i] == 0.0) continue;
    ratio_r.push_back(r);
    ratio.push_back(res.direct[i] * r * r / res.source.xi[i]);
  }
  const auto power = tailfit::fit_plain_power(ratio_r, ratio);

  // log-slope of the bare orbital xi/r over a few 1/Z
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t i = 0; i < res.grid.size(); ++i) {
    const double r = res.grid.r(i);
    if (r < 2.0 / cfg.Z || r > 10.0 / cfg.Z) continue;
    const double y = std::log(res.free.xi[i] / r);
    sx += r, sy += y, sxx += r * r, sxy += r * y, n += 1;
  }
  const double log_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  auto &c = ctx.report.checks;
  c.push_back(make_check("series_order2_deviation",
                         "two inversion-series terms reproduce the induced tail to about 1% beyond "
                         "the turning point",
                         CheckKind::Below, 0.01, acc.order2));
  c.push_back(make_check("series_order1_deviation",
                         "one inversion-series term suffices beyond 10/Z", CheckKind::Below, 0.01,
                         acc.order1));
  c.push_back(make_check("tail_ratio_exponent",
                         "induced tail follows const * xi_source / r^2 (slope of the ratio is 0)",
                         CheckKind::Within, 0.0, power.exponent, 0.05));
  c.push_back(make_check("extra_nodes", "the induced tail adds nodes to the nodeless 1s orbital",
                         CheckKind::AtLeast, 1.0, double(res.nodes_total - res.nodes_free)));
  c.push_back(make_check("free_log_slope", "bare 1s decays with range 1/Z (log-slope -Z)",
                         CheckKind::Within, -cfg.Z, log_slope, 0.01 * cfg.Z));

  auto &d = ctx.report.details;
  d["model"] = {{"Z", cfg.Z},
                {"target", res.free.label},
                {"source", res.source.label},
                {"grid_points", cfg.grid_points},
                {"rmax_factor", cfg.rmax_factor}};
  d["summary"] = atom_summary(res);
  d["series_windows"] = {{"order1_from", acc.order1_from},
                         {"order2_from", acc.order2_from},
                         {"to", acc.to}};
  d["tail_ratio_fit"] = to_json(power);
  ctx.csv("atom-tail.csv", atom_table(res));
}

void crystal(Context &ctx, int dim) {
  const kernels::KernelSpec kernel{dim, 1.0, kernels::Normalization::OracleNormalized};
  const double width = 1.0;
  const std::size_t samples = dim == 1 ? 2000 : 1000;
  const auto rs = crystal::linspace(30.0, 300.0, samples);
  std::vector<crystal::TailSample> profile;
  const crystal::BoundOrbital1D psi1 = crystal::BoundOrbital1D::gaussian(width);
  const crystal::BoundOrbitalND psin{dim, width};
  if (dim == 1)
    profile = crystal::tail_profile(psi1, kernel, rs, ctx.options.threads);
  else
    profile = crystal::tail_profile(psin, kernel, rs, {}, ctx.options.threads);

  std::vector<double> full(samples), dip(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    full[i] = profile[i].full;
    dip[i] = profile[i].dipole;
  }
  const auto fit = tailfit::fit_tail(rs, full);
  const auto fit_dip = tailfit::fit_tail(rs, dip);
  const double nu = (5.0 + dim) / 2.0;

  auto &c = ctx.report.checks;
  c.push_back(make_check("envelope_exponent",
                         "exchange tail decays as cos(k_f r) r^-(5+d)/2", CheckKind::Within, nu,
                         fit.nu, 0.1));
  c.push_back(make_check("oscillation_wavevector", "exchange tail oscillates at k_f",
                         CheckKind::Within, kernel.k_f, fit.k, 0.02 * kernel.k_f));
  if (dim == 1) {
    const double r0 = 50.0 * psi1.extent;
    const double full0 = crystal::exchange_full(psi1, kernel, r0);
    const double dip0 = crystal::exchange_dipole(psi1, kernel.k_f, r0);
    double env = 0.0;
    for (double r : crystal::linspace(r0 - pi / kernel.k_f, r0 + pi / kernel.k_f, 129))
      env = std::max(env, std::abs(crystal::exchange_full(psi1, kernel, r)));
    c.push_back(make_check("dipole_vs_full",
                           "dipole form matches the full integral at r = 50 extent",
                           CheckKind::Below, 0.05, std::abs(dip0 - full0) / env));
  }

  auto &d = ctx.report.details;
  d["model"] = {{"dimension", dim}, {"k_f", kernel.k_f}, {"width", width}, {"samples", samples}};
  d["fit_full"] = to_json(fit);
  d["fit_dipole"] = to_json(fit_dip);
  io::Table t;
  t.add_column("r", rs);
  t.add_column("K_full", full);
  t.add_column("K_dipole", dip);
  ctx.csv("crystal-" + std::to_string(dim) + "d.csv", t);
}

// Shared tight-binding preset: half filling, k_F = 1, one-site width a/4.
struct TbPreset {
  tb::BandSpec spec{1202, 601, pi / 2.0, 1.0, 0.0, std::nullopt};
  crystal::BoundOrbital1D psi = crystal::BoundOrbital1D::gaussian(1.0);
  double onsite() const { return spec.a / 4.0; }
  double k_f() const { return crystal::fermi_momentum_for_filling(spec.filling(), spec.a); }
  std::vector<double> window() const { return site_positions(spec.a, 30.0 / k_f(), 400.0 / k_f()); }
};

void tb_partial(Context &ctx) {
  const TbPreset p;
  const auto rs = p.window();
  const auto K = tb::tb_exchange_profile(p.spec, p.onsite(), p.psi, rs, ctx.options.threads);
  const auto fit = tailfit::fit_tail(rs, real_parts(K));
  auto &c = ctx.report.checks;
  c.push_back(make_check("envelope_exponent",
                         "tight-binding exchange tail decays as r^-3 in one dimension",
                         CheckKind::Within, 3.0, fit.nu, 0.15));
  c.push_back(make_check("oscillation_wavevector", "tight-binding tail oscillates at k_F = f pi / a",
                         CheckKind::Within, p.k_f(), fit.k, 0.02 * p.k_f()));
  auto &d = ctx.report.details;
  d["band"] = {{"N", p.spec.N}, {"F", p.spec.F}, {"a", p.spec.a}, {"onsite_width", p.onsite()}};
  d["fit"] = to_json(fit);
  d["max_abs_imag"] = [&] {
    double m = 0.0;
    for (const auto &z : K) m = std::max(m, std::abs(z.imag()));
    return m;
  }();
  ctx.csv("tb-partial.csv", complex_table(rs, K));
}

void tb_complete(Context &ctx) {
  TbPreset p;
  const auto rs = p.window();
  const auto partial = tb::tb_exchange_profile(p.spec, p.onsite(), p.psi, rs, ctx.options.threads);
  auto full_spec = p.spec;
  full_spec.F = full_spec.N;
  const auto complete = tb::tb_exchange_profile(full_spec, p.onsite(), p.psi, rs, ctx.options.threads);
  const double ratio = max_abs(complete) / max_abs(partial);
  ctx.report.checks.push_back(make_check(
      "complete_band_ratio", "the long-range exchange term vanishes for a complete band",
      CheckKind::Below, 1e-10, ratio));
  ctx.report.details["max_abs_partial"] = max_abs(partial);
  ctx.report.details["max_abs_complete"] = max_abs(complete);
  ctx.csv("tb-complete.csv", complex_table(rs, complete));
}

void tb_thermal(Context &ctx) {
  TbPreset p;
  p.spec.F = p.spec.N;
  // whole profile from just outside the bound-orbital support
  const double start = p.psi.x.back() + 8.0 * p.onsite();
  const auto rs = site_positions(p.spec.a, start + 1e-9, 400.0 / p.k_f());
  const double temps[] = {1e-6, 0.05, 0.1, 0.2};
  std::vector<double> peak, peak_far;
  io::Table t;
  t.add_column("r", rs);
  for (double T : temps) {
    auto spec = p.spec;
    spec.T = T * spec.t_hop;
    const auto K = tb::tb_exchange_profile(spec, p.onsite(), p.psi, rs, ctx.options.threads);
    peak.push_back(max_abs(K));
    double far = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (rs[i] >= 30.0 / p.k_f()) far = std::max(far, std::abs(K[i]));
    peak_far.push_back(far);
    char name[32];
    std::snprintf(name, sizeof name, "K_re_T%g", T);
    t.add_column(name, real_parts(K));
  }
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 2; i < peak.size(); ++i) step = std::min(step, peak[i] / peak[i - 1]);
  auto &c = ctx.report.checks;
  c.push_back(make_check("activation_vs_cold",
                         "thermal carriers reactivate the tail of a complete band "
                         "(max|K| at T = 0.1 t over T = 1e-6 t)",
                         CheckKind::Above, 1.0, peak[2] / peak[0]));
  c.push_back(make_check("monotonic_in_T",
                         "max|K| grows with T over T = 0.05, 0.1, 0.2 t (smallest ratio of "
                         "successive maxima)",
                         CheckKind::Above, 1.0, step));
  auto &d = ctx.report.details;
  d["temperatures_over_t"] = temps;
  d["max_abs_K"] = peak;
  d["max_abs_K_beyond_30_over_kf"] = peak_far;
  d["r_range"] = {rs.front(), rs.back()};
  ctx.csv("tb-thermal.csv", t);
}

void corr_suppression(Context &ctx) {
  const double Z = 54.0;
  const double E = correlation::hydrogenic_1s_energy(Z);
  const double at_one = correlation::suppression_factor(1.0, E);
  const double claimed = 4.0 / (Z * Z);

  atom::TailModelConfig cfg;
  cfg.Z = Z;
  cfg.run_series = false;
  const auto res = atom::run_tail_model(cfg);
  const auto [lo, hi] = atom::outer_decade(res);
  std::vector<double> r, K;
  for (std::size_t i = 0; i < res.grid.size(); ++i)
    if (res.grid.r(i) >= lo && res.grid.r(i) <= hi) {
      r.push_back(res.grid.r(i));
      K.push_back(res.exchange.K[i]);
    }
  const auto est = correlation::correlation_tail(r, K, E);
  const auto fit_K = tailfit::fit_plain_power(r, K);
  const auto fit_C = tailfit::fit_plain_power(r, est.C);
  const double extra = fit_K.exponent - fit_C.exponent;
  const double shallow = correlation::suppression_factor(1.0, E / 10.0) / at_one;

  auto &c = ctx.report.checks;
  c.push_back(make_check("suppression_at_1_bohr", "correlation suppression factor 4/Z^2 at r = 1",
                         CheckKind::Within, claimed, at_one, 1e-6 * claimed));
  c.push_back(make_check("extra_decay_power", "correlation tail decays one power of r faster",
                         CheckKind::Within, 1.0, extra, 0.05));
  c.push_back(make_check("shallow_orbital_enhancement",
                         "a tenfold shallower orbital has tenfold larger suppression ratio",
                         CheckKind::Within, 10.0, shallow, 1e-9));
  auto &d = ctx.report.details;
  d["E_i"] = E;
  d["fit_K"] = to_json(fit_K);
  d["fit_C"] = to_json(fit_C);
  io::Table t;
  t.add_column("r", r);
  t.add_column("K", K);
  t.add_column("C", est.C);
  t.add_column("suppression", est.suppression);
  ctx.csv("corr-suppression.csv", t);
}

} // namespace

const char *to_string(CheckKind kind) {
  switch (kind) {
  case CheckKind::Within: return "within";
  case CheckKind::AtLeast: return "at_least";
  case CheckKind::Above: return "above";
  case CheckKind::Below: return "below";
  }
  return "?";
}

ClaimCheck make_check(std::string name, std::string claim, CheckKind kind, double claimed,
                      double measured, double tolerance) {
  ClaimCheck c{std::move(name), std::move(claim), kind, claimed, measured, tolerance, false};
  switch (kind) {
  case CheckKind::Within: c.pass = std::abs(measured - claimed) <= tolerance; break;
  case CheckKind::AtLeast: c.pass = measured >= claimed; break;
  case CheckKind::Above: c.pass = measured > claimed; break;
  case CheckKind::Below: c.pass = measured < claimed; break;
  }
  return c;
}

const std::vector<std::string> &scenario_names() {
  static const std::vector<std::string> names{"atom-tail",  "crystal-1d",  "crystal-2d",
                                              "crystal-3d", "tb-partial",  "tb-complete",
                                              "tb-thermal", "corr-suppression"};
  return names;
}

ScenarioReport run_scenario(const std::string &name, const ScenarioOptions &options) {
  const auto &names = scenario_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw Error(ErrorKind::InvalidArgument, "unknown scenario '" + name + "'");
  ScenarioReport report;
  report.scenario = name;
  Context ctx{options, report};
  const auto t0 = std::chrono::steady_clock::now();
  if (name == "atom-tail") atom_tail(ctx);
  else if (name == "crystal-1d") crystal(ctx, 1);
  else if (name == "crystal-2d") crystal(ctx, 2);
  else if (name == "crystal-3d") crystal(ctx, 3);
  else if (name == "tb-partial") tb_partial(ctx);
  else if (name == "tb-complete") tb_complete(ctx);
  else if (name == "tb-thermal") tb_thermal(ctx);
  else corr_suppression(ctx);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const ClaimCheck &c) { return c.pass; });
  report.artifacts.push_back(name + ".json");
  if (options.write_artifacts) io::write_json(options.out_dir / (name + ".json"), to_json(report));
  return report;
}

io::Json to_json(const ScenarioReport &report) {
  io::Json j;
  j["scenario"] = report.scenario;
  j["pass"] = report.pass;
  j["checks"] = io::Json::array();
  for (const auto &c : report.checks)
    j["checks"].push_back({{"name", c.name},
                           {"claim", c.claim},
                           {"kind", to_string(c.kind)},
                           {"claimed", c.claimed},
                           {"measured", c.measured},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass}});
  j["details"] = report.details;
  j["artifacts"] = report.artifacts;
  return j;
}

io::Table atom_table(const atom::TailModelResult &res) {
  const std::size_t n = res.grid.size();
  auto or_nan = [n](const std::vector<double> &v) {
    return v.empty() ? std::vector<double>(n, nan) : v;
  };
  io::Table t;
  t.add_column("r", {res.grid.r().begin(), res.grid.r().end()});
  t.add_column("xi_free", res.free.xi);
  t.add_column("K", res.exchange.K);
  t.add_column("xi_ind_series1", or_nan(res.series1));
  t.add_column("xi_ind_series2", or_nan(res.series2));
  t.add_column("xi_ind_direct", or_nan(res.direct));
  t.add_column("xi_total", res.total);
  return t;
}

io::Json atom_summary(const atom::TailModelResult &res) {
  io::Json j;
  j["energy"] = res.energy;
  j["turning_point"] = res.turning_point;
  j["nodes_free"] = res.nodes_free;
  j["nodes_total"] = res.nodes_total;
  j["crossover_radius"] = res.crossover ? io::Json(*res.crossover) : io::Json(nullptr);
  j["tail_constant"] = res.tail_constant;
  j["tail_constant_spread"] = res.tail_constant_spread;
  const auto [lo, hi] = atom::outer_decade(res);
  j["outer_decade"] = {lo, hi};
  j["terms"] = io::Json::array();
  for (const auto &t : res.exchange.terms)
    j["terms"].push_back(
        {{"orbital", t.label}, {"k", t.k}, {"coefficient", t.coefficient}, {"moment", t.moment}});
  return j;
}

io::Json to_json(const tailfit::TailFit &fit) {
  return {{"nu", fit.nu},
          {"k", fit.k},
          {"amplitude", fit.amplitude},
          {"phase", fit.phase},
          {"residual", fit.residual},
          {"r_lo", fit.r_lo},
          {"r_hi", fit.r_hi},
          {"n_extrema_used", fit.n_extrema_used},
          {"refined", fit.refined}};
}

io::Json to_json(const tailfit::PowerFit &fit) {
  return {{"exponent", fit.exponent},
          {"exponent_lo", fit.exponent_lo},
          {"exponent_hi", fit.exponent_hi},
          {"residual", fit.residual},
          {"power_law", fit.power_law}};
}

} // namespace taillab::scenario
