#include "taillab/atom.hpp"
#include "taillab/correlation.hpp"
#include "taillab/crystal.hpp"
#include "taillab/error.hpp"
#include "taillab/io.hpp"
#include "taillab/kernels.hpp"
#include "taillab/numerics.hpp"
#include "taillab/scenario.hpp"
#include "taillab/tailfit.hpp"
#include "taillab/tightbinding.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace taillab;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct Globals {
  std::string out_dir = ".";
  unsigned threads = 0;
  bool quiet = false;

  fs::path resolve(const std::string &path) const {
    const fs::path p(path);
    return p.is_absolute() ? p : fs::path(out_dir) / p;
  }
  void say(const std::string &line) const {
    if (!quiet) std::printf("%s\n", line.c_str());
  }
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_pair_int(const std::string &text, const char *what) {
  int a = 0, b = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d,%d%c", &a, &b, &tail) != 2)
    throw UsageError(std::string(what) + " expects n,l (got '" + text + "')");
  return {a, b};
}

std::pair<double, double> parse_pair_double(const std::string &text, const char *what) {
  double a = 0, b = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf%c", &a, &b, &tail) != 2)
    throw UsageError(std::string(what) + " expects lo,hi (got '" + text + "')");
  return {a, b};
}

fs::path sidecar(const fs::path &csv) {
  auto p = csv;
  p.replace_extension(".json");
  return p;
}

std::string format(const char *fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// --------------------------------------------------------------------------

struct KernelArgs {
  int dim = 3;
  double kf = 1.0;
  double rmax = 20.0;
  int samples = 200;
  std::optional<double> oracle_L;
  std::string norm = "oracle";
  std::string out = "kernel.csv";
};

int run_kernel(const Globals &g, const KernelArgs &a) {
  if (a.samples < 2) throw UsageError("--samples must be >= 2");
  const kernels::KernelSpec spec{a.dim, a.kf,
                                 a.norm == "paper" ? kernels::Normalization::PaperForm
                                                   : kernels::Normalization::OracleNormalized};
  spec.validate();
  const auto R = crystal::linspace(0.0, a.rmax, std::size_t(a.samples));
  io::Table t;
  t.add_column("R", R);
  std::vector<double> closed(R.size());
  for (std::size_t i = 0; i < R.size(); ++i) closed[i] = kernels::g_closed(spec, R[i]);
  t.add_column("g_closed", closed);
  if (a.oracle_L) {
    const kernels::DiscreteBand band(a.dim, *a.oracle_L, a.kf);
    std::vector<double> oracle(R.size());
    numerics::parallel_for(R.size(), g.threads, [&](std::size_t i) {
      oracle[i] = kernels::g_oracle(band, {R[i], 0.0, 0.0});
    });
    t.add_column("g_oracle", oracle);
  }
  const auto path = g.resolve(a.out);
  io::write_csv(path, t);
  g.say("wrote " + path.string());
  return 0;
}

// --------------------------------------------------------------------------

struct AtomArgs {
  double Z = 54.0;
  std::string target = "1,0";
  std::string source = "5,1";
  double source_Z = 5.0;
  int kmax = 1;
  std::string method = "all";
  std::size_t grid_points = 4000;
  double rmax_factor = 40.0;
  std::optional<double> screening;
  std::string out = "atom.csv";
};

int run_atom(const Globals &g, const AtomArgs &a) {
  atom::TailModelConfig cfg;
  cfg.Z = a.Z;
  std::tie(cfg.target_n, cfg.target_l) = parse_pair_int(a.target, "--target");
  std::tie(cfg.source_n, cfg.source_l) = parse_pair_int(a.source, "--source");
  cfg.source_Z = a.source_Z;
  cfg.k_max = a.kmax;
  cfg.grid_points = a.grid_points;
  cfg.rmax_factor = a.rmax_factor;
  cfg.screening_radius = a.screening;
  cfg.run_series = a.method != "direct";
  cfg.run_direct = a.method == "direct" || a.method == "all";
  auto res = atom::run_tail_model(cfg);
  if (a.method == "series1" || a.method == "series2") {
    auto &drop = a.method == "series1" ? res.series2 : res.series1;
    drop.clear();
    const auto &keep = a.method == "series1" ? res.series1 : res.series2;
    const auto composed = atom::compose_orbital(res.free, keep);
    res.total = composed.xi;
    res.crossover = composed.crossover;
    res.nodes_total = atom::count_nodes(res.grid.r(), res.total, res.grid.r_min(), res.grid.r_max());
  }
  const auto path = g.resolve(a.out);
  io::write_csv(path, scenario::atom_table(res));
  auto summary = scenario::atom_summary(res);
  summary["method"] = a.method;
  io::write_json(sidecar(path), summary);
  g.say("wrote " + path.string() + " and " + sidecar(path).string());
  g.say("nodes " + std::to_string(res.nodes_free) + " -> " + std::to_string(res.nodes_total) +
        ", tail constant " + format("%.6e", res.tail_constant));
  return 0;
}

// --------------------------------------------------------------------------

struct CrystalArgs {
  int dim = 3;
  double kf = 1.0;
  double width = 1.0;
  double rmin_factor = 30.0;
  double rmax_factor = 300.0;
  int samples = 1000;
  std::string method = "both";
  std::string out = "crystal.csv";
};

io::Json try_fit(const std::vector<double> &r, const std::vector<double> &v) {
  try {
    return scenario::to_json(tailfit::fit_tail(r, v));
  } catch (const Error &e) {
    return {{"error", e.what()}};
  }
}

int run_crystal(const Globals &g, const CrystalArgs &a) {
  if (a.samples < 2) throw UsageError("--samples must be >= 2");
  const kernels::KernelSpec kernel{a.dim, a.kf, kernels::Normalization::OracleNormalized};
  kernel.validate();
  const auto rs = crystal::linspace(a.rmin_factor / a.kf, a.rmax_factor / a.kf, std::size_t(a.samples));
  const bool want_full = a.method != "dipole", want_dip = a.method != "full";
  std::vector<double> full(rs.size(), nan), dip(rs.size(), nan);
  if (a.dim == 1) {
    const auto psi = crystal::BoundOrbital1D::gaussian(a.width);
    const auto profile = crystal::tail_profile(psi, kernel, rs, g.threads);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (want_full) full[i] = profile[i].full;
      if (want_dip) dip[i] = profile[i].dipole;
    }
  } else {
    const crystal::BoundOrbitalND psi{a.dim, a.width};
    for (double r : rs)
      if (!(r > 10.0 * psi.extent())) throw Error(ErrorKind::Domain, "samples must lie beyond 10 * width");
    numerics::parallel_for(rs.size(), g.threads, [&](std::size_t i) {
      if (want_full) full[i] = crystal::exchange_full(psi, kernel, rs[i]);
      if (want_dip) dip[i] = crystal::exchange_dipole_numeric(psi, kernel, rs[i]);
    });
  }
  io::Table t;
  t.add_column("r", rs);
  t.add_column("K_full", full);
  t.add_column("K_dipole", dip);
  const auto path = g.resolve(a.out);
  io::write_csv(path, t);
  io::Json j{{"dimension", a.dim}, {"k_f", a.kf}, {"width", a.width}, {"method", a.method}};
  if (want_full) j["fit_full"] = try_fit(rs, full);
  if (want_dip) j["fit_dipole"] = try_fit(rs, dip);
  io::write_json(sidecar(path), j);
  g.say("wrote " + path.string() + " and " + sidecar(path).string());
  if (want_full && j["fit_full"].contains("nu"))
    g.say("nu = " + format("%.4f", j["fit_full"]["nu"].get<double>()) +
          ", k = " + format("%.5f", j["fit_full"]["k"].get<double>()));
  return 0;
}

// --------------------------------------------------------------------------

struct TbArgs {
  long N = 200;
  long F = 100;
  double a = 1.0;
  double thop = 1.0;
  double T = 0.0;
  std::optional<double> gap;
  long l_max = 50;
  bool profile = false;
  std::optional<double> onsite_width;
  double width = 1.0;
  std::optional<double> rmin, rmax;
  std::string out = "tb.csv";
};

int run_tb(const Globals &g, const TbArgs &a) {
  tb::BandSpec spec{a.N, a.F, a.a, a.thop, a.T, a.gap};
  spec.validate();
  const auto path = g.resolve(a.out);
  if (a.profile) {
    const auto psi = crystal::BoundOrbital1D::gaussian(a.width);
    const double onsite = a.onsite_width.value_or(a.a / 4.0);
    const double kf = spec.F > 0 ? crystal::fermi_momentum_for_filling(spec.filling(), spec.a) : 1.0;
    const double lo = a.rmin.value_or(psi.x.back() + 8.0 * onsite + 1e-9);
    const double hi = a.rmax.value_or(400.0 / kf);
    std::vector<double> rs;
    for (long j = long(std::ceil(lo / a.a)); double(j) * a.a <= hi; ++j) rs.push_back(double(j) * a.a);
    if (rs.empty()) throw UsageError("no lattice sites inside [rmin, rmax]");
    const auto K = tb::tb_exchange_profile(spec, onsite, psi, rs, g.threads);
    io::Table t;
    t.add_column("r", rs);
    std::vector<double> re(K.size()), im(K.size());
    for (std::size_t i = 0; i < K.size(); ++i) re[i] = K[i].real(), im[i] = K[i].imag();
    t.add_column("K_re", re);
    t.add_column("K_im", im);
    io::write_csv(path, t);
    g.say("wrote " + path.string());
    return 0;
  }
  if (a.l_max < 0) throw UsageError("--l-max must be >= 0");
  std::vector<double> l, ex_re, ex_im, as_re, as_im, th_re, th_im;
  const auto kernel = spec.T > 0.0 ? std::optional(tb::lattice_kernel(spec)) : std::nullopt;
  for (long q = 0; q <= a.l_max; ++q) {
    const auto e = tb::B_exact(spec, q);
    const auto s = q == 0 ? tb::cplx(spec.filling()) : tb::B_asymptotic(spec.filling(), q);
    l.push_back(double(q));
    ex_re.push_back(e.real()), ex_im.push_back(e.imag());
    as_re.push_back(s.real()), as_im.push_back(s.imag());
    if (kernel) {
      const auto th = kernel->at(q);
      th_re.push_back(th.real()), th_im.push_back(th.imag());
    }
  }
  io::Table t;
  t.add_column("l", l);
  t.add_column("Re_B_exact", ex_re);
  t.add_column("Im_B_exact", ex_im);
  t.add_column("Re_B_asym", as_re);
  t.add_column("Im_B_asym", as_im);
  if (kernel) {
    t.add_column("Re_B_thermal", th_re);
    t.add_column("Im_B_thermal", th_im);
  }
  io::write_csv(path, t);
  g.say("wrote " + path.string());
  return 0;
}

// --------------------------------------------------------------------------

struct CorrArgs {
  std::optional<double> Z;
  std::optional<double> Ei;
  std::string in;
  std::string col = "K";
  std::string out = "corr.csv";
};

int run_corr(const Globals &g, const CorrArgs &a) {
  if (a.Z.has_value() == a.Ei.has_value()) throw UsageError("give exactly one of --Z or --Ei");
  const double E = a.Ei ? *a.Ei : correlation::hydrogenic_1s_energy(*a.Z);
  const auto in = io::read_csv(a.in);
  const auto &r = in.column("r");
  const auto &K = in.column(a.col);
  const auto est = correlation::correlation_tail(r, K, E);
  io::Table t;
  t.add_column("r", r);
  t.add_column("K", K);
  t.add_column("C", est.C);
  t.add_column("suppression", est.suppression);
  const auto path = g.resolve(a.out);
  io::write_csv(path, t);
  g.say("wrote " + path.string());
  return 0;
}

// --------------------------------------------------------------------------

struct FitArgs {
  std::string in;
  std::string col;
  std::string rcol = "r";
  std::string window;
  std::string mode = "osc";
  std::string out = "fit.json";
};

int run_fit(const Globals &g, const FitArgs &a) {
  const auto table = io::read_csv(a.in);
  const auto &r = table.column(a.rcol);
  const auto &v = table.column(a.col);
  std::optional<tailfit::Window> window;
  if (!a.window.empty()) window = parse_pair_double(a.window, "--window");
  io::Json j;
  if (a.mode == "osc") {
    const auto fit = tailfit::fit_tail(r, v, window);
    j = scenario::to_json(fit);
    g.say("nu = " + format("%.6f", fit.nu) + ", k = " + format("%.6f", fit.k));
  } else {
    const auto fit = tailfit::fit_plain_power(r, v, window);
    j = scenario::to_json(fit);
    g.say("exponent = " + format("%.6f", fit.exponent) +
          (fit.power_law ? "" : " (halves disagree: not a power law)"));
  }
  const auto path = g.resolve(a.out);
  io::write_json(path, j);
  g.say("wrote " + path.string());
  return 0;
}

// --------------------------------------------------------------------------

int run_scenarios(const Globals &g, const std::string &name) {
  std::vector<std::string> names;
  if (name == "all") names = scenario::scenario_names();
  else names.push_back(name);
  for (const auto &n : names) {
    const auto &known = scenario::scenario_names();
    if (std::find(known.begin(), known.end(), n) == known.end())
      throw UsageError("unknown scenario '" + n + "'");
  }
  scenario::ScenarioOptions opts;
  opts.out_dir = g.out_dir;
  opts.threads = g.threads;
  bool all_pass = true;
  for (const auto &n : names) {
    const auto report = scenario::run_scenario(n, opts);
    all_pass = all_pass && report.pass;
    g.say(std::string(report.pass ? "PASS " : "FAIL ") + n + format(" (%.1f s)", report.runtime_seconds));
    for (const auto &c : report.checks) {
      char line[256];
      std::snprintf(line, sizeof line, "  %s %-28s measured %.6g, claimed %.6g (%s, tol %.3g)",
                    c.pass ? "ok  " : "FAIL", c.name.c_str(), c.measured, c.claimed,
                    scenario::to_string(c.kind), c.tolerance);
      g.say(line);
    }
  }
  return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"taillab: exchange-induced power-law tails of localized orbitals"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; flags given on the command line win");
  Globals g;
  app.add_option("--out-dir", g.out_dir, "directory for relative output paths");
  app.add_option("--threads", g.threads, "worker threads for sample sweeps (0 = auto)");
  app.add_flag("--quiet", g.quiet, "suppress progress output");

  KernelArgs ka;
  auto *kernel = app.add_subcommand("kernel", "density-matrix kernel g(R), closed form and plane-wave sum");
  kernel->add_option("--dim", ka.dim)->check(CLI::IsMember({1, 2, 3}));
  kernel->add_option("--kf", ka.kf);
  kernel->add_option("--rmax", ka.rmax);
  kernel->add_option("--samples", ka.samples);
  kernel->add_option("--oracle-L", ka.oracle_L, "box length of the plane-wave sum");
  kernel->add_option("--norm", ka.norm)->check(CLI::IsMember({"paper", "oracle"}));
  kernel->add_option("--out", ka.out);

  AtomArgs aa;
  auto *atom_cmd = app.add_subcommand("atom", "induced tail of an inner orbital");
  atom_cmd->add_option("--Z", aa.Z);
  atom_cmd->add_option("--target", aa.target, "n,l of the target orbital");
  atom_cmd->add_option("--source", aa.source, "n,l of the occupied source orbital");
  atom_cmd->add_option("--source-Z", aa.source_Z, "effective charge of the source orbital");
  atom_cmd->add_option("--kmax", aa.kmax);
  atom_cmd->add_option("--method", aa.method)->check(CLI::IsMember({"series1", "series2", "direct", "all"}));
  atom_cmd->add_option("--grid-points", aa.grid_points);
  atom_cmd->add_option("--rmax-factor", aa.rmax_factor);
  atom_cmd->add_option("--screening", aa.screening, "screening radius of Z(r)");
  atom_cmd->add_option("--out", aa.out);

  CrystalArgs ca;
  auto *crystal_cmd = app.add_subcommand("crystal", "exchange tail of a bound orbital in a free-electron band");
  crystal_cmd->add_option("--dim", ca.dim)->check(CLI::IsMember({1, 2, 3}));
  crystal_cmd->add_option("--kf", ca.kf);
  crystal_cmd->add_option("--width", ca.width);
  crystal_cmd->add_option("--rmin-factor", ca.rmin_factor, "first sample in units of 1/k_f");
  crystal_cmd->add_option("--rmax-factor", ca.rmax_factor, "last sample in units of 1/k_f");
  crystal_cmd->add_option("--samples", ca.samples);
  crystal_cmd->add_option("--method", ca.method)->check(CLI::IsMember({"full", "dipole", "both"}));
  crystal_cmd->add_option("--out", ca.out);

  TbArgs ta;
  auto *tb_cmd = app.add_subcommand("tb", "tight-binding kernel coefficients or exchange profile");
  tb_cmd->add_option("--N", ta.N);
  tb_cmd->add_option("--F", ta.F);
  tb_cmd->add_option("--a", ta.a);
  tb_cmd->add_option("--thop", ta.thop);
  tb_cmd->add_option("--T", ta.T);
  tb_cmd->add_option("--gap", ta.gap, "gap to the mirrored empty band (default thop)");
  tb_cmd->add_option("--l-max", ta.l_max);
  tb_cmd->add_flag("--profile", ta.profile, "emit K(r) at the lattice sites instead of B(l)");
  tb_cmd->add_option("--onsite-width", ta.onsite_width, "one-site orbital width (default a/4)");
  tb_cmd->add_option("--width", ta.width, "bound orbital width");
  tb_cmd->add_option("--rmin", ta.rmin);
  tb_cmd->add_option("--rmax", ta.rmax);
  tb_cmd->add_option("--out", ta.out);

  CorrArgs co;
  auto *corr_cmd = app.add_subcommand("corr", "asymptotic exchange-correlation estimate");
  corr_cmd->add_option("--Z", co.Z, "sets E_i = -Z^2/2");
  corr_cmd->add_option("--Ei", co.Ei, "orbital energy in Hartree");
  corr_cmd->add_option("--in", co.in, "CSV with columns r and K")->required();
  corr_cmd->add_option("--col", co.col, "column holding K");
  corr_cmd->add_option("--out", co.out);

  FitArgs fa;
  auto *fit_cmd = app.add_subcommand("fit", "fit a sampled tail");
  fit_cmd->add_option("--in", fa.in)->required();
  fit_cmd->add_option("--col", fa.col)->required();
  fit_cmd->add_option("--rcol", fa.rcol, "column holding r");
  fit_cmd->add_option("--window", fa.window, "lo,hi");
  fit_cmd->add_option("--mode", fa.mode)->check(CLI::IsMember({"osc", "power"}));
  fit_cmd->add_option("--out", fa.out);

  std::string scenario_name;
  auto *scen_cmd = app.add_subcommand("scenario", "run a preset and check its claims");
  scen_cmd->add_option("name", scenario_name, "scenario name or 'all'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*kernel) return run_kernel(g, ka);
    if (*atom_cmd) return run_atom(g, aa);
    if (*crystal_cmd) return run_crystal(g, ca);
    if (*tb_cmd) return run_tb(g, ta);
    if (*corr_cmd) return run_corr(g, co);
    if (*fit_cmd) return run_fit(g, fa);
    if (*scen_cmd) return run_scenarios(g, scenario_name);
  } catch (const UsageError &e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const Error &e) {
    std::fprintf(stderr, "%s\n", e.what());
    return e.kind() == ErrorKind::InvalidArgument ? 2 : 1;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
