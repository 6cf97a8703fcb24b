#include "taillab/atom.hpp"

#include "taillab/error.hpp"

#include <algorithm>
#include <cmath>
#include <lapacke.h>
#include <sstream>

namespace taillab::atom {

namespace {

void require_same_grid(const RadialGrid &a, const RadialGrid &b, const char *what) {
  if (!(a == b)) throw Error(ErrorKind::GridMismatch, what);
}

std::string radius_string(double r) {
  std::ostringstream os;
  os.precision(6);
  os << r;
  return os.str();
}

// Reciprocal condition numbers below this are treated as a homogeneous
// eigenvalue sitting on E.
constexpr double min_rcond = 1e-13;

} // namespace

std::vector<double> EffectivePotential::ueff() const {
  std::vector<double> out(U.size());
  const double c = 0.5 * double(l * (l + 1));
  for (std::size_t i = 0; i < U.size(); ++i) {
    const double r = grid.r(i);
    out[i] = U[i] + c / (r * r);
  }
  return out;
}

RadialGrid default_grid(double Z, double outer_radius, std::size_t points, double rmax_factor) {
  if (!(Z > 0.0) || !(outer_radius > 0.0))
    throw Error(ErrorKind::InvalidArgument, "default grid needs Z > 0 and a positive outer radius");
  return RadialGrid::log_uniform(1e-6 / Z, rmax_factor * outer_radius, points);
}

double hydrogenic_mean_radius(double Z, int n, int l) {
  return (3.0 * n * n - double(l * (l + 1))) / (2.0 * Z);
}

Orbital hydrogenic_orbital(double Z, int n, int l, const RadialGrid &grid) {
  if (!(Z > 0.0)) throw Error(ErrorKind::InvalidArgument, "effective charge must be positive");
  if (l < 0 || n < l + 1)
    throw Error(ErrorKind::InvalidArgument, "hydrogenic orbital needs n >= l + 1 and l >= 0");
  const double extent = 5.0 * n * n / Z;
  const auto inside = std::count_if(grid.r().begin(), grid.r().end(),
                                    [&](double r) { return r < extent; });
  if (inside < 20)
    throw Error(ErrorKind::Resolution, "fewer than 20 grid points inside r < 5 n^2/Z = " +
                                           radius_string(extent));

  const int nr = n - l - 1;
  const double log_norm = 0.5 * (3.0 * std::log(2.0 * Z / n) + std::lgamma(nr + 1.0) -
                                 std::log(2.0 * n) - std::lgamma(n + l + 1.0));
  Orbital orb{grid, std::vector<double>(grid.size()), n, l, -Z * Z / (2.0 * n * n), {}, true};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    const double rho = 2.0 * Z * r / n;
    const double lag = std::assoc_laguerre(unsigned(nr), unsigned(2 * l + 1), rho);
    orb.xi[i] = r * std::exp(log_norm - 0.5 * rho + l * std::log(rho)) * lag;
  }
  static constexpr const char *letters = "spdfghik";
  std::ostringstream label;
  label << n << (l < 8 ? letters[l] : '?') << "(Z=" << Z << ")";
  orb.label = label.str();
  return orb;
}

EffectivePotential coulomb_potential(double Z, int l, const RadialGrid &grid,
                                     std::optional<double> screening_radius) {
  EffectivePotential pot{grid, std::vector<double>(grid.size()), l};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    const double z = screening_radius ? 1.0 + (Z - 1.0) * std::exp(-r / *screening_radius) : Z;
    pot.U[i] = -z / r;
  }
  return pot;
}

double three_j_zero(int l1, int l2, int l3) {
  const int L = l1 + l2 + l3;
  if (L % 2 != 0) return 0.0;
  if (l3 > l1 + l2 || l3 < std::abs(l1 - l2)) return 0.0;
  const int g = L / 2;
  const double log_val = 0.5 * (std::lgamma(L - 2 * l1 + 1.0) + std::lgamma(L - 2 * l2 + 1.0) +
                                std::lgamma(L - 2 * l3 + 1.0) - std::lgamma(L + 2.0)) +
                         std::lgamma(g + 1.0) - std::lgamma(g - l1 + 1.0) -
                         std::lgamma(g - l2 + 1.0) - std::lgamma(g - l3 + 1.0);
  return (g % 2 == 0 ? 1.0 : -1.0) * std::exp(log_val);
}

double standard_coefficient(int l_target, int l_occupied, int k, double occupancy) {
  const double tj = three_j_zero(l_target, k, l_occupied);
  const double reduced_sq = (2.0 * l_target + 1.0) * (2.0 * l_occupied + 1.0) * tj * tj;
  return occupancy * reduced_sq / (2.0 * l_target + 1.0);
}

double moment_b(const Orbital &n_orbital, const Orbital &i_orbital, int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "multipolarity must be >= 0");
  require_same_grid(n_orbital.grid, i_orbital.grid, "moment_b: orbitals live on different grids");
  const auto &grid = n_orbital.grid;
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = std::pow(grid.r(i), k) * n_orbital.xi[i] * i_orbital.xi[i];
  return grid.integrate(f);
}

ExchangeSource exchange_source(const Orbital &target, std::span<const OccupiedShell> occupied,
                               int k_max, const CoefficientRule &rule) {
  if (k_max < 1) throw Error(ErrorKind::InvalidArgument, "k_max must be >= 1");
  const auto &grid = target.grid;
  ExchangeSource src{grid, std::vector<double>(grid.size(), 0.0), {}};
  for (const auto &shell : occupied) {
    require_same_grid(grid, shell.orbital.grid, "exchange_source: occupied orbital on another grid");
    for (int k = 1; k <= k_max; ++k) {
      const double c = rule ? rule(target, shell, k)
                            : standard_coefficient(target.l, shell.orbital.l, k, shell.occupancy);
      if (c == 0.0) continue;
      const double b = moment_b(shell.orbital, target, k);
      src.terms.push_back({shell.orbital.label, k, c, b});
      for (std::size_t i = 0; i < grid.size(); ++i)
        src.K[i] += c * b * shell.orbital.xi[i] / std::pow(grid.r(i), k + 1);
    }
  }
  return src;
}

std::optional<double> turning_point(const EffectivePotential &potential, double energy) {
  const auto ueff = potential.ueff();
  for (std::size_t i = ueff.size() - 1; i > 0; --i) {
    const double a = ueff[i - 1] - energy, b = ueff[i] - energy;
    if ((a < 0.0) != (b < 0.0)) {
      // linear interpolation of the zero between the two samples
      const double ra = potential.grid.r(i - 1), rb = potential.grid.r(i);
      return ra + (rb - ra) * a / (a - b);
    }
  }
  return std::nullopt;
}

std::vector<double> solve_induced_series(const ExchangeSource &source,
                                         const EffectivePotential &potential, double energy,
                                         int order) {
  if (order != 1 && order != 2)
    throw Error(ErrorKind::InvalidArgument, "series order must be 1 or 2");
  require_same_grid(source.grid, potential.grid, "series: source and potential grids differ");
  const auto ueff = potential.ueff();
  const auto &grid = source.grid;
  std::vector<double> denom(grid.size()), first(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    denom[i] = ueff[i] - energy;
    if (std::abs(denom[i]) <= 1e-6 || (i > 0 && (denom[i] < 0.0) != (denom[i - 1] < 0.0)))
      throw Error(ErrorKind::SingularDenominator,
                  "U_eff - E vanishes near r = " + radius_string(grid.r(i)));
    first[i] = source.K[i] / denom[i];
  }
  if (order == 1) return first;
  const auto d2 = grid.second_derivative(first);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = first[i] + d2[i] / (2.0 * denom[i]);
  return out;
}

std::vector<double> solve_induced_direct(const ExchangeSource &source,
                                         const EffectivePotential &potential, double energy) {
  require_same_grid(source.grid, potential.grid, "direct: source and potential grids differ");
  const auto &grid = source.grid;
  const auto ueff = potential.ueff();
  if (!(ueff.back() - energy > 0.0))
    throw Error(ErrorKind::Domain, "energy is not below U_eff at r_max");

  const lapack_int n = lapack_int(grid.size());
  const lapack_int kl = 3, ku = 3;
  const lapack_int ldab = 2 * kl + ku + 1;
  std::vector<double> ab(std::size_t(ldab) * std::size_t(n), 0.0);
  auto at = [&](lapack_int i, lapack_int j) -> double & {
    return ab[std::size_t(kl + ku + i - j) + std::size_t(j) * std::size_t(ldab)];
  };
  std::vector<double> rhs(std::size_t(n), 0.0);

  // Rows are scaled by r^2 so that entries stay O(1/h^2) on log grids.
  at(0, 0) = 1.0;
  at(n - 1, n - 1) = 1.0;
  const auto r = grid.r();
  for (lapack_int j = 1; j < n - 1; ++j) {
    const lapack_int lo = std::min(std::max<lapack_int>(j - 2, 0), n - 5);
    const auto w = numerics::fd_weights(r[std::size_t(j)], r.subspan(std::size_t(lo), 5), 2);
    const double s = r[std::size_t(j)] * r[std::size_t(j)];
    for (lapack_int q = 0; q < 5; ++q) at(j, lo + q) += -0.5 * s * w[2][std::size_t(q)];
    at(j, j) += s * (ueff[std::size_t(j)] - energy);
    rhs[std::size_t(j)] = s * source.K[std::size_t(j)];
  }

  double anorm = 0.0;
  for (lapack_int j = 0; j < n; ++j) {
    double col = 0.0;
    for (lapack_int i = std::max<lapack_int>(0, j - ku); i <= std::min(n - 1, j + kl); ++i)
      col += std::abs(at(i, j));
    anorm = std::max(anorm, col);
  }

  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, ab.data(), ldab, ipiv.data());
  if (info != 0) throw Error(ErrorKind::Conditioning, "banded factorisation is singular");
  double rcond = 0.0;
  info = LAPACKE_dgbcon(LAPACK_COL_MAJOR, '1', n, kl, ku, ab.data(), ldab, ipiv.data(), anorm,
                        &rcond);
  if (info != 0 || rcond < min_rcond) {
    std::ostringstream os;
    os << "reciprocal condition number " << rcond
       << "; E is (close to) an eigenvalue of the homogeneous problem";
    throw Error(ErrorKind::Conditioning, os.str());
  }
  info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1, ab.data(), ldab, ipiv.data(),
                        rhs.data(), n);
  if (info != 0) throw Error(ErrorKind::Conditioning, "banded back-substitution failed");
  return rhs;
}

int count_nodes(std::span<const double> r, std::span<const double> f, double lo, double hi) {
  if (r.size() != f.size()) throw Error(ErrorKind::InvalidArgument, "count_nodes: length mismatch");
  double peak = 0.0;
  std::size_t in_window = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= lo && r[i] <= hi) {
      peak = std::max(peak, std::abs(f[i]));
      ++in_window;
    }
  if (in_window < 100)
    throw Error(ErrorKind::InvalidArgument, "count_nodes needs at least 100 samples in the window");
  const double floor = 1e-14 * peak;
  int nodes = 0, last_sign = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < lo || r[i] > hi || std::abs(f[i]) <= floor) continue;
    const int s = f[i] > 0.0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++nodes;
    last_sign = s;
  }
  return nodes;
}

ComposedOrbital compose_orbital(const Orbital &free, std::span<const double> induced) {
  if (induced.size() != free.xi.size())
    throw Error(ErrorKind::GridMismatch, "compose_orbital: induced tail length differs from grid");
  ComposedOrbital out{std::vector<double>(induced.size()), std::nullopt};
  for (std::size_t i = 0; i < induced.size(); ++i) {
    out.xi[i] = free.xi[i] + induced[i];
    if (!out.crossover && std::abs(induced[i]) > std::abs(free.xi[i]))
      out.crossover = free.grid.r(i);
  }
  return out;
}

std::vector<double> local_envelope(std::span<const double> r, std::span<const double> f,
                                   double spread) {
  std::vector<double> env(f.size(), 0.0);
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    while (r[lo] < r[i] / spread) ++lo;
    while (hi + 1 < r.size() && r[hi + 1] <= r[i] * spread) ++hi;
    double m = 0.0;
    for (std::size_t q = lo; q <= hi; ++q) m = std::max(m, std::abs(f[q]));
    env[i] = m;
  }
  return env;
}

ExchangeSource restrict_source(const ExchangeSource &source, std::size_t begin, std::size_t end) {
  return {source.grid.slice(begin, end),
          std::vector<double>(source.K.begin() + long(begin), source.K.begin() + long(end)),
          source.terms};
}

EffectivePotential restrict_potential(const EffectivePotential &potential, std::size_t begin,
                                      std::size_t end) {
  return {potential.grid.slice(begin, end),
          std::vector<double>(potential.U.begin() + long(begin), potential.U.begin() + long(end)),
          potential.l};
}

TailModelResult run_tail_model(const TailModelConfig &cfg) {
  const double outer = hydrogenic_mean_radius(cfg.source_Z, cfg.source_n, cfg.source_l);
  auto grid = default_grid(cfg.Z, outer, cfg.grid_points, cfg.rmax_factor);
  auto free = hydrogenic_orbital(cfg.Z, cfg.target_n, cfg.target_l, grid);
  auto source = hydrogenic_orbital(cfg.source_Z, cfg.source_n, cfg.source_l, grid);
  const auto potential = coulomb_potential(cfg.Z, cfg.target_l, grid, cfg.screening_radius);
  const std::vector<OccupiedShell> shells{{source, 1.0}};
  auto exchange = exchange_source(free, shells, cfg.k_max);

  TailModelResult res{grid, free, source, exchange, free.energy, 0.0, 0, {}, {}, {}, {},
                      std::nullopt, 0, 0, 0.0, 0.0};
  const auto tp = turning_point(potential, res.energy);
  res.turning_point = tp.value_or(grid.r_min());
  res.window_begin = tp ? grid.index_above(*tp) : 0;
  const std::size_t n = grid.size();
  const auto sub_src = restrict_source(exchange, res.window_begin, n);
  const auto sub_pot = restrict_potential(potential, res.window_begin, n);

  auto embed = [&](const std::vector<double> &part) {
    std::vector<double> full(n, 0.0);
    std::copy(part.begin(), part.end(), full.begin() + long(res.window_begin));
    return full;
  };
  if (cfg.run_series) {
    res.series1 = embed(solve_induced_series(sub_src, sub_pot, res.energy, 1));
    res.series2 = embed(solve_induced_series(sub_src, sub_pot, res.energy, 2));
  }
  if (cfg.run_direct) res.direct = embed(solve_induced_direct(sub_src, sub_pot, res.energy));

  const auto &induced = !res.direct.empty() ? res.direct
                        : !res.series2.empty() ? res.series2
                                               : res.series1;
  if (induced.empty()) throw Error(ErrorKind::InvalidArgument, "no solver selected");
  auto composed = compose_orbital(free, induced);
  res.total = std::move(composed.xi);
  res.crossover = composed.crossover;
  res.nodes_free = count_nodes(grid.r(), free.xi, grid.r_min(), grid.r_max());
  res.nodes_total = count_nodes(grid.r(), res.total, grid.r_min(), grid.r_max());

  const auto [lo, hi] = outer_decade(res);
  double sum = 0.0, mn = 0.0, mx = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.r(i);
    if (r < lo || r > hi || source.xi[i] == 0.0) continue;
    const double c = induced[i] * r * r / source.xi[i];
    if (count == 0) mn = mx = c;
    mn = std::min(mn, c);
    mx = std::max(mx, c);
    sum += c;
    ++count;
  }
  if (count > 0) {
    res.tail_constant = sum / double(count);
    res.tail_constant_spread = (mx - mn) / std::abs(res.tail_constant);
  }
  return res;
}

std::pair<double, double> outer_decade(const TailModelResult &result) {
  const double r0 = std::log(result.grid.r(result.window_begin));
  const double r1 = std::log(result.grid.r_max());
  const double hi = std::exp(r0 + 0.98 * (r1 - r0));
  return {hi / 10.0, hi};
}

SeriesAccuracy series_accuracy(const TailModelResult &result, const TailModelConfig &config) {
  if (result.series1.empty() || result.series2.empty() || result.direct.empty())
    throw Error(ErrorKind::InvalidArgument, "series accuracy needs series and direct solutions");
  const auto &grid = result.grid;
  const auto ueff =
      coulomb_potential(config.Z, config.target_l, grid, config.screening_radius).ueff();
  const auto env = local_envelope(grid.r(), result.total);
  SeriesAccuracy acc;
  acc.order1_from = 10.0 / config.Z;
  acc.to = outer_decade(result).second;
  bool started = false;
  for (std::size_t i = result.window_begin; i < grid.size(); ++i) {
    const double r = grid.r(i);
    if (r > acc.to) break;
    if (env[i] == 0.0) continue;
    if (!started && ueff[i] - result.energy >= 0.1 * std::abs(result.energy)) {
      started = true;
      acc.order2_from = r;
    }
    if (started)
      acc.order2 = std::max(acc.order2, std::abs(result.series2[i] - result.direct[i]) / env[i]);
    if (r > acc.order1_from)
      acc.order1 = std::max(acc.order1, std::abs(result.series1[i] - result.direct[i]) / env[i]);
  }
  return acc;
}

} // namespace taillab::atom
