#include "taillab/tightbinding.hpp"

#include "taillab/error.hpp"
#include "taillab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace taillab::tb {

namespace {

using std::numbers::pi;

long mod(long a, long n) {
  const long m = a % n;
  return m < 0 ? m + n : m;
}

// exp(i 2 pi p / N) with the integer argument reduced first
cplx root_of_unity(long p, long N) {
  const double angle = 2.0 * pi * double(mod(p, N)) / double(N);
  return {std::cos(angle), std::sin(angle)};
}

long product_mod(long a, long b, long n) {
  return long((static_cast<__int128>(mod(a, n)) * mod(b, n)) % n);
}

double fermi_dirac(double energy, double mu, double T) {
  const double x = (energy - mu) / T;
  if (x > 700.0) return 0.0;
  if (x < -700.0) return 1.0;
  return 1.0 / (1.0 + std::exp(x));
}

double electron_count(const BandSpec &spec, double mu) {
  double count = 0.0;
  for (long n = 0; n < spec.N; ++n)
    count += fermi_dirac(valence_energy(spec, n), mu, spec.T) +
             fermi_dirac(conduction_energy(spec, n), mu, spec.T);
  return count;
}

cplx thermal_at(const BandSpec &spec, double mu, long l) {
  cplx sum = 0.0;
  for (long n = 0; n < spec.N; ++n)
    sum += fermi_dirac(valence_energy(spec, n), mu, spec.T) *
           root_of_unity(product_mod(n, l, spec.N), spec.N);
  return sum / double(spec.N);
}

void require_thermal(const BandSpec &spec) {
  spec.validate();
  if (!(spec.T > 0.0)) throw Error(ErrorKind::InvalidArgument, "thermal kernel needs T > 0");
}

} // namespace

void BandSpec::validate() const {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "N must be >= 1");
  if (F < 0 || F > N) throw Error(ErrorKind::InvalidArgument, "F must lie in [0, N]");
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "lattice constant must be positive");
  if (!(t_hop > 0.0)) throw Error(ErrorKind::InvalidArgument, "hopping must be positive");
  if (!(T >= 0.0)) throw Error(ErrorKind::InvalidArgument, "temperature must be >= 0");
  if (gap && !(*gap >= 0.0)) throw Error(ErrorKind::InvalidArgument, "gap must be >= 0");
}

cplx B_exact(const BandSpec &spec, long l) {
  spec.validate();
  const long m = mod(l, spec.N);
  if (m == 0) return spec.filling();
  const long p = product_mod(m, spec.F, spec.N);
  if (p == 0) return 0.0;
  return (root_of_unity(p, spec.N) - 1.0) / (double(spec.N) * (root_of_unity(m, spec.N) - 1.0));
}

cplx B_sum_oracle(const BandSpec &spec, long l) {
  spec.validate();
  cplx sum = 0.0;
  for (long n = 0; n < spec.F; ++n) sum += root_of_unity(product_mod(n, l, spec.N), spec.N);
  return sum / double(spec.N);
}

cplx B_fermi_sea(const BandSpec &spec, long l) {
  const long n0 = spec.F > 0 ? -((spec.F - 1) / 2) : 0;
  return root_of_unity(product_mod(n0, l, spec.N), spec.N) * B_exact(spec, l);
}

cplx B_asymptotic(double f, long l) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "asymptotic form needs l >= 1");
  const double x = f * double(l);
  if (std::abs(x - std::round(x)) <= 1e-12 * std::max(1.0, std::abs(x))) return 0.0;
  return std::polar(std::sin(pi * x) / (pi * double(l)), pi * x);
}

double valence_energy(const BandSpec &spec, long n) {
  return -2.0 * spec.t_hop * std::cos(2.0 * pi * double(mod(n, spec.N)) / double(spec.N));
}

double conduction_energy(const BandSpec &spec, long n) {
  return 4.0 * spec.t_hop + spec.band_gap() +
         2.0 * spec.t_hop * std::cos(2.0 * pi * double(mod(n, spec.N)) / double(spec.N));
}

double chemical_potential(const BandSpec &spec) {
  require_thermal(spec);
  const double target = double(spec.F);
  const double margin = 50.0 * spec.T + spec.t_hop;
  const double e_lo = -2.0 * spec.t_hop - margin;
  const double e_hi = 6.0 * spec.t_hop + spec.band_gap() + margin;
  const double slack = 1e-12 * std::max(1.0, target);
  const double tol = 1e-12 * spec.t_hop;

  // lowest mu with count >= target - slack, highest with count <= target + slack
  auto bisect = [&](auto above) {
    double lo = e_lo, hi = e_hi;
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      (above(electron_count(spec, mid)) ? hi : lo) = mid;
    }
    if (hi - lo > tol) throw Error(ErrorKind::Solver, "chemical potential bisection did not converge");
    return 0.5 * (lo + hi);
  };
  const double mu_lo = bisect([&](double c) { return c >= target - slack; });
  const double mu_hi = bisect([&](double c) { return c > target + slack; });
  const double mu = 0.5 * (mu_lo + mu_hi);
  if (std::abs(electron_count(spec, mu) - target) > 1e-6 * std::max(1.0, target))
    throw Error(ErrorKind::Solver, "chemical potential does not reproduce the electron count");
  return mu;
}

cplx B_thermal(const BandSpec &spec, long l) {
  require_thermal(spec);
  return thermal_at(spec, chemical_potential(spec), l);
}

double conduction_population(const BandSpec &spec) {
  require_thermal(spec);
  const double mu = chemical_potential(spec);
  double count = 0.0;
  for (long n = 0; n < spec.N; ++n) count += fermi_dirac(conduction_energy(spec, n), mu, spec.T);
  return count;
}

cplx LatticeKernel::at(long l) const { return values[std::size_t(mod(l, N) + N - 1)]; }

LatticeKernel lattice_kernel(const BandSpec &spec) {
  spec.validate();
  LatticeKernel out{spec.N, std::vector<cplx>(std::size_t(2 * spec.N - 1))};
  if (spec.T > 0.0) {
    const double mu = chemical_potential(spec);
    for (long l = -(spec.N - 1); l < spec.N; ++l)
      out.values[std::size_t(l + spec.N - 1)] = thermal_at(spec, mu, l);
  } else {
    for (long l = -(spec.N - 1); l < spec.N; ++l)
      out.values[std::size_t(l + spec.N - 1)] = B_fermi_sea(spec, l);
  }
  return out;
}

double onsite_orbital(double x, double width) {
  return std::pow(pi * width * width, -0.25) * std::exp(-0.5 * x * x / (width * width));
}

std::vector<cplx> tb_exchange_profile(const LatticeKernel &kernel, double a, double onsite_width,
                                      const crystal::BoundOrbital1D &psi_b,
                                      std::span<const double> r_samples, unsigned threads) {
  if (!(a > 0.0) || !(onsite_width > 0.0) || !(onsite_width < a / 3.0))
    throw Error(ErrorKind::InvalidArgument, "one-site width must lie in (0, a/3)");
  if (psi_b.x.size() < 3 || psi_b.x.size() != psi_b.psi.size())
    throw Error(ErrorKind::InvalidArgument, "bound orbital needs at least 3 samples");
  const double reach = 8.0 * onsite_width;
  const double x0 = psi_b.x.front(), x1 = psi_b.x.back();
  for (double r : r_samples)
    if (!(r > x1 + reach))
      throw Error(ErrorKind::Domain, "profile samples must lie beyond the bound orbital support");

  const long m_lo = long(std::floor((x0 - reach) / a));
  const long m_hi = long(std::ceil((x1 + reach) / a));
  const auto w = numerics::simpson_weights(psi_b.x.size(), psi_b.spacing);

  std::vector<cplx> out(r_samples.size());
  numerics::parallel_for(out.size(), threads, [&](std::size_t s) {
    const double r = r_samples[s];
    std::vector<double> overlap(std::size_t(m_hi - m_lo + 1), 0.0);
    for (long m = m_lo; m <= m_hi; ++m) {
      double sum = 0.0;
      for (std::size_t i = 0; i < psi_b.x.size(); ++i) {
        const double x = psi_b.x[i];
        const double d = r - x;
        const double coulomb = (2.0 * r * x - x * x) / (r * d * (r + d));
        sum += w[i] * onsite_orbital(x - double(m) * a, onsite_width) * coulomb * psi_b.psi[i];
      }
      overlap[std::size_t(m - m_lo)] = sum;
    }
    cplx K = 0.0;
    const long l_lo = long(std::floor((r - reach) / a));
    const long l_hi = long(std::ceil((r + reach) / a));
    for (long l = l_lo; l <= l_hi; ++l) {
      const double phi = onsite_orbital(r - double(l) * a, onsite_width);
      if (phi == 0.0) continue;
      cplx inner = 0.0;
      for (long m = m_lo; m <= m_hi; ++m) inner += kernel.at(l - m) * overlap[std::size_t(m - m_lo)];
      K += phi * inner;
    }
    out[s] = K;
  });
  return out;
}

std::vector<cplx> tb_exchange_profile(const BandSpec &spec, double onsite_width,
                                      const crystal::BoundOrbital1D &psi_b,
                                      std::span<const double> r_samples, unsigned threads) {
  return tb_exchange_profile(lattice_kernel(spec), spec.a, onsite_width, psi_b, r_samples, threads);
}

} // namespace taillab::tb
