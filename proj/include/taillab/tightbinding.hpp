#pragma once

#include "taillab/crystal.hpp"

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace taillab::tb {

using cplx = std::complex<double>;

/// Tight-binding ring of N sites with F occupied states per spin.
struct BandSpec {
  long N = 8;
  long F = 4;
  double a = 1.0;     // lattice constant, Bohr
  double t_hop = 1.0; // hopping, Hartree
  double T = 0.0;     // temperature, Hartree
  /// Gap between the valence band and the mirrored empty band used at T > 0
  /// (defaults to t_hop).
  std::optional<double> gap;

  void validate() const;
  double filling() const { return double(F) / double(N); }
  double band_gap() const { return gap.value_or(t_hop); }
};

/// Closed geometric sum (e^{i 2 pi l F/N} - 1) / (N (e^{i 2 pi l/N} - 1)) over
/// the states n = 0..F-1; exactly f for l = 0 mod N and exactly 0 for a
/// complete band otherwise.
cplx B_exact(const BandSpec &spec, long l);

/// (1/N) sum_{n=0}^{F-1} exp(i 2 pi n l / N), summed term by term.
cplx B_sum_oracle(const BandSpec &spec, long l);

/// Kernel of the T = 0 Fermi sea: the F states of lowest |k|, n = n0..n0+F-1
/// with n0 = -floor((F-1)/2) (the extra state of an even F sits at positive k).
/// Equals exp(i 2 pi n0 l / N) B_exact(l).
cplx B_fermi_sea(const BandSpec &spec, long l);

/// exp(i pi f l) sin(pi f l) / (pi l), with an exact zero when f l is an
/// integer. l >= 1.
cplx B_asymptotic(double f, long l);

/// Valence band -2 t cos(k a) and its mirror 4 t + gap + 2 t cos(k a).
double valence_energy(const BandSpec &spec, long n);
double conduction_energy(const BandSpec &spec, long n);

/// Chemical potential holding F electrons per spin in the two bands at
/// temperature T > 0 (bisection to 1e-12 t_hop; the midpoint of the plateau
/// when the count is flat around F).
double chemical_potential(const BandSpec &spec);

/// (1/N) sum_n f_FD(eps_v(k_n)) exp(i k_n l a): the valence-band kernel with
/// thermal holes. Needs T > 0.
cplx B_thermal(const BandSpec &spec, long l);

/// Thermal population of the empty band (electrons per spin).
double conduction_population(const BandSpec &spec);

struct LatticeKernel {
  long N = 0;
  std::vector<cplx> values; // B(l) for l = -(N-1)..N-1 at index l + N - 1

  /// B(l) for any integer l (periodic in N).
  cplx at(long l) const;
};

/// B_fermi_sea at T = 0, B_thermal at T > 0.
LatticeKernel lattice_kernel(const BandSpec &spec);

/// Normalized one-site Gaussian of the given width centred at x = 0.
double onsite_orbital(double x, double width);

/// Exchange integral int g(r, x') [1/|r - x'| - 1/r] psi_b(x') dx' with
/// g(x, x') = sum_{l,m} B(l - m) phi(x - l a) phi(x' - m a), phi the one-site
/// Gaussian. r samples are usually the site positions j a.
std::vector<cplx> tb_exchange_profile(const LatticeKernel &kernel, double a, double onsite_width,
                                      const crystal::BoundOrbital1D &psi_b,
                                      std::span<const double> r_samples, unsigned threads = 0);
std::vector<cplx> tb_exchange_profile(const BandSpec &spec, double onsite_width,
                                      const crystal::BoundOrbital1D &psi_b,
                                      std::span<const double> r_samples, unsigned threads = 0);

} // namespace taillab::tb
