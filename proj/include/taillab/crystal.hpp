#pragma once

#include "taillab/kernels.hpp"

#include <functional>
#include <span>
#include <vector>

namespace taillab::crystal {

/// Bound function sampled on a symmetric, uniformly spaced axis.
struct BoundOrbital1D {
  std::vector<double> x;
  std::vector<double> psi;
  double spacing = 0.0;
  double extent = 0.0; // characteristic radius

  /// Normalized exp(-x^2 / (2 w^2)) on [-half_width_factor w, +half_width_factor w].
  static BoundOrbital1D gaussian(double width, double spacing = 0.01,
                                 double half_width_factor = 8.0);
  /// Samples fn on [-half_range, half_range] and normalizes the result.
  static BoundOrbital1D from_function(const std::function<double(double)> &fn, double half_range,
                                      double spacing, double extent);
};

enum class Shape {
  S,          // isotropic Gaussian
  PTransverse // Gaussian times the coordinate perpendicular to the evaluation axis
};

/// Normalized Gaussian-type bound orbital in 2 or 3 dimensions, centred at
/// the origin and truncated at cutoff_factor * width.
struct BoundOrbitalND {
  int dimension = 3;
  double width = 1.0;
  Shape shape = Shape::S;
  double cutoff_factor = 8.0;

  double extent() const { return width; }
  void validate() const;
};

struct DipoleMoments {
  double M_cos = 0.0; // int x cos(k_f x) psi dx
  double M_sin = 0.0; // int x sin(k_f x) psi dx
};

/// Quadrature orders for the 2D/3D r' integral (radial x angular).
struct QuadratureOrders {
  int radial = 64;
  int angular = 32;
};

DipoleMoments dipole_moments(const BoundOrbital1D &psi, double k_f);

/// (1/(pi r^3)) [sin(k_f r) M_cos - cos(k_f r) M_sin], valid for r > 10 extent.
double exchange_dipole(const BoundOrbital1D &psi, double k_f, double r);

/// int g(r - x') [1/|r - x'| - 1/r] psi(x') dx' by composite Simpson, checked
/// against the same rule on every second sample.
double exchange_full(const BoundOrbital1D &psi, const kernels::KernelSpec &kernel, double r,
                     bool subtract_monopole = true);

/// 2D/3D version of exchange_full at distance r along the unit vector at
/// angle `direction` from the x axis (2D) or along the z axis (3D, where the
/// azimuthal integral is done analytically). The result of the doubled
/// orders is returned after the convergence check.
double exchange_full(const BoundOrbitalND &psi, const kernels::KernelSpec &kernel, double r,
                     const QuadratureOrders &orders = {}, double direction = 0.0,
                     bool subtract_monopole = true);

/// Leading multipole int g(r - r') (r_hat . r') / r^2 psi(r') dr' in 2D/3D.
double exchange_dipole_numeric(const BoundOrbitalND &psi, const kernels::KernelSpec &kernel,
                               double r, const QuadratureOrders &orders = {},
                               double direction = 0.0);

struct TailSample {
  double r = 0.0;
  double full = 0.0;
  double dipole = 0.0;
};

/// Full and dipole exchange at each r (sorted, all > 10 extent). Samples are
/// independent, so the result does not depend on the thread count.
std::vector<TailSample> tail_profile(const BoundOrbital1D &psi, const kernels::KernelSpec &kernel,
                                     std::span<const double> r_samples, unsigned threads = 0);
std::vector<TailSample> tail_profile(const BoundOrbitalND &psi, const kernels::KernelSpec &kernel,
                                     std::span<const double> r_samples,
                                     const QuadratureOrders &orders = {}, unsigned threads = 0);

/// k_F = f pi / a for a band with filling f and lattice constant a.
double fermi_momentum_for_filling(double f, double a);

/// n points spread uniformly over [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t n);

} // namespace taillab::crystal
