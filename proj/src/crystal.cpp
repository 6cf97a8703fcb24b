#include "taillab/crystal.hpp"

#include "taillab/error.hpp"
#include "taillab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace taillab::crystal {

namespace {

using kernels::KernelSpec;
using std::numbers::pi;

void require_oracle_kernel(const KernelSpec &kernel, int dimension) {
  kernel.validate();
  if (kernel.normalization != kernels::Normalization::OracleNormalized)
    throw Error(ErrorKind::InvalidArgument, "exchange integrals need an OracleNormalized kernel");
  if (kernel.dimension != dimension)
    throw Error(ErrorKind::InvalidArgument, "kernel dimension differs from the bound orbital");
}

void require_support(const BoundOrbital1D &psi) {
  if (psi.x.size() < 3 || psi.x.size() != psi.psi.size())
    throw Error(ErrorKind::InvalidArgument, "bound orbital needs at least 3 samples");
  double peak = 0.0;
  for (double v : psi.psi) peak = std::max(peak, std::abs(v));
  if (std::abs(psi.psi.front()) >= 1e-10 * peak || std::abs(psi.psi.back()) >= 1e-10 * peak)
    throw Error(ErrorKind::Truncation, "bound orbital support touches the grid edge");
}

// [1/|r - r'| - 1/r] without cancellation, or 1/|r - r'| alone.
double coulomb_factor(double r, double d, double r_dot, double s2, bool subtract) {
  if (!subtract) return 1.0 / d;
  return (2.0 * r_dot - s2) / (r * d * (r + d));
}

struct Integral {
  double value = 0.0;
  double magnitude = 0.0; // integral of |integrand|
};

void check_convergence(const Integral &coarse, const Integral &fine, const char *what) {
  const double scale = std::max(std::abs(fine.value), 1e-2 * fine.magnitude);
  if (std::abs(fine.value - coarse.value) > 1e-3 * scale)
    throw Error(ErrorKind::Accuracy, std::string(what) + ": quadrature did not converge under order doubling");
}

enum class Integrand { Full, FullUnsubtracted, Dipole };

Integral integrate_nd(const BoundOrbitalND &psi, const KernelSpec &kernel, double r,
                      int radial, int angular, double direction, Integrand what) {
  const double w = psi.width;
  const double cutoff = psi.cutoff_factor * w;
  const auto rad = numerics::gauss_legendre(radial, 0.0, cutoff);
  const double norm_s = std::pow(pi * w * w, -0.25 * psi.dimension);
  const double norm = psi.shape == Shape::S ? norm_s : std::sqrt(2.0) * norm_s;
  Integral out;

  auto term = [&](double d, double r_dot, double s2) {
    const double g = kernels::g_closed(kernel, d);
    switch (what) {
    case Integrand::Full: return g * coulomb_factor(r, d, r_dot, s2, true);
    case Integrand::FullUnsubtracted: return g * coulomb_factor(r, d, r_dot, s2, false);
    case Integrand::Dipole: return g * r_dot / (r * r * r);
    }
    return 0.0;
  };

  if (psi.dimension == 2) {
    const auto ang = numerics::gauss_legendre(angular, 0.0, 2.0 * pi);
    for (int i = 0; i < radial; ++i) {
      const double s = rad.nodes[std::size_t(i)];
      const double radial_part = norm * std::exp(-0.5 * s * s / (w * w));
      for (int j = 0; j < angular; ++j) {
        const double rel = ang.nodes[std::size_t(j)] - direction;
        const double r_dot = r * s * std::cos(rel);
        const double d = std::sqrt(std::max(r * r + s * s - 2.0 * r_dot, 0.0));
        const double shape = psi.shape == Shape::S ? 1.0 : (s / w) * std::sin(rel);
        const double f = term(d, r_dot, s * s) * radial_part * shape * s;
        const double wt = rad.weights[std::size_t(i)] * ang.weights[std::size_t(j)];
        out.value += wt * f;
        out.magnitude += wt * std::abs(f);
      }
    }
    return out;
  }

  // 3D, evaluation point on the z axis: the transverse shape averages to zero
  // over the azimuth, the isotropic one contributes 2 pi.
  if (psi.shape == Shape::PTransverse) return out;
  const auto ang = numerics::gauss_legendre(angular, -1.0, 1.0);
  for (int i = 0; i < radial; ++i) {
    const double s = rad.nodes[std::size_t(i)];
    const double radial_part = norm * std::exp(-0.5 * s * s / (w * w));
    for (int j = 0; j < angular; ++j) {
      const double mu = ang.nodes[std::size_t(j)];
      const double r_dot = r * s * mu;
      const double d = std::sqrt(std::max(r * r + s * s - 2.0 * r_dot, 0.0));
      const double f = 2.0 * pi * term(d, r_dot, s * s) * radial_part * s * s;
      const double wt = rad.weights[std::size_t(i)] * ang.weights[std::size_t(j)];
      out.value += wt * f;
      out.magnitude += wt * std::abs(f);
    }
  }
  return out;
}

double evaluate_nd(const BoundOrbitalND &psi, const KernelSpec &kernel, double r,
                   const QuadratureOrders &orders, double direction, Integrand what) {
  psi.validate();
  require_oracle_kernel(kernel, psi.dimension);
  if (orders.radial < 2 || orders.angular < 2)
    throw Error(ErrorKind::InvalidArgument, "quadrature orders must be >= 2");
  if (!(r > psi.cutoff_factor * psi.width))
    throw Error(ErrorKind::Domain, "evaluation point lies inside the bound-orbital support");
  const auto coarse = integrate_nd(psi, kernel, r, orders.radial, orders.angular, direction, what);
  const auto fine =
      integrate_nd(psi, kernel, r, 2 * orders.radial, 2 * orders.angular, direction, what);
  check_convergence(coarse, fine, "exchange integral");
  return fine.value;
}

} // namespace

BoundOrbital1D BoundOrbital1D::gaussian(double width, double spacing, double half_width_factor) {
  if (!(width > 0.0) || !(spacing > 0.0) || !(half_width_factor > 0.0))
    throw Error(ErrorKind::InvalidArgument, "Gaussian orbital needs positive width and spacing");
  return from_function([width](double x) { return std::exp(-0.5 * x * x / (width * width)); },
                       half_width_factor * width, spacing, width);
}

BoundOrbital1D BoundOrbital1D::from_function(const std::function<double(double)> &fn,
                                             double half_range, double spacing, double extent) {
  if (!(half_range > 0.0) || !(spacing > 0.0) || !(extent > 0.0))
    throw Error(ErrorKind::InvalidArgument, "bound orbital needs positive range, spacing, extent");
  const auto half = std::size_t(std::ceil(half_range / spacing));
  const std::size_t n = 2 * half + 1;
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "bound orbital grid too coarse");
  BoundOrbital1D out;
  out.spacing = half_range / double(half);
  out.extent = extent;
  out.x.resize(n);
  out.psi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.x[i] = (double(i) - double(half)) * out.spacing;
    out.psi[i] = fn(out.x[i]);
  }
  const auto w = numerics::simpson_weights(n, out.spacing);
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm += w[i] * out.psi[i] * out.psi[i];
  if (!(norm > 0.0)) throw Error(ErrorKind::InvalidArgument, "bound orbital has zero norm");
  const double scale = 1.0 / std::sqrt(norm);
  for (double &v : out.psi) v *= scale;
  return out;
}

void BoundOrbitalND::validate() const {
  if (dimension != 2 && dimension != 3)
    throw Error(ErrorKind::InvalidArgument, "BoundOrbitalND dimension must be 2 or 3");
  if (!(width > 0.0) || !(cutoff_factor > 0.0))
    throw Error(ErrorKind::InvalidArgument, "bound orbital width and cutoff must be positive");
}

DipoleMoments dipole_moments(const BoundOrbital1D &psi, double k_f) {
  require_support(psi);
  const auto w = numerics::simpson_weights(psi.x.size(), psi.spacing);
  DipoleMoments m;
  for (std::size_t i = 0; i < psi.x.size(); ++i) {
    const double x = psi.x[i];
    m.M_cos += w[i] * x * std::cos(k_f * x) * psi.psi[i];
    m.M_sin += w[i] * x * std::sin(k_f * x) * psi.psi[i];
  }
  return m;
}

double exchange_dipole(const BoundOrbital1D &psi, double k_f, double r) {
  if (!(r > 10.0 * psi.extent))
    throw Error(ErrorKind::Domain, "dipole form needs r > 10 * extent");
  const auto m = dipole_moments(psi, k_f);
  return (std::sin(k_f * r) * m.M_cos - std::cos(k_f * r) * m.M_sin) / (pi * r * r * r);
}

double exchange_full(const BoundOrbital1D &psi, const KernelSpec &kernel, double r,
                     bool subtract_monopole) {
  require_oracle_kernel(kernel, 1);
  require_support(psi);
  if (!(r > psi.x.back()))
    throw Error(ErrorKind::Domain, "evaluation point lies inside the bound-orbital support");
  const std::size_t n = psi.x.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = psi.x[i];
    const double d = r - x;
    f[i] = kernels::g_closed(kernel, d) * coulomb_factor(r, d, r * x, x * x, subtract_monopole) *
           psi.psi[i];
  }
  const auto w_fine = numerics::simpson_weights(n, psi.spacing);
  const std::size_t n_coarse = (n + 1) / 2;
  const auto w_coarse = numerics::simpson_weights(n_coarse, 2.0 * psi.spacing);
  Integral fine, coarse;
  for (std::size_t i = 0; i < n; ++i) {
    fine.value += w_fine[i] * f[i];
    fine.magnitude += w_fine[i] * std::abs(f[i]);
  }
  for (std::size_t i = 0; i < n_coarse; ++i) coarse.value += w_coarse[i] * f[2 * i];
  if (n % 2 == 0) {
    // coarse grid misses the last sample; compare on the shared range only
    coarse.value = fine.value;
  }
  check_convergence(coarse, fine, "exchange integral");
  return fine.value;
}

double exchange_full(const BoundOrbitalND &psi, const KernelSpec &kernel, double r,
                     const QuadratureOrders &orders, double direction, bool subtract_monopole) {
  return evaluate_nd(psi, kernel, r, orders, direction,
                     subtract_monopole ? Integrand::Full : Integrand::FullUnsubtracted);
}

double exchange_dipole_numeric(const BoundOrbitalND &psi, const KernelSpec &kernel, double r,
                               const QuadratureOrders &orders, double direction) {
  return evaluate_nd(psi, kernel, r, orders, direction, Integrand::Dipole);
}

namespace {

void require_samples(std::span<const double> r_samples, double extent) {
  for (std::size_t i = 0; i < r_samples.size(); ++i) {
    if (!(r_samples[i] > 10.0 * extent))
      throw Error(ErrorKind::Domain, "tail samples must lie beyond 10 * extent");
    if (i > 0 && !(r_samples[i] > r_samples[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "tail samples must be strictly increasing");
  }
}

} // namespace

std::vector<TailSample> tail_profile(const BoundOrbital1D &psi, const KernelSpec &kernel,
                                     std::span<const double> r_samples, unsigned threads) {
  require_samples(r_samples, psi.extent);
  const auto m = dipole_moments(psi, kernel.k_f);
  std::vector<TailSample> out(r_samples.size());
  numerics::parallel_for(out.size(), threads, [&](std::size_t i) {
    const double r = r_samples[i];
    const double k = kernel.k_f;
    out[i] = {r, exchange_full(psi, kernel, r),
              (std::sin(k * r) * m.M_cos - std::cos(k * r) * m.M_sin) / (pi * r * r * r)};
  });
  return out;
}

std::vector<TailSample> tail_profile(const BoundOrbitalND &psi, const KernelSpec &kernel,
                                     std::span<const double> r_samples,
                                     const QuadratureOrders &orders, unsigned threads) {
  require_samples(r_samples, psi.extent());
  std::vector<TailSample> out(r_samples.size());
  numerics::parallel_for(out.size(), threads, [&](std::size_t i) {
    const double r = r_samples[i];
    out[i] = {r, exchange_full(psi, kernel, r, orders),
              exchange_dipole_numeric(psi, kernel, r, orders)};
  });
  return out;
}

double fermi_momentum_for_filling(double f, double a) {
  if (!(f >= 0.0 && f <= 1.0) || !(a > 0.0))
    throw Error(ErrorKind::InvalidArgument, "filling must lie in [0,1] and a > 0");
  return f * pi / a;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "linspace needs at least 2 points");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * double(i) / double(n - 1);
  return out;
}

} // namespace taillab::crystal
