#include "taillab/kernels.hpp"

#include "taillab/error.hpp"
#include "taillab/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace taillab::kernels {

using std::numbers::pi;

void KernelSpec::validate() const {
  if (dimension < 1 || dimension > 3)
    throw Error(ErrorKind::InvalidArgument,
                "kernel dimension must be 1, 2 or 3, got " + std::to_string(dimension));
  if (!(k_f > 0.0)) throw Error(ErrorKind::InvalidArgument, "k_f must be positive");
}

double oracle_scale(int dimension, double k_f) {
  switch (dimension) {
  case 1: return 1.0 / pi;
  case 2: return k_f;
  case 3: return k_f;
  }
  throw Error(ErrorKind::InvalidArgument, "kernel dimension must be 1, 2 or 3");
}

double fermi_gas_density(int dimension, double k_f) {
  switch (dimension) {
  case 1: return k_f / pi;
  case 2: return k_f * k_f / (4.0 * pi);
  case 3: return k_f * k_f * k_f / (6.0 * pi * pi);
  }
  throw Error(ErrorKind::InvalidArgument, "kernel dimension must be 1, 2 or 3");
}

namespace {

double paper_form(int d, double k, double R) {
  const double x = k * R;
  const double x2 = x * x;
  if (x < taylor_threshold) {
    switch (d) {
    case 1: return k * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
    case 2: return k / (4.0 * pi) * (1.0 - x2 / 8.0 + x2 * x2 / 192.0);
    default: return k * k / (2.0 * pi * pi) * (1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0);
    }
  }
  switch (d) {
  case 1: return std::sin(x) / R;
  case 2: return numerics::bessel_j1(x) / (2.0 * pi * R);
  default: return (-std::cos(x) + std::sin(x) / x) / (2.0 * pi * pi * R * R);
  }
}

} // namespace

double g_closed(const KernelSpec &spec, double R) {
  spec.validate();
  if (!(R >= 0.0)) throw Error(ErrorKind::InvalidArgument, "separation must be >= 0");
  const double g = paper_form(spec.dimension, spec.k_f, R);
  return spec.normalization == Normalization::PaperForm
             ? g
             : oracle_scale(spec.dimension, spec.k_f) * g;
}

DiscreteBand::DiscreteBand(int dimension, double L, double k_f)
    : dimension_(dimension), L_(L), k_f_(k_f) {
  KernelSpec{dimension, k_f, Normalization::OracleNormalized}.validate();
  if (!(L > 0.0)) throw Error(ErrorKind::InvalidArgument, "box length must be positive");
  const double dk = 2.0 * pi / L;
  const double kmax = k_f * (1.0 + 1e-12);
  const int nmax = int(std::floor(kmax / dk)) + 1;
  const int ny = dimension >= 2 ? nmax : 0;
  const int nz = dimension >= 3 ? nmax : 0;
  for (int i = -nmax; i <= nmax; ++i)
    for (int j = -ny; j <= ny; ++j)
      for (int l = -nz; l <= nz; ++l) {
        const double k2 = dk * dk * double(i * i + j * j + l * l);
        if (std::sqrt(k2) > kmax) continue;
        states_.push_back(i);
        if (dimension >= 2) states_.push_back(j);
        if (dimension >= 3) states_.push_back(l);
      }
  if (states_.empty()) throw Error(ErrorKind::InvalidArgument, "empty plane-wave state list");
}

std::array<int, 3> DiscreteBand::state(std::size_t i) const {
  std::array<int, 3> n{0, 0, 0};
  for (int c = 0; c < dimension_; ++c) n[std::size_t(c)] = states_[i * std::size_t(dimension_) + std::size_t(c)];
  return n;
}

double DiscreteBand::density() const {
  return double(state_count()) / std::pow(L_, dimension_);
}

double DiscreteBand::effective_k_f() const {
  const double F = double(state_count());
  const double dk = 2.0 * pi / L_;
  switch (dimension_) {
  case 1: return 0.5 * dk * F;
  case 2: return dk * std::sqrt(F / pi);
  default: return dk * std::cbrt(3.0 * F / (4.0 * pi));
  }
}

double g_oracle(const DiscreteBand &band, const std::array<double, 3> &R) {
  const double dk = 2.0 * pi / band.box_length();
  const int d = band.dimension();
  double re = 0.0, im = 0.0;
  for (std::size_t s = 0; s < band.state_count(); ++s) {
    const auto n = band.state(s);
    double phase = 0.0;
    for (int c = 0; c < d; ++c) phase += dk * double(n[std::size_t(c)]) * R[std::size_t(c)];
    re += std::cos(phase);
    im += std::sin(phase);
  }
  const double volume = std::pow(band.box_length(), d);
  re /= volume;
  im /= volume;
  if (std::abs(im) >= 1e-12 * std::abs(re) + 1e-15)
    throw Error(ErrorKind::Accuracy,
                "plane-wave sum has a non-vanishing imaginary part; state list is not k -> -k symmetric");
  return re;
}

} // namespace taillab::kernels
