#include "taillab/numerics.hpp"

#include "taillab/error.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace taillab {

const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidArgument: return "invalid argument";
  case ErrorKind::Resolution: return "resolution error";
  case ErrorKind::GridMismatch: return "grid mismatch";
  case ErrorKind::Domain: return "domain error";
  case ErrorKind::SingularDenominator: return "singular denominator";
  case ErrorKind::Conditioning: return "conditioning error";
  case ErrorKind::Truncation: return "truncation error";
  case ErrorKind::Accuracy: return "accuracy error";
  case ErrorKind::InsufficientOscillations: return "insufficient oscillations";
  case ErrorKind::NoisyProfile: return "noisy profile";
  case ErrorKind::NotPowerLaw: return "not a power law";
  case ErrorKind::Solver: return "solver error";
  }
  return "error";
}

RadialGrid::RadialGrid(std::vector<double> r, GridScheme scheme, double step)
    : r_(std::move(r)), scheme_(scheme), step_(step) {
  if (r_.size() < min_points)
    throw Error(ErrorKind::InvalidArgument,
                "radial grid needs at least 500 points, got " + std::to_string(r_.size()));
  for (std::size_t i = 1; i < r_.size(); ++i)
    if (!(r_[i] > r_[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "radial grid must be strictly increasing");
}

RadialGrid RadialGrid::uniform(double r_min, double r_max, std::size_t n) {
  if (!(r_max > r_min) || n < 2)
    throw Error(ErrorKind::InvalidArgument, "uniform grid needs r_max > r_min");
  const double h = (r_max - r_min) / double(n - 1);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = r_min + h * double(i);
  r.back() = r_max;
  return RadialGrid(std::move(r), GridScheme::Uniform, h);
}

RadialGrid RadialGrid::log_uniform(double r_min, double r_max, std::size_t n) {
  if (!(r_min > 0.0) || !(r_max > r_min) || n < 2)
    throw Error(ErrorKind::InvalidArgument, "log grid needs 0 < r_min < r_max");
  const double t0 = std::log(r_min);
  const double dt = (std::log(r_max) - t0) / double(n - 1);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = std::exp(t0 + dt * double(i));
  r.front() = r_min;
  r.back() = r_max;
  return RadialGrid(std::move(r), GridScheme::LogUniform, dt);
}

RadialGrid RadialGrid::slice(std::size_t begin, std::size_t end) const {
  if (begin >= end || end > r_.size())
    throw Error(ErrorKind::InvalidArgument, "bad grid slice");
  return RadialGrid(std::vector<double>(r_.begin() + long(begin), r_.begin() + long(end)),
                    scheme_, step_);
}

std::size_t RadialGrid::index_above(double x) const {
  return std::size_t(std::upper_bound(r_.begin(), r_.end(), x) - r_.begin());
}

double RadialGrid::integrate(std::span<const double> f) const {
  if (f.size() != r_.size())
    throw Error(ErrorKind::GridMismatch, "integrand length differs from grid size");
  const auto w = numerics::simpson_weights(r_.size(), step_);
  double sum = 0.0;
  if (scheme_ == GridScheme::Uniform) {
    for (std::size_t i = 0; i < f.size(); ++i) sum += w[i] * f[i];
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) sum += w[i] * f[i] * r_[i];
  }
  return sum;
}

std::vector<double> RadialGrid::second_derivative(std::span<const double> f) const {
  if (f.size() != r_.size())
    throw Error(ErrorKind::GridMismatch, "function length differs from grid size");
  const std::size_t n = r_.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t lo = std::min(j >= 2 ? j - 2 : 0, n - 5);
    const auto w = numerics::fd_weights(r_[j], std::span(r_).subspan(lo, 5), 2);
    // weights sum to zero, so differences against f[j] keep constants exact
    double acc = 0.0;
    for (std::size_t q = 0; q < 5; ++q) acc += w[2][q] * (f[lo + q] - f[j]);
    out[j] = acc;
  }
  return out;
}

bool RadialGrid::operator==(const RadialGrid &other) const {
  return scheme_ == other.scheme_ && r_ == other.r_;
}

namespace numerics {

std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> x,
                                            int max_order) {
  const std::size_t n = x.size();
  const auto m = std::size_t(max_order);
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[k][i] = c1 * (double(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[k][j] = (c4 * c[k][j] - double(k) * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

GaussRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(std::size_t(n));
  rule.weights.resize(std::size_t(n));
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[std::size_t(i)] = mid - half * z;
    rule.nodes[std::size_t(n - 1 - i)] = mid + half * z;
    rule.weights[std::size_t(i)] = half * w;
    rule.weights[std::size_t(n - 1 - i)] = half * w;
  }
  return rule;
}

std::vector<double> simpson_weights(std::size_t n, double h) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "Simpson rule needs >= 3 points");
  std::vector<double> w(n, 0.0);
  // odd point count handled by plain Simpson; even count closes with 3/8
  const std::size_t simpson_end = (n % 2 == 1) ? n : n - 3;
  if (simpson_end >= 3) {
    for (std::size_t i = 0; i + 2 < simpson_end; i += 2) {
      w[i] += h / 3.0;
      w[i + 1] += 4.0 * h / 3.0;
      w[i + 2] += h / 3.0;
    }
  }
  if (n % 2 == 0) {
    const std::size_t s = n - 4;
    w[s] += 3.0 * h / 8.0;
    w[s + 1] += 9.0 * h / 8.0;
    w[s + 2] += 9.0 * h / 8.0;
    w[s + 3] += 3.0 * h / 8.0;
  }
  return w;
}

double bessel_j1(double x) { return boost::math::cyl_bessel_j(1, x); }

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)> &fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = unsigned(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> failures(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < n; i += threads) fn(i);
        } catch (...) {
          failures[t] = std::current_exception();
        }
      });
  }
  for (auto &f : failures)
    if (f) std::rethrow_exception(f);
}

} // namespace numerics
} // namespace taillab
