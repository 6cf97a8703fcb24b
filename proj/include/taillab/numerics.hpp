#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace taillab {

enum class GridScheme { Uniform, LogUniform };

/// Strictly increasing radial (or axial) coordinate. Every sampled function
/// in the atom module lives on one of these.
class RadialGrid {
public:
  static constexpr std::size_t min_points = 500;

  static RadialGrid uniform(double r_min, double r_max, std::size_t n);
  static RadialGrid log_uniform(double r_min, double r_max, std::size_t n);

  std::span<const double> r() const { return r_; }
  double r(std::size_t i) const { return r_[i]; }
  std::size_t size() const { return r_.size(); }
  GridScheme scheme() const { return scheme_; }
  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }
  /// dr for Uniform, d(ln r) for LogUniform.
  double step() const { return step_; }

  /// Contiguous sub-grid [begin, end). Keeps the scheme.
  RadialGrid slice(std::size_t begin, std::size_t end) const;
  /// First index with r_j > x (size() if none).
  std::size_t index_above(double x) const;

  /// Composite Simpson in the uniform parameter (r or ln r), with the r
  /// Jacobian on log grids and a 3/8 closing panel for even point counts.
  double integrate(std::span<const double> f) const;
  /// d^2 f / dr^2 from 5-point stencils (centred in the interior, one-sided
  /// at the two ends) built by local polynomial fitting.
  std::vector<double> second_derivative(std::span<const double> f) const;

  bool operator==(const RadialGrid &other) const;

private:
  RadialGrid(std::vector<double> r, GridScheme scheme, double step);
  std::vector<double> r_;
  GridScheme scheme_;
  double step_;
};

namespace numerics {

/// Finite-difference weights (Fornberg) for derivatives of order 0..max_order
/// at x0 using the given nodes. Result is indexed [order][node].
std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> nodes,
                                            int max_order);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped onto [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Composite Simpson weights for n equally spaced points with spacing h
/// (3/8 closing panel when n is even). n >= 3.
std::vector<double> simpson_weights(std::size_t n, double h);

double bessel_j1(double x);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Each index is written independently, so results do not depend
/// on the thread count.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)> &fn);

} // namespace numerics
} // namespace taillab
