#pragma once

#include <optional>
#include <span>
#include <utility>

namespace taillab::tailfit {

using Window = std::pair<double, double>;

/// A cos(k r + phase) r^(-nu) fitted to an oscillatory profile.
struct TailFit {
  double nu = 0.0;
  double k = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  double residual = 0.0; // RMS of the log-envelope fit
  double r_lo = 0.0;
  double r_hi = 0.0;
  int n_extrema_used = 0;
  bool refined = false; // the nonlinear refinement was accepted
};

/// Extrema of |v| give k (spacing pi/k) and nu (log-log slope); a weighted
/// Gauss-Newton fit then refines nu, k, amplitude and phase. Needs at least
/// 200 samples in the window (whole range when no window is given).
TailFit fit_tail(std::span<const double> r, std::span<const double> v,
                 std::optional<Window> window = std::nullopt);

struct PowerFit {
  double exponent = 0.0;    // slope of log|v| vs log r
  double exponent_lo = 0.0; // same on the lower half of the window in log r
  double exponent_hi = 0.0; // upper half
  double residual = 0.0;    // RMS of the log fit
  bool power_law = true;    // halves agree within 0.5
};

/// Plain power-law slope for single-signed profiles.
PowerFit fit_plain_power(std::span<const double> r, std::span<const double> v,
                         std::optional<Window> window = std::nullopt);

} // namespace taillab::tailfit
