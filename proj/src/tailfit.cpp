#include "taillab/tailfit.hpp"

#include "taillab/error.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace taillab::tailfit {

namespace {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

Line least_squares(const std::vector<double> &x, const std::vector<double> &y) {
  const double n = double(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (out.intercept + out.slope * x[i]);
    ss += e * e;
  }
  out.rms = std::sqrt(ss / n);
  return out;
}

// Indices of the samples inside the window, after basic validation.
std::vector<std::size_t> window_indices(std::span<const double> r, std::span<const double> v,
                                        const std::optional<Window> &window,
                                        std::size_t min_samples) {
  if (r.size() != v.size()) throw Error(ErrorKind::InvalidArgument, "r and values differ in length");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) throw Error(ErrorKind::InvalidArgument, "r must be strictly increasing");
  if (window && !(window->first < window->second))
    throw Error(ErrorKind::InvalidArgument, "fit window needs lo < hi");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (!window || (r[i] >= window->first && r[i] <= window->second)) idx.push_back(i);
  if (idx.size() < min_samples)
    throw Error(ErrorKind::InvalidArgument,
                "fit window holds " + std::to_string(idx.size()) + " samples, need " +
                    std::to_string(min_samples));
  for (std::size_t i : idx)
    if (!(r[i] > 0.0) || !std::isfinite(v[i]))
      throw Error(ErrorKind::InvalidArgument, "fit needs r > 0 and finite values");
  return idx;
}

struct Extremum {
  double r = 0.0;
  double value = 0.0; // signed
};

std::vector<Extremum> find_extrema(std::span<const double> r, std::span<const double> v,
                                   const std::vector<std::size_t> &idx) {
  std::vector<Extremum> out;
  for (std::size_t q = 1; q + 1 < idx.size(); ++q) {
    const std::size_t a = idx[q - 1], b = idx[q], c = idx[q + 1];
    const double fa = std::abs(v[a]), fb = std::abs(v[b]), fc = std::abs(v[c]);
    if (!(fb > 0.0) || !(fb >= fa) || !(fb > fc)) continue;
    // parabola through the signed samples; vertex clamped to the neighbours
    const double x0 = r[a], x1 = r[b], x2 = r[c];
    const double y0 = v[a], y1 = v[b], y2 = v[c];
    const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
    const double curv = (d12 - d01) / (x2 - x0);
    Extremum e{x1, y1};
    if (curv != 0.0) {
      const double xv = std::clamp(0.5 * (x0 + x1) - d01 / (2.0 * curv), x0, x2);
      e.r = xv;
      e.value = y0 + d01 * (xv - x0) + curv * (xv - x0) * (xv - x1);
      if ((e.value > 0.0) != (y1 > 0.0) || std::abs(e.value) < std::abs(y1)) e = {x1, y1};
    }
    out.push_back(e);
  }
  return out;
}

} // namespace

TailFit fit_tail(std::span<const double> r, std::span<const double> v,
                 std::optional<Window> window) {
  const auto idx = window_indices(r, v, window, 200);
  const auto ext = find_extrema(r, v, idx);
  if (ext.size() < 5)
    throw Error(ErrorKind::InsufficientOscillations,
                "found " + std::to_string(ext.size()) + " extrema, need at least 5");
  for (std::size_t i = 1; i < ext.size(); ++i)
    if ((ext[i].value > 0.0) == (ext[i - 1].value > 0.0))
      throw Error(ErrorKind::NoisyProfile,
                  "consecutive extrema near r = " + std::to_string(ext[i].r) + " share a sign");

  std::vector<double> index(ext.size()), pos(ext.size()), log_r(ext.size()), log_v(ext.size());
  for (std::size_t i = 0; i < ext.size(); ++i) {
    index[i] = double(i);
    pos[i] = ext[i].r;
    log_r[i] = std::log(ext[i].r);
    log_v[i] = std::log(std::abs(ext[i].value));
  }
  const Line spacing = least_squares(index, pos);
  const Line envelope = least_squares(log_r, log_v);

  TailFit fit;
  fit.k = std::numbers::pi / spacing.slope;
  fit.nu = -envelope.slope;
  fit.residual = envelope.rms;
  fit.r_lo = r[idx.front()];
  fit.r_hi = r[idx.back()];
  fit.n_extrema_used = int(ext.size());

  // Weighted model r^-nu (alpha cos kr + beta sin kr); weight r^nu0 keeps the
  // residuals of comparable size across the window.
  const double nu0 = fit.nu, k0 = fit.k;
  const Eigen::Index n = Eigen::Index(idx.size());
  auto linear_coeffs = [&](double nu, double k) {
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (Eigen::Index q = 0; q < n; ++q) {
      const double x = r[idx[std::size_t(q)]];
      const double s = std::pow(x, nu0 - nu);
      A(q, 0) = s * std::cos(k * x);
      A(q, 1) = s * std::sin(k * x);
      b(q) = std::pow(x, nu0) * v[idx[std::size_t(q)]];
    }
    return Eigen::Vector2d(A.colPivHouseholderQr().solve(b));
  };
  const Eigen::Vector2d ab0 = linear_coeffs(nu0, k0);
  Eigen::Vector4d p(nu0, k0, ab0(0), ab0(1));
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    Eigen::MatrixXd J(n, 4);
    Eigen::VectorXd res(n);
    for (Eigen::Index q = 0; q < n; ++q) {
      const double x = r[idx[std::size_t(q)]];
      const double s = std::pow(x, nu0 - p(0));
      const double c = std::cos(p(1) * x), sn = std::sin(p(1) * x);
      const double model = s * (p(2) * c + p(3) * sn);
      res(q) = std::pow(x, nu0) * v[idx[std::size_t(q)]] - model;
      J(q, 0) = -std::log(x) * model;
      J(q, 1) = s * x * (-p(2) * sn + p(3) * c);
      J(q, 2) = s * c;
      J(q, 3) = s * sn;
    }
    const Eigen::Vector4d step = J.colPivHouseholderQr().solve(res);
    if (!step.allFinite()) break;
    p += step;
    const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    if (step.cwiseAbs().maxCoeff() <= 1e-10 * scale) {
      converged = true;
      break;
    }
  }
  if (converged && std::abs(p(0) - nu0) <= 0.25 && std::abs(p(1) - k0) <= 0.01 * std::abs(k0) &&
      p.allFinite()) {
    fit.nu = p(0);
    fit.k = p(1);
    fit.refined = true;
  } else {
    p(2) = ab0(0);
    p(3) = ab0(1);
  }
  fit.amplitude = std::hypot(p(2), p(3));
  fit.phase = std::atan2(-p(3), p(2));
  return fit;
}

PowerFit fit_plain_power(std::span<const double> r, std::span<const double> v,
                         std::optional<Window> window) {
  const auto idx = window_indices(r, v, window, 4);
  const bool positive = v[idx.front()] > 0.0;
  for (std::size_t i : idx)
    if (v[i] == 0.0 || (v[i] > 0.0) != positive)
      throw Error(ErrorKind::InvalidArgument,
                  "profile changes sign inside the window; use fit_tail for oscillatory data");

  std::vector<double> x, y;
  for (std::size_t i : idx) {
    x.push_back(std::log(r[i]));
    y.push_back(std::log(std::abs(v[i])));
  }
  const Line all = least_squares(x, y);
  const double mid = 0.5 * (x.front() + x.back());
  std::vector<double> xl, yl, xh, yh;
  for (std::size_t i = 0; i < x.size(); ++i) {
    (x[i] <= mid ? xl : xh).push_back(x[i]);
    (x[i] <= mid ? yl : yh).push_back(y[i]);
  }
  PowerFit out;
  out.exponent = all.slope;
  out.residual = all.rms;
  out.exponent_lo = xl.size() >= 2 ? least_squares(xl, yl).slope : all.slope;
  out.exponent_hi = xh.size() >= 2 ? least_squares(xh, yh).slope : all.slope;
  out.power_law = std::abs(out.exponent_lo - out.exponent_hi) <= 0.5;
  return out;
}

} // namespace taillab::tailfit
