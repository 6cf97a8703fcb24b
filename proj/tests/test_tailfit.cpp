#include <doctest.h>

#include "taillab/crystal.hpp"
#include "taillab/error.hpp"
#include "taillab/tailfit.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

using namespace taillab;
using namespace taillab::tailfit;
using std::numbers::pi;

namespace {

struct Samples {
  std::vector<double> r, v;
};

Samples sample(double lo, double hi, std::size_t n, const std::function<double(double)> &f) {
  Samples s{crystal::linspace(lo, hi, n), {}};
  for (double r : s.r) s.v.push_back(f(r));
  return s;
}

ErrorKind fit_error(const Samples &s) {
  try {
    fit_tail(s.r, s.v);
  } catch (const Error &e) {
    return e.kind();
  }
  FAIL("expected a fit error");
  return ErrorKind::InvalidArgument;
}

} // namespace

TEST_CASE("reference profiles") {
  const auto a = sample(20.0, 220.0, 2000, [](double r) { return std::cos(2.0 * r) / (r * r * r); });
  const auto fa = fit_tail(a.r, a.v);
  CHECK(std::abs(fa.nu - 3.0) < 0.01);
  CHECK(std::abs(fa.k - 2.0) < 0.002);
  CHECK(fa.n_extrema_used >= 5);
  CHECK(fa.r_lo < fa.r_hi);
  CHECK(std::isfinite(fa.residual));

  const auto b = sample(20.0, 220.0, 2000, [](double r) { return std::pow(r, -3.5) * std::cos(r - pi / 4.0); });
  CHECK(std::abs(fit_tail(b.r, b.v).nu - 3.5) < 0.01);

  const auto c = sample(20.0, 220.0, 2000, [](double r) { return std::pow(r, -3.0); });
  CHECK(fit_error(c) == ErrorKind::InsufficientOscillations);
}

TEST_CASE("exact recovery on synthetic data") {
  for (double nu : {3.0, 3.5, 4.0})
    for (double k : {0.5, 1.0, 2.0}) {
      const double phase = 0.7;
      const auto s = sample(30.0 / k, 300.0 / k, 2000,
                            [&](double r) { return 2.5 * std::cos(k * r + phase) * std::pow(r, -nu); });
      const auto f = fit_tail(s.r, s.v);
      CHECK(std::abs(f.nu - nu) <= 0.01);
      CHECK(std::abs(f.k - k) <= 1e-3 * k);
      CHECK(f.refined);
      CHECK(std::remainder(f.phase - phase, 2.0 * pi) == doctest::Approx(0.0).epsilon(1e-3));
      CHECK(f.amplitude * std::pow(f.r_lo, -f.nu) > 0.0);
    }
}

TEST_CASE("halving the window keeps the exponent") {
  const auto s = sample(30.0, 300.0, 4000, [](double r) { return std::sin(r + 0.2) * std::pow(r, -3.5); });
  const double whole = fit_tail(s.r, s.v).nu;
  CHECK(std::abs(fit_tail(s.r, s.v, Window{30.0, 165.0}).nu - whole) < 0.05);
  CHECK(std::abs(fit_tail(s.r, s.v, Window{165.0, 300.0}).nu - whole) < 0.05);
}

TEST_CASE("scale invariance") {
  const auto s = sample(30.0, 300.0, 2000, [](double r) { return std::cos(1.3 * r + 0.4) * std::pow(r, -3.2); });
  auto scaled = s;
  for (double &v : scaled.v) v *= 37.5;
  const auto f = fit_tail(s.r, s.v);
  const auto g = fit_tail(scaled.r, scaled.v);
  CHECK(std::abs(f.nu - g.nu) < 1e-10);
  CHECK(std::abs(f.k - g.k) < 1e-10);
  CHECK(std::abs(f.phase - g.phase) < 1e-10);
  CHECK(g.amplitude / f.amplitude == doctest::Approx(37.5).epsilon(1e-10));
}

TEST_CASE("rejected inputs") {
  auto s = sample(30.0, 300.0, 2000, [](double r) { return std::cos(r) / (r * r * r); });
  std::mt19937 rng(12345);
  std::normal_distribution<double> noise(0.0, 1e-5);
  auto noisy = s;
  for (double &v : noisy.v) v += noise(rng);
  CHECK(fit_error(noisy) == ErrorKind::NoisyProfile);

  const auto few = sample(30.0, 40.0, 2000, [](double r) { return std::cos(r) / (r * r * r); });
  CHECK(fit_error(few) == ErrorKind::InsufficientOscillations);

  const auto sparse = sample(30.0, 300.0, 150, [](double r) { return std::cos(r) / (r * r * r); });
  CHECK(fit_error(sparse) == ErrorKind::InvalidArgument);
  CHECK_THROWS_AS(fit_tail(s.r, s.v, Window{100.0, 50.0}), Error);
  s.v.pop_back();
  CHECK_THROWS_AS(fit_tail(s.r, s.v), Error);
}

TEST_CASE("plain power law") {
  const auto p = sample(2.0, 200.0, 500, [](double r) { return 7.0 / (r * r); });
  const auto f = fit_plain_power(p.r, p.v);
  CHECK(std::abs(f.exponent + 2.0) < 0.005);
  CHECK(f.power_law);

  const auto e = sample(1.0, 40.0, 500, [](double r) { return std::exp(-r); });
  const auto g = fit_plain_power(e.r, e.v);
  CHECK(std::abs(g.exponent_hi - g.exponent_lo) > 0.5);
  CHECK_FALSE(g.power_law);

  const auto osc = sample(1.0, 40.0, 500, [](double r) { return std::cos(r); });
  try {
    fit_plain_power(osc.r, osc.v);
    FAIL("expected a sign-change error");
  } catch (const Error &err) {
    CHECK(err.kind() == ErrorKind::InvalidArgument);
    CHECK(std::string(err.what()).find("fit_tail") != std::string::npos);
  }
}
