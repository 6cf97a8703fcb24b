#pragma once

#include "taillab/numerics.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace taillab::atom {

/// Sampled radial function xi(r) = r phi(r).
struct Orbital {
  RadialGrid grid;
  std::vector<double> xi;
  int n = 0; // principal quantum number, 0 when not meaningful
  int l = 0;
  double energy = 0.0; // Hartree
  std::string label;
  bool normalized = false;
};

/// One multipole term C_nk b_nk xi_n(r) / r^(k+1) of the exchange source.
struct ExchangeTerm {
  std::string label; // occupied orbital label
  int k = 0;
  double coefficient = 0.0; // C_nk
  double moment = 0.0;      // b_nk
};

struct ExchangeSource {
  RadialGrid grid;
  std::vector<double> K;
  std::vector<ExchangeTerm> terms;
};

/// Local potential U(r) plus the centrifugal term for angular momentum l.
struct EffectivePotential {
  RadialGrid grid;
  std::vector<double> U;
  int l = 0;

  std::vector<double> ueff() const;
};

struct OccupiedShell {
  Orbital orbital;
  double occupancy = 1.0; // fraction of the same-spin shell that is filled
};

/// C_nk(target, occupied shell, k). Defaults to standard_coefficient.
using CoefficientRule = std::function<double(const Orbital &target, const OccupiedShell &shell, int k)>;

// ---------------------------------------------------------------------------
// grids and model inputs

/// LogUniform grid from 1e-6/Z to rmax_factor * outer_radius.
RadialGrid default_grid(double Z, double outer_radius, std::size_t points = 4000,
                        double rmax_factor = 40.0);

/// <r> of a hydrogenic orbital: (3 n^2 - l(l+1)) / (2 Z).
double hydrogenic_mean_radius(double Z, int n, int l);

/// Normalized hydrogenic xi_nl(r; Z), energy -Z^2/(2 n^2).
Orbital hydrogenic_orbital(double Z, int n, int l, const RadialGrid &grid);

/// U(r) = -Z(r)/r with Z(r) = 1 + (Z-1) exp(-r/r_s) when a screening radius
/// is given, pure Coulomb otherwise.
EffectivePotential coulomb_potential(double Z, int l, const RadialGrid &grid,
                                     std::optional<double> screening_radius = std::nullopt);

// ---------------------------------------------------------------------------
// exchange source

/// (l1 l2 l3; 0 0 0)
double three_j_zero(int l1, int l2, int l3);
/// occupancy * <l_i||C^k||l_n>^2 / (2 l_i + 1), zero unless the triangle and
/// parity rules hold.
double standard_coefficient(int l_target, int l_occupied, int k, double occupancy = 1.0);

/// b_nk = int r^k xi_n xi_i dr
double moment_b(const Orbital &n_orbital, const Orbital &i_orbital, int k);

/// K_i(r) = sum_{k=1..k_max, n} C_nk b_nk xi_n(r) / r^(k+1)
ExchangeSource exchange_source(const Orbital &target, std::span<const OccupiedShell> occupied,
                               int k_max, const CoefficientRule &rule = {});

// ---------------------------------------------------------------------------
// induced tail

/// Outermost radius where U_eff - E changes sign, if any.
std::optional<double> turning_point(const EffectivePotential &potential, double energy);

/// Inversion series K/(U_eff-E) [+ (1/(2(U_eff-E))) d^2/dr^2 K/(U_eff-E)] on
/// the whole grid of the inputs. order is 1 or 2.
std::vector<double> solve_induced_series(const ExchangeSource &source,
                                         const EffectivePotential &potential, double energy,
                                         int order);

/// Banded solve of [-1/2 d^2/dr^2 + U_eff - E] xi = K with xi = 0 at both
/// ends of the grid.
std::vector<double> solve_induced_direct(const ExchangeSource &source,
                                         const EffectivePotential &potential, double energy);

/// Strict sign changes of f on [lo, hi], ignoring samples below
/// 1e-14 * max|f| in the window.
int count_nodes(std::span<const double> r, std::span<const double> f, double lo, double hi);

struct ComposedOrbital {
  std::vector<double> xi;
  std::optional<double> crossover; // first r with |xi_ind| > |xi_free|
};

ComposedOrbital compose_orbital(const Orbital &free, std::span<const double> induced);

// ---------------------------------------------------------------------------
// helpers for comparing tails

/// max |f| over r' in [r/spread, r*spread] for each sample.
std::vector<double> local_envelope(std::span<const double> r, std::span<const double> f,
                                   double spread = 2.0);

/// Restriction of a sampled function to grid indices [begin, end).
ExchangeSource restrict_source(const ExchangeSource &source, std::size_t begin, std::size_t end);
EffectivePotential restrict_potential(const EffectivePotential &potential, std::size_t begin,
                                      std::size_t end);

// ---------------------------------------------------------------------------
// end-to-end model: inner s orbital of a heavy atom with an outer-shell source

struct TailModelConfig {
  double Z = 54.0;
  int target_n = 1, target_l = 0;
  double source_Z = 5.0;
  int source_n = 5, source_l = 1;
  int k_max = 1;
  std::size_t grid_points = 4000;
  double rmax_factor = 40.0;
  std::optional<double> screening_radius;
  bool run_series = true;
  bool run_direct = true;
};

struct TailModelResult {
  RadialGrid grid;
  Orbital free;
  Orbital source;
  ExchangeSource exchange;
  double energy = 0.0;
  double turning_point = 0.0;
  std::size_t window_begin = 0; // first grid index beyond the turning point
  // full-grid samples, zero below window_begin
  std::vector<double> series1, series2, direct;
  std::vector<double> total; // xi_free + best available induced tail
  std::optional<double> crossover;
  int nodes_free = 0;
  int nodes_total = 0;
  double tail_constant = 0.0;        // mean xi_ind r^2 / xi_source over the outer decade
  double tail_constant_spread = 0.0; // (max - min) / |mean| over the same range
};

TailModelResult run_tail_model(const TailModelConfig &config);

/// Outer decade [r_hi/10, r_hi] of a model run, stopping short of the outer
/// boundary layer (r_hi at 98% of the window in ln r).
std::pair<double, double> outer_decade(const TailModelResult &result);

/// Largest |series - direct| relative to the factor-2 local envelope of the
/// composed orbital. Order 2 is measured from the first radius beyond the
/// turning point where U_eff - E >= 0.1 |E|, order 1 from r > 10/Z; both stop
/// at the upper end of the outer decade.
struct SeriesAccuracy {
  double order1 = 0.0;
  double order2 = 0.0;
  double order1_from = 0.0;
  double order2_from = 0.0;
  double to = 0.0;
};

SeriesAccuracy series_accuracy(const TailModelResult &result, const TailModelConfig &config);

} // namespace taillab::atom
