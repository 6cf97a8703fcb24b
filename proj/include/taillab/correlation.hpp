#pragma once

#include <span>
#include <vector>

namespace taillab::correlation {

struct CorrelationEstimate {
  std::vector<double> r;
  std::vector<double> C;
  std::vector<double> suppression; // C / K = 2 / (r |E_i|)
  double E_i = 0.0;
};

/// C(r) = 2 K(r) / (r |E_i|) in atomic units.
CorrelationEstimate correlation_tail(std::span<const double> r, std::span<const double> K,
                                     double E_i);

/// 2 / (r |E_i|)
double suppression_factor(double r, double E_i);

/// Energy -Z^2/2 of a hydrogenic 1s level.
double hydrogenic_1s_energy(double Z);

} // namespace taillab::correlation
