#include "taillab/correlation.hpp"

#include "taillab/error.hpp"

#include <cmath>

namespace taillab::correlation {

double suppression_factor(double r, double E_i) {
  if (!(E_i != 0.0)) throw Error(ErrorKind::InvalidArgument, "orbital energy must be nonzero");
  if (!(r > 0.0)) throw Error(ErrorKind::Domain, "correlation estimate needs r > 0");
  return 2.0 / (r * std::abs(E_i));
}

CorrelationEstimate correlation_tail(std::span<const double> r, std::span<const double> K,
                                     double E_i) {
  if (r.size() != K.size())
    throw Error(ErrorKind::InvalidArgument, "r and K samples differ in length");
  CorrelationEstimate out{{r.begin(), r.end()}, std::vector<double>(r.size()),
                          std::vector<double>(r.size()), E_i};
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.suppression[i] = suppression_factor(r[i], E_i);
    out.C[i] = out.suppression[i] * K[i];
  }
  return out;
}

double hydrogenic_1s_energy(double Z) {
  if (!(Z > 0.0)) throw Error(ErrorKind::InvalidArgument, "Z must be positive");
  return -0.5 * Z * Z;
}

} // namespace taillab::correlation
