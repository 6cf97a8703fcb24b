#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace taillab::kernels {

enum class Normalization {
  PaperForm,       // bare bracketed closed forms
  OracleNormalized // scaled so g(0) is the one-spin Fermi-gas density
};

struct KernelSpec {
  int dimension = 3;
  double k_f = 1.0; // inverse Bohr
  Normalization normalization = Normalization::OracleNormalized;

  void validate() const;
};

/// Below this value of k_f R the closed forms switch to their Taylor series.
inline constexpr double taylor_threshold = 1e-4;

/// One-spin density-matrix kernel of a free-electron gas as a function of
/// the separation length R >= 0 (removable singularity at R = 0 handled).
double g_closed(const KernelSpec &spec, double R);

/// Factor c_d with g_oracle_normalized = c_d * g_paper_form.
double oracle_scale(int dimension, double k_f);

/// g_closed(0) under OracleNormalized: k_f/pi, k_f^2/(4 pi), k_f^3/(6 pi^2).
double fermi_gas_density(int dimension, double k_f);

/// Plane waves k_n = 2 pi n / L in a periodic box of side L, occupied for
/// |k_n| <= k_f (with a 1e-12 relative tie margin).
class DiscreteBand {
public:
  DiscreteBand(int dimension, double L, double k_f);

  int dimension() const { return dimension_; }
  double box_length() const { return L_; }
  double k_f() const { return k_f_; }
  std::size_t state_count() const { return states_.size() / std::size_t(dimension_); }
  /// Integer lattice vector of state i.
  std::array<int, 3> state(std::size_t i) const;
  /// F / L^d
  double density() const;
  /// Fermi momentum of the continuum ball holding the same number of states
  /// (pi F / L in one dimension).
  double effective_k_f() const;

private:
  int dimension_;
  double L_;
  double k_f_;
  std::vector<int> states_; // flattened, dimension_ entries per state
};

/// Brute-force (1/L^d) sum_n exp(i k_n . R); returns the real part after
/// checking that the imaginary part cancels.
double g_oracle(const DiscreteBand &band, const std::array<double, 3> &R);

} // namespace taillab::kernels
