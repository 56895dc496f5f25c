#pragma once

// Random wavelet series X_nu. At scale j the moduli are |c| = 2^{-j alpha}
// with alpha ~ rho_j, whose repartition function is
//
//   F_j(alpha) = 0                                     alpha <  alpha_min
//              = min(1, 2^{-jd} max(j^2, 2^{j nu(alpha)}))  alpha >= alpha_min
//
// Mass left over as alpha -> inf sits at alpha = +inf (coefficient 0).
// Phases are independent and uniform on [0, 2 pi).

#include <cstdint>
#include <vector>

#include "snu/nu_profile.hpp"
#include "snu/wavelet.hpp"

namespace snu {

// Smallest j >= 1 with j'^2 < 2^{j' d} for every j' >= j. Below it F_j can put
// all of its mass on the atom at alpha_min.
int min_scale(const NuProfile& nu);

class ScaleLaw {
 public:
  // Requires j >= 1 and 2^{jd} >= max(j^2, 2^{j nu(alpha_min)}).
  ScaleLaw(NuProfile nu, int j);

  int scale() const { return j_; }
  const NuProfile& profile() const { return nu_; }

  double cdf(double alpha) const;
  // log2(2^{jd} F_j(alpha)), -inf below alpha_min.
  double log2_expected_count(double alpha) const;
  double atom_at_alpha_min() const;
  double residual_mass_at_infinity() const;
  double continuous_mass() const;

  // Generalized inverse inf { a : F_j(a) >= u }, +inf for u above the finite mass.
  double sample(double u) const;

 private:
  NuProfile nu_;
  int j_;
  double alpha_min_;
};

double repartition(const NuProfile& nu, int j, double alpha);
double sample_scale_law(const NuProfile& nu, int j, double u);

struct SeriesSample {
  CoefficientField field;
  std::uint64_t seed;
  NuProfile nu;
  int j_min;
};

// Every lambda with j_min <= j < levels gets c = 2^{-j alpha} e^{i theta}; scales
// below j_min are zero. Draws are keyed by (seed, i, j, k).
SeriesSample generate_series(const NuProfile& nu, int levels, const WaveletFamily& family,
                             std::uint64_t seed);

struct ConditionCheck {
  int j;
  double alpha;
  double log2_count;   // log2(2^{jd} F_j(alpha))
  bool lower_bound_ok;  // 2^{jd} F_j(alpha) >= j^2 (alpha >= alpha_min only)
  double residual;      // log2_count / j - nu(alpha)
};

struct ConditionReport {
  bool lower_bound_holds = true;
  double max_abs_residual = 0.0;
  std::vector<ConditionCheck> checks;
};

// Checks the lower bound 2^{jd} rho_j((-inf, alpha]) >= j^2 and the rate
// log2(2^{jd} rho_j((-inf, alpha])) / j -> nu(alpha) on j in [j_lo, j_hi].
ConditionReport verify_conditions(const NuProfile& nu, int j_lo, int j_hi,
                                  const std::vector<double>& alpha_grid);

}  // namespace snu
