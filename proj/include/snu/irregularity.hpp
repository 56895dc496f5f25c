#pragma once

// Uniform and local irregularity exponents.
//
// The wavelet side uses the windowed statistic
//
//   K_j = max( sup_{j <= l <= j + [log2 j]} ||c_l||,
//              2^{-jM} sup_{j - [log2 j] <= l <= j} 2^{lM} ||c_l|| ),
//
// where ||c_l|| is the sup of |c_{l,k}^{(i)}| over wavelets supported in the
// cube. log2 K_j / (-j) tends to the irregularity exponent of f on the cube.
// The space side measures sup_{|h| <= r} ||Delta_h^M f|| directly on samples.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snu/dyadic_cube.hpp"
#include "snu/wavelet.hpp"

namespace snu {

class DegenerateEstimate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScaleRange {
  int lo = 0;
  int hi = -1;  // inclusive
  bool empty() const { return hi < lo; }
  int size() const { return empty() ? 0 : hi - lo + 1; }
};

// Grid offset in units of 2^{-J} per axis.
using GridOffset = std::array<std::int64_t, 2>;

// n-fold iterated periodic difference Delta_h^n f(x) = Delta_h^{n-1} (f(x + h) - f(x)).
SampledSignal finite_difference(const SampledSignal& signal, const GridOffset& h, int n);

struct HolderModulus {
  std::vector<double> r;  // radii that had a non-empty Omega_h
  std::vector<double> S;  // S(r) = sup_{|h| <= r} sup_{x in Omega_h} |Delta_h^M f(x)|
  std::vector<double> dropped_r;
  double slope = 0.0;  // least-squares slope of log2 S against log2 r (0 if < 2 usable radii)
  double r_squared = 0.0;
};

// Exhaustive discrete modulus on the closed cube. Omega_h keeps x and x + M h in the cube.
HolderModulus holder_modulus(const SampledSignal& signal, const DyadicCube& cube, int M,
                             const std::vector<double>& r_grid);

enum class WindowBranch { None, Upper, Lower };

struct WindowedStatistic {
  ScaleRange j_range;
  int M = 1;
  std::vector<double> K;  // K[j - j_range.lo]
  std::vector<WindowBranch> branch;
  std::vector<int> argmax_scale;  // scale l attaining K_j, -1 when K_j == 0
  std::vector<bool> clipped;      // window lost more than half its scales at the top
};

WindowedStatistic windowed_statistic(const CoefficientField& field, const DyadicCube& cube, int M,
                                     ScaleRange j_range);
WindowedStatistic windowed_statistic(const std::vector<std::optional<double>>& sup_norms, int M,
                                     ScaleRange j_range);

struct IrregularityEstimate {
  double exponent_hat = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  ScaleRange fit_range;
  std::vector<int> scales_used;
  DyadicCube cube;
  int M = 1;
  WindowedStatistic statistic;
};

// Scales with a non-empty I_j for this cube and field.
ScaleRange usable_scales(const CoefficientField& field, const DyadicCube& cube);
// Upper half of the usable scales.
ScaleRange default_fit_range(const CoefficientField& field, const DyadicCube& cube);

// Least-squares slope of log2 K_j against -j over the fit range. Scales with
// K_j == 0 are skipped; fewer than 3 remaining scales is a DegenerateEstimate.
IrregularityEstimate uniform_irregularity_exponent(const CoefficientField& field, const DyadicCube& cube,
                                                   int M, std::optional<ScaleRange> fit_range = {});

struct LocalIrregularityEstimate {
  double exponent_hat = 0.0;
  std::vector<IrregularityEstimate> per_generation;
  int argmax_generation = -1;
};

// Supremum over m in m_range of the uniform exponent on the generation-m cube holding x0.
LocalIrregularityEstimate local_irregularity_exponent(const CoefficientField& field,
                                                      const std::vector<double>& x0,
                                                      const std::vector<int>& m_range, int M);

// sup_j ||c_j|| 2^{alpha j} over scales with a non-empty I_j; alpha in (0, 1).
double uniform_holder_check(const CoefficientField& field, double alpha, const DyadicCube& cube);

// M = [alpha] + 1 with [alpha] the greatest integer strictly below alpha.
int difference_order(double alpha);

}  // namespace snu
