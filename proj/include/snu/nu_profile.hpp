#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace snu {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

struct Breakpoint {
  double alpha;
  double nu;
};

// Admissible profile nu : R -> {-inf} u [0, d]. Piecewise linear between
// breakpoints, -inf left of the first one, constant right of the last one.
// A jump at the left end needs no extra breakpoint; interior steps are
// encoded as two breakpoints 1e-9 apart.
class NuProfile {
 public:
  NuProfile(int dim, std::vector<Breakpoint> breakpoints);

  // Profile equal to -inf below `alpha` and `value` from `alpha` on.
  static NuProfile step(int dim, double alpha, double value);

  int dim() const { return dim_; }
  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }

  double operator()(double alpha) const;
  double sup_value() const { return breakpoints_.back().nu; }
  double stored_alpha_min() const { return breakpoints_.front().alpha; }

 private:
  int dim_;
  std::vector<Breakpoint> breakpoints_;
};

// inf { alpha : nu(alpha) >= 0 }, cross-checked against the evaluated profile.
double alpha_min(const NuProfile& nu);

// inf_{h >= alpha_min, nu(h) > 0} h / nu(h); +inf when nu vanishes wherever finite.
double alpha_max(const NuProfile& nu);

// h sup_{0 < h' <= h} nu(h') / h' for h <= alpha_max, d otherwise.
double spectrum_dnu(const NuProfile& nu, double h);

}  // namespace snu
