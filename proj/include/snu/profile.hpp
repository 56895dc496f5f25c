#pragma once

// Counting sets E_j(C, alpha), finite-scale wavelet profile estimates, S^nu
// membership checks and the ancillary distance d_{m,n}(f, 0).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "snu/nu_profile.hpp"
#include "snu/wavelet.hpp"

namespace snu {

// #E_j(C, alpha): coefficients at scale j with |c| >= C 2^{-j alpha}.
std::size_t count_large(const CoefficientField& field, double C, double alpha, int j);

struct ProfileOptions {
  int j_min = 2;
  int j_max = -1;  // -1: finest scale of the field
  std::vector<double> epsilon_schedule{0.5, 0.2, 0.1, 0.05};
};

struct ProfileEstimate {
  std::vector<double> alpha_grid;
  // Reported estimate at the last epsilon, after isotonic regularization.
  std::vector<double> nu_hat;
  // nu_hat_by_epsilon[e][a] for every epsilon in the schedule.
  std::vector<std::vector<double>> nu_hat_by_epsilon;
  // per_scale[a][j - j_min] = log2 #E_j(1, alpha_a + eps_last) / j, -inf for empty sets.
  std::vector<std::vector<double>> per_scale;
  std::vector<double> epsilon_schedule;
  int j_min = 0;
  int j_max = 0;
};

ProfileEstimate wavelet_profile(const CoefficientField& field, const std::vector<double>& alpha_grid,
                                const ProfileOptions& options = {});

// Pool-adjacent-violators fit of a non-decreasing sequence (unit weights).
// A leading run of -inf entries is kept as is.
std::vector<double> isotonic_nondecreasing(const std::vector<double>& values);

struct MembershipViolation {
  int j;
  double alpha;
  std::size_t count;
  double bound;
};

struct MembershipReport {
  bool pass = true;
  int j_start = 0;
  int j_end = 0;
  std::vector<double> alphas_checked;
  std::vector<MembershipViolation> violations;

  std::vector<int> violating_scales() const;
};

// Checks #E_j(C, alpha) <= 2^{(nu(alpha) + epsilon) j} for j_start <= j < field.levels()
// at every breakpoint alpha and every alpha in `extra_grid`.
MembershipReport check_membership(const CoefficientField& field, const NuProfile& nu, double epsilon,
                                  double C, int j_start, const std::vector<double>& extra_grid = {});

// inf { C > 0 : #E_j(C, alpha_m) <= C 2^{(nu(alpha_m) + epsilon_n) j} for all stored j }.
double ancillary_distance(const CoefficientField& field, const NuProfile& nu, double alpha_m,
                          double epsilon_n);

}  // namespace snu
