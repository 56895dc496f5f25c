#include "snu/profile.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace snu {

namespace {

void check_scale(const CoefficientField& field, int j, const char* who) {
  if (j < 0 || j >= field.levels()) {
    throw std::invalid_argument(std::string(who) + ": scale " + std::to_string(j) +
                                " outside the stored range");
  }
}

// Moduli produced as |r e^{i theta}| can land a few ulps below r, so a tie
// at the threshold is accepted within this relative slack.
constexpr double kTieSlack = 1e-12;

double threshold(double C, double alpha, int j) {
  return C * std::exp2(-static_cast<double>(j) * alpha) * (1.0 - kTieSlack);
}

// Moduli of scale j sorted in decreasing order.
std::vector<double> sorted_moduli(const CoefficientField& field, int j) {
  std::vector<double> m;
  const auto s = field.scale(j);
  m.reserve(s.size());
  for (const auto& c : s) m.push_back(std::abs(c));
  std::sort(m.begin(), m.end(), std::greater<>());
  return m;
}

std::size_t count_at_least(const std::vector<double>& desc, double t) {
  // First element strictly below t.
  auto it = std::partition_point(desc.begin(), desc.end(), [t](double v) { return v >= t; });
  return static_cast<std::size_t>(it - desc.begin());
}

}  // namespace

std::size_t count_large(const CoefficientField& field, double C, double alpha, int j) {
  if (!(C > 0.0)) throw std::invalid_argument("count_large: C must be positive");
  check_scale(field, j, "count_large");
  const double t = threshold(C, alpha, j);
  std::size_t n = 0;
  for (const auto& c : field.scale(j)) {
    if (std::abs(c) >= t) ++n;
  }
  return n;
}

std::vector<double> isotonic_nondecreasing(const std::vector<double>& values) {
  std::vector<double> out = values;
  std::size_t start = 0;
  while (start < out.size() && out[start] == kNegInf) ++start;

  struct Block {
    double sum;
    std::size_t n;
    double mean() const { return sum / static_cast<double>(n); }
  };
  std::vector<Block> blocks;
  for (std::size_t i = start; i < out.size(); ++i) {
    // A -inf after finite values cannot be pooled; treat it as the lowest finite level.
    const double v = out[i] == kNegInf ? (blocks.empty() ? 0.0 : blocks.front().mean()) : out[i];
    blocks.push_back({v, 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().n += top.n;
    }
  }
  std::size_t i = start;
  for (const auto& b : blocks) {
    for (std::size_t t = 0; t < b.n; ++t) out[i++] = b.mean();
  }
  return out;
}

ProfileEstimate wavelet_profile(const CoefficientField& field, const std::vector<double>& alpha_grid,
                                const ProfileOptions& options) {
  ProfileEstimate est;
  est.alpha_grid = alpha_grid;
  est.epsilon_schedule = options.epsilon_schedule;
  est.j_min = options.j_min;
  est.j_max = options.j_max < 0 ? field.finest_scale() : options.j_max;
  if (est.j_min < 2) throw std::invalid_argument("wavelet_profile: j_min must be at least 2");
  if (est.j_max > field.finest_scale()) {
    throw std::invalid_argument("wavelet_profile: j_max exceeds the finest stored scale");
  }
  if (est.j_max < est.j_min) throw std::invalid_argument("wavelet_profile: empty scale range");
  if (est.epsilon_schedule.empty()) throw std::invalid_argument("wavelet_profile: empty epsilon schedule");
  for (std::size_t e = 0; e < est.epsilon_schedule.size(); ++e) {
    if (!(est.epsilon_schedule[e] > 0.0) ||
        (e > 0 && !(est.epsilon_schedule[e] < est.epsilon_schedule[e - 1]))) {
      throw std::invalid_argument("wavelet_profile: epsilon schedule must be positive and decreasing");
    }
  }

  const double d = static_cast<double>(field.dim());
  std::vector<std::vector<double>> moduli;
  for (int j = est.j_min; j <= est.j_max; ++j) moduli.push_back(sorted_moduli(field, j));

  auto log_rate = [&](double alpha, int j) {
    const auto n = count_at_least(moduli[static_cast<std::size_t>(j - est.j_min)], threshold(1.0, alpha, j));
    return n == 0 ? kNegInf : std::log2(static_cast<double>(n)) / static_cast<double>(j);
  };

  for (double eps : est.epsilon_schedule) {
    std::vector<double> raw;
    raw.reserve(alpha_grid.size());
    for (double alpha : alpha_grid) {
      double best = kNegInf;
      for (int j = est.j_min; j <= est.j_max; ++j) best = std::max(best, log_rate(alpha + eps, j));
      // (2^d - 1) orientations inflate the count by a factor that vanishes in the limit.
      raw.push_back(std::min(best, d));
    }
    est.nu_hat_by_epsilon.push_back(isotonic_nondecreasing(raw));
  }
  est.nu_hat = est.nu_hat_by_epsilon.back();

  const double eps_last = est.epsilon_schedule.back();
  for (double alpha : alpha_grid) {
    std::vector<double> row;
    for (int j = est.j_min; j <= est.j_max; ++j) row.push_back(log_rate(alpha + eps_last, j));
    est.per_scale.push_back(std::move(row));
  }
  return est;
}

std::vector<int> MembershipReport::violating_scales() const {
  std::set<int> s;
  for (const auto& v : violations) s.insert(v.j);
  return {s.begin(), s.end()};
}

MembershipReport check_membership(const CoefficientField& field, const NuProfile& nu, double epsilon,
                                  double C, int j_start, const std::vector<double>& extra_grid) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("check_membership: epsilon must be positive");
  if (!(C > 0.0)) throw std::invalid_argument("check_membership: C must be positive");
  if (j_start < 0 || j_start > field.levels()) {
    throw std::invalid_argument("check_membership: j_start outside the stored range");
  }
  MembershipReport rep;
  rep.j_start = j_start;
  rep.j_end = field.finest_scale();
  std::set<double> alphas(extra_grid.begin(), extra_grid.end());
  for (const auto& b : nu.breakpoints()) alphas.insert(b.alpha);
  rep.alphas_checked.assign(alphas.begin(), alphas.end());

  for (int j = j_start; j < field.levels(); ++j) {
    const auto desc = sorted_moduli(field, j);
    for (double alpha : rep.alphas_checked) {
      const std::size_t n = count_at_least(desc, threshold(C, alpha, j));
      const double v = nu(alpha);
      const double bound = v == kNegInf ? 0.0 : std::exp2((v + epsilon) * static_cast<double>(j));
      if (static_cast<double>(n) > bound) rep.violations.push_back({j, alpha, n, bound});
    }
  }
  rep.pass = rep.violations.empty();
  return rep;
}

double ancillary_distance(const CoefficientField& field, const NuProfile& nu, double alpha_m,
                          double epsilon_n) {
  if (!(epsilon_n > 0.0)) throw std::invalid_argument("ancillary_distance: epsilon must be positive");
  const double v = nu(alpha_m);
  // Scale j on its own is feasible for C > t_{n+1} and C >= n / B_j, where t is the
  // decreasing sequence |c| 2^{j alpha_m} and n counts the coefficients left above C.
  // The all-scales infimum is the max of the per-scale infima.
  double result = 0.0;
  for (int j = 0; j < field.levels(); ++j) {
    const double bound = v == kNegInf ? 0.0 : std::exp2((v + epsilon_n) * static_cast<double>(j));
    std::vector<double> t = sorted_moduli(field, j);
    const double scale = std::exp2(static_cast<double>(j) * alpha_m);
    for (auto& x : t) x *= scale;
    double best = kPosInf;
    for (std::size_t n = 0; n <= t.size(); ++n) {
      const double next = n < t.size() ? t[n] : 0.0;
      double need = next;
      if (n > 0) need = bound > 0.0 ? std::max(next, static_cast<double>(n) / bound) : kPosInf;
      best = std::min(best, need);
      if (next == 0.0) break;
    }
    result = std::max(result, best);
  }
  return result;
}

}  // namespace snu
