#include "snu/random_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "snu/rng.hpp"

namespace snu {

namespace {

bool valid_scale(const NuProfile& nu, int j) {
  if (j < 1) return false;
  const double jj = static_cast<double>(j) * j;
  const double full = std::ldexp(1.0, j * nu.dim());
  return full >= std::max(jj, std::exp2(j * nu(nu.stored_alpha_min())));
}

}  // namespace

int min_scale(const NuProfile& nu) {
  const int d = nu.dim();
  int first = 1;
  // j^2 < 2^{jd} holds for every j > 64 once it holds around there.
  for (int j = 1; j <= 64; ++j) {
    if (!(static_cast<double>(j) * j < std::ldexp(1.0, j * d))) first = j + 1;
  }
  return first;
}

ScaleLaw::ScaleLaw(NuProfile nu, int j) : nu_(std::move(nu)), j_(j), alpha_min_(alpha_min(nu_)) {
  if (!valid_scale(nu_, j)) {
    throw std::invalid_argument("ScaleLaw: scale " + std::to_string(j) +
                                " too small, 2^{jd} < max(j^2, 2^{j nu(alpha_min)})");
  }
}

double ScaleLaw::cdf(double alpha) const {
  if (alpha < alpha_min_) return 0.0;
  if (alpha == kPosInf) return 1.0;
  const double jj = static_cast<double>(j_) * j_;
  const double count = std::max(jj, std::exp2(static_cast<double>(j_) * nu_(alpha)));
  return std::min(1.0, std::ldexp(count, -j_ * nu_.dim()));
}

double ScaleLaw::log2_expected_count(double alpha) const {
  if (alpha < alpha_min_) return kNegInf;
  const double j = static_cast<double>(j_);
  const double d = static_cast<double>(nu_.dim());
  return std::min(j * d, std::max(2.0 * std::log2(j), j * nu_(alpha)));
}

double ScaleLaw::atom_at_alpha_min() const { return cdf(alpha_min_); }

double ScaleLaw::residual_mass_at_infinity() const {
  return 1.0 - cdf(std::max(alpha_min_, nu_.breakpoints().back().alpha));
}

double ScaleLaw::continuous_mass() const {
  return 1.0 - atom_at_alpha_min() - residual_mass_at_infinity();
}

double ScaleLaw::sample(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("sample_scale_law: u must lie in (0, 1)");
  if (u <= atom_at_alpha_min()) return alpha_min_;
  // Beyond the atom F_j(a) >= u  <=>  nu(a) >= d + log2(u) / j.
  const double target = static_cast<double>(nu_.dim()) + std::log2(u) / static_cast<double>(j_);
  const auto& bp = nu_.breakpoints();
  if (target > bp.back().nu) return kPosInf;
  auto it = std::find_if(bp.begin(), bp.end(), [target](const Breakpoint& b) { return b.nu >= target; });
  if (it == bp.begin()) return alpha_min_;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (target - lo.nu) / (hi.nu - lo.nu);
  return std::clamp(lo.alpha + t * (hi.alpha - lo.alpha), lo.alpha, hi.alpha);
}

double repartition(const NuProfile& nu, int j, double alpha) { return ScaleLaw(nu, j).cdf(alpha); }

double sample_scale_law(const NuProfile& nu, int j, double u) { return ScaleLaw(nu, j).sample(u); }

SeriesSample generate_series(const NuProfile& nu, int levels, const WaveletFamily& family,
                             std::uint64_t seed) {
  const int j_min = min_scale(nu);
  if (levels <= j_min) {
    throw std::invalid_argument("generate_series: need scales above j_min = " + std::to_string(j_min));
  }
  CoefficientField field(nu.dim(), levels, family);
  for (int j = j_min; j < levels; ++j) {
    const ScaleLaw law(nu, j);
    auto s = field.scale(j);
    for (std::size_t n = 0; n < s.size(); ++n) {
      const DyadicIndex idx = field.index_of(j, n);
      const std::uint64_t key = hash_words(seed, {static_cast<std::uint64_t>(idx.i),
                                                  static_cast<std::uint64_t>(idx.j),
                                                  static_cast<std::uint64_t>(idx.k[0]),
                                                  static_cast<std::uint64_t>(idx.k[1])});
      const double alpha = law.sample(to_open_unit(mix64(key ^ 0x1ULL)));
      const double theta = 2.0 * std::numbers::pi * to_open_unit(mix64(key ^ 0x2ULL));
      s[n] = std::isfinite(alpha) ? std::polar(std::exp2(-static_cast<double>(j) * alpha), theta)
                                  : Complex{0.0, 0.0};
    }
  }
  return SeriesSample{std::move(field), seed, nu, j_min};
}

ConditionReport verify_conditions(const NuProfile& nu, int j_lo, int j_hi,
                                  const std::vector<double>& alpha_grid) {
  ConditionReport rep;
  const double amin = alpha_min(nu);
  const double d = static_cast<double>(nu.dim());
  for (int j = j_lo; j <= j_hi; ++j) {
    const ScaleLaw law(nu, j);
    const double jd = static_cast<double>(j);
    for (double alpha : alpha_grid) {
      ConditionCheck c{j, alpha, law.log2_expected_count(alpha), true, 0.0};
      if (alpha >= amin) {
        // Evaluated through the law itself so a faulty cdf cannot pass by construction.
        const double count = std::ldexp(law.cdf(alpha), j * nu.dim());
        c.lower_bound_ok = count >= jd * jd * (1.0 - 1e-12);
        c.residual = std::min(d, std::max(2.0 * std::log2(jd) / jd, nu(alpha))) - nu(alpha);
        rep.lower_bound_holds = rep.lower_bound_holds && c.lower_bound_ok;
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(c.residual));
      }
      rep.checks.push_back(c);
    }
  }
  return rep;
}

}  // namespace snu
