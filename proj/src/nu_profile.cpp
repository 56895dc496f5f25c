#include "snu/nu_profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace snu {

NuProfile::NuProfile(int dim, std::vector<Breakpoint> breakpoints)
    : dim_(dim), breakpoints_(std::move(breakpoints)) {
  if (dim < 1 || dim > 2) throw std::invalid_argument("NuProfile: dimension must be 1 or 2");
  if (breakpoints_.empty()) throw std::invalid_argument("NuProfile: profile is nowhere >= 0");
  for (std::size_t n = 0; n < breakpoints_.size(); ++n) {
    const auto& b = breakpoints_[n];
    if (!std::isfinite(b.alpha) || !std::isfinite(b.nu)) {
      throw std::invalid_argument("NuProfile: breakpoints must be finite");
    }
    if (b.nu < 0.0 || b.nu > static_cast<double>(dim)) {
      throw std::invalid_argument("NuProfile: values must lie in [0, d]");
    }
    if (n > 0) {
      const auto& p = breakpoints_[n - 1];
      if (!(b.alpha > p.alpha)) throw std::invalid_argument("NuProfile: alphas must be strictly increasing");
      if (b.nu < p.nu) throw std::invalid_argument("NuProfile: profile must be non-decreasing");
    }
  }
  if (breakpoints_.front().alpha < 0.0) {
    throw std::invalid_argument("NuProfile: alpha_min must be non-negative");
  }
}

NuProfile NuProfile::step(int dim, double alpha, double value) {
  return NuProfile(dim, {{alpha, value}});
}

double NuProfile::operator()(double alpha) const {
  if (std::isnan(alpha)) return alpha;
  if (alpha < breakpoints_.front().alpha) return kNegInf;
  if (alpha >= breakpoints_.back().alpha) return breakpoints_.back().nu;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), alpha,
                             [](double a, const Breakpoint& b) { return a < b.alpha; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
  return lo.nu + t * (hi.nu - lo.nu);
}

double alpha_min(const NuProfile& nu) {
  const double a = nu.stored_alpha_min();
  if (!(nu(a) >= 0.0) || nu(std::nextafter(a, kNegInf)) != kNegInf) {
    throw std::logic_error("alpha_min: inconsistent piecewise representation");
  }
  return a;
}

namespace {

// nu(h) = slope * h + intercept on the piece; h / nu(h) is monotone there.
struct Piece {
  double a;
  double b;  // +inf for the constant tail
  double nu_a;
  double nu_b;
  double slope;
};

std::vector<Piece> pieces(const NuProfile& nu) {
  const auto& bp = nu.breakpoints();
  std::vector<Piece> out;
  for (std::size_t n = 0; n + 1 < bp.size(); ++n) {
    const double s = (bp[n + 1].nu - bp[n].nu) / (bp[n + 1].alpha - bp[n].alpha);
    out.push_back({bp[n].alpha, bp[n + 1].alpha, bp[n].nu, bp[n + 1].nu, s});
  }
  out.push_back({bp.back().alpha, kPosInf, bp.back().nu, bp.back().nu, 0.0});
  return out;
}

// Limit of h / nu(h) at an endpoint of a piece.
double ratio_at(double h, double value, const Piece& p) {
  if (value > 0.0) return h / value;
  // value == 0: the ratio blows up unless h == 0 and nu is linear through the origin.
  if (h == 0.0 && p.slope > 0.0) return 1.0 / p.slope;
  return kPosInf;
}

// Limit of nu(h) / h at an endpoint h > 0 or h -> 0+.
double inverse_ratio_at(double h, double value, const Piece& p) {
  if (h > 0.0) return value / h;
  if (value > 0.0) return kPosInf;
  return p.slope;
}

}  // namespace

double alpha_max(const NuProfile& nu) {
  double best = kPosInf;
  for (const auto& p : pieces(nu)) {
    best = std::min(best, ratio_at(p.a, p.nu_a, p));
    if (std::isfinite(p.b)) best = std::min(best, ratio_at(p.b, p.nu_b, p));
  }
  return best;
}

double spectrum_dnu(const NuProfile& nu, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("spectrum_dnu: h must be positive");
  if (h > alpha_max(nu)) return static_cast<double>(nu.dim());
  if (h < nu.stored_alpha_min()) return kNegInf;
  double sup = kNegInf;
  for (const auto& p : pieces(nu)) {
    if (p.a > h) break;
    // nu(h') / h' = slope + intercept / h' is monotone on the piece: check both ends.
    sup = std::max(sup, inverse_ratio_at(p.a, p.nu_a, p));
    const double end = std::min(p.b, h);
    sup = std::max(sup, inverse_ratio_at(end, nu(end), p));
  }
  return std::min(h * sup, static_cast<double>(nu.dim()));
}

}  // namespace snu
