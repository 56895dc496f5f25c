#include "snu/irregularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace snu {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

int window_width(int j) {
  if (j < 2) return 0;
  return static_cast<int>(std::floor(std::log2(static_cast<double>(j))));
}

std::vector<double> binomial_row(int n) {
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 1.0);
  for (int t = 1; t < n; ++t) {
    c[static_cast<std::size_t>(t)] = c[static_cast<std::size_t>(t) - 1] * (n - t + 1) / t;
  }
  return c;
}

}  // namespace

int difference_order(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("difference_order: alpha must be positive");
  return static_cast<int>(std::ceil(alpha) - 1.0) + 1;
}

SampledSignal finite_difference(const SampledSignal& signal, const GridOffset& h, int n) {
  if (n < 1) throw std::invalid_argument("finite_difference: order must be at least 1");
  SampledSignal cur = signal;
  const std::int64_t N = signal.points_per_axis();
  for (int step = 0; step < n; ++step) {
    SampledSignal next(signal.dim(), signal.grid_scale());
    if (signal.dim() == 1) {
      for (std::int64_t x = 0; x < N; ++x) next.at(x) = cur.at(x + h[0]) - cur.at(x);
    } else {
      for (std::int64_t x = 0; x < N; ++x)
        for (std::int64_t y = 0; y < N; ++y) next.at(x, y) = cur.at(x + h[0], y + h[1]) - cur.at(x, y);
    }
    cur = std::move(next);
  }
  return cur;
}

HolderModulus holder_modulus(const SampledSignal& signal, const DyadicCube& cube, int M,
                             const std::vector<double>& r_grid) {
  if (M < 1) throw std::invalid_argument("holder_modulus: order must be at least 1");
  if (cube.dim() != signal.dim()) throw std::invalid_argument("holder_modulus: dimension mismatch");
  const int J = signal.grid_scale();
  if (cube.m > J) throw std::invalid_argument("holder_modulus: cube finer than the sampling grid");
  const std::int64_t side = std::int64_t{1} << (J - cube.m);
  const double N = std::ldexp(1.0, J);
  const auto coef = binomial_row(M);

  // Offset radii in grid units; r is kept when every |h| <= r leaves Omega_h non-empty.
  HolderModulus out;
  std::vector<std::int64_t> radius;
  for (double r : r_grid) {
    if (!(r > 0.0)) throw std::invalid_argument("holder_modulus: radii must be positive");
    const auto hmax = static_cast<std::int64_t>(std::floor(r * N * (1.0 + 1e-12)));
    if (hmax < 1 || M * hmax > side) {
      out.dropped_r.push_back(r);
      continue;
    }
    out.r.push_back(r);
    radius.push_back(hmax);
  }
  if (radius.empty()) return out;
  const std::int64_t hmax_all = *std::max_element(radius.begin(), radius.end());

  auto diff_at = [&](std::int64_t x1, std::int64_t x2, std::int64_t h1, std::int64_t h2) {
    Complex acc{0.0, 0.0};
    for (int t = 0; t <= M; ++t) {
      const double sign = ((M - t) % 2 == 0) ? 1.0 : -1.0;
      acc += sign * coef[static_cast<std::size_t>(t)] * signal.at(x1 + t * h1, x2 + t * h2);
    }
    return std::abs(acc);
  };

  const std::int64_t a1 = cube.r[0] * side;
  // best[h] for d = 1; for d = 2 keyed by squared length.
  if (signal.dim() == 1) {
    std::vector<double> best(static_cast<std::size_t>(hmax_all) + 1, 0.0);
    for (std::int64_t h = 1; h <= hmax_all; ++h) {
      double b = 0.0;
      for (std::int64_t x = a1; x + M * h <= a1 + side; ++x) b = std::max(b, diff_at(x, 0, h, 0));
      best[static_cast<std::size_t>(h)] = b;
    }
    for (std::size_t i = 1; i < best.size(); ++i) best[i] = std::max(best[i], best[i - 1]);
    for (auto hm : radius) out.S.push_back(best[static_cast<std::size_t>(hm)]);
  } else {
    const std::int64_t a2 = cube.r[1] * side;
    const std::int64_t limit = hmax_all * hmax_all;
    std::vector<std::pair<std::int64_t, double>> by_len;
    for (std::int64_t h1 = 0; h1 <= hmax_all; ++h1) {
      for (std::int64_t h2 = -hmax_all; h2 <= hmax_all; ++h2) {
        if (h1 == 0 && h2 <= 0) continue;  // h and -h give the same set of values
        const std::int64_t len2 = h1 * h1 + h2 * h2;
        if (len2 > limit) continue;
        if (M * h1 > side || M * std::abs(h2) > side) continue;
        double b = 0.0;
        const std::int64_t y_lo = a2 + std::max<std::int64_t>(0, -M * h2);
        const std::int64_t y_hi = a2 + side - std::max<std::int64_t>(0, M * h2);
        for (std::int64_t x = a1; x + M * h1 <= a1 + side; ++x)
          for (std::int64_t y = y_lo; y <= y_hi; ++y) b = std::max(b, diff_at(x, y, h1, h2));
        by_len.emplace_back(len2, b);
      }
    }
    for (auto hm : radius) {
      double s = 0.0;
      for (const auto& [len2, b] : by_len)
        if (len2 <= hm * hm) s = std::max(s, b);
      out.S.push_back(s);
    }
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < out.r.size(); ++i) {
    if (out.S[i] > 0.0) {
      lx.push_back(std::log2(out.r[i]));
      ly.push_back(std::log2(out.S[i]));
    }
  }
  if (lx.size() >= 2) {
    const auto f = least_squares(lx, ly);
    out.slope = f.slope;
    out.r_squared = f.r_squared;
  }
  return out;
}

WindowedStatistic windowed_statistic(const std::vector<std::optional<double>>& sup_norms, int M,
                                     ScaleRange j_range) {
  if (M < 1) throw std::invalid_argument("windowed_statistic: order must be at least 1");
  if (j_range.empty()) throw std::invalid_argument("windowed_statistic: empty scale range");
  const int top = static_cast<int>(sup_norms.size()) - 1;
  WindowedStatistic ws;
  ws.j_range = j_range;
  ws.M = M;
  bool any_window = false;
  for (int j = j_range.lo; j <= j_range.hi; ++j) {
    const int w = window_width(j);
    double upper = 0.0, lower = 0.0;
    int arg_upper = -1, arg_lower = -1;
    for (int l = std::max(j, 0); l <= std::min(j + w, top); ++l) {
      const auto& s = sup_norms[static_cast<std::size_t>(l)];
      if (!s) continue;
      any_window = true;
      if (*s > upper) {
        upper = *s;
        arg_upper = l;
      }
    }
    for (int l = std::max(j - w, 0); l <= std::min(j, top); ++l) {
      const auto& s = sup_norms[static_cast<std::size_t>(l)];
      if (!s) continue;
      any_window = true;
      const double v = std::exp2(static_cast<double>((l - j) * M)) * *s;
      if (v > lower) {
        lower = v;
        arg_lower = l;
      }
    }
    const int lost = std::max(0, j + w - top);
    ws.clipped.push_back(2 * lost > w + 1);
    if (upper == 0.0 && lower == 0.0) {
      ws.K.push_back(0.0);
      ws.branch.push_back(WindowBranch::None);
      ws.argmax_scale.push_back(-1);
    } else if (upper >= lower) {
      ws.K.push_back(upper);
      ws.branch.push_back(WindowBranch::Upper);
      ws.argmax_scale.push_back(arg_upper);
    } else {
      ws.K.push_back(lower);
      ws.branch.push_back(WindowBranch::Lower);
      ws.argmax_scale.push_back(arg_lower);
    }
  }
  if (!any_window) throw DegenerateEstimate("windowed_statistic: every window is empty");
  return ws;
}

WindowedStatistic windowed_statistic(const CoefficientField& field, const DyadicCube& cube, int M,
                                     ScaleRange j_range) {
  return windowed_statistic(sup_norm_per_scale(field, cube), M, j_range);
}

ScaleRange usable_scales(const CoefficientField& field, const DyadicCube& cube) {
  ScaleRange r{0, -1};
  for (int j = 0; j < field.levels(); ++j) {
    if (!support_box(field.family(), cube, j).empty()) {
      r.lo = j;
      r.hi = field.levels() - 1;
      break;
    }
  }
  return r;
}

ScaleRange default_fit_range(const CoefficientField& field, const DyadicCube& cube) {
  ScaleRange u = usable_scales(field, cube);
  if (u.empty()) return u;
  const int lo = std::max(u.lo, 1);
  if (lo > u.hi) return {lo, u.hi};
  return {lo + (u.hi - lo) / 2, u.hi};
}

IrregularityEstimate uniform_irregularity_exponent(const CoefficientField& field, const DyadicCube& cube,
                                                   int M, std::optional<ScaleRange> fit_range) {
  IrregularityEstimate est;
  est.cube = cube;
  est.M = M;
  est.fit_range = fit_range ? *fit_range : default_fit_range(field, cube);
  if (est.fit_range.size() < 3) {
    throw DegenerateEstimate("uniform_irregularity_exponent: fewer than 3 scales in the fit range");
  }
  if (est.fit_range.lo < 0 || est.fit_range.hi >= field.levels()) {
    throw std::invalid_argument("uniform_irregularity_exponent: fit range outside the stored scales");
  }
  est.statistic = windowed_statistic(field, cube, M, est.fit_range);

  std::vector<double> x, y;
  for (int j = est.fit_range.lo; j <= est.fit_range.hi; ++j) {
    const double k = est.statistic.K[static_cast<std::size_t>(j - est.fit_range.lo)];
    if (k > 0.0) {
      est.scales_used.push_back(j);
      x.push_back(-static_cast<double>(j));
      y.push_back(std::log2(k));
    }
  }
  if (x.size() < 3) {
    throw DegenerateEstimate("uniform_irregularity_exponent: fewer than 3 scales with K_j > 0");
  }
  const auto f = least_squares(x, y);
  est.slope = f.slope;
  est.intercept = f.intercept;
  est.r_squared = f.r_squared;
  est.exponent_hat = f.slope;
  return est;
}

LocalIrregularityEstimate local_irregularity_exponent(const CoefficientField& field,
                                                      const std::vector<double>& x0,
                                                      const std::vector<int>& m_range, int M) {
  if (m_range.empty()) throw std::invalid_argument("local_irregularity_exponent: empty generation range");
  if (static_cast<int>(x0.size()) != field.dim()) {
    throw std::invalid_argument("local_irregularity_exponent: point dimension mismatch");
  }
  LocalIrregularityEstimate out;
  out.exponent_hat = -std::numeric_limits<double>::infinity();
  for (int m : m_range) {
    const auto cube = DyadicCube::containing(x0, m);
    out.per_generation.push_back(uniform_irregularity_exponent(field, cube, M));
    if (out.per_generation.back().exponent_hat > out.exponent_hat) {
      out.exponent_hat = out.per_generation.back().exponent_hat;
      out.argmax_generation = m;
    }
  }
  return out;
}

double uniform_holder_check(const CoefficientField& field, double alpha, const DyadicCube& cube) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("uniform_holder_check: alpha must lie in (0, 1)");
  }
  const auto norms = sup_norm_per_scale(field, cube);
  double c = 0.0;
  for (std::size_t j = 0; j < norms.size(); ++j) {
    if (norms[j]) c = std::max(c, *norms[j] * std::exp2(alpha * static_cast<double>(j)));
  }
  return c;
}

}  // namespace snu
