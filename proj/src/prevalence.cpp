#include "snu/prevalence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "snu/io.hpp"
#include "snu/random_series.hpp"
#include "snu/rng.hpp"

namespace snu {

BaseKind parse_base_kind(const std::string& name) {
  if (name == "zero") return BaseKind::Zero;
  if (name == "monofractal") return BaseKind::Monofractal;
  if (name == "lacunary") return BaseKind::Lacunary;
  if (name == "from_file" || name == "file") return BaseKind::FromFile;
  throw std::invalid_argument("unknown base signal kind '" + name + "'");
}

std::string to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::Zero: return "zero";
    case BaseKind::Monofractal: return "monofractal";
    case BaseKind::Lacunary: return "lacunary";
    case BaseKind::FromFile: return "from_file";
  }
  return "zero";
}

CoefficientField base_signal(const BaseSignalSpec& spec, int dim, int levels, const WaveletFamily& family) {
  if ((spec.kind == BaseKind::Monofractal || spec.kind == BaseKind::Lacunary) && !(spec.H > 0.0)) {
    throw std::invalid_argument("base_signal: H must be positive");
  }
  CoefficientField field(dim, levels, family);
  switch (spec.kind) {
    case BaseKind::Zero:
      break;
    case BaseKind::Monofractal:
      for (int j = 0; j < levels; ++j) {
        const Complex v{std::exp2(-static_cast<double>(j) * spec.H), 0.0};
        for (auto& c : field.scale(j)) c = v;
      }
      break;
    case BaseKind::Lacunary: {
      if (spec.gap < 1) throw std::invalid_argument("base_signal: gap must be at least 1");
      const double x_star = (std::sqrt(5.0) - 1.0) / 2.0;
      for (int j = 0; j < levels; j += spec.gap) {
        const auto k = static_cast<std::int64_t>(std::floor(std::ldexp(x_star, j)));
        DyadicIndex idx{1, j, {k, dim == 2 ? k : 0}};
        field.set(idx, Complex{std::exp2(-static_cast<double>(j) * spec.H), 0.0});
      }
      break;
    }
    case BaseKind::FromFile: {
      CoefficientField loaded = read_coefficients_file(spec.file);
      if (loaded.dim() != dim) throw std::runtime_error("base_signal: dimension mismatch in " + spec.file);
      if (loaded.levels() > levels) {
        throw std::runtime_error("base_signal: " + spec.file + " has more levels than the experiment");
      }
      CoefficientField out(dim, levels, family);
      out.set_scaling(loaded.scaling());
      for (int j = 0; j < loaded.levels(); ++j) {
        std::copy(loaded.scale(j).begin(), loaded.scale(j).end(), out.scale(j).begin());
      }
      return out;
    }
  }
  return field;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be at least 1");
  if (m_range.empty()) throw std::invalid_argument("config: m_range must not be empty");
  for (int m : m_range) {
    if (m < 0) throw std::invalid_argument("config: generations must be non-negative");
  }
  if (M < 1) throw std::invalid_argument("config: M must be at least 1");
  if (!(tolerance > 0.0) || !(band > 0.0)) throw std::invalid_argument("config: tolerances must be positive");
  if (!(min_fraction >= 0.0 && min_fraction <= 1.0)) {
    throw std::invalid_argument("config: min_fraction must lie in [0, 1]");
  }
  if (threads < 1) throw std::invalid_argument("config: threads must be at least 1");
  if (base.kind == BaseKind::FromFile && base.file.empty()) {
    throw std::invalid_argument("config: from_file base signal needs a file");
  }
  const WaveletFamily fam = WaveletFamily::from_name(family);
  if (jmax < 2 || jmax > 24) throw std::invalid_argument("config: Jmax out of range");
  const CoefficientField probe(1, jmax, fam);
  const int m_max = *std::max_element(m_range.begin(), m_range.end());
  const ScaleRange fit = fit_range ? *fit_range : default_fit_range(probe, DyadicCube{m_max, {0}});
  if (fit.size() < 3 || fit.lo < 0 || fit.hi >= jmax) {
    throw std::invalid_argument("config: generation " + std::to_string(m_max) +
                                " leaves fewer than 3 usable scales at Jmax = " + std::to_string(jmax));
  }
}

Aggregate aggregate(const std::vector<double>& values, std::size_t degenerate, double target, double band) {
  Aggregate a;
  a.count = values.size();
  a.degenerate = degenerate;
  if (values.empty()) return a;
  std::vector<double> v = values;
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  a.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  std::size_t inside = 0;
  for (double x : v) {
    ss += (x - a.mean) * (x - a.mean);
    if (std::abs(x - target) <= band) ++inside;
    a.max_deviation = std::max(a.max_deviation, std::abs(x - target));
  }
  a.stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  a.min = v.front();
  a.max = v.back();
  a.fraction_in_band = static_cast<double>(inside) / static_cast<double>(v.size());
  for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    a.quantiles.emplace_back(q, v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]));
  }
  return a;
}

namespace {

struct TrialResult {
  std::vector<CubeEstimate> estimates;
  std::vector<LocalEstimate> local;
};

TrialResult run_trial(const ExperimentConfig& config, const NuProfile& nu, const CoefficientField& base,
                      const WaveletFamily& family, int trial, std::uint64_t seed) {
  TrialResult out;
  SeriesSample sample = generate_series(nu, config.jmax, family, seed);
  CoefficientField field = base + sample.field;

  const int d = nu.dim();
  std::map<std::pair<int, std::vector<std::int64_t>>, std::size_t> by_cube;
  for (int m : config.m_range) {
    for (const auto& cube : dyadic_cubes(m, d)) {
      CubeEstimate e;
      e.trial = trial;
      e.seed = seed;
      e.cube = cube;
      try {
        const auto est = uniform_irregularity_exponent(field, cube, config.M, config.fit_range);
        e.exponent = est.exponent_hat;
        e.r_squared = est.r_squared;
      } catch (const DegenerateEstimate& ex) {
        e.degenerate = true;
        e.note = ex.what();
      }
      by_cube[{m, cube.r}] = out.estimates.size();
      out.estimates.push_back(std::move(e));
    }
  }

  // Local exponents at centers of the finest generation: sup over the
  // ancestors in m_range that produced an estimate.
  const int finest = *std::max_element(config.m_range.begin(), config.m_range.end());
  for (const auto& cube : dyadic_cubes(finest, d)) {
    LocalEstimate le;
    le.trial = trial;
    le.x = cube.center();
    bool any = false;
    for (int m : config.m_range) {
      const auto anc = DyadicCube::containing(le.x, m);
      const auto& e = out.estimates[by_cube.at({m, anc.r})];
      if (e.degenerate) continue;
      if (!any || e.exponent > le.exponent) {
        le.exponent = e.exponent;
        le.generation = m;
      }
      any = true;
    }
    if (any) out.local.push_back(std::move(le));
  }
  return out;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, const NuProfile& nu) {
  config.validate();
  ExperimentReport rep;
  rep.config = config;
  rep.alpha_min = alpha_min(nu);
  const WaveletFamily family = WaveletFamily::from_name(config.family);
  const CoefficientField base = base_signal(config.base, nu.dim(), config.jmax, family);

  for (int t = 0; t < config.trials; ++t) {
    rep.trial_seeds.push_back(trial_seed(config.seed, static_cast<std::uint64_t>(t)));
  }

  std::vector<TrialResult> results(static_cast<std::size_t>(config.trials));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int t = next++; t < config.trials; t = next++) {
      try {
        results[static_cast<std::size_t>(t)] =
            run_trial(config, nu, base, family, t, rep.trial_seeds[static_cast<std::size_t>(t)]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int nthreads = std::min(config.threads, config.trials);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> cube_values, point_values;
  std::size_t degenerate = 0;
  for (auto& r : results) {
    for (auto& e : r.estimates) {
      if (e.degenerate) {
        ++degenerate;
      } else {
        cube_values.push_back(e.exponent);
      }
      rep.estimates.push_back(std::move(e));
    }
    for (auto& l : r.local) {
      point_values.push_back(l.exponent);
      rep.local.push_back(std::move(l));
    }
  }
  rep.cubes = aggregate(cube_values, degenerate, rep.alpha_min, config.band);
  rep.points = aggregate(point_values, 0, rep.alpha_min, config.band);

  const double total = static_cast<double>(rep.estimates.size());
  if (static_cast<double>(degenerate) > config.max_degenerate * total) {
    rep.failures.push_back("too many degenerate cube estimates");
  }
  if (rep.cubes.count == 0 || std::abs(rep.cubes.mean - rep.alpha_min) > config.tolerance) {
    rep.failures.push_back("mean exponent outside alpha_min +/- tolerance");
  }
  if (rep.cubes.fraction_in_band < config.min_fraction) {
    rep.failures.push_back("too few cube estimates inside alpha_min +/- band");
  }
  rep.pass = rep.failures.empty();
  return rep;
}

PhaseOppositionResult phase_opposition_probability(const CoefficientField& d_field, const NuProfile& nu,
                                                   int j, int draws, std::uint64_t seed,
                                                   std::size_t max_indices) {
  if (draws < 100) throw std::invalid_argument("phase_opposition_probability: need at least 100 draws");
  if (j < 0 || j >= d_field.levels()) {
    throw std::invalid_argument("phase_opposition_probability: scale outside the field");
  }
  const ScaleLaw law(nu, j);
  PhaseOppositionResult res;
  const auto s = d_field.scale(j);
  const std::size_t n_idx = std::min(max_indices, s.size());
  for (std::size_t n = 0; n < n_idx; ++n) {
    const Complex dl = s[n];
    std::size_t hits = 0;
    for (int t = 0; t < draws; ++t) {
      const std::uint64_t key = hash_words(seed, {static_cast<std::uint64_t>(j), n, static_cast<std::uint64_t>(t)});
      const double alpha = law.sample(to_open_unit(mix64(key ^ 0x1ULL)));
      const double theta = 2.0 * std::numbers::pi * to_open_unit(mix64(key ^ 0x2ULL));
      const Complex c = std::isfinite(alpha) ? std::polar(std::exp2(-static_cast<double>(j) * alpha), theta)
                                             : Complex{0.0, 0.0};
      if (std::abs(c - dl) >= std::abs(c)) ++hits;
    }
    res.indices.push_back(d_field.index_of(j, n));
    res.probabilities.push_back(static_cast<double>(hits) / static_cast<double>(draws));
    res.min_probability = std::min(res.min_probability, res.probabilities.back());
  }
  return res;
}

}  // namespace snu
