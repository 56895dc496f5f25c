#pragma once

// Monte-Carlo check that f + X_nu has local irregularity exponent alpha_min
// on every dyadic cube, for base functions f in S^nu.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snu/dyadic_cube.hpp"
#include "snu/irregularity.hpp"
#include "snu/nu_profile.hpp"
#include "snu/wavelet.hpp"

namespace snu {

enum class BaseKind { Zero, Monofractal, Lacunary, FromFile };

struct BaseSignalSpec {
  BaseKind kind = BaseKind::Zero;
  double H = 0.5;
  int gap = 1;
  std::string file;
};

BaseKind parse_base_kind(const std::string& name);
std::string to_string(BaseKind kind);

// zero: empty field. monofractal(H): c_{j,k} = 2^{-jH} everywhere, which lies in
// S^nu when nu = -inf below H and nu(H) = d. lacunary(H, gap): at every scale
// j divisible by gap a single coefficient 2^{-jH} at k_j = floor(2^j x*) for
// x* = (sqrt 5 - 1) / 2 (first orientation), which lies in S^nu when nu(H) >= 0.
CoefficientField base_signal(const BaseSignalSpec& spec, int dim, int levels, const WaveletFamily& family);

struct ExperimentConfig {
  std::string nu_file;
  BaseSignalSpec base;
  int trials = 20;
  int jmax = 14;  // coefficient levels: scales 0 .. jmax - 1
  std::vector<int> m_range{2};
  int M = 1;
  std::optional<ScaleRange> fit_range;
  std::uint64_t seed = 1;
  std::string family = "haar";
  double tolerance = 0.1;       // |mean - alpha_min| bound
  double band = 0.15;           // per-cube band around alpha_min
  double min_fraction = 0.9;    // share of estimates required inside the band
  double max_degenerate = 0.1;  // share of degenerate cube estimates tolerated
  int threads = 1;
  std::string report_path = "report.json";
  std::string estimates_path = "estimates.csv";
  std::string histogram_path = "histogram.csv";

  // Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct CubeEstimate {
  int trial = 0;
  std::uint64_t seed = 0;
  DyadicCube cube;
  bool degenerate = false;
  double exponent = 0.0;
  double r_squared = 0.0;
  std::string note;
};

struct LocalEstimate {
  int trial = 0;
  std::vector<double> x;
  double exponent = 0.0;
  int generation = -1;
};

struct Aggregate {
  std::size_t count = 0;
  std::size_t degenerate = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<std::pair<double, double>> quantiles;  // (level, value)
  double fraction_in_band = 0.0;
  double max_deviation = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  double alpha_min = 0.0;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<CubeEstimate> estimates;
  std::vector<LocalEstimate> local;
  Aggregate cubes;
  Aggregate points;
  bool pass = false;
  std::vector<std::string> failures;
};

ExperimentReport run_experiment(const ExperimentConfig& config, const NuProfile& nu);

Aggregate aggregate(const std::vector<double>& values, std::size_t degenerate, double target, double band);

struct PhaseOppositionResult {
  double min_probability = 1.0;
  std::vector<DyadicIndex> indices;
  std::vector<double> probabilities;
};

// Monte-Carlo estimate of P(|c - d| >= |c|) per lambda at scale j with fresh
// c_lambda ~ 2^{-j rho_j} e^{i U[0, 2 pi)}. Tests the first `max_indices`
// positions of scale j.
PhaseOppositionResult phase_opposition_probability(const CoefficientField& d_field, const NuProfile& nu,
                                                   int j, int draws, std::uint64_t seed,
                                                   std::size_t max_indices = 64);

}  // namespace snu
