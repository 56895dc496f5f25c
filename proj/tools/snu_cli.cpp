// snu: command-line front end for wavelet profile and irregularity analysis.
//
// Exit codes: 0 success, 1 analysis failure (degenerate estimate or failed
// experiment), 2 usage or I/O error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snu/io.hpp"
#include "snu/irregularity.hpp"
#include "snu/prevalence.hpp"
#include "snu/profile.hpp"
#include "snu/random_series.hpp"
#include "snu/wavelet.hpp"

namespace {

using namespace snu;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AnalysisFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "start:stop:step", inclusive of stop up to rounding.
std::vector<double> parse_grid(const std::string& spec, const std::string& flag) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  try {
    while (std::getline(ss, item, ':')) parts.push_back(parse_double(item));
  } catch (const std::exception&) {
    throw UsageError(flag + ": expected start:stop:step, got '" + spec + "'");
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0] || !std::isfinite(parts[1])) {
    throw UsageError(flag + ": expected start:stop:step with step > 0 and stop >= start, got '" + spec + "'");
  }
  const auto n = static_cast<long long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  if (n > 1000000) throw UsageError(flag + ": grid too large");
  std::vector<double> grid;
  // Round to 12 significant digits so 0:1:0.05 yields 0.15 rather than 0.15000000000000002.
  for (long long i = 0; i <= n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", parts[0] + static_cast<double>(i) * parts[2]);
    grid.push_back(std::strtod(buf, nullptr));
  }
  return grid;
}

ScaleRange parse_range(const std::string& spec, const std::string& flag) {
  const auto pos = spec.find(':');
  try {
    if (pos == std::string::npos) throw std::invalid_argument(spec);
    std::size_t a = 0, b = 0;
    const std::string lo = spec.substr(0, pos), hi = spec.substr(pos + 1);
    ScaleRange r{std::stoi(lo, &a), std::stoi(hi, &b)};
    if (a != lo.size() || b != hi.size()) throw std::invalid_argument(spec);
    return r;
  } catch (const std::exception&) {
    throw UsageError(flag + ": expected lo:hi, got '" + spec + "'");
  }
}

std::vector<double> parse_list(const std::string& spec, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  } catch (const std::exception&) {
    throw UsageError(flag + ": expected a comma-separated list of numbers, got '" + spec + "'");
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

// Writes to `path`, or stdout when empty.
template <class Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write(out);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

bool is_coefficient_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    return line.find("family=") != std::string::npos;
  }
  return false;
}

CoefficientField load_field(const std::string& path, const std::string& family) {
  if (is_coefficient_file(path)) return read_coefficients_file(path);
  return forward_transform(read_signal_file(path), WaveletFamily::from_name(family));
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("SNU_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("SNU_SEED: not an unsigned integer: '") + s + "'");
  }
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet profiles, S^nu diagnostics and irregularity exponents"};
  app.require_subcommand(1);

  // transform
  auto* transform = app.add_subcommand("transform", "Forward (or inverse) periodized wavelet transform");
  std::string t_input, t_out, t_family = "haar";
  int t_jmax = -1, t_jgrid = -1;
  bool t_inverse = false;
  transform->add_option("--input,-i", t_input, "signal CSV (coefficient CSV with --inverse)")->required();
  transform->add_option("--family", t_family, "haar | db2 ... db10");
  transform->add_option("--jmax", t_jmax, "number of detail levels kept (default: grid scale)");
  transform->add_flag("--inverse", t_inverse, "synthesize a signal from a coefficient CSV");
  transform->add_option("--jgrid", t_jgrid, "output grid scale for --inverse (default: field J)");
  transform->add_option("--out,-o", t_out, "output file (default stdout)");

  // profile
  auto* profile = app.add_subcommand("profile", "Estimate the wavelet profile nu_hat");
  std::string p_input, p_out, p_plot, p_family = "haar", p_grid = "0:2:0.05", p_eps, p_format = "csv";
  int p_jmin = 2, p_jmax = -1;
  profile->add_option("--input,-i", p_input, "coefficient CSV or signal CSV")->required();
  profile->add_option("--family", p_family, "wavelet used when the input is a signal");
  profile->add_option("--alpha-grid", p_grid, "start:stop:step");
  profile->add_option("--jmin", p_jmin, "smallest scale");
  profile->add_option("--jmax", p_jmax, "largest scale (default: finest stored)");
  profile->add_option("--epsilon", p_eps, "decreasing schedule, e.g. 0.5,0.2,0.1,0.05");
  profile->add_option("--out,-o", p_out, "output file (default stdout)");
  profile->add_option("--plot", p_plot, "per-scale log2 count rates as CSV");
  profile->add_option("--format", p_format, "csv | json");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "alpha_min, alpha_max and d_nu(h) of a profile");
  std::string s_nu, s_out, s_grid = "0.05:2:0.05", s_format = "csv";
  spectrum->add_option("--nu", s_nu, "profile file")->required();
  spectrum->add_option("--h-grid", s_grid, "start:stop:step (h > 0)");
  spectrum->add_option("--out,-o", s_out, "output file (default stdout)");
  spectrum->add_option("--format", s_format, "csv | json");

  // exponent
  auto* exponent = app.add_subcommand("exponent", "Uniform or local irregularity exponent");
  std::string e_input, e_out, e_plot, e_family = "haar", e_fit, e_mrange = "0:2", e_r, e_x0;
  int e_m = 0, e_order = 1;
  exponent->add_option("--input,-i", e_input, "coefficient CSV or signal CSV")->required();
  exponent->add_option("--family", e_family, "wavelet used when the input is a signal");
  exponent->add_option("--m", e_m, "cube generation");
  exponent->add_option("--r", e_r, "cube position r1[,r2]");
  exponent->add_option("--x0", e_x0, "point x[,y]: local exponent over --m-range");
  exponent->add_option("--m-range", e_mrange, "lo:hi generations for --x0");
  exponent->add_option("--order,-M", e_order, "difference order M");
  exponent->add_option("--fit", e_fit, "lo:hi fit scales (default: upper half)");
  exponent->add_option("--out,-o", e_out, "JSON record (default stdout)");
  exponent->add_option("--plot", e_plot, "CSV j,log2K_j");

  // generate
  auto* generate = app.add_subcommand("generate", "Sample a random wavelet series X_nu");
  std::string g_nu, g_out, g_family = "haar";
  int g_jmax = 14;
  std::optional<std::uint64_t> g_seed;
  bool g_signal = false;
  generate->add_option("--nu", g_nu, "profile file")->required();
  generate->add_option("--jmax", g_jmax, "number of coefficient levels");
  generate->add_option("--family", g_family, "haar | db2 ... db10");
  generate->add_option("--seed", g_seed, "64-bit seed (default 1, or SNU_SEED)");
  generate->add_flag("--signal", g_signal, "write the synthesized signal instead of coefficients");
  generate->add_option("--out,-o", g_out, "coefficient CSV; a .json sidecar is written next to it")->required();

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Monte-Carlo prevalence experiment");
  std::string x_config, x_outdir;
  std::optional<std::uint64_t> x_seed;
  experiment->add_option("--config,-c", x_config, "experiment JSON")->required();
  experiment->add_option("--seed", x_seed, "override the master seed");
  experiment->add_option("--out", x_outdir, "directory for report.json, estimates.csv, histogram.csv");

  // verify
  auto* verify = app.add_subcommand("verify", "Check the sampler conditions, optionally S^nu membership");
  std::string v_nu, v_out, v_jrange, v_grid, v_input, v_family = "haar";
  double v_eps = 0.2, v_C = 1.0;
  int v_jstart = 0;
  verify->add_option("--nu", v_nu, "profile file")->required();
  verify->add_option("--jrange", v_jrange, "lo:hi scales (default j_min:20)");
  verify->add_option("--alpha-grid", v_grid, "start:stop:step (default: breakpoints)");
  verify->add_option("--input,-i", v_input, "also check a coefficient/signal file for membership");
  verify->add_option("--family", v_family, "wavelet used when the input is a signal");
  verify->add_option("--epsilon", v_eps, "membership slack");
  verify->add_option("--C", v_C, "membership threshold constant");
  verify->add_option("--jstart", v_jstart, "first scale checked for membership");
  verify->add_option("--out,-o", v_out, "JSON report (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*transform) {
      if (t_inverse) {
        const CoefficientField field = read_coefficients_file(t_input);
        const SampledSignal s = inverse_transform(field, t_jgrid < 0 ? field.levels() : t_jgrid);
        emit(t_out, [&](std::ostream& o) { write_signal(o, s); });
      } else {
        const SampledSignal s = read_signal_file(t_input);
        const auto fam = WaveletFamily::from_name(t_family);
        const CoefficientField field = forward_transform(s, fam, t_jmax < 0 ? s.grid_scale() : t_jmax);
        emit(t_out, [&](std::ostream& o) { write_coefficients(o, field); });
      }
    } else if (*profile) {
      check_format(p_format);
      const std::vector<double> grid = parse_grid(p_grid, "--alpha-grid");
      const CoefficientField field = load_field(p_input, p_family);
      ProfileOptions opt;
      opt.j_min = p_jmin;
      opt.j_max = p_jmax;
      if (!p_eps.empty()) opt.epsilon_schedule = parse_list(p_eps, "--epsilon");
      const ProfileEstimate est = wavelet_profile(field, grid, opt);
      emit(p_out, [&](std::ostream& o) {
        if (p_format == "json") {
          o << profile_json(est).dump(2) << '\n';
        } else {
          write_profile_csv(o, est);
        }
      });
      if (!p_plot.empty()) {
        emit(p_plot, [&](std::ostream& o) {
          o << "alpha,j,rate\n";
          for (std::size_t a = 0; a < est.alpha_grid.size(); ++a)
            for (std::size_t n = 0; n < est.per_scale[a].size(); ++n)
              o << format_double(est.alpha_grid[a]) << ',' << est.j_min + static_cast<int>(n) << ','
                << format_double(est.per_scale[a][n]) << '\n';
        });
      }
    } else if (*spectrum) {
      check_format(s_format);
      const NuProfile nu = read_nu_profile_file(s_nu);
      const std::vector<double> grid = parse_grid(s_grid, "--h-grid");
      const double amax = alpha_max(nu);
      if (std::isinf(amax)) std::cerr << "warning: nu vanishes wherever finite; alpha_max = inf\n";
      std::vector<double> values;
      for (double h : grid) {
        if (!(h > 0.0)) throw UsageError("--h-grid: h must be positive");
        values.push_back(spectrum_dnu(nu, h));
      }
      emit(s_out, [&](std::ostream& o) {
        if (s_format == "json") {
          nlohmann::ordered_json j;
          j["d"] = nu.dim();
          j["alpha_min"] = alpha_min(nu);
          j["alpha_max"] = std::isfinite(amax) ? nlohmann::ordered_json(amax) : nlohmann::ordered_json("inf");
          auto rows = nlohmann::ordered_json::array();
          for (std::size_t n = 0; n < grid.size(); ++n)
            rows.push_back({{"h", grid[n]}, {"d_nu", format_double(values[n])}});
          j["spectrum"] = rows;
          o << j.dump(2) << '\n';
        } else {
          o << "# alpha_min=" << format_double(alpha_min(nu)) << " alpha_max=" << format_double(amax) << '\n';
          o << "h,d_nu\n";
          for (std::size_t n = 0; n < grid.size(); ++n)
            o << format_double(grid[n]) << ',' << format_double(values[n]) << '\n';
        }
      });
    } else if (*exponent) {
      const CoefficientField field = load_field(e_input, e_family);
      std::optional<ScaleRange> fit;
      if (!e_fit.empty()) fit = parse_range(e_fit, "--fit");
      if (!e_x0.empty()) {
        const std::vector<double> x0 = parse_list(e_x0, "--x0");
        const ScaleRange mr = parse_range(e_mrange, "--m-range");
        std::vector<int> ms;
        for (int m = mr.lo; m <= mr.hi; ++m) ms.push_back(m);
        if (ms.empty()) throw UsageError("--m-range: empty");
        LocalIrregularityEstimate loc;
        try {
          loc = local_irregularity_exponent(field, x0, ms, e_order);
        } catch (const DegenerateEstimate& ex) {
          throw AnalysisFailure(ex.what());
        }
        nlohmann::ordered_json j;
        j["x0"] = x0;
        j["exponent_hat"] = loc.exponent_hat;
        j["generation"] = loc.argmax_generation;
        auto per = nlohmann::ordered_json::array();
        for (const auto& e : loc.per_generation) per.push_back(estimate_json(e));
        j["per_generation"] = per;
        emit(e_out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
      } else {
        DyadicCube cube = DyadicCube::torus(field.dim());
        cube.m = e_m;
        if (!e_r.empty()) {
          const auto r = parse_list(e_r, "--r");
          if (static_cast<int>(r.size()) != field.dim()) throw UsageError("--r: expected one entry per axis");
          for (std::size_t a = 0; a < r.size(); ++a) cube.r[a] = static_cast<std::int64_t>(r[a]);
        }
        for (auto ra : cube.r) {
          if (ra < 0 || ra >= (std::int64_t{1} << e_m)) throw UsageError("--r: position outside generation");
        }
        IrregularityEstimate est;
        try {
          est = uniform_irregularity_exponent(field, cube, e_order, fit);
        } catch (const DegenerateEstimate& ex) {
          throw AnalysisFailure(ex.what());
        }
        emit(e_out, [&](std::ostream& o) { o << estimate_json(est).dump(2) << '\n'; });
        if (!e_plot.empty()) emit(e_plot, [&](std::ostream& o) { write_estimate_plot(o, est); });
      }
    } else if (*generate) {
      const NuProfile nu = read_nu_profile_file(g_nu);
      std::uint64_t seed = 1;
      if (auto s = env_seed()) seed = *s;
      if (g_seed) seed = *g_seed;
      const SeriesSample sample = generate_series(nu, g_jmax, WaveletFamily::from_name(g_family), seed);
      if (g_signal) {
        const SampledSignal s = inverse_transform(sample.field, sample.field.levels());
        emit(g_out, [&](std::ostream& o) { write_signal(o, s); });
      } else {
        emit(g_out, [&](std::ostream& o) { write_coefficients(o, sample.field); });
      }
      emit(g_out + ".json", [&](std::ostream& o) { o << sample_sidecar_json(sample, g_nu).dump(2) << '\n'; });
    } else if (*experiment) {
      ExperimentConfig config = read_experiment_config_file(x_config);
      if (auto s = env_seed()) config.seed = *s;
      if (x_seed) config.seed = *x_seed;
      if (!x_outdir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(x_outdir);
        config.report_path = (fs::path(x_outdir) / "report.json").string();
        config.estimates_path = (fs::path(x_outdir) / "estimates.csv").string();
        config.histogram_path = (fs::path(x_outdir) / "histogram.csv").string();
      }
      const NuProfile nu = read_nu_profile_file(config.nu_file);
      const ExperimentReport rep = run_experiment(config, nu);
      emit(config.report_path, [&](std::ostream& o) { o << report_json(rep).dump(2) << '\n'; });
      emit(config.estimates_path, [&](std::ostream& o) { write_estimates_csv(o, rep); });
      emit(config.histogram_path, [&](std::ostream& o) { write_histogram_csv(o, rep); });
      char line[256];
      std::snprintf(line, sizeof line,
                    "%s: mean exponent %.4f (alpha_min %.4f, tolerance %.3f), %.1f%% within +/-%.3f, "
                    "%zu/%zu degenerate",
                    rep.pass ? "PASS" : "FAIL", rep.cubes.mean, rep.alpha_min, config.tolerance,
                    100.0 * rep.cubes.fraction_in_band, config.band, rep.cubes.degenerate,
                    rep.estimates.size());
      std::cout << line << '\n';
      for (const auto& f : rep.failures) std::cout << "  " << f << '\n';
      return rep.pass ? 0 : 1;
    } else if (*verify) {
      const NuProfile nu = read_nu_profile_file(v_nu);
      ScaleRange jr{min_scale(nu), 20};
      if (!v_jrange.empty()) jr = parse_range(v_jrange, "--jrange");
      std::vector<double> grid;
      if (!v_grid.empty()) {
        grid = parse_grid(v_grid, "--alpha-grid");
      } else {
        for (const auto& b : nu.breakpoints()) grid.push_back(b.alpha);
      }
      nlohmann::ordered_json j;
      j["j_min"] = min_scale(nu);
      j["conditions"] = condition_report_json(verify_conditions(nu, jr.lo, jr.hi, grid));
      bool ok = j["conditions"]["lower_bound_holds"].get<bool>();
      if (!v_input.empty()) {
        const CoefficientField field = load_field(v_input, v_family);
        const auto rep = check_membership(field, nu, v_eps, v_C, v_jstart, grid);
        j["membership"] = membership_report_json(rep);
        ok = ok && rep.pass;
      }
      emit(v_out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
      return ok ? 0 : 1;
    }
  } catch (const AnalysisFailure& e) {
    std::cerr << "snu: analysis failure: " << e.what() << '\n';
    return 1;
  } catch (const DegenerateEstimate& e) {
    std::cerr << "snu: analysis failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "snu: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
