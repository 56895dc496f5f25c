#include "snu/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace snu {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

[[noreturn]] void parse_error(const std::string& what, int line) {
  throw std::runtime_error("parse error at line " + std::to_string(line) + ": " + what);
}

bool next_content_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (!line.empty() && line[0] != '#') return true;
  }
  return false;
}

// "d=1,J=12,family=haar" -> key/value map.
std::map<std::string, std::string> parse_header(const std::string& line, int lineno) {
  std::map<std::string, std::string> kv;
  for (const auto& part : split(line, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) parse_error("expected key=value header, got '" + line + "'", lineno);
    kv[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
  }
  return kv;
}

int header_int(const std::map<std::string, std::string>& kv, const std::string& key, int lineno) {
  auto it = kv.find(key);
  if (it == kv.end()) parse_error("header lacks '" + key + "'", lineno);
  try {
    std::size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    parse_error("bad integer for '" + key + "'", lineno);
  }
}

double field_double(const std::string& s, int lineno) {
  try {
    return parse_double(s);
  } catch (const std::exception&) {
    parse_error("bad number '" + s + "'", lineno);
  }
}

std::int64_t field_int(const std::string& s, int lineno) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    parse_error("bad integer '" + s + "'", lineno);
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

nlohmann::ordered_json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}

std::string cube_label(const DyadicCube& c) {
  std::string s;
  for (std::size_t a = 0; a < c.r.size(); ++a) {
    if (a) s += ':';
    s += std::to_string(c.r[a]);
  }
  return s;
}

nlohmann::ordered_json cube_json(const DyadicCube& c) {
  nlohmann::ordered_json j;
  j["m"] = c.m;
  j["r"] = c.r;
  return j;
}

nlohmann::ordered_json aggregate_json(const Aggregate& a) {
  nlohmann::ordered_json j;
  j["count"] = a.count;
  j["degenerate"] = a.degenerate;
  j["mean"] = number_or_null(a.mean);
  j["stddev"] = number_or_null(a.stddev);
  j["min"] = number_or_null(a.min);
  j["max"] = number_or_null(a.max);
  nlohmann::ordered_json q = nlohmann::ordered_json::object();
  for (const auto& [level, value] : a.quantiles) q[format_double(level)] = number_or_null(value);
  j["quantiles"] = q;
  j["fraction_in_band"] = a.fraction_in_band;
  j["max_deviation"] = a.max_deviation;
  return j;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return kPosInf;
  if (t == "-inf") return kNegInf;
  std::size_t pos = 0;
  const double v = std::stod(t, &pos);
  if (pos != t.size()) throw std::invalid_argument("trailing characters in '" + text + "'");
  return v;
}

SampledSignal read_signal(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) parse_error("empty signal file", lineno);
  const auto kv = parse_header(line, lineno);
  const int d = header_int(kv, "d", lineno);
  const int J = header_int(kv, "J", lineno);
  std::vector<Complex> values;
  while (next_content_line(in, line, lineno)) {
    const auto parts = split(line, ',');
    if (parts.size() != 2 && parts.size() != 1) parse_error("expected 're,im'", lineno);
    const double re = field_double(parts[0], lineno);
    const double im = parts.size() == 2 ? field_double(parts[1], lineno) : 0.0;
    values.emplace_back(re, im);
  }
  try {
    return SampledSignal(d, J, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("invalid signal: ") + e.what());
  }
}

void write_signal(std::ostream& out, const SampledSignal& signal) {
  out << "d=" << signal.dim() << ",J=" << signal.grid_scale() << '\n';
  for (const auto& v : signal.values()) out << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
}

SampledSignal read_signal_file(const std::string& path) {
  auto in = open_input(path);
  return read_signal(in);
}

CoefficientField read_coefficients(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) parse_error("empty coefficient file", lineno);
  const auto kv = parse_header(line, lineno);
  const int d = header_int(kv, "d", lineno);
  const int J = header_int(kv, "J", lineno);
  const auto fam_it = kv.find("family");
  WaveletFamily family = WaveletFamily::haar();
  if (fam_it != kv.end()) {
    try {
      family = WaveletFamily::from_name(fam_it->second);
    } catch (const std::invalid_argument& e) {
      parse_error(e.what(), lineno);
    }
  }
  std::optional<CoefficientField> field;
  try {
    field.emplace(d, J, family);
  } catch (const std::invalid_argument& e) {
    parse_error(e.what(), lineno);
  }
  const std::size_t expected = static_cast<std::size_t>(d) + 4;
  while (next_content_line(in, line, lineno)) {
    const auto parts = split(line, ',');
    if (parts.size() != expected) {
      parse_error("expected " + std::to_string(expected) + " columns 'i,j,k...,re,im'", lineno);
    }
    DyadicIndex idx;
    idx.i = static_cast<int>(field_int(parts[0], lineno));
    idx.j = static_cast<int>(field_int(parts[1], lineno));
    idx.k[0] = field_int(parts[2], lineno);
    if (d == 2) idx.k[1] = field_int(parts[3], lineno);
    const Complex v{field_double(parts[expected - 2], lineno), field_double(parts[expected - 1], lineno)};
    if (idx.i == 0) {
      field->set_scaling(v);
    } else if (field->contains(idx)) {
      field->set(idx, v);
    } else {
      parse_error("index outside Lambda or beyond J", lineno);
    }
  }
  return std::move(*field);
}

void write_coefficients(std::ostream& out, const CoefficientField& field) {
  out << "d=" << field.dim() << ",J=" << field.levels() << ",family=" << field.family().name() << '\n';
  const std::string zero_k = field.dim() == 2 ? "0,0" : "0";
  out << "0,0," << zero_k << ',' << format_double(field.scaling().real()) << ','
      << format_double(field.scaling().imag()) << '\n';
  for (int j = 0; j < field.levels(); ++j) {
    const auto s = field.scale(j);
    for (std::size_t n = 0; n < s.size(); ++n) {
      const auto idx = field.index_of(j, n);
      out << idx.i << ',' << idx.j << ',' << idx.k[0];
      if (field.dim() == 2) out << ',' << idx.k[1];
      out << ',' << format_double(s[n].real()) << ',' << format_double(s[n].imag()) << '\n';
    }
  }
}

CoefficientField read_coefficients_file(const std::string& path) {
  auto in = open_input(path);
  return read_coefficients(in);
}

NuProfile read_nu_profile(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) parse_error("empty profile file", lineno);
  const int d = header_int(parse_header(line, lineno), "d", lineno);
  std::vector<Breakpoint> bp;
  while (next_content_line(in, line, lineno)) {
    std::istringstream ss(line);
    std::string a, v, extra;
    if (!(ss >> a >> v) || (ss >> extra)) parse_error("expected 'alpha<TAB>nu'", lineno);
    bp.push_back({field_double(a, lineno), field_double(v, lineno)});
  }
  try {
    return NuProfile(d, std::move(bp));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("invalid profile: ") + e.what());
  }
}

void write_nu_profile(std::ostream& out, const NuProfile& nu) {
  out << "d=" << nu.dim() << '\n';
  for (const auto& b : nu.breakpoints()) out << format_double(b.alpha) << '\t' << format_double(b.nu) << '\n';
}

NuProfile read_nu_profile_file(const std::string& path) {
  auto in = open_input(path);
  return read_nu_profile(in);
}

void write_profile_csv(std::ostream& out, const ProfileEstimate& est) {
  out << "alpha,nu_hat\n";
  for (std::size_t a = 0; a < est.alpha_grid.size(); ++a) {
    out << format_double(est.alpha_grid[a]) << ',' << format_double(est.nu_hat[a]) << '\n';
  }
}

nlohmann::ordered_json profile_json(const ProfileEstimate& est) {
  nlohmann::ordered_json j;
  j["j_min"] = est.j_min;
  j["j_max"] = est.j_max;
  j["epsilon_schedule"] = est.epsilon_schedule;
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < est.alpha_grid.size(); ++a) {
    rows.push_back({{"alpha", est.alpha_grid[a]}, {"nu_hat", number_or_null(est.nu_hat[a])}});
  }
  j["profile"] = rows;
  return j;
}

nlohmann::ordered_json estimate_json(const IrregularityEstimate& est) {
  nlohmann::ordered_json j;
  j["cube"] = cube_json(est.cube);
  j["M"] = est.M;
  j["fit_range"] = {est.fit_range.lo, est.fit_range.hi};
  j["K"] = est.statistic.K;
  auto branches = nlohmann::ordered_json::array();
  for (auto b : est.statistic.branch) {
    branches.push_back(b == WindowBranch::Upper ? "upper" : b == WindowBranch::Lower ? "lower" : "none");
  }
  j["branch"] = branches;
  j["clipped"] = est.statistic.clipped;
  j["exponent_hat"] = est.exponent_hat;
  j["r_squared"] = est.r_squared;
  return j;
}

void write_estimate_plot(std::ostream& out, const IrregularityEstimate& est) {
  out << "j,log2K_j\n";
  for (std::size_t n = 0; n < est.statistic.K.size(); ++n) {
    const double k = est.statistic.K[n];
    if (k > 0.0) out << est.fit_range.lo + static_cast<int>(n) << ',' << format_double(std::log2(k)) << '\n';
  }
}

nlohmann::ordered_json condition_report_json(const ConditionReport& rep) {
  nlohmann::ordered_json j;
  j["lower_bound_holds"] = rep.lower_bound_holds;
  j["max_abs_residual"] = rep.max_abs_residual;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    rows.push_back({{"j", c.j},
                    {"alpha", c.alpha},
                    {"log2_count", number_or_null(c.log2_count)},
                    {"lower_bound_ok", c.lower_bound_ok},
                    {"residual", c.residual}});
  }
  j["checks"] = rows;
  return j;
}

nlohmann::ordered_json membership_report_json(const MembershipReport& rep) {
  nlohmann::ordered_json j;
  j["pass"] = rep.pass;
  j["j_start"] = rep.j_start;
  j["j_end"] = rep.j_end;
  j["violating_scales"] = rep.violating_scales();
  auto rows = nlohmann::ordered_json::array();
  for (const auto& v : rep.violations) {
    rows.push_back({{"j", v.j}, {"alpha", v.alpha}, {"count", v.count}, {"bound", v.bound}});
  }
  j["violations"] = rows;
  return j;
}

nlohmann::ordered_json sample_sidecar_json(const SeriesSample& sample, const std::string& nu_file) {
  nlohmann::ordered_json j;
  j["seed"] = sample.seed;
  j["nu_file"] = nu_file;
  j["Jmax"] = sample.field.levels();
  j["family"] = sample.field.family().name();
  j["j_min"] = sample.j_min;
  return j;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& j, const std::string& base_dir) {
  namespace fs = std::filesystem;
  auto resolve = [&](const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(base_dir) / p).lexically_normal().string();
  };
  ExperimentConfig c;
  try {
    c.nu_file = resolve(j.at("nu_file").get<std::string>());
    if (j.contains("base_signal")) {
      const auto& b = j.at("base_signal");
      c.base.kind = parse_base_kind(b.value("kind", std::string("zero")));
      c.base.H = b.value("H", c.base.H);
      c.base.gap = b.value("gap", c.base.gap);
      c.base.file = resolve(b.value("file", std::string()));
    }
    c.trials = j.value("trials", c.trials);
    c.jmax = j.value("Jmax", c.jmax);
    c.m_range = j.value("m_range", c.m_range);
    c.M = j.value("M", c.M);
    if (j.contains("fit_range") && !j.at("fit_range").is_null()) {
      const auto r = j.at("fit_range").get<std::vector<int>>();
      if (r.size() != 2) throw std::invalid_argument("fit_range must be [lo, hi]");
      c.fit_range = ScaleRange{r[0], r[1]};
    }
    c.seed = j.value("seed", c.seed);
    c.family = j.value("family", c.family);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.band = j.value("band", c.band);
    c.min_fraction = j.value("min_fraction", c.min_fraction);
    c.max_degenerate = j.value("max_degenerate", c.max_degenerate);
    c.threads = j.value("threads", c.threads);
    if (j.contains("output")) {
      const auto& o = j.at("output");
      c.report_path = resolve(o.value("report", c.report_path));
      c.estimates_path = resolve(o.value("estimates", c.estimates_path));
      c.histogram_path = resolve(o.value("histogram", c.histogram_path));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig read_experiment_config_file(const std::string& path) {
  auto in = open_input(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config '" + path + "': " + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_experiment_config(j, dir.empty() ? "." : dir);
}

nlohmann::ordered_json experiment_config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["nu_file"] = c.nu_file;
  j["base_signal"] = {{"kind", to_string(c.base.kind)}, {"H", c.base.H}, {"gap", c.base.gap}, {"file", c.base.file}};
  j["trials"] = c.trials;
  j["Jmax"] = c.jmax;
  j["m_range"] = c.m_range;
  j["M"] = c.M;
  if (c.fit_range) {
    j["fit_range"] = {c.fit_range->lo, c.fit_range->hi};
  } else {
    j["fit_range"] = nullptr;
  }
  j["seed"] = c.seed;
  j["family"] = c.family;
  j["tolerance"] = c.tolerance;
  j["band"] = c.band;
  j["min_fraction"] = c.min_fraction;
  j["max_degenerate"] = c.max_degenerate;
  j["threads"] = c.threads;
  j["output"] = {{"report", c.report_path}, {"estimates", c.estimates_path}, {"histogram", c.histogram_path}};
  return j;
}

nlohmann::ordered_json report_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["config"] = experiment_config_json(r.config);
  j["alpha_min"] = r.alpha_min;
  j["trial_seeds"] = r.trial_seeds;
  j["pass"] = r.pass;
  j["failures"] = r.failures;
  j["cubes"] = aggregate_json(r.cubes);
  j["points"] = aggregate_json(r.points);
  auto est = nlohmann::ordered_json::array();
  for (const auto& e : r.estimates) {
    nlohmann::ordered_json row;
    row["trial"] = e.trial;
    row["seed"] = e.seed;
    row["cube"] = cube_json(e.cube);
    row["degenerate"] = e.degenerate;
    row["exponent"] = e.degenerate ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(e.exponent);
    row["r2"] = e.degenerate ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(e.r_squared);
    if (!e.note.empty()) row["note"] = e.note;
    est.push_back(row);
  }
  j["estimates"] = est;
  auto loc = nlohmann::ordered_json::array();
  for (const auto& l : r.local) {
    loc.push_back({{"trial", l.trial}, {"x", l.x}, {"exponent", l.exponent}, {"generation", l.generation}});
  }
  j["local"] = loc;
  return j;
}

void write_estimates_csv(std::ostream& out, const ExperimentReport& r) {
  out << "trial,m,r,exponent,r2\n";
  for (const auto& e : r.estimates) {
    out << e.trial << ',' << e.cube.m << ',' << cube_label(e.cube) << ','
        << (e.degenerate ? "nan" : format_double(e.exponent)) << ','
        << (e.degenerate ? "nan" : format_double(e.r_squared)) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const ExperimentReport& r, double bin_width) {
  out << "bin_lo,bin_hi,count\n";
  std::map<long long, std::size_t> bins;
  for (const auto& e : r.estimates) {
    if (e.degenerate) continue;
    ++bins[static_cast<long long>(std::floor(e.exponent / bin_width))];
  }
  for (const auto& [b, n] : bins) {
    out << format_double(static_cast<double>(b) * bin_width) << ','
        << format_double(static_cast<double>(b + 1) * bin_width) << ',' << n << '\n';
  }
}

}  // namespace snu
