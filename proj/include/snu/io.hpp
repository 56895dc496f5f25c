#pragma once

// File formats.
//
//   signal CSV        header "d=<int>,J=<int>", then one "re,im" per sample
//   coefficient CSV   header "d=<int>,J=<int>,family=<name>", rows "i,j,k1[,k2],re,im";
//                     the scaling coefficient is the row with i = 0
//   nu profile        line 1 "d=<int>", then "alpha<TAB>nu" ascending
//   profile estimate  "alpha,nu_hat"
//
// Readers throw std::runtime_error with the offending line number.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "snu/irregularity.hpp"
#include "snu/nu_profile.hpp"
#include "snu/prevalence.hpp"
#include "snu/profile.hpp"
#include "snu/random_series.hpp"
#include "snu/wavelet.hpp"

namespace snu {

// Shortest round-trip representation; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double x);
double parse_double(const std::string& text);

SampledSignal read_signal(std::istream& in);
void write_signal(std::ostream& out, const SampledSignal& signal);
SampledSignal read_signal_file(const std::string& path);

CoefficientField read_coefficients(std::istream& in);
void write_coefficients(std::ostream& out, const CoefficientField& field);
CoefficientField read_coefficients_file(const std::string& path);

NuProfile read_nu_profile(std::istream& in);
void write_nu_profile(std::ostream& out, const NuProfile& nu);
NuProfile read_nu_profile_file(const std::string& path);

void write_profile_csv(std::ostream& out, const ProfileEstimate& est);
nlohmann::ordered_json profile_json(const ProfileEstimate& est);

nlohmann::ordered_json estimate_json(const IrregularityEstimate& est);
// Two columns "j,log2K_j" over the fit range; scales with K_j = 0 are skipped.
void write_estimate_plot(std::ostream& out, const IrregularityEstimate& est);

nlohmann::ordered_json condition_report_json(const ConditionReport& rep);
nlohmann::ordered_json membership_report_json(const MembershipReport& rep);

nlohmann::ordered_json sample_sidecar_json(const SeriesSample& sample, const std::string& nu_file);

// Relative paths in the config resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const nlohmann::json& j, const std::string& base_dir);
ExperimentConfig read_experiment_config_file(const std::string& path);
nlohmann::ordered_json experiment_config_json(const ExperimentConfig& config);

nlohmann::ordered_json report_json(const ExperimentReport& report);
// "trial,m,r,exponent,r2"; r is "r1" or "r1:r2", degenerate rows carry "nan".
void write_estimates_csv(std::ostream& out, const ExperimentReport& report);
// "bin_lo,bin_hi,count" over non-degenerate cube estimates.
void write_histogram_csv(std::ostream& out, const ExperimentReport& report, double bin_width = 0.025);

}  // namespace snu
