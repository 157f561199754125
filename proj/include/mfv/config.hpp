#pragma once

#include <istream>
#include <string>
#include <vector>

#include "mfv/gibbs.hpp"
#include "mfv/priors.hpp"
#include "mfv/tsdata.hpp"

namespace mfv {

/// INI-style configuration: `[section]` headers (repeatable) with
/// `key = value` lines; `#` and `;` start comments.
struct IniSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_num(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
};
std::vector<IniSection> parse_ini(std::istream& in);

struct SeriesConfig {
  std::string id;
  std::string path;
  Frequency frequency = Frequency::Monthly;
  TransformSpec transform;
  int delay_months = 0;
  double prior_mean = 0.0;
  double prior_sd = 1.0;
};

struct EstimateSettings {
  double lambda1 = 0.2, lambda2 = 1.0;
  int p = 4;
  std::string ss_variant = "ss";  // minn | ss | ssng
  bool csv = true;
  double c0 = 0.01, c1 = 0.01;
  double mu_phi = 0.9, omega_phi = 0.01;
  double sigma2_mean = 0.01, d = 4.0;
  int draws = 1000, burnin = 1000, thin = 1;
  std::uint64_t seed = 1;
};

struct ModelSpecConfig {
  std::string name;
  EstimateSettings settings;
};

struct EvalSettings {
  std::string first_origin, last_origin;  // dates
  int step = 3;
  int horizon = 12;
  std::vector<std::string> targets;  // series ids
  std::string benchmark;             // model name
  bool textbook_lpds = false;
};

struct ForecastSettings {
  int horizon = 12;
  std::string asof;  // vintage date; empty = use everything
};

struct SimulateSettings {
  int T = 200, nm = 2, nq = 1, p = 4;
  double rho = 0.4;      // first-lag diagonal of the generated Pi
  double phi = 0.9, sigma2 = 0.0;
  std::vector<int> ragged;  // trailing missing months per monthly series
  std::uint64_t seed = 1;
};

struct AppConfig {
  std::vector<SeriesConfig> series;
  EstimateSettings estimate;
  std::vector<ModelSpecConfig> models;  // [model:NAME] sections
  EvalSettings eval;
  ForecastSettings forecast;
  SimulateSettings simulate;
};

AppConfig load_config(const std::string& path);
AppConfig parse_config(std::istream& in);

/// Loads all series named in the config (paths relative to base_dir),
/// applies transforms, and aligns them on the monthly grid.
MixedPanel build_panel(const AppConfig& cfg, const std::string& base_dir);

PublicationPattern publication_pattern(const AppConfig& cfg);

MfModelData to_model_data(const MixedPanel& panel, int p);

/// Prior from the configuration: Minnesota variances with per-series
/// AR(4) residual scales, S = diag(s^2), nu = n + 2, steady-state
/// means/variances from the series entries.
PriorSpec build_prior(const AppConfig& cfg, const EstimateSettings& est, const MixedPanel& panel);

ModelConfig to_model_config(const EstimateSettings& est);
SamplerConfig to_sampler_config(const EstimateSettings& est);

/// Monthly-only subset for single-frequency benchmarks.
MixedPanel monthly_only(const MixedPanel& panel);

/// One row per quarter-end month with every series aggregated to the
/// quarterly frequency: triangular weights for log-differences, the
/// three-month mean for levels.
struct QuarterlyPanel {
  std::vector<YearMonth> dates;  // quarter-end months
  std::vector<std::string> ids;
  Eigen::MatrixXd y;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> obs;
};
QuarterlyPanel aggregate_to_quarterly(const MixedPanel& panel);

}  // namespace mfv
