#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mfv/forecast.hpp"
#include "mfv/gibbs.hpp"
#include "mfv/ssm.hpp"

namespace mfv {

/// Log predictive density score in the convention used throughout the
/// reporting: n ln(2 pi) + ln|V| + (y - m)' V^{-1} (y - m). Lower is
/// better. `lpds_textbook` is -1/2 times this (higher is better).
double lpds(const Eigen::VectorXd& y, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);
double lpds_textbook(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                     const Eigen::MatrixXd& cov);

double rmse(const Eigen::VectorXd& errors);

/// Diebold-Mariano test on a loss differential series for h-step
/// forecasts: Bartlett HAC variance with h-1 lags, the Harvey
/// small-sample factor, and Student-t(T-1) p-values (two-sided).
struct DmResult {
  double stat = 0.0;
  double pvalue = 1.0;
  int T = 0;
};
DmResult dm_test(const Eigen::VectorXd& d, int h);

/// One scored forecast: predictive mean and variance for variable
/// `var` observed `lead` months after estimation origin `origin`.
struct ForecastObs {
  int origin = 0;
  int var = 0;
  int lead = 0;
  double actual = 0.0;
  double mean = 0.0;
  double var_pred = 0.0;
};

struct EvalConfig {
  int first_origin = 0;  // month index of the first forecast origin
  int last_origin = 0;
  int step = 3;            // months between origins
  int horizon = 12;        // months ahead
  std::vector<int> target_vars;
  bool textbook_lpds = false;
};

/// Expanding-window evaluation of one model: re-estimate on data
/// through each origin, simulate the predictive distribution, and
/// score every target outcome observed in `full` within the horizon.
std::vector<ForecastObs> recursive_evaluate(const MfModelData& full, const PriorSpec& prior,
                                            const ModelConfig& model, const SamplerConfig& cfg,
                                            const EvalConfig& eval);

struct ModelEval {
  std::string name;
  std::vector<ForecastObs> obs;
};

/// Comparison table across models: absolute RMSE and mean LPDS for the
/// benchmark, ratios/differences for the rest, with DM significance
/// stars (* 10%, ** 5%, *** 1%) against the benchmark.
struct ReportTable {
  std::string csv;
  std::string text;
};
ReportTable build_report(const std::vector<ModelEval>& models, int benchmark,
                         const std::vector<std::string>& var_names, bool textbook_lpds = false);

}  // namespace mfv
