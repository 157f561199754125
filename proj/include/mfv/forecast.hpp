#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mfv/gibbs.hpp"
#include "mfv/stats.hpp"

namespace mfv {

/// One simulated future path. `z` has p + horizon rows: the last p
/// in-sample months first (so quarterly aggregation windows that span
/// the origin can be formed), then the simulated months. `h` holds the
/// simulated log-volatility per future month.
struct ForecastDraw {
  Eigen::MatrixXd z;
  Eigen::VectorXd h;
};

/// Propagate one parameter draw `horizon` months past the origin.
/// `zlag` is p x n (oldest row first), on the observation scale.
/// `dfut` (horizon x m) and `dlag` (p x m) default to constants.
ForecastDraw simulate_path(const Eigen::MatrixXd& Pi, const Eigen::MatrixXd& Sigma,
                           const Eigen::MatrixXd& Psi, double phi, double sigma2, double h_last,
                           const Eigen::MatrixXd& zlag, int horizon, bool csv, RngStream& rng,
                           const Eigen::MatrixXd& dfut = {}, const Eigen::MatrixXd& dlag = {});

struct PredictiveDraws {
  std::vector<Eigen::MatrixXd> z;  // each (p + horizon) x n
  int horizon = 0;
  int p = 0;
  int n = 0;
};

/// One simulated path per retained posterior draw.
PredictiveDraws predictive_simulate(const DrawsStore& draws, int horizon, bool csv,
                                    std::uint64_t seed);

/// Triangular-weighted aggregate of variable `v` ending at row `row`
/// of a path from `PredictiveDraws` (row >= 4).
double aggregated_at(const Eigen::MatrixXd& zfull, int v, int row);

/// Per-variable, per-horizon posterior predictive summaries for the
/// monthly-scale paths (rows are horizons 1..H).
struct ForecastSummary {
  Eigen::MatrixXd mean, sd, q05, q50, q95;
};
ForecastSummary summarize(const PredictiveDraws& draws);

}  // namespace mfv
