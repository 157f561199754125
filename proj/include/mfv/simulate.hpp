#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mfv/ssm.hpp"
#include "mfv/stats.hpp"

namespace mfv {

/// Parameters of one data-generating draw.
struct SimParams {
  Eigen::MatrixXd Pi;     // n x np
  Eigen::MatrixXd Sigma;  // n x n
  Eigen::MatrixXd Psi;    // n x m
  double phi = 0.0;       // volatility AR coefficient
  double sigma2 = 0.0;    // volatility innovation variance; 0 = constant
};

struct SimOutput {
  MfModelData data;    // observations with aggregation and ragged edge applied
  Eigen::MatrixXd z;   // T x n latent monthly series, mean included
  Eigen::VectorXd h;   // length T log-volatility path (zeros before p)
};

/// Simulate T months from the model: the initial stacked state comes
/// from initial_stacked_cov at unit volatility, months p..T-1 from the
/// VAR recursion with common stochastic volatility when sigma2 > 0.
/// Quarterly series are observed at months t >= 3 with t % 3 == 2 via
/// the triangular aggregation. `ragged` gives, per monthly variable,
/// the number of trailing months to mark unobserved.
SimOutput simulate_model(const SimParams& params, int T, int p, int nm, int nq, RngStream& rng,
                         const std::vector<int>& ragged = {},
                         const Eigen::MatrixXd& d = {});

}  // namespace mfv
