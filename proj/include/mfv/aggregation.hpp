#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace mfv {

/// Triangular weights linking five consecutive latent monthly growths
/// z_{q,t}, ..., z_{q,t-4} to the observed quarterly growth. On the
/// z-scale (z = 3 * monthly log-difference) the weights sum to one.
struct AggregationScheme {
  std::array<double, 5> weights;  // applied to lags 0..4
};

AggregationScheme triangular_weights();

/// Rows of M_t kept at one month: indices (0-based, into the full
/// variable vector, monthlies first) of the variables observed there.
struct SelectionPattern {
  std::vector<int> observed;
};

/// Linear map from the stacked state Z_t = (z_t', ..., z_{t-p}')' of
/// dimension n*(p+1) to the observed vector y_t. Monthly rows are unit
/// selectors; quarterly rows carry the triangular weights on that
/// variable's latent lags 0..4.
Eigen::MatrixXd build_observation_operator(const SelectionPattern& pattern,
                                           const AggregationScheme& scheme,
                                           int n_m, int n_q, int p);

/// Applies the scheme to a monthly latent growth path (rows = months,
/// cols = quarterly variables). Returns one row per quarter-end month
/// listed in `quarter_end_rows`; each needs rows t-4..t in the path.
Eigen::MatrixXd aggregate_path(const Eigen::MatrixXd& z_path,
                               const AggregationScheme& scheme,
                               const std::vector<int>& quarter_end_rows);

}  // namespace mfv
