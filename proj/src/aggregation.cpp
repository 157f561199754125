#include "mfv/aggregation.hpp"

#include <stdexcept>

namespace mfv {

AggregationScheme triangular_weights() {
  return {{1.0 / 9.0, 2.0 / 9.0, 3.0 / 9.0, 2.0 / 9.0, 1.0 / 9.0}};
}

Eigen::MatrixXd build_observation_operator(const SelectionPattern& pattern,
                                           const AggregationScheme& scheme,
                                           int n_m, int n_q, int p) {
  if (p < 4)
    throw std::invalid_argument(
        "build_observation_operator: p >= 4 required for the 5-month aggregation window");
  int n = n_m + n_q;
  int rows = static_cast<int>(pattern.observed.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(rows, n * (p + 1));
  for (int r = 0; r < rows; ++r) {
    int v = pattern.observed[r];
    if (v < 0 || v >= n) throw std::invalid_argument("selection index out of range");
    if (v < n_m) {
      H(r, v) = 1.0;  // lag 0 block
    } else {
      for (int j = 0; j < 5; ++j) H(r, j * n + v) = scheme.weights[j];
    }
  }
  return H;
}

Eigen::MatrixXd aggregate_path(const Eigen::MatrixXd& z_path,
                               const AggregationScheme& scheme,
                               const std::vector<int>& quarter_end_rows) {
  Eigen::MatrixXd out(quarter_end_rows.size(), z_path.cols());
  for (std::size_t i = 0; i < quarter_end_rows.size(); ++i) {
    int t = quarter_end_rows[i];
    if (t < 4 || t >= z_path.rows())
      throw std::invalid_argument("aggregate_path: window t-4..t outside the path");
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(z_path.cols());
    for (int j = 0; j < 5; ++j) acc += scheme.weights[j] * z_path.row(t - j);
    out.row(i) = acc;
  }
  return out;
}

}  // namespace mfv
