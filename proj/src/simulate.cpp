#include "mfv/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "mfv/aggregation.hpp"

namespace mfv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

SimOutput simulate_model(const SimParams& params, int T, int p, int nm, int nq, RngStream& rng,
                         const std::vector<int>& ragged, const MatrixXd& d) {
  int n = nm + nq;
  if (params.Pi.rows() != n || params.Pi.cols() != n * p)
    throw std::invalid_argument("simulate_model: Pi must be n x np");
  if (T <= p) throw std::invalid_argument("simulate_model: T must exceed p");
  MatrixXd dd = d.size() == 0 ? MatrixXd::Ones(T, 1) : d;
  if (params.Psi.rows() != n || params.Psi.cols() != dd.cols())
    throw std::invalid_argument("simulate_model: Psi dimension mismatch");

  Eigen::SelfAdjointEigenSolver<MatrixXd> es0(initial_stacked_cov(params.Pi, params.Sigma, p));
  MatrixXd V0fac = es0.eigenvectors() *
                   es0.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  VectorXd xi(V0fac.cols());
  for (int i = 0; i < xi.size(); ++i) xi[i] = rng.normal();
  VectorXd x0 = V0fac * xi;  // stacked indices p-1 .. -1; the -1 block is unused
  // match the estimation model's initial law: monthly pre-sample values
  // are conditioned on, so only the quarterly part of the initial stack
  // is random (its marginal under V0); monthlies start at steady state
  for (int b = 0; b <= p; ++b) x0.segment(b * n, nm).setZero();

  Eigen::LLT<MatrixXd> llt(params.Sigma);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("simulate_model: Sigma not positive definite");
  MatrixXd L = llt.matrixL();

  SimOutput out;
  out.h = VectorXd::Zero(T);
  MatrixXd ztil(T, n);
  for (int t = 0; t <= p - 1; ++t) ztil.row(t) = x0.segment((p - 1 - t) * n, n).transpose();

  bool csv = params.sigma2 > 0.0;
  double sig = std::sqrt(params.sigma2);
  VectorXd eps(n);
  for (int t = p; t < T; ++t) {
    if (csv) {
      if (t == p) {
        double v0 = std::abs(params.phi) < 1.0 ? params.sigma2 / (1.0 - params.phi * params.phi)
                                               : 100.0 * params.sigma2;
        out.h[t] = std::sqrt(v0) * rng.normal();
      } else {
        out.h[t] = params.phi * out.h[t - 1] + sig * rng.normal();
      }
    }
    VectorXd zt = VectorXd::Zero(n);
    for (int l = 1; l <= p; ++l)
      zt += params.Pi.block(0, (l - 1) * n, n, n) * ztil.row(t - l).transpose();
    for (int i = 0; i < n; ++i) eps[i] = rng.normal();
    zt += std::exp(0.5 * out.h[t]) * (L * eps);
    ztil.row(t) = zt.transpose();
  }

  out.z = ztil + dd * params.Psi.transpose();

  MfModelData& data = out.data;
  data.p = p;
  data.ym = out.z.leftCols(nm);
  data.ym_obs.setConstant(T, nm, true);
  data.yq = MatrixXd::Zero(T, nq);
  data.yq_obs.setConstant(T, nq, false);

  auto w = triangular_weights().weights;
  for (int t = 3; t < T; ++t) {
    if (t % 3 != 2) continue;
    for (int j = 0; j < nq; ++j) {
      double acc = 0.0;
      for (int i = 0; i < 5; ++i) acc += w[i] * out.z(t - i, nm + j);
      data.yq(t, j) = acc;
      data.yq_obs(t, j) = true;
    }
  }

  for (int j = 0; j < static_cast<int>(ragged.size()) && j < nm; ++j)
    for (int t = std::max(0, T - ragged[j]); t < T; ++t) data.ym_obs(t, j) = false;

  data.Tb = -1;
  for (int t = 0; t < T; ++t) {
    bool all = true;
    for (int j = 0; j < nm; ++j) all = all && data.ym_obs(t, j);
    if (!all) break;
    data.Tb = t;
  }
  return out;
}

}  // namespace mfv
