#include "mfv/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mfv/aggregation.hpp"

namespace mfv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

ForecastDraw simulate_path(const MatrixXd& Pi, const MatrixXd& Sigma, const MatrixXd& Psi,
                           double phi, double sigma2, double h_last, const MatrixXd& zlag,
                           int horizon, bool csv, RngStream& rng, const MatrixXd& dfut,
                           const MatrixXd& dlag) {
  int n = static_cast<int>(Pi.rows());
  int p = static_cast<int>(Pi.cols()) / n;
  int m = static_cast<int>(Psi.cols());
  if (zlag.rows() != p || zlag.cols() != n)
    throw std::invalid_argument("simulate_path: zlag must be p x n");
  MatrixXd df = dfut.size() == 0 ? MatrixXd::Ones(horizon, m) : dfut;
  MatrixXd dl = dlag.size() == 0 ? MatrixXd::Ones(p, m) : dlag;
  if (df.rows() != horizon || dl.rows() != p)
    throw std::invalid_argument("simulate_path: deterministic terms have wrong length");

  Eigen::LLT<MatrixXd> llt(Sigma);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("simulate_path: Sigma not positive definite");
  MatrixXd L = llt.matrixL();
  double sig = std::sqrt(sigma2);

  ForecastDraw out;
  out.z.resize(p + horizon, n);
  out.z.topRows(p) = zlag;
  out.h.resize(horizon);

  MatrixXd ztil(p + horizon, n);
  for (int l = 0; l < p; ++l) ztil.row(l) = zlag.row(l) - dl.row(l) * Psi.transpose();

  double h = h_last;
  VectorXd eps(n);
  for (int j = 0; j < horizon; ++j) {
    if (csv) h = phi * h + sig * rng.normal();
    out.h[j] = csv ? h : 0.0;
    double vol = csv ? std::exp(0.5 * h) : 1.0;

    VectorXd zt = VectorXd::Zero(n);
    for (int l = 1; l <= p; ++l)
      zt += Pi.block(0, (l - 1) * n, n, n) * ztil.row(p + j - l).transpose();
    for (int i = 0; i < n; ++i) eps[i] = rng.normal();
    zt += vol * (L * eps);
    ztil.row(p + j) = zt.transpose();
    out.z.row(p + j) = zt.transpose() + df.row(j) * Psi.transpose();
  }
  return out;
}

PredictiveDraws predictive_simulate(const DrawsStore& draws, int horizon, bool csv,
                                    std::uint64_t seed) {
  int n = draws.n, p = draws.p, m = draws.m;
  int nd = static_cast<int>(draws.pi.rows());
  PredictiveDraws out;
  out.horizon = horizon;
  out.p = p;
  out.n = n;
  out.z.reserve(nd);

  RngStream rng(seed, 1);
  for (int j = 0; j < nd; ++j) {
    MatrixXd Pi(n, n * p);
    for (int r = 0; r < n; ++r) Pi.row(r) = draws.pi.row(j).segment(r * n * p, n * p);
    MatrixXd Sigma(n, n);
    int k = 0;
    for (int c = 0; c < n; ++c)
      for (int r = c; r < n; ++r) {
        Sigma(r, c) = draws.sigma(j, k);
        Sigma(c, r) = draws.sigma(j, k);
        ++k;
      }
    VectorXd psi = draws.psi.row(j).transpose();
    MatrixXd Psi = Eigen::Map<MatrixXd>(psi.data(), n, m);
    MatrixXd zlag(p, n);
    for (int l = 0; l < p; ++l) zlag.row(l) = draws.zlag.row(j).segment(l * n, n);

    ForecastDraw fd = simulate_path(Pi, Sigma, Psi, draws.hyper(j, 2), draws.hyper(j, 3),
                                    draws.h_last[j], zlag, horizon, csv, rng);
    out.z.push_back(std::move(fd.z));
  }
  return out;
}

double aggregated_at(const MatrixXd& zfull, int v, int row) {
  if (row < 4) throw std::invalid_argument("aggregated_at: need four preceding rows");
  auto w = triangular_weights().weights;
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += w[i] * zfull(row - i, v);
  return acc;
}

ForecastSummary summarize(const PredictiveDraws& draws) {
  int H = draws.horizon, n = draws.n, p = draws.p;
  int nd = static_cast<int>(draws.z.size());
  ForecastSummary s;
  s.mean = MatrixXd::Zero(H, n);
  s.sd = MatrixXd::Zero(H, n);
  s.q05 = MatrixXd::Zero(H, n);
  s.q50 = MatrixXd::Zero(H, n);
  s.q95 = MatrixXd::Zero(H, n);

  std::vector<double> buf(nd);
  for (int hz = 0; hz < H; ++hz)
    for (int v = 0; v < n; ++v) {
      double m1 = 0.0, m2 = 0.0;
      for (int j = 0; j < nd; ++j) {
        double x = draws.z[j](p + hz, v);
        buf[j] = x;
        m1 += x;
        m2 += x * x;
      }
      m1 /= nd;
      s.mean(hz, v) = m1;
      s.sd(hz, v) = std::sqrt(std::max(m2 / nd - m1 * m1, 0.0));
      auto q = [&](double prob) {
        int idx = std::min(nd - 1, static_cast<int>(prob * (nd - 1) + 0.5));
        std::nth_element(buf.begin(), buf.begin() + idx, buf.end());
        return buf[idx];
      };
      s.q05(hz, v) = q(0.05);
      s.q50(hz, v) = q(0.50);
      s.q95(hz, v) = q(0.95);
    }
  return s;
}

}  // namespace mfv
