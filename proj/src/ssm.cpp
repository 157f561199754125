#include "mfv/ssm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mfv/aggregation.hpp"

namespace mfv {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Factor M = F F' for a symmetric PSD matrix, tolerating zero modes.
MatrixXd psd_sqrt(const MatrixXd& M) {
  if (M.rows() == 0) return MatrixXd(0, 0);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
  if (es.info() != Eigen::Success) throw std::runtime_error("psd_sqrt: eigen decomposition failed");
  VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * lam.asDiagonal();
}

struct FilterStore {
  std::vector<VectorXd> a_pred;
  std::vector<MatrixXd> P_pred;
  std::vector<VectorXd> v;
  std::vector<Eigen::LDLT<MatrixXd>> F;
};

FilterStore kalman_filter(const Ssm& ssm) {
  FilterStore fs;
  std::size_t N = ssm.steps.size();
  fs.a_pred.resize(N);
  fs.P_pred.resize(N);
  fs.v.resize(N);
  fs.F.resize(N);

  VectorXd a(0);
  MatrixXd P(0, 0);
  for (std::size_t s = 0; s < N; ++s) {
    const SsmStep& st = ssm.steps[s];
    VectorXd ap = st.T * a + st.c;
    MatrixXd Pp = st.T * P * st.T.transpose();
    if (st.R.cols() > 0) Pp += st.R * st.Q * st.R.transpose();
    Pp = 0.5 * (Pp + Pp.transpose());
    fs.a_pred[s] = ap;
    fs.P_pred[s] = Pp;

    long o = st.Z.rows();
    if (o > 0) {
      MatrixXd F = st.Z * Pp * st.Z.transpose();
      if (st.Hfac.cols() > 0) F += st.Hfac * st.Hfac.transpose();
      F.diagonal().array() += ssm.jitter;
      Eigen::LDLT<MatrixXd> ldlt(F);
      if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
        throw std::runtime_error("kalman_filter: innovation covariance not positive definite at step " +
                                 std::to_string(s));
      VectorXd v = st.y - st.Z * ap - st.g;
      MatrixXd PZt = Pp * st.Z.transpose();
      MatrixXd FinvZP = ldlt.solve(PZt.transpose());  // o x d
      a = ap + PZt * ldlt.solve(v);
      P = Pp - PZt * FinvZP;
      P = 0.5 * (P + P.transpose());
      fs.v[s] = v;
      fs.F[s] = std::move(ldlt);
    } else {
      a = ap;
      P = Pp;
    }
  }
  return fs;
}

}  // namespace

std::vector<VectorXd> smoothed_means(const Ssm& ssm) {
  FilterStore fs = kalman_filter(ssm);
  std::size_t N = ssm.steps.size();
  std::vector<VectorXd> out(N);

  VectorXd r(0);  // r_s, dimension d_{s+1}
  for (std::size_t si = N; si-- > 0;) {
    const SsmStep& st = ssm.steps[si];
    long d = st.Z.cols() > 0 ? st.Z.cols() : fs.a_pred[si].size();
    VectorXd rprev = VectorXd::Zero(d);
    if (si + 1 < N) {
      // L' r with L = T_{s+1} (I - P Z' F^{-1} Z)
      VectorXd t1 = ssm.steps[si + 1].T.transpose() * r;
      rprev = t1;
      if (st.Z.rows() > 0) {
        VectorXd zp = st.Z * (fs.P_pred[si] * t1);
        rprev -= st.Z.transpose() * fs.F[si].solve(zp);
      }
    }
    if (st.Z.rows() > 0) rprev += st.Z.transpose() * fs.F[si].solve(fs.v[si]);
    out[si] = fs.a_pred[si] + fs.P_pred[si] * rprev;
    r = rprev;
  }
  return out;
}

SsmSimulation simulate_ssm(const Ssm& ssm, RngStream& rng) {
  SsmSimulation sim;
  VectorXd x(0);
  for (const SsmStep& st : ssm.steps) {
    VectorXd xn = st.T * x + st.c;
    if (st.R.cols() > 0) {
      MatrixXd Qf = psd_sqrt(st.Q);
      VectorXd eta(Qf.cols());
      for (long i = 0; i < eta.size(); ++i) eta[i] = rng.normal();
      xn += st.R * (Qf * eta);
    }
    x = xn;
    sim.states.push_back(x);
    VectorXd y = st.Z * x + st.g;
    if (st.Hfac.cols() > 0) {
      VectorXd eps(st.Hfac.cols());
      for (long i = 0; i < eps.size(); ++i) eps[i] = rng.normal();
      y += st.Hfac * eps;
    }
    sim.obs.push_back(y);
  }
  return sim;
}

std::vector<VectorXd> simulation_smoother_ssm(const Ssm& ssm, RngStream& rng) {
  SsmSimulation plus = simulate_ssm(ssm, rng);
  Ssm shadow = ssm;
  for (std::size_t s = 0; s < shadow.steps.size(); ++s) shadow.steps[s].y = plus.obs[s];
  std::vector<VectorXd> hat = smoothed_means(ssm);
  std::vector<VectorXd> hat_plus = smoothed_means(shadow);
  std::vector<VectorXd> out(hat.size());
  for (std::size_t s = 0; s < hat.size(); ++s) out[s] = hat[s] - hat_plus[s] + plus.states[s];
  return out;
}

MfModelData mean_adjust(const MfModelData& raw, const MatrixXd& Psi, const MatrixXd& d) {
  int T = raw.T(), nm = raw.n_m(), nq = raw.n_q();
  MatrixXd dd = d.size() == 0 ? MatrixXd::Ones(T, 1) : d;
  if (Psi.cols() != dd.cols()) throw std::invalid_argument("mean_adjust: Psi/d dimension mismatch");
  if (Psi.rows() != nm + nq) throw std::invalid_argument("mean_adjust: Psi must have n rows");

  auto scheme = triangular_weights();
  MfModelData out = raw;
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < nm; ++j)
      if (raw.ym_obs(t, j)) out.ym(t, j) -= Psi.row(j).dot(dd.row(t));
    for (int j = 0; j < nq; ++j)
      if (raw.yq_obs(t, j)) {
        double mu = 0.0;
        for (int i = 0; i < 5; ++i) {
          int ti = std::max(t - i, 0);  // constant d extends backward
          mu += scheme.weights[i] * Psi.row(nm + j).dot(dd.row(ti));
        }
        out.yq(t, j) -= mu;
      }
  }
  return out;
}

MatrixXd reattach_mean(const MatrixXd& ztilde, const MatrixXd& Psi, const MatrixXd& d) {
  MatrixXd dd = d.size() == 0 ? MatrixXd::Ones(ztilde.rows(), 1) : d;
  return ztilde + dd * Psi.transpose();
}

double companion_spectral_radius(const MatrixXd& Pi) {
  int n = static_cast<int>(Pi.rows());
  int p = static_cast<int>(Pi.cols()) / n;
  MatrixXd A = MatrixXd::Zero(n * p, n * p);
  A.topRows(n) = Pi;
  if (p > 1) A.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
  Eigen::EigenSolver<MatrixXd> es(A, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool stationary_stacked_cov(const MatrixXd& Pi, const MatrixXd& Sigma, int p, MatrixXd& out) {
  int n = static_cast<int>(Pi.rows());
  if (Pi.cols() != n * p) throw std::invalid_argument("stationary_stacked_cov: Pi must be n x np");
  if (companion_spectral_radius(Pi) >= 0.9995) return false;

  MatrixXd A = MatrixXd::Zero(n * p, n * p);
  A.topRows(n) = Pi;
  if (p > 1) A.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
  MatrixXd S = MatrixXd::Zero(n * p, n * p);
  S.topLeftCorner(n, n) = Sigma;

  MatrixXd Ak = A;
  for (int it = 0; it < 100; ++it) {
    MatrixXd inc = Ak * S * Ak.transpose();
    S += inc;
    if (inc.norm() <= 1e-14 * (1.0 + S.norm())) break;
    Ak = Ak * Ak;
    if (!Ak.allFinite()) return false;
  }
  if (!S.allFinite()) return false;

  // autocovariances Gamma(0..p) from the stacked solution
  std::vector<MatrixXd> gamma(p + 1);
  for (int h = 0; h < p; ++h) gamma[h] = S.block(0, h * n, n, n);
  gamma[p] = MatrixXd::Zero(n, n);
  for (int l = 1; l <= p; ++l) gamma[p] += Pi.block(0, (l - 1) * n, n, n) * gamma[p - l];

  out.resize(n * (p + 1), n * (p + 1));
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= p; ++j) {
      int h = j - i;
      out.block(i * n, j * n, n, n) = h >= 0 ? gamma[h] : MatrixXd(gamma[-h].transpose());
    }
  out = 0.5 * (out + out.transpose()).eval();
  return true;
}

namespace {

struct PiParts {
  std::vector<MatrixXd> mm, mq, qm, qq;  // per lag
};

PiParts partition_pi(const MatrixXd& Pi, int nm, int nq, int p) {
  int n = nm + nq;
  PiParts parts;
  for (int l = 0; l < p; ++l) {
    MatrixXd blk = Pi.block(0, l * n, n, n);
    parts.mm.push_back(blk.topLeftCorner(nm, nm));
    parts.mq.push_back(blk.topRightCorner(nm, nq));
    parts.qm.push_back(blk.bottomLeftCorner(nq, nm));
    parts.qq.push_back(blk.bottomRightCorner(nq, nq));
  }
  return parts;
}

}  // namespace

MatrixXd initial_stacked_cov(const MatrixXd& Pi, const MatrixXd& Sigma, int p) {
  MatrixXd V0;
  if (!stationary_stacked_cov(Pi, Sigma, p, V0)) {
    int n = static_cast<int>(Sigma.rows());
    V0 = MatrixXd::Zero(n * (p + 1), n * (p + 1));
    for (int b = 0; b <= p; ++b)
      V0.block(b * n, b * n, n, n) = 10.0 * Sigma.diagonal().asDiagonal();
  }
  return V0;
}

namespace {

void check_inputs(const MfModelData& data, const MatrixXd& Pi, const MatrixXd& Sigma,
                  const VectorXd& f) {
  int n = data.n(), p = data.p;
  if (p < 1) throw std::invalid_argument("ssm: p must be >= 1");
  if (data.n_q() > 0 && p < 4)
    throw std::invalid_argument("ssm: p >= 4 required to represent the aggregation window");
  if (Pi.rows() != n || Pi.cols() != n * p) throw std::invalid_argument("ssm: Pi must be n x np");
  if (Sigma.rows() != n || Sigma.cols() != n) throw std::invalid_argument("ssm: Sigma must be n x n");
  if (f.size() != data.T()) throw std::invalid_argument("ssm: f must have length T");
  for (int t = p; t < data.T(); ++t)
    if (!(f[t] > 0.0)) throw std::invalid_argument("ssm: volatility path must be positive");
  if (data.Tb < p - 1)
    throw std::invalid_argument("ssm: need a balanced monthly block through index p-1");
  for (int t = 0; t <= data.Tb; ++t)
    for (int j = 0; j < data.n_m(); ++j)
      if (!data.ym_obs(t, j))
        throw std::invalid_argument("ssm: monthly series missing before the balanced-through index");
}

}  // namespace

MatrixXd MfSsm::extract(const std::vector<VectorXd>& states, const MfModelData& data) const {
  int n = nm + nq;
  MatrixXd z(T, n);
  for (int t = 0; t < T; ++t)
    for (int v = 0; v < n; ++v) {
      auto [step, pos] = loc[t * n + v];
      if (step < 0) {
        z(t, v) = v < nm ? data.ym(t, v) : data.yq(t, v - nm);
      } else {
        z(t, v) = states[step][pos];
      }
    }
  return z;
}

MfSsm build_mf_ssm(const MfModelData& data, const MatrixXd& Pi, const MatrixXd& Sigma,
                   const VectorXd& f) {
  check_inputs(data, Pi, Sigma, f);
  int T = data.T(), nm = data.n_m(), nq = data.n_q(), n = nm + nq, p = data.p;
  int Tb = std::min(data.Tb, T - 1);
  auto parts = partition_pi(Pi, nm, nq, p);
  auto w = triangular_weights().weights;

  MatrixXd Sqq = Sigma.bottomRightCorner(nq, nq);
  MatrixXd Smq = Sigma.topRightCorner(nm, nq);
  MatrixXd G(nm, nq), Seta;
  if (nq > 0) {
    Eigen::LLT<MatrixXd> llt(Sqq);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("build_mf_ssm: Sigma_qq not positive definite");
    G = llt.solve(Smq.transpose()).transpose();
    Seta = Sigma.topLeftCorner(nm, nm) - G * Smq.transpose();
  } else {
    G = MatrixXd(nm, 0);
    Seta = Sigma;
  }
  MatrixXd Seta_fac = psd_sqrt(0.5 * (Seta + Seta.transpose()));

  int dc = nq * (p + 1);  // compact state dimension
  int df = n * (p + 1);   // full (ragged-edge) state dimension

  MfSsm m;
  m.T = T;
  m.p = p;
  m.nm = nm;
  m.nq = nq;
  m.loc.assign(static_cast<std::size_t>(T) * n, {-1, -1});

  // initial step: quarterly latents at indices p-1 .. -1
  {
    MatrixXd V0 = initial_stacked_cov(Pi, Sigma, p);
    MatrixXd V0q(dc, dc);
    for (int bi = 0; bi <= p; ++bi)
      for (int bj = 0; bj <= p; ++bj)
        V0q.block(bi * nq, bj * nq, nq, nq) = V0.block(bi * n + nm, bj * n + nm, nq, nq);

    SsmStep st;
    st.T = MatrixXd(dc, 0);
    st.c = VectorXd::Zero(dc);
    st.R = psd_sqrt(V0q);
    st.Q = MatrixXd::Identity(st.R.cols(), st.R.cols());

    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> yvals;
    for (int t = 3; t <= p - 1 && t < T; ++t)
      for (int vq = 0; vq < nq; ++vq)
        if (data.yq_obs(t, vq)) {
          Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(dc);
          for (int i = 0; i < 5; ++i) row[(p - 1 - t + i) * nq + vq] = w[i];
          rows.push_back(row);
          yvals.push_back(data.yq(t, vq));
        }
    st.Z = MatrixXd(rows.size(), dc);
    st.y = VectorXd(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      st.Z.row(i) = rows[i];
      st.y[i] = yvals[i];
    }
    st.g = VectorXd::Zero(rows.size());
    st.Hfac = MatrixXd(rows.size(), 0);
    m.ssm.steps.push_back(std::move(st));

    for (int t = 0; t <= p - 1; ++t)
      for (int vq = 0; vq < nq; ++vq)
        m.loc[t * n + nm + vq] = {0, (p - 1 - t) * nq + vq};
  }

  // compact steps t = p .. Tb
  for (int t = p; t <= Tb; ++t) {
    SsmStep st;
    st.T = MatrixXd::Zero(dc, dc);
    for (int l = 1; l <= p; ++l) st.T.block(0, (l - 1) * nq, nq, nq) = parts.qq[l - 1];
    st.T.block(nq, 0, nq * p, nq * p).setIdentity();
    st.c = VectorXd::Zero(dc);
    for (int l = 1; l <= p; ++l)
      st.c.head(nq) += parts.qm[l - 1] * data.ym.row(t - l).transpose();
    st.R = MatrixXd::Zero(dc, nq);
    st.R.topRows(nq).setIdentity();
    st.Q = f[t] * Sqq;

    int nq_obs = 0;
    for (int vq = 0; vq < nq; ++vq)
      if (t >= 3 && data.yq_obs(t, vq)) ++nq_obs;
    int o = nm + nq_obs;
    st.Z = MatrixXd::Zero(o, dc);
    st.g = VectorXd::Zero(o);
    st.y = VectorXd::Zero(o);
    st.Hfac = MatrixXd::Zero(o, Seta_fac.cols());
    // monthly rows: y_m,t = G u_q,t + Pi_mq Zq + Pi_mm Ym + eta
    st.Z.block(0, 0, nm, nq) = G;
    for (int l = 1; l <= p; ++l)
      st.Z.block(0, l * nq, nm, nq) = parts.mq[l - 1] - G * parts.qq[l - 1];
    for (int l = 1; l <= p; ++l)
      st.g.head(nm) += (parts.mm[l - 1] - G * parts.qm[l - 1]) * data.ym.row(t - l).transpose();
    st.y.head(nm) = data.ym.row(t).transpose();
    st.Hfac.topRows(nm) = std::sqrt(f[t]) * Seta_fac;
    int r = nm;
    for (int vq = 0; vq < nq; ++vq)
      if (t >= 3 && data.yq_obs(t, vq)) {
        for (int i = 0; i < 5; ++i) st.Z(r, i * nq + vq) = w[i];
        st.y[r] = data.yq(t, vq);
        ++r;
      }
    m.ssm.steps.push_back(std::move(st));

    int step = static_cast<int>(m.ssm.steps.size()) - 1;
    for (int vq = 0; vq < nq; ++vq) m.loc[t * n + nm + vq] = {step, vq};
    for (int vm = 0; vm < nm; ++vm) m.loc[t * n + vm] = {-1, vm};
  }
  for (int t = 0; t < p && t < T; ++t)
    for (int vm = 0; vm < nm; ++vm) m.loc[t * n + vm] = {-1, vm};

  // ragged edge: switch to the full stacked state
  for (int t = Tb + 1; t < T; ++t) {
    bool first = t == Tb + 1;
    SsmStep st;
    if (first) {
      st.T = MatrixXd::Zero(df, dc);
      st.c = VectorXd::Zero(df);
      // new front block via the VAR; lag blocks copied over
      for (int l = 1; l <= p; ++l) {
        MatrixXd blk = Pi.block(0, (l - 1) * n, n, n);
        st.T.block(0, (l - 1) * nq, n, nq) += blk.rightCols(nq);
        st.c.head(n) += blk.leftCols(nm) * data.ym.row(t - l).transpose();
      }
      for (int j = 1; j <= p; ++j) {
        st.T.block(j * n + nm, (j - 1) * nq, nq, nq).setIdentity();
        st.c.segment(j * n, nm) = data.ym.row(t - j).transpose();
      }
    } else {
      st.T = MatrixXd::Zero(df, df);
      for (int l = 1; l <= p; ++l)
        st.T.block(0, (l - 1) * n, n, n) = Pi.block(0, (l - 1) * n, n, n);
      st.T.block(n, 0, n * p, n * p).setIdentity();
      st.c = VectorXd::Zero(df);
    }
    st.R = MatrixXd::Zero(df, n);
    st.R.topRows(n).setIdentity();
    st.Q = f[t] * Sigma;

    std::vector<int> mobs, qobs;
    for (int vm = 0; vm < nm; ++vm)
      if (data.ym_obs(t, vm)) mobs.push_back(vm);
    for (int vq = 0; vq < nq; ++vq)
      if (t >= 3 && data.yq_obs(t, vq)) qobs.push_back(vq);
    int o = static_cast<int>(mobs.size() + qobs.size());
    st.Z = MatrixXd::Zero(o, df);
    st.g = VectorXd::Zero(o);
    st.y = VectorXd::Zero(o);
    st.Hfac = MatrixXd(o, 0);
    int r = 0;
    for (int vm : mobs) {
      st.Z(r, vm) = 1.0;
      st.y[r] = data.ym(t, vm);
      ++r;
    }
    for (int vq : qobs) {
      for (int i = 0; i < 5; ++i) st.Z(r, i * n + nm + vq) = w[i];
      st.y[r] = data.yq(t, vq);
      ++r;
    }
    m.ssm.steps.push_back(std::move(st));

    int step = static_cast<int>(m.ssm.steps.size()) - 1;
    for (int vm = 0; vm < nm; ++vm)
      m.loc[t * n + vm] = data.ym_obs(t, vm) ? std::make_pair(-1, vm) : std::make_pair(step, vm);
    for (int vq = 0; vq < nq; ++vq) m.loc[t * n + nm + vq] = {step, nm + vq};
  }

  return m;
}

MfSsm build_full_ssm(const MfModelData& data, const MatrixXd& Pi, const MatrixXd& Sigma,
                     const VectorXd& f) {
  check_inputs(data, Pi, Sigma, f);
  int T = data.T(), nm = data.n_m(), nq = data.n_q(), n = nm + nq, p = data.p;
  int df = n * (p + 1);
  auto w = triangular_weights().weights;

  MfSsm m;
  m.T = T;
  m.p = p;
  m.nm = nm;
  m.nq = nq;
  m.loc.assign(static_cast<std::size_t>(T) * n, {-1, -1});

  // initial step holds indices p-1 .. -1; observed monthlies enter as
  // deterministic entries, quarterly latents carry the stationary prior
  {
    MatrixXd V0 = initial_stacked_cov(Pi, Sigma, p);
    MatrixXd V0f = MatrixXd::Zero(df, df);
    for (int bi = 0; bi <= p; ++bi)
      for (int bj = 0; bj <= p; ++bj)
        V0f.block(bi * n + nm, bj * n + nm, nq, nq) = V0.block(bi * n + nm, bj * n + nm, nq, nq);

    SsmStep st;
    st.T = MatrixXd(df, 0);
    st.c = VectorXd::Zero(df);
    for (int b = 0; b < p; ++b)  // block b = index p-1-b; block p = phantom
      st.c.segment(b * n, nm) = data.ym.row(p - 1 - b).transpose();
    st.R = psd_sqrt(V0f);
    st.Q = MatrixXd::Identity(st.R.cols(), st.R.cols());

    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> yvals;
    for (int t = 3; t <= p - 1 && t < T; ++t)
      for (int vq = 0; vq < nq; ++vq)
        if (data.yq_obs(t, vq)) {
          Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(df);
          for (int i = 0; i < 5; ++i) row[(p - 1 - t + i) * n + nm + vq] = w[i];
          rows.push_back(row);
          yvals.push_back(data.yq(t, vq));
        }
    st.Z = MatrixXd(rows.size(), df);
    st.y = VectorXd(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      st.Z.row(i) = rows[i];
      st.y[i] = yvals[i];
    }
    st.g = VectorXd::Zero(rows.size());
    st.Hfac = MatrixXd(rows.size(), 0);
    m.ssm.steps.push_back(std::move(st));

    for (int t = 0; t <= p - 1; ++t)
      for (int vq = 0; vq < nq; ++vq)
        m.loc[t * n + nm + vq] = {0, (p - 1 - t) * n + nm + vq};
    for (int t = 0; t < p && t < T; ++t)
      for (int vm = 0; vm < nm; ++vm) m.loc[t * n + vm] = {-1, vm};
  }

  for (int t = p; t < T; ++t) {
    SsmStep st;
    st.T = MatrixXd::Zero(df, df);
    for (int l = 1; l <= p; ++l)
      st.T.block(0, (l - 1) * n, n, n) = Pi.block(0, (l - 1) * n, n, n);
    st.T.block(n, 0, n * p, n * p).setIdentity();
    st.c = VectorXd::Zero(df);
    st.R = MatrixXd::Zero(df, n);
    st.R.topRows(n).setIdentity();
    st.Q = f[t] * Sigma;

    std::vector<int> mobs, qobs;
    for (int vm = 0; vm < nm; ++vm)
      if (data.ym_obs(t, vm)) mobs.push_back(vm);
    for (int vq = 0; vq < nq; ++vq)
      if (data.yq_obs(t, vq)) qobs.push_back(vq);
    int o = static_cast<int>(mobs.size() + qobs.size());
    st.Z = MatrixXd::Zero(o, df);
    st.g = VectorXd::Zero(o);
    st.y = VectorXd::Zero(o);
    st.Hfac = MatrixXd(o, 0);
    int r = 0;
    for (int vm : mobs) {
      st.Z(r, vm) = 1.0;
      st.y[r] = data.ym(t, vm);
      ++r;
    }
    for (int vq : qobs) {
      for (int i = 0; i < 5; ++i) st.Z(r, i * n + nm + vq) = w[i];
      st.y[r] = data.yq(t, vq);
      ++r;
    }
    m.ssm.steps.push_back(std::move(st));

    int step = static_cast<int>(m.ssm.steps.size()) - 1;
    for (int vm = 0; vm < nm; ++vm)
      m.loc[t * n + vm] = data.ym_obs(t, vm) ? std::make_pair(-1, vm) : std::make_pair(step, vm);
    for (int vq = 0; vq < nq; ++vq) m.loc[t * n + nm + vq] = {step, nm + vq};
  }
  return m;
}

SmootherDraw simulation_smoother(const MfModelData& data, const MatrixXd& Pi,
                                 const MatrixXd& Sigma, const VectorXd& f, RngStream& rng) {
  MfSsm model = build_mf_ssm(data, Pi, Sigma, f);
  auto states = simulation_smoother_ssm(model.ssm, rng);
  return {model.extract(states, data)};
}

MatrixXd smoother_mean(const MfModelData& data, const MatrixXd& Pi, const MatrixXd& Sigma,
                       const VectorXd& f) {
  MfSsm model = build_mf_ssm(data, Pi, Sigma, f);
  auto states = smoothed_means(model.ssm);
  return model.extract(states, data);
}

}  // namespace mfv
