#include "mfv/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd vech(const MatrixXd& M) {
  int n = static_cast<int>(M.rows());
  VectorXd v(n * (n + 1) / 2);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) v[k++] = M(i, j);
  return v;
}

void step_pi_sigma(const MatrixXd& ztilde, const VectorXd& f, int p, const NIWPrior& prior,
                   RngStream& rng, MatrixXd& Pi, MatrixXd& Sigma, const MatrixXd* pi_noise,
                   bool sample_sigma) {
  int T = static_cast<int>(ztilde.rows());
  int n = static_cast<int>(ztilde.cols());
  int k = n * p;
  int Teff = T - p;
  if (Teff < 1) throw std::invalid_argument("step_pi_sigma: sample too short");

  MatrixXd Y(Teff, n), X(Teff, k);
  for (int t = p; t < T; ++t) {
    double w = 1.0 / std::sqrt(f[t]);
    Y.row(t - p) = w * ztilde.row(t);
    for (int l = 1; l <= p; ++l) X.row(t - p).segment((l - 1) * n, n) = w * ztilde.row(t - l);
  }

  VectorXd prior_prec = prior.omega_pi.cwiseInverse();
  MatrixXd K = X.transpose() * X;
  K.diagonal() += prior_prec;
  MatrixXd rhs = X.transpose() * Y + prior_prec.asDiagonal() * prior.pi_mean.transpose();

  Eigen::LLT<MatrixXd> lltK(K);
  if (lltK.info() != Eigen::Success)
    throw std::runtime_error("step_pi_sigma: posterior precision not positive definite");
  MatrixXd Bbar = lltK.solve(rhs);  // k x n posterior mean of Pi'

  if (sample_sigma) {
    MatrixXd Sbar = prior.S + Y.transpose() * Y +
                    prior.pi_mean * prior_prec.asDiagonal() * prior.pi_mean.transpose() -
                    Bbar.transpose() * K * Bbar;
    Sbar = 0.5 * (Sbar + Sbar.transpose()).eval();
    Sigma = sample_inverse_wishart(Sbar, prior.nu + Teff, rng);
  }
  Pi = sample_pi_matrix(rhs, K, Sigma, rng, pi_noise);
}

VectorXd step_psi(const MatrixXd& z, const MatrixXd& d, const MatrixXd& Pi, const MatrixXd& Sigma,
                  const VectorXd& f, int p, const VectorXd& mu_psi, const VectorXd& omega_psi,
                  RngStream& rng) {
  int T = static_cast<int>(z.rows());
  int n = static_cast<int>(z.cols());
  MatrixXd dd = d.size() == 0 ? MatrixXd::Ones(T, 1) : d;
  int m = static_cast<int>(dd.cols());
  int q = (p + 1) * m;

  // U = (I_nm; I_m (x) Pi_1; ...; I_m (x) Pi_p), block j of size nm
  MatrixXd U = MatrixXd::Zero(q * n, n * m);
  U.topRows(n * m).setIdentity();
  for (int l = 1; l <= p; ++l) {
    MatrixXd Pl = Pi.block(0, (l - 1) * n, n, n);
    for (int mi = 0; mi < m; ++mi)
      U.block(l * n * m + mi * n, mi * n, n, n) = Pl;
  }

  MatrixXd A = MatrixXd::Zero(q, q);  // sum of dcheck dcheck'
  MatrixXd C = MatrixXd::Zero(n, q);  // sum of zcheck dcheck'
  VectorXd dt(q), ct(n);
  for (int t = p; t < T; ++t) {
    double w = 1.0 / std::sqrt(f[t]);
    dt.head(m) = dd.row(t).transpose();
    for (int l = 1; l <= p; ++l) dt.segment(l * m, m) = -dd.row(t - l).transpose();
    dt *= w;
    ct = z.row(t).transpose();
    for (int l = 1; l <= p; ++l)
      ct -= Pi.block(0, (l - 1) * n, n, n) * z.row(t - l).transpose();
    ct *= w;
    A += dt * dt.transpose();
    C += ct * dt.transpose();
  }

  Eigen::LLT<MatrixXd> lltS(Sigma);
  if (lltS.info() != Eigen::Success)
    throw std::runtime_error("step_psi: Sigma not positive definite");
  MatrixXd Sinv = lltS.solve(MatrixXd::Identity(n, n));

  MatrixXd M = MatrixXd::Zero(q * n, q * n);  // A (x) Sigma^{-1}
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) M.block(i * n, j * n, n, n) = A(i, j) * Sinv;

  MatrixXd Prec = U.transpose() * M * U;
  Prec.diagonal() += omega_psi.cwiseInverse();
  Prec = 0.5 * (Prec + Prec.transpose()).eval();

  MatrixXd SC = Sinv * C;
  VectorXd rhs = U.transpose() * Eigen::Map<const VectorXd>(SC.data(), SC.size());
  rhs += omega_psi.cwiseInverse().cwiseProduct(mu_psi);

  Eigen::LLT<MatrixXd> lltP(Prec);
  if (lltP.info() != Eigen::Success)
    throw std::runtime_error("step_psi: posterior precision not positive definite");
  VectorXd mean = lltP.solve(rhs);
  VectorXd xi(n * m);
  for (int i = 0; i < xi.size(); ++i) xi[i] = rng.normal();
  MatrixXd L = lltP.matrixL();
  return mean + L.transpose().triangularView<Eigen::Upper>().solve(xi);
}

double step_lambda_psi(double phi_psi, const VectorXd& omega_psi, double c0, double c1,
                       RngStream& rng) {
  double shape = omega_psi.size() * phi_psi + c0;
  double rate = 0.5 * phi_psi * omega_psi.sum() + c1;
  return rng.gamma(shape, rate);
}

VectorXd step_omega_psi(const VectorXd& psi, const VectorXd& mu_psi, double lambda_psi,
                        double phi_psi, RngStream& rng) {
  VectorXd omega(psi.size());
  for (int j = 0; j < psi.size(); ++j) {
    double dev = psi[j] - mu_psi[j];
    omega[j] = sample_gig(phi_psi - 0.5, lambda_psi * phi_psi, dev * dev, rng);
  }
  return omega;
}

double log_g_phi_psi(double phi_psi, const VectorXd& omega_psi, double lambda_psi) {
  int J = static_cast<int>(omega_psi.size());
  double log_sum = omega_psi.array().log().sum();
  return J * (phi_psi * std::log(0.5 * lambda_psi * phi_psi) - std::lgamma(phi_psi) - phi_psi) +
         (phi_psi - 1.0) * log_sum - 0.5 * lambda_psi * phi_psi * omega_psi.sum();
}

bool step_phi_psi(double& phi_psi, const VectorXd& omega_psi, double lambda_psi, double scale,
                  RngStream& rng) {
  double prop = phi_psi * std::exp(scale * rng.normal());
  double log_r = log_g_phi_psi(prop, omega_psi, lambda_psi) -
                 log_g_phi_psi(phi_psi, omega_psi, lambda_psi) + std::log(prop / phi_psi);
  if (std::log(rng.uniform()) < log_r) {
    phi_psi = prop;
    return true;
  }
  return false;
}

void AdaptiveScale::observe(bool accepted, bool adapting) {
  if (!adapting) return;
  ++count;
  if (accepted) ++accepts;
  if (count == batch) {
    ++batches_done;
    double delta = std::min(0.01, 1.0 / std::sqrt(static_cast<double>(batches_done)));
    log_s += accepts > target * batch ? delta : -delta;
    count = 0;
    accepts = 0;
  }
}

const LogChi2Mixture& log_chi2_mixture() {
  static const LogChi2Mixture mix = [] {
    LogChi2Mixture m;
    m.prob.resize(10);
    m.mean.resize(10);
    m.var.resize(10);
    m.prob << 0.00609, 0.04775, 0.13057, 0.20674, 0.22715, 0.18842, 0.12047, 0.05591, 0.01575,
        0.00115;
    m.mean << 1.92677, 1.34744, 0.73504, 0.02266, -0.85173, -1.97278, -3.46788, -5.55246,
        -8.68384, -14.65000;
    m.var << 0.11265, 0.17788, 0.26768, 0.40611, 0.62699, 0.98583, 1.57469, 2.54498, 4.16591,
        7.33342;
    return m;
  }();
  return mix;
}

void step_volatility(const MatrixXd& ztilde, const MatrixXd& Pi, const MatrixXd& Sigma, int p,
                     const CSVPrior& prior, double& phi, double& sigma2, VectorXd& h,
                     RngStream& rng, bool fix_sigma2) {
  int T = static_cast<int>(ztilde.rows());
  int n = static_cast<int>(ztilde.cols());
  int Teff = T - p;
  if (Teff < 2) throw std::invalid_argument("step_volatility: sample too short");
  const LogChi2Mixture& mix = log_chi2_mixture();

  Eigen::LLT<MatrixXd> lltS(Sigma);
  if (lltS.info() != Eigen::Success)
    throw std::runtime_error("step_volatility: Sigma not positive definite");
  MatrixXd L = lltS.matrixL();

  MatrixXd ystar(Teff, n);
  VectorXd ut(n);
  for (int t = p; t < T; ++t) {
    ut = ztilde.row(t).transpose();
    for (int l = 1; l <= p; ++l)
      ut -= Pi.block(0, (l - 1) * n, n, n) * ztilde.row(t - l).transpose();
    VectorXd e = L.triangularView<Eigen::Lower>().solve(ut);
    ystar.row(t - p) = (e.array().square() + 1e-10).log().transpose();
  }

  VectorXd hw = h.segment(p, Teff);  // working copy of the volatility path

  // (phi, sigma^2) | h
  {
    double sxx = 0.0, sxy = 0.0;
    for (int t = 1; t < Teff; ++t) {
      sxx += hw[t - 1] * hw[t - 1];
      sxy += hw[t] * hw[t - 1];
    }
    double prec = sxx / sigma2 + 1.0 / prior.omega_phi;
    double mean = (sxy / sigma2 + prior.mu_phi / prior.omega_phi) / prec;
    phi = sample_truncated_normal(mean, 1.0 / prec, -1.0 + 1e-8, 1.0 - 1e-8, rng);

    if (!fix_sigma2) {
      double ssr = (1.0 - phi * phi) * hw[0] * hw[0];
      for (int t = 1; t < Teff; ++t) {
        double r = hw[t] - phi * hw[t - 1];
        ssr += r * r;
      }
      double dbar = prior.d + Teff;
      double sbar2 = prior.d * prior.sigma2_mean + ssr;
      sigma2 = sbar2 / rng.chi_squared(dbar);
    }
  }

  // mixture indicators | h, then h | indicators by scalar FFBS. Each
  // period contributes n precision-weighted pseudo-observations.
  VectorXd obs_prec(Teff), obs_mean(Teff);
  VectorXd wts(10);
  for (int t = 0; t < Teff; ++t) {
    double pr = 0.0, pm = 0.0;
    for (int i = 0; i < n; ++i) {
      double resid = ystar(t, i) - hw[t];
      for (int k = 0; k < 10; ++k) {
        double dk = resid - mix.mean[k];
        wts[k] = mix.prob[k] / std::sqrt(mix.var[k]) * std::exp(-0.5 * dk * dk / mix.var[k]);
      }
      int k = rng.discrete(wts);
      pr += 1.0 / mix.var[k];
      pm += (ystar(t, i) - mix.mean[k]) / mix.var[k];
    }
    obs_prec[t] = pr;
    obs_mean[t] = pm / pr;
  }

  VectorXd fm(Teff), fP(Teff);
  double apri = 0.0;
  double Ppri = std::abs(phi) < 1.0 ? sigma2 / (1.0 - phi * phi) : 100.0 * sigma2;
  for (int t = 0; t < Teff; ++t) {
    if (t > 0) {
      apri = phi * fm[t - 1];
      Ppri = phi * phi * fP[t - 1] + sigma2;
    }
    double Fpost = 1.0 / (1.0 / Ppri + obs_prec[t]);
    fm[t] = Fpost * (apri / Ppri + obs_prec[t] * obs_mean[t]);
    fP[t] = Fpost;
  }
  hw[Teff - 1] = fm[Teff - 1] + std::sqrt(fP[Teff - 1]) * rng.normal();
  for (int t = Teff - 2; t >= 0; --t) {
    double denom = phi * phi * fP[t] + sigma2;
    double gain = fP[t] * phi / denom;
    double mean = fm[t] + gain * (hw[t + 1] - phi * fm[t]);
    double var = fP[t] - gain * phi * fP[t];
    hw[t] = mean + std::sqrt(std::max(var, 0.0)) * rng.normal();
  }
  h.segment(p, Teff) = hw;
}

GibbsRun run_chain(const MfModelData& raw, const PriorSpec& prior, const ModelConfig& model,
                   const SamplerConfig& cfg, const MatrixXd& d) {
  int T = raw.T(), n = raw.n(), p = raw.p, m = prior.m;
  validate(prior, n, p);
  MatrixXd dd = d.size() == 0 ? MatrixXd::Ones(T, 1) : d;
  if (dd.cols() != m) throw std::invalid_argument("run_chain: d has wrong number of columns");

  RngStream rng(cfg.seed, 0);

  ChainState st;
  st.Pi = prior.niw.pi_mean;
  st.Sigma = prior.niw.S / (prior.niw.nu - n - 1.0);
  st.psi = prior.steady_state.mu_psi;
  st.omega_psi = model.psi_mode == PsiMode::NormalGamma || prior.steady_state.omega_psi.size() == 0
                     ? VectorXd::Ones(n * m).eval()
                     : prior.steady_state.omega_psi;
  st.lambda_psi = 1.0;
  st.phi_psi = 1.0;
  st.phi = std::clamp(prior.csv.mu_phi, -0.999, 0.999);
  st.sigma2 = prior.csv.sigma2_mean;
  st.h = VectorXd::Zero(T);

  AdaptiveScale adapt;
  adapt.target = cfg.mh_target;
  adapt.batch = cfg.mh_batch;
  adapt.log_s = std::log(cfg.mh_scale0);

  int total = cfg.burnin + cfg.draws * cfg.thin;
  int Teff = T - p;

  GibbsRun run;
  DrawsStore& out = run.draws;
  out.n = n;
  out.p = p;
  out.m = m;
  out.pi.resize(cfg.draws, n * n * p);
  out.sigma.resize(cfg.draws, n * (n + 1) / 2);
  out.psi.resize(cfg.draws, n * m);
  out.omega.resize(cfg.draws, n * m);
  out.hyper.resize(cfg.draws, 4);
  out.h_last.resize(cfg.draws);
  out.zlag.resize(cfg.draws, p * n);
  if (cfg.store_h_path) out.h_path.resize(cfg.draws, Teff);

  int post_accepts = 0, post_count = 0;
  MatrixXd Psi = Eigen::Map<MatrixXd>(st.psi.data(), n, m);
  MatrixXd ztilde;

  for (int it = 0; it < total; ++it) {
    bool burn = it < cfg.burnin;
    VectorXd f = st.h.array().exp();

    // latent series | parameters
    if (cfg.sample_latent || it == 0) {
      MfModelData adj = mean_adjust(raw, Psi, dd);
      ztilde = simulation_smoother(adj, st.Pi, st.Sigma, f, rng).ztilde;
      st.z = reattach_mean(ztilde, Psi, dd);
    }

    // (Pi, Sigma) | latent series
    if (cfg.sample_pi_sigma) step_pi_sigma(ztilde, f, p, prior.niw, rng, st.Pi, st.Sigma);

    // steady-state block
    if (model.psi_mode != PsiMode::Minnesota && cfg.sample_psi) {
      if (model.psi_mode == PsiMode::NormalGamma) {
        st.lambda_psi = step_lambda_psi(st.phi_psi, st.omega_psi, prior.steady_state.c0,
                                        prior.steady_state.c1, rng);
        bool acc = step_phi_psi(st.phi_psi, st.omega_psi, st.lambda_psi, adapt.scale(), rng);
        adapt.observe(acc, burn);
        if (!burn) {
          ++post_count;
          if (acc) ++post_accepts;
        }
        st.omega_psi = step_omega_psi(st.psi, prior.steady_state.mu_psi, st.lambda_psi,
                                      st.phi_psi, rng);
      }
      st.psi = step_psi(st.z, dd, st.Pi, st.Sigma, f, p, prior.steady_state.mu_psi,
                        st.omega_psi, rng);
      Psi = Eigen::Map<MatrixXd>(st.psi.data(), n, m);
      ztilde = st.z - dd * Psi.transpose();
    }

    // common stochastic volatility
    if (model.csv && cfg.sample_vol)
      step_volatility(ztilde, st.Pi, st.Sigma, p, prior.csv, st.phi, st.sigma2, st.h, rng,
                      cfg.fix_sigma2);

    if (!burn && (it - cfg.burnin) % cfg.thin == 0) {
      int j = (it - cfg.burnin) / cfg.thin;
      if (j >= cfg.draws) break;
      out.pi.row(j) =
          Eigen::Map<const VectorXd>(MatrixXd(st.Pi.transpose()).data(), n * n * p).transpose();
      out.sigma.row(j) = vech(st.Sigma).transpose();
      out.psi.row(j) = st.psi.transpose();
      out.omega.row(j) = st.omega_psi.transpose();
      out.hyper(j, 0) = st.lambda_psi;
      out.hyper(j, 1) = st.phi_psi;
      out.hyper(j, 2) = st.phi;
      out.hyper(j, 3) = st.sigma2;
      out.h_last[j] = st.h[T - 1];
      for (int l = 0; l < p; ++l) out.zlag.row(j).segment(l * n, n) = st.z.row(T - p + l);
      if (cfg.store_h_path) out.h_path.row(j) = st.h.segment(p, Teff).transpose();
      if (companion_spectral_radius(st.Pi) >= 1.0) ++run.explosive;
    }
  }

  run.mh_accept_rate = post_count > 0 ? static_cast<double>(post_accepts) / post_count : 0.0;
  run.mh_scale = adapt.scale();
  return run;
}

}  // namespace mfv
