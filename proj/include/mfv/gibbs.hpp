#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mfv/priors.hpp"
#include "mfv/ssm.hpp"
#include "mfv/stats.hpp"

namespace mfv {

enum class PsiMode {
  Minnesota,    // steady state pinned at its prior mean, no psi block
  Fixed,        // normal prior with fixed variances
  NormalGamma,  // hierarchical normal-gamma shrinkage
};

struct ModelConfig {
  PsiMode psi_mode = PsiMode::Fixed;
  bool csv = true;  // false: constant volatility (f_t = 1 throughout)
};

struct SamplerConfig {
  int draws = 10000;  // retained draws
  int burnin = 5000;
  int thin = 1;
  std::uint64_t seed = 1;
  double mh_target = 0.44;  // desired acceptance rate for the phi_psi step
  int mh_batch = 100;
  double mh_scale0 = 1.0;
  bool fix_sigma2 = false;     // hold sigma^2 at its initial value
  bool store_h_path = false;   // keep the full volatility path per draw
  bool sample_latent = true;   // toggles for conditional-update testing
  bool sample_pi_sigma = true;
  bool sample_psi = true;
  bool sample_vol = true;
};

struct ChainState {
  Eigen::MatrixXd Pi;     // n x np
  Eigen::MatrixXd Sigma;  // n x n
  Eigen::VectorXd psi;    // n*m
  double lambda_psi = 1.0;
  double phi_psi = 1.0;
  Eigen::VectorXd omega_psi;  // n*m
  double phi = 0.9;
  double sigma2 = 0.01;
  Eigen::VectorXd h;  // length T; entries before p unused
  Eigen::MatrixXd z;  // T x n latent series on the monthly VAR scale, mean included
};

struct DrawsStore {
  Eigen::MatrixXd pi;      // draws x n*np, Pi flattened row-major
  Eigen::MatrixXd sigma;   // draws x n(n+1)/2, vech of Sigma
  Eigen::MatrixXd psi;     // draws x n*m
  Eigen::MatrixXd omega;   // draws x n*m (NG variant; else prior variances)
  Eigen::MatrixXd hyper;   // draws x 4: lambda_psi, phi_psi, phi, sigma2
  Eigen::VectorXd h_last;  // draws
  Eigen::MatrixXd zlag;    // draws x p*n, rows T-p..T-1 of z, oldest first
  Eigen::MatrixXd h_path;  // draws x (T-p) when requested
  int n = 0, p = 0, m = 1;
};

struct GibbsRun {
  DrawsStore draws;
  double mh_accept_rate = 0.0;  // post-burn-in phi_psi acceptance rate
  double mh_scale = 0.0;        // adapted proposal scale
  int explosive = 0;            // retained draws with companion radius >= 1
};

/// vech of a symmetric matrix: lower triangle, column-major.
Eigen::VectorXd vech(const Eigen::MatrixXd& M);

/// Joint (Pi, Sigma) draw from the conditional normal-inverse-Wishart
/// posterior given the homoskedastized latent series. `pi_noise`, when
/// provided, replaces the standard-normal innovation matrix (zero for
/// posterior-mean checks).
void step_pi_sigma(const Eigen::MatrixXd& ztilde, const Eigen::VectorXd& f, int p,
                   const NIWPrior& prior, RngStream& rng, Eigen::MatrixXd& Pi,
                   Eigen::MatrixXd& Sigma, const Eigen::MatrixXd* pi_noise = nullptr,
                   bool sample_sigma = true);

/// Draw psi given the latent series (mean included), deterministic
/// terms d (T x m), and current prior variances omega_psi.
Eigen::VectorXd step_psi(const Eigen::MatrixXd& z, const Eigen::MatrixXd& d,
                         const Eigen::MatrixXd& Pi, const Eigen::MatrixXd& Sigma,
                         const Eigen::VectorXd& f, int p, const Eigen::VectorXd& mu_psi,
                         const Eigen::VectorXd& omega_psi, RngStream& rng);

double step_lambda_psi(double phi_psi, const Eigen::VectorXd& omega_psi, double c0, double c1,
                       RngStream& rng);
Eigen::VectorXd step_omega_psi(const Eigen::VectorXd& psi, const Eigen::VectorXd& mu_psi,
                               double lambda_psi, double phi_psi, RngStream& rng);

/// log of the conditional kernel g(phi_psi | omega_psi, lambda_psi).
double log_g_phi_psi(double phi_psi, const Eigen::VectorXd& omega_psi, double lambda_psi);

/// One log-scale random-walk Metropolis step; returns whether the
/// proposal was accepted.
bool step_phi_psi(double& phi_psi, const Eigen::VectorXd& omega_psi, double lambda_psi,
                  double scale, RngStream& rng);

/// Batched adaptation of the Metropolis scale (burn-in only): after
/// each batch, the log-scale moves by min(0.01, k^{-1/2}) toward the
/// target acceptance rate.
struct AdaptiveScale {
  double log_s = 0.0;
  double target = 0.44;
  int batch = 100;
  int count = 0;
  int accepts = 0;
  int batches_done = 0;

  double scale() const { return std::exp(log_s); }
  void observe(bool accepted, bool adapting);
};

/// The ten-component normal mixture approximating log chi^2_1.
struct LogChi2Mixture {
  Eigen::VectorXd prob, mean, var;
};
const LogChi2Mixture& log_chi2_mixture();

/// Full volatility block: (phi, sigma2) given h, then mixture
/// indicators, then the log-volatility path by forward filtering and
/// backward sampling. `ztilde` is the mean-adjusted latent series.
void step_volatility(const Eigen::MatrixXd& ztilde, const Eigen::MatrixXd& Pi,
                     const Eigen::MatrixXd& Sigma, int p, const CSVPrior& prior, double& phi,
                     double& sigma2, Eigen::VectorXd& h, RngStream& rng,
                     bool fix_sigma2 = false);

/// Run the full Gibbs sampler on raw (not mean-adjusted) data. `d` is
/// the T x m deterministic-term matrix; empty means a constant.
GibbsRun run_chain(const MfModelData& raw, const PriorSpec& prior, const ModelConfig& model,
                   const SamplerConfig& cfg, const Eigen::MatrixXd& d = {});

}  // namespace mfv
