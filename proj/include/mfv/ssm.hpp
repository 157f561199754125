#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mfv/stats.hpp"

namespace mfv {

/// One step of a linear-Gaussian state-space model with time-varying
/// dimensions:
///   x_s = T x_{s-1} + c + R eta,  eta ~ N(0, Q)
///   y_s = Z x_s + g + eps,        eps ~ N(0, Hfac Hfac')
/// The first step has T with zero columns, so (c, R Q R') is the prior.
struct SsmStep {
  Eigen::MatrixXd T;     // d_s x d_{s-1}
  Eigen::VectorXd c;     // d_s
  Eigen::MatrixXd R;     // d_s x k_s
  Eigen::MatrixXd Q;     // k_s x k_s
  Eigen::MatrixXd Z;     // o_s x d_s
  Eigen::VectorXd g;     // o_s
  Eigen::MatrixXd Hfac;  // o_s x j_s
  Eigen::VectorXd y;     // o_s observed values
};

struct Ssm {
  std::vector<SsmStep> steps;
  double jitter = 1e-10;  // added to innovation covariances before factorization
};

/// E[x_s | all y] for every step, via Kalman filter plus backward
/// disturbance smoothing. Throws on loss of positive definiteness,
/// naming the step.
std::vector<Eigen::VectorXd> smoothed_means(const Ssm& ssm);

struct SsmSimulation {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> obs;
};
SsmSimulation simulate_ssm(const Ssm& ssm, RngStream& rng);

/// One joint draw from p(x | y) by mean correction: simulate an
/// unconditional pair, smooth both the data and the simulated
/// observations, and recenter.
std::vector<Eigen::VectorXd> simulation_smoother_ssm(const Ssm& ssm, RngStream& rng);

/// Mean-adjusted mixed-frequency data on the common monthly grid.
/// Monthly variables come first in the joint ordering.
struct MfModelData {
  Eigen::MatrixXd ym;  // T x n_m
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> ym_obs;
  Eigen::MatrixXd yq;  // T x n_q
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> yq_obs;
  int p = 0;
  int Tb = -1;  // 0-based last index with all monthly variables observed

  int T() const { return static_cast<int>(ym.rows()); }
  int n_m() const { return static_cast<int>(ym.cols()); }
  int n_q() const { return static_cast<int>(yq.cols()); }
  int n() const { return n_m() + n_q(); }
};

/// Subtract the steady state: monthly rows lose Psi_m d_t, quarterly
/// rows lose the triangular-weighted Psi_q d over the 5-month window.
/// `d` is T x m; if empty, a constant deterministic term d_t = 1.
MfModelData mean_adjust(const MfModelData& raw, const Eigen::MatrixXd& Psi,
                        const Eigen::MatrixXd& d = {});

/// z = ztilde + Psi d.
Eigen::MatrixXd reattach_mean(const Eigen::MatrixXd& ztilde, const Eigen::MatrixXd& Psi,
                              const Eigen::MatrixXd& d = {});

/// Stationary covariance of the stacked vector (z_t', ..., z_{t-p}')'
/// under the VAR (Pi, Sigma), via a doubling Lyapunov iteration.
/// Returns false (and leaves `out` untouched) if the companion matrix
/// is not stable.
bool stationary_stacked_cov(const Eigen::MatrixXd& Pi, const Eigen::MatrixXd& Sigma, int p,
                            Eigen::MatrixXd& out);

/// Largest companion-eigenvalue modulus of Pi (n x np).
double companion_spectral_radius(const Eigen::MatrixXd& Pi);

/// Covariance of the initial stacked state (indices p-1 .. -1): the
/// stationary solution when the VAR is stable, otherwise a diffuse
/// block-diagonal fallback of 10 diag(Sigma) per block.
Eigen::MatrixXd initial_stacked_cov(const Eigen::MatrixXd& Pi, const Eigen::MatrixXd& Sigma,
                                    int p);

/// A built state-space model plus the bookkeeping needed to read a
/// complete T x n latent matrix out of a state trajectory.
struct MfSsm {
  Ssm ssm;
  int T = 0, p = 0, nm = 0, nq = 0;
  // locator per (t, variable): step and position within its state, or
  // step = -1 for entries taken directly from observed data.
  std::vector<std::pair<int, int>> loc;

  Eigen::MatrixXd extract(const std::vector<Eigen::VectorXd>& states,
                          const MfModelData& data) const;
};

/// Compact formulation: quarterly latents only (state n_q(p+1)) while
/// the monthly panel is balanced, switching to the full stacked state
/// for the ragged edge. Requires Tb >= p - 1.
MfSsm build_mf_ssm(const MfModelData& data, const Eigen::MatrixXd& Pi,
                   const Eigen::MatrixXd& Sigma, const Eigen::VectorXd& f);

/// Reference formulation with the full n(p+1) stacked state at every
/// period. Same conditional law as build_mf_ssm; used as the second
/// route in equivalence checks.
MfSsm build_full_ssm(const MfModelData& data, const Eigen::MatrixXd& Pi,
                     const Eigen::MatrixXd& Sigma, const Eigen::VectorXd& f);

struct SmootherDraw {
  Eigen::MatrixXd ztilde;  // T x n complete mean-adjusted latent draw
};

/// Joint draw from p(Z | Pi, Sigma, f, data). `f` has length T; entries
/// before index p are unused.
SmootherDraw simulation_smoother(const MfModelData& data, const Eigen::MatrixXd& Pi,
                                 const Eigen::MatrixXd& Sigma, const Eigen::VectorXd& f,
                                 RngStream& rng);

/// Smoothed posterior mean of the latent matrix (same conditioning).
Eigen::MatrixXd smoother_mean(const MfModelData& data, const Eigen::MatrixXd& Pi,
                              const Eigen::MatrixXd& Sigma, const Eigen::VectorXd& f);

}  // namespace mfv
