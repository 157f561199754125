#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mfv {

struct MinnesotaSpec {
  double lambda1 = 0.2;          // overall tightness
  double lambda2 = 1.0;          // lag decay
  Eigen::VectorXd s_r;           // per-variable scale adjustments, > 0
  Eigen::MatrixXd pi_mean;       // n x np prior mean for Pi (default zero)
};

/// Diagonal of the prior covariance for the regression rows: entry for
/// lag l of variable r is lambda1^2 / (l^lambda2 * s_r)^2. Length n*p,
/// ordered lag-major (all variables of lag 1, then lag 2, ...).
Eigen::VectorXd minnesota_diagonal(const MinnesotaSpec& spec, int p, int n);

struct NIWPrior {
  Eigen::MatrixXd S;        // n x n, SPD
  double nu = 0.0;          // degrees of freedom
  Eigen::VectorXd omega_pi; // diagonal prior covariance, length n*p
  Eigen::MatrixXd pi_mean;  // n x np
};

enum class SteadyStateVariant { Fixed, NormalGamma };

struct SteadyStatePrior {
  SteadyStateVariant variant = SteadyStateVariant::Fixed;
  Eigen::VectorXd mu_psi;     // prior means, length n*m
  Eigen::VectorXd omega_psi;  // fixed prior variances (Fixed variant)
  double c0 = 0.01;           // gamma hyperprior shape (NG variant)
  double c1 = 0.01;           // gamma hyperprior rate (NG variant)
};

struct CSVPrior {
  double mu_phi = 0.9;       // prior mean of the volatility AR coefficient
  double omega_phi = 0.01;   // its prior variance
  double sigma2_mean = 0.01; // prior scale of the innovation variance
  double d = 4.0;            // prior degrees of freedom
};

struct PriorSpec {
  NIWPrior niw;
  SteadyStatePrior steady_state;
  CSVPrior csv;
  int p = 12;
  int m = 1;  // deterministic-term count; only m = 1 is exercised
};

/// The 13 steady-state prior means and standard deviations of the US
/// application, in panel order (ten monthly, then three quarterly).
struct SteadyStateTableEntry {
  std::string name;
  double mean;
  double sd;
};
std::vector<SteadyStateTableEntry> default_us13_prior();

/// Residual standard deviation of a univariate AR(4) OLS fit; the
/// conventional Minnesota scale adjustment.
double ar_residual_scale(const Eigen::VectorXd& y, int lags = 4);

/// Checks all invariants and dimensional consistency against (n, p).
/// Throws std::invalid_argument naming the offending field.
void validate(const PriorSpec& spec, int n, int p);

/// Conventional defaults for the pieces the configuration leaves open:
/// omega_pi from the Minnesota rule, S = diag(s_r^2), nu = n + 2.
PriorSpec make_default_prior(const MinnesotaSpec& minn, const SteadyStatePrior& ss,
                             const CSVPrior& csv, int n, int p);

}  // namespace mfv
