#include "mfv/priors.hpp"

#include <cmath>
#include <stdexcept>

namespace mfv {

Eigen::VectorXd minnesota_diagonal(const MinnesotaSpec& spec, int p, int n) {
  if (!(spec.lambda1 > 0.0)) throw std::invalid_argument("minnesota: lambda1 must be > 0");
  if (spec.lambda2 < 0.0) throw std::invalid_argument("minnesota: lambda2 must be >= 0");
  Eigen::VectorXd s = spec.s_r.size() == 0 ? Eigen::VectorXd::Ones(n) : spec.s_r;
  if (s.size() != n) throw std::invalid_argument("minnesota: s_r length must equal n");
  if ((s.array() <= 0.0).any()) throw std::invalid_argument("minnesota: s_r must be > 0");

  Eigen::VectorXd diag(n * p);
  for (int l = 1; l <= p; ++l)
    for (int r = 0; r < n; ++r) {
      double denom = std::pow(static_cast<double>(l), spec.lambda2) * s[r];
      diag[(l - 1) * n + r] = spec.lambda1 * spec.lambda1 / (denom * denom);
    }
  return diag;
}

std::vector<SteadyStateTableEntry> default_us13_prior() {
  return {
      {"nonfarm_payrolls", 3.0, 0.5},
      {"hours", 3.0, 0.5},
      {"unemployment_rate", 6.0, 1.0},
      {"federal_funds_rate", 5.0, 0.7},
      {"bond_spread", 1.0, 1.0},
      {"stock_market_index", 0.0, 2.0},
      {"personal_consumption", 3.0, 0.7},
      {"industrial_production", 3.0, 0.7},
      {"capacity_utilization", 80.0, 0.7},
      {"cpi_inflation", 2.0, 0.5},
      {"nonresidential_investment", 3.0, 1.5},
      {"residential_investment", 3.0, 1.5},
      {"gdp_growth", 2.0, 0.5},
  };
}

double ar_residual_scale(const Eigen::VectorXd& y, int lags) {
  int T = static_cast<int>(y.size());
  if (T < lags + 2) throw std::invalid_argument("ar_residual_scale: series too short");
  int rows = T - lags;
  Eigen::MatrixXd X(rows, lags + 1);
  Eigen::VectorXd b(rows);
  for (int t = 0; t < rows; ++t) {
    X(t, 0) = 1.0;
    for (int l = 1; l <= lags; ++l) X(t, l) = y[t + lags - l];
    b[t] = y[t + lags];
  }
  Eigen::VectorXd beta = (X.transpose() * X).ldlt().solve(X.transpose() * b);
  double ssr = (b - X * beta).squaredNorm();
  int dof = rows - lags - 1;
  double sd = std::sqrt(ssr / std::max(dof, 1));
  return sd > 0.0 ? sd : 1.0;
}

void validate(const PriorSpec& spec, int n, int p) {
  if (spec.p != p) throw std::invalid_argument("prior: p inconsistent with panel configuration");
  if (spec.m < 1) throw std::invalid_argument("prior: m must be >= 1");

  const auto& niw = spec.niw;
  if (niw.S.rows() != n || niw.S.cols() != n)
    throw std::invalid_argument("prior: S must be n x n");
  Eigen::LLT<Eigen::MatrixXd> llt(niw.S);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("prior: S is not symmetric positive definite");
  if (!(niw.nu > n + 1))
    throw std::invalid_argument("prior: nu must exceed n + 1 for a finite prior mean");
  if (niw.omega_pi.size() != n * p)
    throw std::invalid_argument("prior: omega_pi length must equal n*p");
  if ((niw.omega_pi.array() <= 0.0).any())
    throw std::invalid_argument("prior: omega_pi entries must be > 0");
  if (niw.pi_mean.rows() != n || niw.pi_mean.cols() != n * p)
    throw std::invalid_argument("prior: pi_mean must be n x n*p");

  const auto& ss = spec.steady_state;
  if (ss.mu_psi.size() != n * spec.m)
    throw std::invalid_argument("prior: mu_psi length must equal n*m");
  if (ss.variant == SteadyStateVariant::Fixed) {
    if (ss.omega_psi.size() != n * spec.m)
      throw std::invalid_argument("prior: omega_psi length must equal n*m");
    if ((ss.omega_psi.array() <= 0.0).any())
      throw std::invalid_argument("prior: omega_psi entries must be > 0");
  } else {
    if (!(ss.c0 > 0.0 && ss.c1 > 0.0))
      throw std::invalid_argument("prior: c0 and c1 must be > 0");
  }

  const auto& csv = spec.csv;
  if (!(csv.omega_phi > 0.0)) throw std::invalid_argument("prior: omega_phi must be > 0");
  if (!(csv.sigma2_mean > 0.0)) throw std::invalid_argument("prior: sigma2_mean must be > 0");
  if (!(csv.d > 0.0)) throw std::invalid_argument("prior: d must be > 0");
}

PriorSpec make_default_prior(const MinnesotaSpec& minn, const SteadyStatePrior& ss,
                             const CSVPrior& csv, int n, int p) {
  PriorSpec spec;
  spec.p = p;
  spec.m = 1;
  spec.niw.omega_pi = minnesota_diagonal(minn, p, n);
  Eigen::VectorXd s = minn.s_r.size() == 0 ? Eigen::VectorXd::Ones(n) : minn.s_r;
  spec.niw.S = s.array().square().matrix().asDiagonal();
  spec.niw.nu = n + 2;
  spec.niw.pi_mean = minn.pi_mean.size() == 0 ? Eigen::MatrixXd::Zero(n, n * p) : minn.pi_mean;
  spec.steady_state = ss;
  spec.csv = csv;
  validate(spec, n, p);
  return spec;
}

}  // namespace mfv
