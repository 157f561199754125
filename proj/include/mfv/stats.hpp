#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace mfv {

/// Reproducible random stream: identical (seed, stream) pairs yield
/// identical variate sequences.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform();                  // U(0,1), open at 0
  double normal();                   // N(0,1)
  double gamma(double shape, double rate);
  double chi_squared(double dof) { return gamma(0.5 * dof, 0.5); }
  double exponential(double rate);
  /// Index in [0, weights.size()) with probability proportional to weights.
  int discrete(const Eigen::VectorXd& weights);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Draw from IW(S, nu). Requires S symmetric positive definite and
/// nu > dim - 1. Mean is S/(nu - dim - 1) for nu > dim + 1.
Eigen::MatrixXd sample_inverse_wishart(const Eigen::MatrixXd& S, double nu, RngStream& rng);

/// Draw Pi (n x np) with vec(Pi') | Sigma ~ N(vec(PiBar'), Sigma (x) OmegaBar)
/// via two triangular solves against chol(OmegaBar^{-1}). `rhs` is the
/// np x n matrix OmegaInvPrior*PiPrior' + sum_t ZbarLag_t zbar_t', and
/// `omega_bar_inv` = OmegaInvPrior + sum_t ZbarLag_t ZbarLag_t'.
Eigen::MatrixXd sample_pi_matrix(const Eigen::MatrixXd& rhs,
                                 const Eigen::MatrixXd& omega_bar_inv,
                                 const Eigen::MatrixXd& Sigma, RngStream& rng,
                                 const Eigen::MatrixXd* noise = nullptr);

/// Generalized inverse Gaussian GIG(a, b, c) with density
/// p(y) proportional to y^{a-1} exp{-(b y + c / y) / 2}, y > 0.
/// Valid domains: b > 0, c > 0 (any a); c = 0 requires a > 0 (gamma
/// limit); b = 0 requires a < 0 (inverse-gamma limit).
double sample_gig(double a, double b, double c, RngStream& rng);

/// N(mu, var) truncated to (lower, upper); bounds may be infinite.
double sample_truncated_normal(double mu, double var, double lower, double upper,
                               RngStream& rng);

/// Exact multivariate normal log density; cov must be SPD.
double logpdf_normal_mv(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                        const Eigen::MatrixXd& cov);

}  // namespace mfv
