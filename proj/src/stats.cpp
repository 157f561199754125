#include "mfv/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace mfv {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  engine_.seed(seq);
}

double RngStream::uniform() {
  for (;;) {
    double u = (engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // polar Box-Muller
  for (;;) {
    double u = 2.0 * uniform() - 1.0;
    double v = 2.0 * uniform() - 1.0;
    double s = u * u + v * v;
    if (s <= 0.0 || s >= 1.0) continue;
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }
}

double RngStream::exponential(double rate) {
  if (rate <= 0.0) throw std::invalid_argument("exponential: rate must be > 0");
  return -std::log(uniform()) / rate;
}

double RngStream::gamma(double shape, double rate) {
  if (shape <= 0.0 || rate <= 0.0) throw std::invalid_argument("gamma: shape and rate must be > 0");
  if (shape < 1.0) {
    // boost to shape+1, then scale by U^{1/shape}
    double u = uniform();
    return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze
  double d = shape - 1.0 / 3.0;
  double cc = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + cc * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

int RngStream::discrete(const Eigen::VectorXd& weights) {
  double total = weights.sum();
  if (!(total > 0.0)) throw std::invalid_argument("discrete: weights must have positive sum");
  double u = uniform() * total;
  double acc = 0.0;
  for (int i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u <= acc) return i;
  }
  return static_cast<int>(weights.size()) - 1;
}

Eigen::MatrixXd sample_inverse_wishart(const Eigen::MatrixXd& S, double nu, RngStream& rng) {
  int n = static_cast<int>(S.rows());
  if (S.cols() != n) throw std::invalid_argument("inverse_wishart: S must be square");
  if (nu <= n - 1) throw std::invalid_argument("inverse_wishart: nu must exceed dim - 1");

  Eigen::LLT<Eigen::MatrixXd> lltS(S);
  if (lltS.info() != Eigen::Success)
    throw std::runtime_error("inverse_wishart: S is not positive definite");

  // Bartlett factor of W ~ Wishart(S^{-1}, nu): W = (L^{-T} A)(L^{-T} A)'
  // with L = chol(S); the draw is W^{-1}.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = std::sqrt(rng.chi_squared(nu - i));
    for (int j = 0; j < i; ++j) A(i, j) = rng.normal();
  }
  Eigen::MatrixXd L = lltS.matrixL();
  Eigen::MatrixXd B = L.transpose().triangularView<Eigen::Upper>().solve(A);
  Eigen::MatrixXd W = B * B.transpose();
  Eigen::MatrixXd draw = W.llt().solve(Eigen::MatrixXd::Identity(n, n));
  return 0.5 * (draw + draw.transpose());
}

Eigen::MatrixXd sample_pi_matrix(const Eigen::MatrixXd& rhs,
                                 const Eigen::MatrixXd& omega_bar_inv,
                                 const Eigen::MatrixXd& Sigma, RngStream& rng,
                                 const Eigen::MatrixXd* noise) {
  int k = static_cast<int>(omega_bar_inv.rows());
  int n = static_cast<int>(Sigma.rows());
  if (rhs.rows() != k || rhs.cols() != n)
    throw std::invalid_argument("sample_pi_matrix: rhs must be k x n");

  Eigen::LLT<Eigen::MatrixXd> lltK(omega_bar_inv);
  Eigen::LLT<Eigen::MatrixXd> lltS(Sigma);
  if (lltK.info() != Eigen::Success || lltS.info() != Eigen::Success)
    throw std::runtime_error("sample_pi_matrix: Cholesky failure (check conditioning of "
                             "omega_bar_inv / Sigma)");

  Eigen::MatrixXd C = lltK.matrixL();
  Eigen::MatrixXd Ls = lltS.matrixL();

  Eigen::MatrixXd Xi(k, n);
  if (noise) {
    Xi = *noise;
  } else {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < n; ++j) Xi(i, j) = rng.normal();
  }

  Eigen::MatrixXd X = C.triangularView<Eigen::Lower>().solve(rhs);
  X += Xi * Ls.transpose();
  Eigen::MatrixXd B = C.transpose().triangularView<Eigen::Upper>().solve(X);
  return B.transpose();  // n x np
}

namespace {

// Standard two-parameter GIG(lambda, omega), density prop. to
// x^{lambda-1} exp{-omega (x + 1/x)/2}. Rejection on s = log x, whose
// target log-density lambda*s - omega*cosh(s) is concave.
double sample_gig_std(double lambda, double omega, RngStream& rng) {
  double log_omega = std::log(omega);
  auto ell0 = [&](double s) {
    return lambda * s - 0.5 * (std::exp(s + log_omega) + std::exp(-s + log_omega));
  };
  auto dell0 = [&](double s) {
    return lambda - 0.5 * (std::exp(s + log_omega) - std::exp(-s + log_omega));
  };
  double s_mode = std::asinh(lambda / omega);
  double peak = ell0(s_mode);
  auto ell = [&](double s) { return ell0(s + s_mode) - peak; };

  // bracket ell = -1 on each side of the mode, then bisect
  auto cross = [&](double dir) {
    double step = 1.0;
    while (ell(dir * step) > -1.0) step *= 2.0;
    double lo = step * 0.5, hi = step;
    for (int i = 0; i < 60; ++i) {
      double mid = 0.5 * (lo + hi);
      (ell(dir * mid) > -1.0 ? lo : hi) = mid;
    }
    return dir * 0.5 * (lo + hi);
  };
  double sR = cross(1.0), sL = cross(-1.0);
  double etaR = -dell0(sR + s_mode);
  double etaL = dell0(sL + s_mode);

  double mC = sR - sL;
  double mR = std::exp(-1.0) / etaR;
  double mL = std::exp(-1.0) / etaL;
  double total = mC + mR + mL;

  for (int iter = 0; iter < 10000; ++iter) {
    double u = rng.uniform() * total;
    double s, env;
    if (u < mC) {
      s = sL + rng.uniform() * (sR - sL);
      env = 0.0;
    } else if (u < mC + mR) {
      s = sR + rng.exponential(etaR);
      env = -1.0 - etaR * (s - sR);
    } else {
      s = sL - rng.exponential(etaL);
      env = -1.0 - etaL * (sL - s);
    }
    if (std::log(rng.uniform()) <= ell(s) - env) return std::exp(s + s_mode);
  }
  throw std::runtime_error("sample_gig: rejection sampler failed to accept");
}

}  // namespace

double sample_gig(double a, double b, double c, RngStream& rng) {
  if (b < 0.0 || c < 0.0) throw std::invalid_argument("sample_gig: b and c must be >= 0");
  if (c == 0.0) {
    if (!(a > 0.0 && b > 0.0))
      throw std::invalid_argument("sample_gig: c = 0 requires a > 0 and b > 0");
    return rng.gamma(a, 0.5 * b);
  }
  if (b == 0.0) {
    if (!(a < 0.0)) throw std::invalid_argument("sample_gig: b = 0 requires a < 0");
    return 1.0 / rng.gamma(-a, 0.5 * c);
  }
  double omega = std::sqrt(b * c);
  double scale = std::sqrt(c / b);
  return scale * sample_gig_std(a, omega, rng);
}

namespace {

// Robert (1995) one-sided tail sampler: N(0,1) | x > a, a > 0.
double tail_normal(double a, RngStream& rng) {
  double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    double z = a + rng.exponential(alpha);
    double d = z - alpha;
    if (std::log(rng.uniform()) <= -0.5 * d * d) return z;
  }
}

}  // namespace

double sample_truncated_normal(double mu, double var, double lower, double upper,
                               RngStream& rng) {
  if (!(var > 0.0)) throw std::invalid_argument("truncated_normal: var must be > 0");
  if (!(lower < upper)) throw std::invalid_argument("truncated_normal: need lower < upper");
  double sd = std::sqrt(var);
  double a = (lower - mu) / sd;
  double b = (upper - mu) / sd;

  auto finish = [&](double z) { return mu + sd * z; };

  // flip so that the interval is not entirely below zero
  if (b <= 0.0) {
    double z;
    do {
      z = tail_normal(-b, rng);
    } while (z > -a);
    return finish(-z);
  }
  if (a >= 0.0) {
    double z;
    do {
      z = tail_normal(a, rng);
    } while (z > b);
    return finish(z);
  }
  // interval straddles the mode: plain rejection
  for (;;) {
    double z = rng.normal();
    if (z > a && z < b) return finish(z);
  }
}

double logpdf_normal_mv(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                        const Eigen::MatrixXd& cov) {
  int n = static_cast<int>(y.size());
  if (mean.size() != n || cov.rows() != n || cov.cols() != n)
    throw std::invalid_argument("logpdf_normal_mv: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("logpdf_normal_mv: covariance not positive definite");
  Eigen::MatrixXd L = llt.matrixL();
  Eigen::VectorXd w = L.triangularView<Eigen::Lower>().solve(y - mean);
  double logdet = 2.0 * L.diagonal().array().log().sum();
  return -0.5 * (n * kLog2Pi + logdet + w.squaredNorm());
}

}  // namespace mfv
