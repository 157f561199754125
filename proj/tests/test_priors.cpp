#include <doctest.h>

#include <Eigen/Dense>

#include "mfv/priors.hpp"
#include "mfv/stats.hpp"

using namespace mfv;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("Minnesota diagonal follows the lambda1^2 / (l^lambda2 s_r)^2 rule") {
  MinnesotaSpec spec;
  spec.lambda1 = 0.2;
  spec.lambda2 = 1.0;
  spec.s_r = VectorXd(2);
  spec.s_r << 0.5, 2.0;
  VectorXd d = minnesota_diagonal(spec, 3, 2);
  REQUIRE(d.size() == 6);
  CHECK(d[0] == doctest::Approx(0.04 / 0.25).epsilon(1e-14));       // lag 1, var 1
  CHECK(d[1] == doctest::Approx(0.04 / 4.0).epsilon(1e-14));        // lag 1, var 2
  CHECK(d[2] == doctest::Approx(0.04 / (4.0 * 0.25)).epsilon(1e-14));  // lag 2, var 1
  CHECK(d[4] == doctest::Approx(0.04 / (9.0 * 0.25)).epsilon(1e-14));  // lag 3, var 1

  spec.lambda2 = 2.0;
  VectorXd d2 = minnesota_diagonal(spec, 3, 2);
  CHECK(d2[4] == doctest::Approx(0.04 / (81.0 * 0.25)).epsilon(1e-14));

  spec.lambda1 = -1.0;
  CHECK_THROWS_AS(minnesota_diagonal(spec, 3, 2), std::invalid_argument);
}

TEST_CASE("US application steady-state table") {
  auto table = default_us13_prior();
  REQUIRE(table.size() == 13);
  CHECK(table[0].name == "nonfarm_payrolls");
  CHECK(table[0].mean == 3.0);
  CHECK(table[0].sd == 0.5);
  CHECK(table[8].name == "capacity_utilization");
  CHECK(table[8].mean == 80.0);
  CHECK(table[8].sd == 0.7);
  CHECK(table[12].name == "gdp_growth");
  CHECK(table[12].mean == 2.0);
  CHECK(table[12].sd == 0.5);
  CHECK(table[5].name == "stock_market_index");
  CHECK(table[5].mean == 0.0);
  CHECK(table[5].sd == 2.0);
}

TEST_CASE("AR residual scale recovers the innovation standard deviation") {
  RngStream rng(11, 0);
  int T = 2000;
  VectorXd y(T);
  y[0] = 0.0;
  for (int t = 1; t < T; ++t) y[t] = 0.5 * y[t - 1] + 2.0 * rng.normal();
  double s = ar_residual_scale(y);
  CHECK(s == doctest::Approx(2.0).epsilon(0.1));
  CHECK_THROWS_AS(ar_residual_scale(VectorXd::Zero(4)), std::invalid_argument);
}

TEST_CASE("prior validation names the offending field") {
  int n = 2, p = 4;
  MinnesotaSpec minn;
  minn.s_r = VectorXd::Ones(n);
  SteadyStatePrior ss;
  ss.mu_psi = VectorXd::Zero(n);
  ss.omega_psi = VectorXd::Ones(n);
  CSVPrior csv;
  PriorSpec spec = make_default_prior(minn, ss, csv, n, p);

  SUBCASE("valid spec passes") { CHECK_NOTHROW(validate(spec, n, p)); }
  SUBCASE("wrong p") { CHECK_THROWS_AS(validate(spec, n, p + 1), std::invalid_argument); }
  SUBCASE("degrees of freedom too small") {
    spec.niw.nu = n;
    CHECK_THROWS_WITH_AS(validate(spec, n, p), doctest::Contains("nu"), std::invalid_argument);
  }
  SUBCASE("non-positive omega_pi") {
    spec.niw.omega_pi[3] = 0.0;
    CHECK_THROWS_WITH_AS(validate(spec, n, p), doctest::Contains("omega_pi"),
                         std::invalid_argument);
  }
  SUBCASE("S not positive definite") {
    spec.niw.S(0, 0) = -1.0;
    CHECK_THROWS_AS(validate(spec, n, p), std::invalid_argument);
  }
  SUBCASE("mu_psi wrong length") {
    spec.steady_state.mu_psi = VectorXd::Zero(n + 1);
    CHECK_THROWS_WITH_AS(validate(spec, n, p), doctest::Contains("mu_psi"),
                         std::invalid_argument);
  }
  SUBCASE("NG variant checks hyperparameters instead of omega_psi") {
    spec.steady_state.variant = SteadyStateVariant::NormalGamma;
    spec.steady_state.omega_psi.resize(0);
    CHECK_NOTHROW(validate(spec, n, p));
    spec.steady_state.c0 = 0.0;
    CHECK_THROWS_AS(validate(spec, n, p), std::invalid_argument);
  }
  SUBCASE("volatility prior positivity") {
    spec.csv.sigma2_mean = 0.0;
    CHECK_THROWS_AS(validate(spec, n, p), std::invalid_argument);
  }
}
