#include <doctest.h>

#include <cmath>

#include "fedsurv/debias.hpp"
#include "oracles.hpp"

using namespace fedsurv;

TEST_CASE("soft threshold reference points") {
  CHECK(soft_threshold(0.1, 0.2) == 0.0);
  CHECK(soft_threshold(0.5, 0.2) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(soft_threshold(-0.5, 0.2) == doctest::Approx(-0.3).epsilon(1e-15));
  CHECK_THROWS_AS(soft_threshold(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("soft threshold identities") {
  oracles::TestRng rng(9);
  for (int i = 0; i < 500; ++i) {
    const double x = rng.uniform(-3, 3);
    const double lam = rng.uniform(0, 2);
    const double st = soft_threshold(x, lam);
    CHECK(std::abs(st) == doctest::Approx(std::max(0.0, std::abs(x) - lam)).epsilon(1e-14));
    CHECK(std::abs(st) <= std::abs(x) + 1e-15);  // nonexpansive
    CHECK(st * x >= 0.0);                        // sign preserved or zero
  }
}

TEST_CASE("worked coordinate-wise example") {
  // d = 2, K = 4, c1 = 1: gamma = sqrt(ln 2)
  Eigen::VectorXd global(2), local(2), se(2);
  global << 0.0, 0.0;
  local << 0.05, 0.40;
  se << 0.1, 0.3;
  DebiasConfig cfg;
  cfg.c1 = 1.0;
  const DebiasResult res = debias_site(global, local, se, cfg, 4, 4000, 1000, 2);
  CHECK(res.gamma == doctest::Approx(std::sqrt(std::log(2.0))).epsilon(1e-15));
  CHECK(res.lambda[0] == doctest::Approx(0.083255461).epsilon(1e-8));
  CHECK(res.lambda[1] == doctest::Approx(0.249766383).epsilon(1e-8));
  CHECK(res.beta_debiased[0] == 0.0);
  CHECK(res.beta_debiased[1] == doctest::Approx(0.15023361665269069).epsilon(1e-12));
  CHECK(res.shrunk_mask[0]);
  CHECK_FALSE(res.shrunk_mask[1]);
}

TEST_CASE("local equal to global stays at global") {
  Eigen::VectorXd b(3), se(3);
  b << 0.4, -0.2, 1.0;
  se << 0.1, 0.1, 0.1;
  const DebiasResult res = debias_site(b, b, se, DebiasConfig{}, 5, 1000, 100, 3);
  CHECK(res.beta_debiased == b);
  for (bool m : res.shrunk_mask) CHECK(m);
}

TEST_CASE("zero threshold reproduces the local fit") {
  // text rule with N == n_k: gamma = sqrt(ln(min(1, d))) = 0
  Eigen::VectorXd global(2), local(2), se(2);
  global << 0.0, 0.0;
  local << 0.3, -0.8;
  se << 0.2, 0.2;
  DebiasConfig cfg;
  cfg.rule = ThresholdRule::text;
  const DebiasResult res = debias_site(global, local, se, cfg, 3, 500, 500, 2);
  CHECK(res.gamma == 0.0);
  CHECK(res.beta_debiased == local);
}

TEST_CASE("increasing c1 weakly shrinks further toward global") {
  oracles::TestRng rng(4);
  Eigen::VectorXd global(4), local(4), se(4);
  for (int i = 0; i < 4; ++i) {
    global[i] = rng.uniform(-1, 1);
    local[i] = global[i] + rng.uniform(-1, 1);
    se[i] = rng.uniform(0.05, 0.5);
  }
  double prev_dist = 1e300;
  for (double c1 : {1.0, 1.5, 2.0, 3.0, 10.0}) {
    DebiasConfig cfg;
    cfg.c1 = c1;
    const DebiasResult res = debias_site(global, local, se, cfg, 6, 5000, 400, 4);
    const double dist = (res.beta_debiased - global).lpNorm<1>();
    CHECK(dist <= prev_dist + 1e-14);
    prev_dist = dist;
    for (int i = 0; i < 4; ++i) {
      CHECK(res.shrunk_mask[i] ==
            (std::abs(local[i] - global[i]) <= res.lambda[i]));
      const double dev = std::abs(res.beta_debiased[i] - global[i]);
      CHECK(dev <= std::abs(local[i] - global[i]) + 1e-15);
      CHECK((res.beta_debiased[i] - global[i]) * (local[i] - global[i]) >= 0.0);
    }
  }
}

TEST_CASE("degenerate K ^ d = 1 falls back to the text rule") {
  Eigen::VectorXd global(1), local(1), se(1);
  global << 0.0;
  local << 1.0;
  se << 0.2;
  DebiasConfig cfg;  // algorithm2 by default
  const DebiasResult res = debias_site(global, local, se, cfg, 4, 800, 100, 1);
  CHECK(res.degenerate_fallback);
  CHECK(res.rule_used == ThresholdRule::text);
  // with d = 1 the text rule is degenerate too; the flag is what warns the
  // caller that debiasing is disabled
  CHECK(res.gamma == 0.0);
  CHECK(res.beta_debiased == local);
}

TEST_CASE("input validation") {
  Eigen::VectorXd g(2), l(2), se(2), bad_se(2);
  g << 0, 0;
  l << 1, 1;
  se << 0.1, 0.1;
  bad_se << 0.1, 0.0;
  DebiasConfig cfg;
  CHECK_THROWS_AS(debias_site(g, l, bad_se, cfg, 4, 100, 10, 2), std::invalid_argument);
  cfg.c1 = 0.5;
  CHECK_THROWS_AS(debias_site(g, l, se, cfg, 4, 100, 10, 2), std::invalid_argument);
}
