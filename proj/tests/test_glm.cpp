#include <doctest.h>

#include <cmath>

#include "fedsurv/glm.hpp"
#include "fedsurv/simgen.hpp"
#include "oracles.hpp"

using namespace fedsurv;

namespace {

// toy design with given X/y, one row per cluster
DesignMatrix toy_design(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  DesignMatrix dm;
  dm.X = X;
  dm.y = y;
  dm.n_landmarks = 1;
  dm.n_covariates = static_cast<int>(X.cols());
  dm.n_clusters = X.rows();
  dm.cluster.resize(X.rows());
  dm.landmark.assign(X.rows(), 0);
  for (long r = 0; r < X.rows(); ++r) dm.cluster[r] = static_cast<int>(r);
  dm.colnames.resize(X.cols(), "c");
  return dm;
}

DesignMatrix simulated_design(std::uint64_t seed, int n, const std::vector<std::string>& tv = {}) {
  const auto data = oracles::random_survival_data(seed, n);
  const LandmarkGrid grid = landmarks_equally_spaced(1.0, 7.0, 5);
  const PseudoValues pv = pseudo_exact(data, grid);
  return build_design(data, pv, grid, {"z1", "z2"}, tv);
}

}  // namespace

TEST_CASE("link evaluations at reference points") {
  CHECK(link_eval(LinkKind::identity, 0.3).mu == 0.3);
  CHECK(link_eval(LinkKind::identity, 0.3).w == 1.0);
  CHECK(link_eval(LinkKind::logit, 0.0).mu == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(link_eval(LinkKind::logit, 0.0).w == doctest::Approx(0.25).epsilon(1e-15));
  const LinkEval c = link_eval(LinkKind::cloglog, 0.0);
  CHECK(c.mu == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(c.w == doctest::Approx(-std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("link round trips and derivative consistency") {
  for (LinkKind kind : {LinkKind::identity, LinkKind::logit, LinkKind::cloglog}) {
    for (double mu = 1e-6; mu < 1.0 - 1e-6; mu += 0.007) {
      const double eta = link_g(kind, mu);
      CHECK(link_inverse(kind, eta) == doctest::Approx(mu).epsilon(1e-12));
      const double h = 1e-6;
      const double fd = (link_inverse(kind, eta + h) - link_inverse(kind, eta - h)) / (2 * h);
      const double w = link_eval(kind, eta).w;
      if (std::abs(fd) > 1e-9) CHECK(w == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("score and weighted cross-product on a single row") {
  Eigen::MatrixXd X(1, 2);
  X << 1, 2;
  Eigen::VectorXd y(1);
  y << 3;
  const DesignMatrix dm = toy_design(X, y);
  const ScoreHessian sh = score_hessian(dm, LinkKind::identity, Eigen::VectorXd::Zero(2));
  CHECK(sh.U(0) == 3.0);
  CHECK(sh.U(1) == 6.0);
  CHECK(sh.H(0, 0) == 1.0);
  CHECK(sh.H(0, 1) == 2.0);
  CHECK(sh.H(1, 0) == 2.0);
  CHECK(sh.H(1, 1) == 4.0);
}

TEST_CASE("identity score vanishes when y = Z beta") {
  oracles::TestRng rng(4);
  Eigen::MatrixXd X(30, 3);
  for (long r = 0; r < 30; ++r)
    for (int c = 0; c < 3; ++c) X(r, c) = rng.uniform(-1, 1);
  Eigen::VectorXd beta(3);
  beta << 0.5, -1.0, 2.0;
  const DesignMatrix dm = toy_design(X, X * beta);
  CHECK(score_hessian(dm, LinkKind::identity, beta).U.lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("identity fit equals the normal-equation solution") {
  oracles::TestRng rng(9);
  Eigen::MatrixXd X(80, 3);
  Eigen::VectorXd y(80);
  for (long r = 0; r < 80; ++r) {
    X(r, 0) = 1.0;
    X(r, 1) = rng.uniform(-2, 2);
    X(r, 2) = rng.uniform(-2, 2);
    y(r) = 1.0 + 0.3 * X(r, 1) - 0.7 * X(r, 2) + rng.uniform(-0.5, 0.5);
  }
  DesignMatrix dm = toy_design(X, y);
  const GlmFit fit = glm_fit(dm, LinkKind::identity);
  const Eigen::VectorXd ols = (X.transpose() * X).llt().solve(X.transpose() * y);
  CHECK((fit.beta - ols).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK((fit.information - X.transpose() * X).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("score at the optimum is numerically zero after every fit") {
  for (LinkKind kind : {LinkKind::identity, LinkKind::cloglog, LinkKind::logit}) {
    const DesignMatrix dm = simulated_design(33, 150);
    const GlmFit fit = glm_fit(dm, kind);
    const double tol = 1e-6 * static_cast<double>(dm.rows());
    CHECK(score_hessian(dm, kind, fit.beta).U.lpNorm<Eigen::Infinity>() < tol);
    CHECK(fit.converged);
  }
}

TEST_CASE("weighted cross-product matches the finite-difference score Jacobian") {
  const DesignMatrix dm = simulated_design(14, 60);
  oracles::TestRng rng(3);
  for (LinkKind kind : {LinkKind::identity, LinkKind::logit, LinkKind::cloglog}) {
    const double sign = link_weight_sign(kind);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd beta(dm.cols());
      for (int c = 0; c < dm.cols(); ++c) beta[c] = rng.uniform(-0.5, 0.5);
      const Eigen::MatrixXd H = score_hessian(dm, kind, beta).H;
      // FD Jacobian of -U equals sign * H (H is accumulated with |W|)
      const double h = 1e-6;
      Eigen::MatrixXd J(dm.cols(), dm.cols());
      for (int c = 0; c < dm.cols(); ++c) {
        Eigen::VectorXd bp = beta, bm = beta;
        bp[c] += h;
        bm[c] -= h;
        J.col(c) =
            -(score_hessian(dm, kind, bp).U - score_hessian(dm, kind, bm).U) / (2 * h);
      }
      const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
      CHECK((sign * H - J).cwiseAbs().maxCoeff() / scale < 1e-4);
    }
  }
}

TEST_CASE("information and meat are symmetric and positive semidefinite") {
  const DesignMatrix dm = simulated_design(25, 120);
  const GlmFit fit = glm_fit(dm, LinkKind::cloglog);
  CHECK((fit.information - fit.information.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((fit.meat - fit.meat.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(Eigen::LLT<Eigen::MatrixXd>(fit.information).info() == Eigen::Success);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fit.meat);
  CHECK(es.eigenvalues().minCoeff() > -1e-8 * es.eigenvalues().cwiseAbs().maxCoeff());
}

TEST_CASE("fit is invariant to cluster and within-cluster row permutations") {
  const DesignMatrix dm = simulated_design(42, 60);
  // rotate clusters and reverse rows within each cluster
  DesignMatrix perm = dm;
  const int J = dm.n_landmarks;
  const long n = dm.n_clusters;
  for (long c = 0; c < n; ++c) {
    const long src = (c + 7) % n;
    for (int j = 0; j < J; ++j) {
      perm.X.row(c * J + j) = dm.X.row(src * J + (J - 1 - j));
      perm.y(c * J + j) = dm.y(src * J + (J - 1 - j));
      perm.landmark[c * J + j] = dm.landmark[src * J + (J - 1 - j)];
      perm.cluster[c * J + j] = static_cast<int>(c);
    }
  }
  const GlmFit a = glm_fit(dm, LinkKind::cloglog);
  const GlmFit b = glm_fit(perm, LinkKind::cloglog);
  CHECK((a.beta - b.beta).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((a.information - b.information).cwiseAbs().maxCoeff() <
        1e-12 * a.information.cwiseAbs().maxCoeff());
  CHECK((a.meat - b.meat).cwiseAbs().maxCoeff() < 1e-12 * a.meat.cwiseAbs().maxCoeff());
}

TEST_CASE("sandwich tracks the model-based errors on clean OLS data") {
  // clusters of size 1, homoskedastic noise: the robust and model-based
  // standard errors agree within 25% on average
  oracles::TestRng rng(77);
  double ratio_sum = 0.0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    Eigen::MatrixXd X(60, 2);
    Eigen::VectorXd y(60);
    for (long r = 0; r < 60; ++r) {
      X(r, 0) = 1.0;
      X(r, 1) = rng.uniform(-1.5, 1.5);
      double eps = 0.0;
      for (int k = 0; k < 12; ++k) eps += rng.u01() - 0.5;  // ~N(0,1)
      y(r) = 0.5 + 1.0 * X(r, 1) + eps;
    }
    DesignMatrix dm = toy_design(X, y);
    const GlmFit fit = glm_fit(dm, LinkKind::identity);
    const Eigen::VectorXd resid = y - X * fit.beta;
    const double sigma2 = resid.squaredNorm() / (60 - 2);
    const Eigen::MatrixXd model_cov =
        sigma2 * (X.transpose() * X).llt().solve(Eigen::MatrixXd::Identity(2, 2));
    ratio_sum += fit.sandwich_std_errors()(1) / std::sqrt(model_cov(1, 1));
  }
  CHECK(ratio_sum / reps == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("rank-deficient design is reported") {
  Eigen::MatrixXd X(10, 2);
  for (long r = 0; r < 10; ++r) {
    X(r, 0) = r;
    X(r, 1) = 2.0 * r;  // collinear
  }
  DesignMatrix dm = toy_design(X, Eigen::VectorXd::Ones(10));
  CHECK_THROWS_WITH_AS(glm_fit(dm, LinkKind::identity), "rank-deficient design",
                       std::runtime_error);
}

TEST_CASE("divergent linear predictor is reported") {
  Eigen::MatrixXd X(3, 1);
  X << 1, 2, 3;
  DesignMatrix dm = toy_design(X, Eigen::VectorXd::Ones(3));
  Eigen::VectorXd huge(1);
  huge << 1e308;
  CHECK_THROWS_WITH_AS(score_hessian(dm, LinkKind::identity, huge * 10.0),
                       "divergent linear predictor", std::runtime_error);
}

TEST_CASE("iteration cap raises a non-convergence error") {
  const DesignMatrix dm = simulated_design(50, 100);
  GlmOptions opts;
  opts.max_iter = 1;
  CHECK_THROWS_AS(glm_fit(dm, LinkKind::cloglog, Eigen::VectorXd(), opts), std::runtime_error);
}
