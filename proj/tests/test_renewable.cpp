#include <doctest.h>

#include <cmath>

#include "fedsurv/baselines.hpp"
#include "fedsurv/renewable.hpp"
#include "fedsurv/simgen.hpp"
#include "oracles.hpp"

using namespace fedsurv;

namespace {

struct Split {
  std::vector<DesignMatrix> site_designs;
  DesignMatrix pooled;
  LandmarkGrid grid;
};

// one pooled dataset split into K site designs sharing landmarks and pseudo
// values computed per site (each site's own exact jackknife)
Split split_dataset(std::uint64_t seed, int n_per_site, int K,
                    const std::vector<std::string>& tv = {}) {
  Split out;
  out.grid = landmarks_equally_spaced(1.0, 7.0, 5);
  std::vector<SubjectRecord> all;
  for (int k = 0; k < K; ++k) {
    auto site = oracles::random_survival_data(seed + k, n_per_site);
    for (auto& r : site) r.subject_id += "_k" + std::to_string(k);
    all.insert(all.end(), site.begin(), site.end());
    out.site_designs.push_back(
        build_design(site, pseudo_exact(site, out.grid), out.grid, {"z1", "z2"}, tv));
  }
  out.pooled = build_design(all, pseudo_exact(all, out.grid), out.grid, {"z1", "z2"}, tv);
  return out;
}

}  // namespace

TEST_CASE("initialisation is the local fit, bit for bit") {
  const Split sp = split_dataset(1, 150, 1);
  const GlmFit fit = glm_fit(sp.site_designs[0], LinkKind::cloglog);
  const RenewableState st = renew_init(sp.site_designs[0], LinkKind::cloglog, sp.grid.times);
  CHECK(st.beta == fit.beta);
  CHECK(st.info == fit.information);
  CHECK(st.meat == fit.meat);
  CHECK(st.sites_processed == 1);
  CHECK(st.n_cum == 150);
  CHECK(st.info.rows() == sp.site_designs[0].cols());
  CHECK(st.meat.cols() == sp.site_designs[0].cols());
}

TEST_CASE("identity-link initialisation has info = Z^T Z") {
  const Split sp = split_dataset(2, 100, 1);
  const RenewableState st = renew_init(sp.site_designs[0], LinkKind::identity, sp.grid.times);
  const Eigen::MatrixXd ztz = sp.site_designs[0].X.transpose() * sp.site_designs[0].X;
  CHECK((st.info - ztz).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("an empty site leaves the state unchanged") {
  const Split sp = split_dataset(3, 120, 1);
  RenewableState st = renew_init(sp.site_designs[0], LinkKind::cloglog, sp.grid.times);
  const RenewableState before = st;
  DesignMatrix empty;
  empty.colnames = sp.site_designs[0].colnames;
  empty.X.resize(0, sp.site_designs[0].cols());
  empty.y.resize(0);
  renew_update(st, empty, LinkKind::cloglog);
  CHECK(st.beta == before.beta);
  CHECK(st.info == before.info);
  CHECK(st.meat == before.meat);
  CHECK(st.sites_processed == 2);
}

TEST_CASE("a duplicate site is a fixed point of the renewal") {
  const Split sp = split_dataset(4, 140, 1);
  RenewableState st = renew_init(sp.site_designs[0], LinkKind::cloglog, sp.grid.times);
  const Eigen::VectorXd beta1 = st.beta;
  renew_update(st, sp.site_designs[0], LinkKind::cloglog);
  CHECK((st.beta - beta1).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("schema mismatch between sites is rejected") {
  const Split sp = split_dataset(5, 100, 2);
  RenewableState st = renew_init(sp.site_designs[0], LinkKind::cloglog, sp.grid.times);
  DesignMatrix renamed = sp.site_designs[1];
  renamed.colnames[0] = "weird";
  CHECK_THROWS_WITH_AS(renew_update(st, renamed, LinkKind::cloglog),
                       "schema mismatch between sites", std::invalid_argument);
}

TEST_CASE("five-site renewal lands near the pooled fit") {
  for (LinkKind link : {LinkKind::cloglog, LinkKind::identity}) {
    const Split sp = split_dataset(6, 200, 5);
    RenewableState st = renew_init(sp.site_designs[0], link, sp.grid.times);
    for (int k = 1; k < 5; ++k) renew_update(st, sp.site_designs[k], link);
    const GlmFit pooled = glm_fit(sp.pooled, link);
    const FitReport pooled_rep = report_from_single_fit(
        pooled, sp.pooled.colnames, sp.grid.times, {});
    for (int i = 0; i < st.beta.size(); ++i)
      CHECK(std::abs(st.beta[i] - pooled.beta[i]) < 0.5 * pooled_rep.std_errors[i]);
    CHECK(st.n_cum == 1000);
    CHECK(st.sites_processed == 5);
  }
}

TEST_CASE("site order changes the estimate by far less than its standard error") {
  const Split sp = split_dataset(7, 200, 5);
  RenewableState fwd = renew_init(sp.site_designs[0], LinkKind::cloglog, sp.grid.times);
  for (int k = 1; k < 5; ++k) renew_update(fwd, sp.site_designs[k], LinkKind::cloglog);
  RenewableState rev = renew_init(sp.site_designs[4], LinkKind::cloglog, sp.grid.times);
  for (int k = 3; k >= 0; --k) renew_update(rev, sp.site_designs[k], LinkKind::cloglog);
  const FitReport rep = finalize(fwd);
  for (int i = 0; i < fwd.beta.size(); ++i)
    CHECK(std::abs(fwd.beta[i] - rev.beta[i]) < 0.1 * rep.std_errors[i]);
}

TEST_CASE("information accumulates monotonically") {
  const Split sp = split_dataset(8, 150, 4);
  RenewableState st = renew_init(sp.site_designs[0], LinkKind::cloglog, sp.grid.times);
  Eigen::VectorXd prev_eigs =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(st.info).eigenvalues();
  for (int k = 1; k < 4; ++k) {
    renew_update(st, sp.site_designs[k], LinkKind::cloglog);
    const Eigen::VectorXd eigs =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(st.info).eigenvalues();
    for (int i = 0; i < eigs.size(); ++i) CHECK(eigs[i] >= prev_eigs[i] - 1e-9);
    prev_eigs = eigs;
  }
}

TEST_CASE("finalize algebra") {
  RenewableState st;
  st.sites_processed = 1;
  st.n_cum = 10;
  st.schema = {"a", "b"};
  st.beta = Eigen::Vector2d(1.0, -2.0);

  SUBCASE("M = I gives V = I^{-1}") {
    Eigen::Matrix2d m;
    m << 4.0, 1.0, 1.0, 3.0;
    st.info = m;
    st.meat = m;
    const FitReport rep = finalize(st);
    const Eigen::Matrix2d expect = m.inverse();
    CHECK((rep.covariance - expect).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("diagonal case V = diag(b / a^2)") {
    st.info = Eigen::Vector2d(2.0, 5.0).asDiagonal();
    st.meat = Eigen::Vector2d(3.0, 7.0).asDiagonal();
    const FitReport rep = finalize(st);
    CHECK(rep.covariance(0, 0) == doctest::Approx(3.0 / 4.0).epsilon(1e-14));
    CHECK(rep.covariance(1, 1) == doctest::Approx(7.0 / 25.0).epsilon(1e-14));
    CHECK(rep.std_errors[0] == doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));
  }

  SUBCASE("singular info is an error") {
    st.info = Eigen::Matrix2d::Zero();
    st.meat = Eigen::Matrix2d::Identity();
    CHECK_THROWS_AS(finalize(st), std::runtime_error);
  }
}

TEST_CASE("single-site sandwich equals the direct robust covariance") {
  // clusters of size 1: V must match the classical White form computed by hand
  oracles::TestRng rng(11);
  Eigen::MatrixXd X(50, 2);
  Eigen::VectorXd y(50);
  DesignMatrix dm;
  for (long r = 0; r < 50; ++r) {
    X(r, 0) = 1.0;
    X(r, 1) = rng.uniform(-2, 2);
    y(r) = 0.2 + 0.9 * X(r, 1) + rng.uniform(-1, 1) * (1.0 + X(r, 1) * X(r, 1));
  }
  dm.X = X;
  dm.y = y;
  dm.n_landmarks = 1;
  dm.n_covariates = 2;
  dm.n_clusters = 50;
  dm.cluster.resize(50);
  dm.landmark.assign(50, 0);
  for (long r = 0; r < 50; ++r) dm.cluster[r] = static_cast<int>(r);
  dm.colnames = {"i", "x"};

  const RenewableState st = renew_init(dm, LinkKind::identity, {1.0});
  const FitReport rep = finalize(st);

  const Eigen::VectorXd beta = (X.transpose() * X).llt().solve(X.transpose() * y);
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(2, 2);
  for (long r = 0; r < 50; ++r) {
    const Eigen::Vector2d s = X.row(r).transpose() * (y(r) - X.row(r).dot(beta));
    meat += s * s.transpose();
  }
  const Eigen::MatrixXd bread_inv =
      (X.transpose() * X).llt().solve(Eigen::MatrixXd::Identity(2, 2));
  const Eigen::MatrixXd white = bread_inv * meat * bread_inv;
  CHECK((rep.covariance - white).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("sandwich covariance is symmetric PSD with positive diagonal") {
  const Split sp = split_dataset(12, 160, 3);
  RenewableState st = renew_init(sp.site_designs[0], LinkKind::cloglog, sp.grid.times);
  for (int k = 1; k < 3; ++k) renew_update(st, sp.site_designs[k], LinkKind::cloglog);
  const FitReport rep = finalize(st);
  CHECK((rep.covariance - rep.covariance.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rep.covariance);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
  for (int i = 0; i < rep.std_errors.size(); ++i) CHECK(rep.std_errors[i] > 0.0);
}

TEST_CASE("time-varying effects use the delta method") {
  const Split sp = split_dataset(13, 220, 2, {"z2"});
  RenewableState st = renew_init(sp.site_designs[0], LinkKind::cloglog, sp.grid.times);
  renew_update(st, sp.site_designs[1], LinkKind::cloglog);
  const FitReport rep = finalize(st, {"z2"});
  REQUIRE(rep.landmark_effects.size() == 5);

  const auto idx = [&](const std::string& name) {
    return static_cast<int>(std::find(rep.terms.begin(), rep.terms.end(), name) -
                            rep.terms.begin());
  };
  const int c = idx("z2");
  CHECK(rep.landmark_effects[0].estimate == rep.beta[c]);
  CHECK(rep.landmark_effects[0].std_error == rep.std_errors[c]);
  for (int j = 2; j <= 5; ++j) {
    const int g = idx("z2:t" + std::to_string(j));
    const auto& e = rep.landmark_effects[j - 1];
    CHECK(e.estimate == doctest::Approx(rep.beta[c] + rep.beta[g]).epsilon(1e-14));
    const double var = rep.covariance(c, c) + rep.covariance(g, g) + 2 * rep.covariance(c, g);
    CHECK(e.std_error == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
  }
}
