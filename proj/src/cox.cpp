#include "fedsurv/cox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fedsurv {

namespace {

struct CoxData {
  Eigen::MatrixXd Z;        // n x d, sorted by time ascending
  Eigen::VectorXd time;
  std::vector<int> event;
  long n_events = 0;
};

CoxData prepare(const std::vector<SubjectRecord>& records) {
  validate_dataset(records);
  const long n = static_cast<long>(records.size());
  const int d = static_cast<int>(covariate_dim(records));

  std::vector<long> order(n);
  std::iota(order.begin(), order.end(), 0L);
  std::sort(order.begin(), order.end(), [&](long a, long b) {
    if (records[a].time != records[b].time) return records[a].time < records[b].time;
    return records[a].event > records[b].event;
  });

  CoxData cd;
  cd.Z.resize(n, d);
  cd.time.resize(n);
  cd.event.resize(n);
  for (long i = 0; i < n; ++i) {
    const auto& r = records[order[i]];
    for (int c = 0; c < d; ++c) cd.Z(i, c) = r.covariates[c];
    cd.time[i] = r.time;
    cd.event[i] = r.event;
    cd.n_events += r.event;
  }
  if (cd.n_events == 0) throw std::invalid_argument("cox_fit: no events in dataset");
  return cd;
}

// Breslow partial log-likelihood with score and observed information,
// accumulated over risk sets from the largest time down.
void cox_eval(const CoxData& cd, const Eigen::VectorXd& beta, double& loglik, Eigen::VectorXd& U,
              Eigen::MatrixXd& Info) {
  const long n = cd.time.size();
  const int d = static_cast<int>(cd.Z.cols());
  loglik = 0.0;
  U = Eigen::VectorXd::Zero(d);
  Info = Eigen::MatrixXd::Zero(d, d);

  double s0 = 0.0;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(d, d);

  long i = n - 1;
  while (i >= 0) {
    const double t = cd.time[i];
    long j = i;
    double d_events = 0.0;
    Eigen::VectorXd z_events = Eigen::VectorXd::Zero(d);
    double eta_events = 0.0;
    // absorb all subjects tied at t into the risk set
    while (j >= 0 && cd.time[j] == t) {
      const double eta = cd.Z.row(j).dot(beta);
      const double w = std::exp(eta);
      s0 += w;
      s1 += w * cd.Z.row(j).transpose();
      s2.selfadjointView<Eigen::Lower>().rankUpdate(cd.Z.row(j).transpose(), w);
      if (cd.event[j] == 1) {
        d_events += 1.0;
        z_events += cd.Z.row(j).transpose();
        eta_events += eta;
      }
      --j;
    }
    if (d_events > 0.0) {
      const Eigen::VectorXd zbar = s1 / s0;
      loglik += eta_events - d_events * std::log(s0);
      U += z_events - d_events * zbar;
      Eigen::MatrixXd s2full = s2.selfadjointView<Eigen::Lower>();
      Info += d_events * (s2full / s0 - zbar * zbar.transpose());
    }
    i = j;
  }
}

}  // namespace

CoxFit cox_fit(const std::vector<SubjectRecord>& records, const CoxOptions& opts) {
  const CoxData cd = prepare(records);
  const int d = static_cast<int>(cd.Z.cols());

  CoxFit fit;
  if (d == 0) {
    // covariate-free model: nothing to estimate
    Eigen::VectorXd beta0(0), U;
    Eigen::MatrixXd I;
    cox_eval(cd, beta0, fit.loglik, U, I);
    fit.beta = beta0;
    fit.covariance.resize(0, 0);
    return fit;
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  double loglik;
  Eigen::VectorXd U;
  Eigen::MatrixXd Info;
  cox_eval(cd, beta, loglik, U, Info);

  bool converged = false;
  int iter = 0;
  for (iter = 1; iter <= opts.max_iter; ++iter) {
    Eigen::LLT<Eigen::MatrixXd> llt(Info);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("cox_fit: singular information matrix");
    const Eigen::VectorXd step = llt.solve(U);

    double scale = 1.0;
    Eigen::VectorXd beta_try;
    double ll_try;
    Eigen::VectorXd U_try;
    Eigen::MatrixXd I_try;
    for (int h = 0; h < 12; ++h) {
      beta_try = beta + scale * step;
      cox_eval(cd, beta_try, ll_try, U_try, I_try);
      if (ll_try >= loglik || h == 11) break;
      scale *= 0.5;
    }
    const double delta_ll = ll_try - loglik;
    beta = beta_try;
    U = U_try;
    Info = I_try;
    const bool small_change = std::abs(delta_ll) < opts.loglik_tol;
    loglik = ll_try;
    if (small_change) {
      converged = true;
      break;
    }
  }

  if (!converged || beta.lpNorm<Eigen::Infinity>() > opts.beta_bound)
    throw std::runtime_error(
        "cox_fit: monotone likelihood suspected (no interior optimum after " +
        std::to_string(iter) + " iterations, |beta|max = " +
        std::to_string(beta.lpNorm<Eigen::Infinity>()) + ")");

  const double score_tol = 1e-6 * static_cast<double>(cd.time.size());
  if (U.lpNorm<Eigen::Infinity>() >= score_tol)
    throw std::runtime_error("cox_fit: score not at optimum after convergence");

  fit.beta = beta;
  Eigen::LLT<Eigen::MatrixXd> llt(Info);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("cox_fit: singular information at optimum");
  fit.covariance = llt.solve(Eigen::MatrixXd::Identity(d, d));
  fit.loglik = loglik;
  fit.iterations = iter;
  return fit;
}

}  // namespace fedsurv
