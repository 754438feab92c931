#include "fedsurv/glm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fedsurv/parallel.hpp"

namespace fedsurv {

namespace {

// mu and |w| for a block of rows; returns false on nonfinite values
bool eval_block(const DesignMatrix& dm, LinkKind link, const Eigen::VectorXd& beta, long lo,
                long hi, Eigen::VectorXd& resid, Eigen::VectorXd& wabs) {
  for (long r = lo; r < hi; ++r) {
    const double eta = dm.X.row(r).dot(beta);
    const LinkEval le = link_eval(link, eta);
    if (!std::isfinite(le.mu) || !std::isfinite(le.w)) return false;
    resid[r - lo] = dm.y(r) - le.mu;
    wabs[r - lo] = std::abs(le.w);
  }
  return true;
}

}  // namespace

ScoreHessian score_hessian_serial(const DesignMatrix& dm, LinkKind link,
                                  const Eigen::VectorXd& beta) {
  if (dm.cols() != beta.size())
    throw std::invalid_argument("score_hessian: beta length does not match design width");
  const int p = dm.cols();
  ScoreHessian out;
  out.U = Eigen::VectorXd::Zero(p);
  out.H = Eigen::MatrixXd::Zero(p, p);
  for (long r = 0; r < dm.rows(); ++r) {
    const double eta = dm.X.row(r).dot(beta);
    const LinkEval le = link_eval(link, eta);
    if (!std::isfinite(le.mu) || !std::isfinite(le.w))
      throw std::runtime_error("divergent linear predictor");
    out.U += dm.X.row(r).transpose() * (dm.y(r) - le.mu);
    out.H += std::abs(le.w) * (dm.X.row(r).transpose() * dm.X.row(r));
  }
  return out;
}

ScoreHessian score_hessian(const DesignMatrix& dm, LinkKind link, const Eigen::VectorXd& beta) {
  if (dm.cols() != beta.size())
    throw std::invalid_argument("score_hessian: beta length does not match design width");
  const int p = dm.cols();
  const long n = dm.rows();
  const long nb = num_blocks(n);

  std::vector<Eigen::VectorXd> Us(nb);
  std::vector<Eigen::MatrixXd> Hs(nb);
  bool ok = true;

#pragma omp parallel for schedule(static)
  for (long b = 0; b < nb; ++b) {
    const long lo = b * kReduceBlock;
    const long hi = std::min(n, lo + kReduceBlock);
    const long len = hi - lo;
    Eigen::VectorXd resid(len), wabs(len);
    if (!eval_block(dm, link, beta, lo, hi, resid, wabs)) {
      ok = false;
      Us[b] = Eigen::VectorXd::Zero(p);
      Hs[b] = Eigen::MatrixXd::Zero(p, p);
      continue;
    }
    const auto Xb = dm.X.middleRows(lo, len);
    Us[b] = Xb.transpose() * resid;
    Hs[b] = Xb.transpose() * wabs.asDiagonal() * Xb;
  }
  if (!ok) throw std::runtime_error("divergent linear predictor");

  ScoreHessian out;
  out.U = Eigen::VectorXd::Zero(p);
  out.H = Eigen::MatrixXd::Zero(p, p);
  for (long b = 0; b < nb; ++b) {  // fixed combine order => bit-reproducible
    out.U += Us[b];
    out.H += Hs[b];
  }
  return out;
}

Eigen::MatrixXd meat_matrix(const DesignMatrix& dm, LinkKind link, const Eigen::VectorXd& beta) {
  const int p = dm.cols();
  const long n = dm.rows();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(p);
  long r = 0;
  while (r < n) {
    const int c = dm.cluster[r];
    s.setZero();
    for (; r < n && dm.cluster[r] == c; ++r) {
      const double eta = dm.X.row(r).dot(beta);
      const LinkEval le = link_eval(link, eta);
      if (!std::isfinite(le.mu)) throw std::runtime_error("divergent linear predictor");
      s += dm.X.row(r).transpose() * (dm.y(r) - le.mu);
    }
    M.selfadjointView<Eigen::Lower>().rankUpdate(s);
  }
  return Eigen::MatrixXd(M.selfadjointView<Eigen::Lower>());
}

Eigen::MatrixXd chol_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const char* context) {
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw std::runtime_error(context);
  return llt.solve(B);
}

Eigen::VectorXd default_beta_init(const DesignMatrix& dm, LinkKind link) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(dm.cols());
  if (link == LinkKind::cloglog) {
    const int J = dm.n_landmarks;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(J), cnt = Eigen::VectorXd::Zero(J);
    for (long r = 0; r < dm.rows(); ++r) {
      sum[dm.landmark[r]] += dm.y(r);
      cnt[dm.landmark[r]] += 1.0;
    }
    for (int j = 0; j < J; ++j) {
      const double m = std::clamp(cnt[j] > 0 ? sum[j] / cnt[j] : 0.5, 0.01, 0.99);
      beta[j] = link_g(link, m);
    }
  }
  return beta;
}

GlmFit glm_fit(const DesignMatrix& dm, LinkKind link, const Eigen::VectorXd& beta_init,
               const GlmOptions& opts) {
  const int p = dm.cols();
  if (dm.rows() < p) throw std::invalid_argument("glm_fit: fewer rows than parameters");

  Eigen::VectorXd beta = beta_init.size() == 0 ? default_beta_init(dm, link) : beta_init;
  if (beta.size() != p) throw std::invalid_argument("glm_fit: bad beta_init length");

  const double sign = link_weight_sign(link);
  bool converged = false;
  int iter = 0;
  ScoreHessian sh = score_hessian(dm, link, beta);

  // boundary cells (a landmark with no events yet) saturate the linear
  // predictor clamp and leave the score at its numerical floor instead of
  // zero; treat that floor as converged
  const double score_floor = 1e-10 * static_cast<double>(dm.rows());

  for (iter = 1; iter <= opts.max_iter; ++iter) {
    if (sh.U.lpNorm<Eigen::Infinity>() < score_floor) {
      converged = true;
      break;
    }
    Eigen::VectorXd delta = sign * chol_solve(sh.H, sh.U, "rank-deficient design");
    if (std::abs(sh.U.dot(delta)) < opts.epsilon) {
      converged = true;
      break;
    }
    // step-halving when the score norm increases
    const double unorm = sh.U.norm();
    Eigen::VectorXd beta_try;
    ScoreHessian sh_try;
    double scale = 1.0;
    for (int h = 0;; ++h) {
      beta_try = beta + scale * delta;
      sh_try = score_hessian(dm, link, beta_try);
      if (sh_try.U.norm() <= unorm || h >= opts.max_halvings) break;
      scale *= 0.5;
    }
    beta = beta_try;
    sh = sh_try;
  }
  if (!converged) {
    GlmFit fail;
    fail.beta = beta;
    fail.iterations = iter;
    throw std::runtime_error("glm_fit did not converge in " + std::to_string(opts.max_iter) +
                             " iterations");
  }

  GlmFit fit;
  fit.beta = beta;
  fit.information = sh.H;
  fit.meat = meat_matrix(dm, link, beta);
  fit.n_clusters = dm.n_clusters;
  fit.n_rows = dm.rows();
  fit.converged = true;
  fit.iterations = iter;

  // first-order condition, asserted after every fit
  const double tol = 1e-6 * static_cast<double>(dm.rows());
  if (sh.U.lpNorm<Eigen::Infinity>() >= tol)
    throw std::runtime_error("glm_fit: score not at optimum after convergence");
  return fit;
}

Eigen::MatrixXd GlmFit::sandwich_covariance() const {
  Eigen::LLT<Eigen::MatrixXd> llt(information);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("indefinite information matrix in sandwich");
  const Eigen::MatrixXd IinvM = llt.solve(meat);
  Eigen::MatrixXd V = llt.solve(IinvM.transpose()).transpose();
  return 0.5 * (V + V.transpose());
}

Eigen::VectorXd GlmFit::sandwich_std_errors() const {
  return sandwich_covariance().diagonal().cwiseMax(0.0).cwiseSqrt();
}

}  // namespace fedsurv
