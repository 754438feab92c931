#pragma once

// Local GLM machinery for the pseudo-value estimating equation
//   U(beta) = Z^T (y - mu) = 0
// with working-independence weights. H is accumulated as Z^T diag(|W|) Z so it
// stays positive definite for every link; Newton steps carry the link's W
// sign. The meat matrix sums per-cluster score outer products for the
// sandwich variance.

#include <Eigen/Dense>

#include "fedsurv/link.hpp"
#include "fedsurv/pseudo.hpp"

namespace fedsurv {

struct ScoreHessian {
  Eigen::VectorXd U;  // Z^T (y - mu)
  Eigen::MatrixXd H;  // Z^T diag(|W|) Z
};

// Block-deterministic parallel accumulation; _serial is the plain row loop
// kept as the reference implementation.
ScoreHessian score_hessian(const DesignMatrix& dm, LinkKind link, const Eigen::VectorXd& beta);
ScoreHessian score_hessian_serial(const DesignMatrix& dm, LinkKind link,
                                  const Eigen::VectorXd& beta);

// Per-cluster score contributions s_c = Z_c^T (y_c - mu_c), summed as
// M = sum_c s_c s_c^T.
Eigen::MatrixXd meat_matrix(const DesignMatrix& dm, LinkKind link, const Eigen::VectorXd& beta);

struct GlmOptions {
  double epsilon = 1e-8;  // stop when |U^T delta| < epsilon
  int max_iter = 25;
  int max_halvings = 10;
};

struct GlmFit {
  Eigen::VectorXd beta;
  Eigen::MatrixXd information;  // Z^T diag(|W|) Z at beta
  Eigen::MatrixXd meat;
  long n_clusters = 0;
  long n_rows = 0;
  bool converged = false;
  int iterations = 0;

  // sandwich covariance I^{-1} M I^{-1} and its diagonal square roots
  Eigen::MatrixXd sandwich_covariance() const;
  Eigen::VectorXd sandwich_std_errors() const;
};

// Newton-Raphson (Fisher scoring coincides for the canonical links here) with
// step-halving when the score norm increases. beta_init may be empty; the
// default start is zero with cloglog landmark intercepts initialised at
// g(clamped landmark mean of y).
GlmFit glm_fit(const DesignMatrix& dm, LinkKind link,
               const Eigen::VectorXd& beta_init = Eigen::VectorXd(),
               const GlmOptions& opts = GlmOptions());

Eigen::VectorXd default_beta_init(const DesignMatrix& dm, LinkKind link);

// Solve A X = B for symmetric positive definite A by Cholesky; throws
// std::runtime_error(context) if the factorisation fails.
Eigen::MatrixXd chol_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const char* context);

}  // namespace fedsurv
