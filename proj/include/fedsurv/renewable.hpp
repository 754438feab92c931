#pragma once

// Sequential cross-site renewal of the estimating-equation fit: site 1
// contributes a full local fit, each later site solves the incremental
// equation  s*U_k(beta) - I_{k-1}(beta - beta_{k-1}) = 0  (s is the link's
// W sign) with the Cholesky solve matrix I_{k-1} + H_{k,old}, then folds its
// H and per-cluster score outer products into the running information and
// meat matrices. The final sandwich variance is V = I^{-1} M I^{-1}.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fedsurv/glm.hpp"

namespace fedsurv {

struct RenewableState {
  Eigen::VectorXd beta;
  Eigen::MatrixXd info;  // cumulative bread
  Eigen::MatrixXd meat;  // cumulative cluster score outer products
  long sites_processed = 0;
  long n_cum = 0;  // cumulative subject (cluster) count
  std::vector<double> landmarks;
  std::vector<std::string> schema;
};

RenewableState renew_init(const DesignMatrix& site1, LinkKind link,
                          const std::vector<double>& landmarks,
                          const GlmOptions& opts = GlmOptions());

void renew_update(RenewableState& state, const DesignMatrix& site_k, LinkKind link,
                  const GlmOptions& opts = GlmOptions());

struct LandmarkEffect {
  std::string covariate;
  int landmark_index = 0;  // 1-based
  double time = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double wald_z = 0.0;
  double p_value = 0.0;
};

struct FitReport {
  std::vector<std::string> terms;
  Eigen::VectorXd beta;
  Eigen::MatrixXd covariance;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd wald_z;
  Eigen::VectorXd p_values;
  std::vector<LandmarkEffect> landmark_effects;  // beta + gamma_j per flagged covariate
  std::vector<double> landmarks;
  long n_cum = 0;
  long sites_processed = 0;
};

// time_varying must match the covariate subset the designs were built with;
// it drives the delta-method rows beta(t_j) = beta + gamma_j.
FitReport finalize(const RenewableState& state,
                   const std::vector<std::string>& time_varying = {});

double normal_two_sided_p(double z);

}  // namespace fedsurv
