#pragma once

// Cox proportional-hazards comparator: Breslow partial likelihood maximised
// by Newton-Raphson with step-halving. Used as the pooled/local reference in
// the experiments; not part of the federated path.

#include <Eigen/Dense>

#include "fedsurv/types.hpp"

namespace fedsurv {

struct CoxFit {
  Eigen::VectorXd beta;
  Eigen::MatrixXd covariance;  // inverse observed information
  double loglik = 0.0;
  int iterations = 0;
};

struct CoxOptions {
  double loglik_tol = 1e-9;
  int max_iter = 60;
  double beta_bound = 15.0;  // |beta| beyond this flags monotone likelihood
};

CoxFit cox_fit(const std::vector<SubjectRecord>& records,
               const CoxOptions& opts = CoxOptions());

}  // namespace fedsurv
