#pragma once

// Covariate-wise soft-thresholding of a site's local fit toward the global
// federated estimate. Coordinates whose deviation from global falls inside
// lambda_j = gamma * se_local_j are treated as sampling noise and snapped to
// the global value; larger deviations are kept, shrunk by lambda.

#include <Eigen/Dense>
#include <string>

namespace fedsurv {

enum class ThresholdRule {
  algorithm2,  // gamma = c1 * sqrt(ln(min(K, d)))
  text,        // gamma = c1 * sqrt(ln(min(N/n_k, d)))
};

struct DebiasConfig {
  double c1 = 2.0;  // >= 1; the default satisfies the full-shrinkage behaviour
                    // expected under homogeneity (c1 = 1 shrinks fully only
                    // ~59% of the time)
  ThresholdRule rule = ThresholdRule::algorithm2;
};

struct DebiasResult {
  std::string site_id;
  Eigen::VectorXd beta_local;
  Eigen::VectorXd beta_global;
  Eigen::VectorXd lambda;
  Eigen::VectorXd beta_debiased;
  std::vector<bool> shrunk_mask;  // true where fully shrunk to global
  double gamma = 0.0;
  ThresholdRule rule_used = ThresholdRule::algorithm2;
  bool degenerate_fallback = false;  // algorithm2 rule was degenerate (K ^ d = 1)
};

// Positive-part soft threshold: 0 when |x| <= lambda, else sign(x)(|x|-lambda).
double soft_threshold(double x, double lambda);

// beta_global/beta_local/se_local must agree in length; se_local are the
// site's sandwich standard errors. K sites, N total subjects, n_k at this
// site, d covariates (the gamma argument, not the design width).
DebiasResult debias_site(const Eigen::VectorXd& beta_global, const Eigen::VectorXd& beta_local,
                         const Eigen::VectorXd& se_local, const DebiasConfig& config, long K,
                         long N, long n_k, int d, const std::string& site_id = "");

}  // namespace fedsurv
