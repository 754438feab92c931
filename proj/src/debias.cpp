#include "fedsurv/debias.hpp"

#include <cmath>
#include <stdexcept>

namespace fedsurv {

double soft_threshold(double x, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("soft_threshold: negative lambda");
  const double a = std::abs(x);
  if (a <= lambda) return 0.0;
  return (x > 0 ? 1.0 : -1.0) * (a - lambda);
}

namespace {

double gamma_for(ThresholdRule rule, double c1, long K, long N, long n_k, int d) {
  double arg = 0.0;
  if (rule == ThresholdRule::algorithm2) {
    arg = static_cast<double>(std::min<long>(K, d));
  } else {
    arg = std::min(static_cast<double>(N) / static_cast<double>(n_k), static_cast<double>(d));
  }
  return c1 * std::sqrt(std::max(0.0, std::log(arg)));
}

}  // namespace

DebiasResult debias_site(const Eigen::VectorXd& beta_global, const Eigen::VectorXd& beta_local,
                         const Eigen::VectorXd& se_local, const DebiasConfig& config, long K,
                         long N, long n_k, int d, const std::string& site_id) {
  const int p = static_cast<int>(beta_global.size());
  if (beta_local.size() != p || se_local.size() != p)
    throw std::invalid_argument("debias_site: dimension mismatch");
  if (!(config.c1 >= 1.0)) throw std::invalid_argument("debias_site: c1 must be >= 1");
  if (n_k < 1 || N < n_k || K < 1 || d < 1) throw std::invalid_argument("debias_site: bad sizes");
  for (int j = 0; j < p; ++j)
    if (!(se_local[j] > 0.0)) throw std::invalid_argument("debias_site: nonpositive local SE");

  DebiasResult res;
  res.site_id = site_id;
  res.beta_local = beta_local;
  res.beta_global = beta_global;
  res.rule_used = config.rule;

  double gamma = gamma_for(config.rule, config.c1, K, N, n_k, d);
  if (config.rule == ThresholdRule::algorithm2 && std::min<long>(K, d) == 1) {
    // a zero threshold would silently disable debiasing; fall back to the
    // text rule and flag it
    res.degenerate_fallback = true;
    res.rule_used = ThresholdRule::text;
    gamma = gamma_for(ThresholdRule::text, config.c1, K, N, n_k, d);
  }
  res.gamma = gamma;

  res.lambda.resize(p);
  res.beta_debiased.resize(p);
  res.shrunk_mask.resize(p);
  for (int j = 0; j < p; ++j) {
    const double lam = gamma * se_local[j];
    const double delta = beta_local[j] - beta_global[j];
    res.lambda[j] = lam;
    res.beta_debiased[j] = beta_global[j] + soft_threshold(delta, lam);
    res.shrunk_mask[j] = std::abs(delta) <= lam;
  }
  return res;
}

}  // namespace fedsurv
