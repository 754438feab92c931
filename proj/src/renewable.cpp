#include "fedsurv/renewable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedsurv {

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

RenewableState renew_init(const DesignMatrix& site1, LinkKind link,
                          const std::vector<double>& landmarks, const GlmOptions& opts) {
  const GlmFit fit = glm_fit(site1, link, Eigen::VectorXd(), opts);
  RenewableState s;
  s.beta = fit.beta;
  s.info = fit.information;
  s.meat = fit.meat;
  s.sites_processed = 1;
  s.n_cum = fit.n_clusters;
  s.landmarks = landmarks;
  s.schema = site1.colnames;
  return s;
}

void renew_update(RenewableState& state, const DesignMatrix& site_k, LinkKind link,
                  const GlmOptions& opts) {
  if (state.sites_processed < 1) throw std::invalid_argument("renew_update: uninitialised state");
  if (site_k.rows() == 0) {
    state.sites_processed += 1;
    return;
  }
  if (site_k.colnames != state.schema)
    throw std::invalid_argument("schema mismatch between sites");

  const double sign = link_weight_sign(link);
  const Eigen::VectorXd beta_prev = state.beta;

  const Eigen::MatrixXd H_old = score_hessian(site_k, link, beta_prev).H;
  const Eigen::MatrixXd A = state.info + H_old;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("indefinite cumulative information");

  Eigen::VectorXd beta = beta_prev;
  bool converged = false;
  for (int r = 1; r <= opts.max_iter; ++r) {
    const Eigen::VectorXd U = score_hessian(site_k, link, beta).U;
    const Eigen::VectorXd g = sign * U - state.info * (beta - beta_prev);
    const Eigen::VectorXd delta = llt.solve(g);
    if (std::abs(g.dot(delta)) < opts.epsilon) {
      converged = true;
      break;
    }
    beta += delta;
  }
  if (!converged) throw std::runtime_error("renew_update did not converge");

  state.info += score_hessian(site_k, link, beta).H;
  state.meat += meat_matrix(site_k, link, beta);
  state.beta = beta;
  state.sites_processed += 1;
  state.n_cum += site_k.n_clusters;
}

FitReport finalize(const RenewableState& state, const std::vector<std::string>& time_varying) {
  if (state.sites_processed < 1) throw std::invalid_argument("finalize: uninitialised state");
  const int p = static_cast<int>(state.beta.size());

  Eigen::LLT<Eigen::MatrixXd> llt(state.info);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("singular cumulative information");
  const Eigen::MatrixXd IinvM = llt.solve(state.meat);
  Eigen::MatrixXd V = llt.solve(IinvM.transpose()).transpose();
  V = 0.5 * (V + V.transpose());

  FitReport rep;
  rep.terms = state.schema;
  rep.beta = state.beta;
  rep.covariance = V;
  rep.std_errors = V.diagonal().cwiseMax(0.0).cwiseSqrt();
  rep.wald_z.resize(p);
  rep.p_values.resize(p);
  for (int i = 0; i < p; ++i) {
    rep.wald_z[i] = rep.std_errors[i] > 0 ? state.beta[i] / rep.std_errors[i] : 0.0;
    rep.p_values[i] = normal_two_sided_p(rep.wald_z[i]);
  }
  rep.landmarks = state.landmarks;
  rep.n_cum = state.n_cum;
  rep.sites_processed = state.sites_processed;

  // per-landmark effective coefficients for the flagged covariates:
  // beta(t_1) = beta, beta(t_j) = beta + gamma_j with delta-method variance
  const int J = static_cast<int>(state.landmarks.size());
  if (!time_varying.empty() && J > 0) {
    for (std::size_t k = 0; k < time_varying.size(); ++k) {
      const auto& name = time_varying[k];
      const auto it = std::find(state.schema.begin(), state.schema.end(), name);
      if (it == state.schema.end())
        throw std::invalid_argument("time-varying covariate not in schema: " + name);
      const int c = static_cast<int>(it - state.schema.begin());
      for (int j = 0; j < J; ++j) {
        LandmarkEffect e;
        e.covariate = name;
        e.landmark_index = j + 1;
        e.time = state.landmarks[j];
        if (j == 0) {
          e.estimate = state.beta[c];
          e.std_error = rep.std_errors[c];
        } else {
          const std::string gname = name + ":t" + std::to_string(j + 1);
          const auto git = std::find(state.schema.begin(), state.schema.end(), gname);
          if (git == state.schema.end())
            throw std::invalid_argument("interaction column missing from schema: " + gname);
          const int g = static_cast<int>(git - state.schema.begin());
          e.estimate = state.beta[c] + state.beta[g];
          const double var = V(c, c) + V(g, g) + 2.0 * V(c, g);
          e.std_error = std::sqrt(std::max(var, 0.0));
        }
        e.wald_z = e.std_error > 0 ? e.estimate / e.std_error : 0.0;
        e.p_value = normal_two_sided_p(e.wald_z);
        rep.landmark_effects.push_back(e);
      }
    }
  }
  return rep;
}

}  // namespace fedsurv
