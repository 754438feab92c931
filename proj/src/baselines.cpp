#include "fedsurv/baselines.hpp"

namespace fedsurv {

FitReport report_from_single_fit(const GlmFit& fit, const std::vector<std::string>& schema,
                                 const std::vector<double>& landmarks,
                                 const std::vector<std::string>& time_varying) {
  RenewableState s;
  s.beta = fit.beta;
  s.info = 0.5 * (fit.information + fit.information.transpose());
  s.meat = 0.5 * (fit.meat + fit.meat.transpose());
  s.sites_processed = 1;
  s.n_cum = fit.n_clusters;
  s.landmarks = landmarks;
  s.schema = schema;
  return finalize(s, time_varying);
}

FitReport pooled_pseudo_fit(const std::vector<SubjectRecord>& records, const LandmarkGrid& grid,
                            LinkKind link, const std::vector<std::string>& time_varying,
                            const std::vector<std::string>& covariate_names) {
  const PseudoValues pv = pseudo_exact(records, grid);
  const DesignMatrix dm = build_design(records, pv, grid, covariate_names, time_varying);
  const GlmFit fit = glm_fit(dm, link);
  return report_from_single_fit(fit, dm.colnames, grid.times, time_varying);
}

PooledInfluenceFit pooled_influence_fit(const std::vector<SubjectRecord>& records,
                                        const std::vector<std::string>& covariate_names,
                                        const GridSpec& grid_spec, LinkKind link,
                                        const std::vector<std::string>& time_varying) {
  PooledInfluenceFit out;
  out.landmarks = resolve_landmarks(grid_spec, records);
  const std::vector<double> grid =
      handshake_grid(records, out.landmarks, grid_spec.quantile_points);
  out.km = km_restrict(km_pooled(records, grid), grid, records);
  const PseudoValues pv = pseudo_federated(out.km, records, out.landmarks);
  const DesignMatrix dm = build_design(records, pv, out.landmarks, covariate_names, time_varying);
  const GlmFit fit = glm_fit(dm, link);
  out.report = report_from_single_fit(fit, dm.colnames, out.landmarks.times, time_varying);
  return out;
}

}  // namespace fedsurv
