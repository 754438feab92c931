#pragma once

// Centralized reference estimators. pooled_pseudo_fit is the gold standard
// the federated path is tested against: exact jackknife pseudo-values on the
// pooled data, then the same GLM and sandwich. pooled_influence_fit is the
// centralized twin of the federated pipeline (influence-approximate
// pseudo-values on the handshake grid); with one site the federated chain
// reproduces it bit for bit.

#include "fedsurv/federation.hpp"
#include "fedsurv/pseudo.hpp"
#include "fedsurv/renewable.hpp"

namespace fedsurv {

FitReport pooled_pseudo_fit(const std::vector<SubjectRecord>& records, const LandmarkGrid& grid,
                            LinkKind link, const std::vector<std::string>& time_varying,
                            const std::vector<std::string>& covariate_names);

struct PooledInfluenceFit {
  FitReport report;
  KmState km;
  LandmarkGrid landmarks;
};

PooledInfluenceFit pooled_influence_fit(const std::vector<SubjectRecord>& records,
                                        const std::vector<std::string>& covariate_names,
                                        const GridSpec& grid_spec, LinkKind link,
                                        const std::vector<std::string>& time_varying);

// Report assembly shared by the pooled paths: single-site renewable state,
// matrices symmetrised exactly as the message layer does.
FitReport report_from_single_fit(const GlmFit& fit, const std::vector<std::string>& schema,
                                 const std::vector<double>& landmarks,
                                 const std::vector<std::string>& time_varying);

}  // namespace fedsurv
