#pragma once

#include <string>
#include <vector>

namespace fedsurv {

// One subject's observed follow-up: time X = min(T, C), event indicator
// (1 = event observed, 0 = censored) and the covariate vector.
struct SubjectRecord {
  std::string subject_id;
  std::string site_id;
  double time = 0.0;
  int event = 0;
  std::vector<double> covariates;
};

// Throws std::invalid_argument("invalid record") on a nonfinite/negative time,
// an event flag outside {0,1}, or a covariate vector whose length differs from
// the first record's. Throws "empty dataset" on an empty input.
void validate_dataset(const std::vector<SubjectRecord>& records);

// Covariate dimension d of a validated dataset.
std::size_t covariate_dim(const std::vector<SubjectRecord>& records);

}  // namespace fedsurv
