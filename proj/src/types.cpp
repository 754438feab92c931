#include "fedsurv/types.hpp"

#include <cmath>
#include <stdexcept>

namespace fedsurv {

void validate_dataset(const std::vector<SubjectRecord>& records) {
  if (records.empty()) throw std::invalid_argument("empty dataset");
  const std::size_t d = records.front().covariates.size();
  for (const auto& r : records) {
    if (!std::isfinite(r.time) || r.time < 0.0)
      throw std::invalid_argument("invalid record: time must be finite and nonnegative (subject " +
                                  r.subject_id + ")");
    if (r.event != 0 && r.event != 1)
      throw std::invalid_argument("invalid record: event must be 0 or 1 (subject " +
                                  r.subject_id + ")");
    if (r.covariates.size() != d)
      throw std::invalid_argument("invalid record: covariate length mismatch (subject " +
                                  r.subject_id + ")");
  }
}

std::size_t covariate_dim(const std::vector<SubjectRecord>& records) {
  return records.empty() ? 0 : records.front().covariates.size();
}

}  // namespace fedsurv
