#pragma once

// Pseudo-observations at landmark times. Two construction routes: the exact
// jackknife (pooled oracle path, O(N) leave-one-out refits) and the
// influence-function approximation (federated path, needs only a shared
// KmState). Also assembles the long-format regression design.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fedsurv/km.hpp"
#include "fedsurv/types.hpp"

namespace fedsurv {

struct LandmarkGrid {
  std::vector<double> times;  // strictly increasing, J >= 1
  int J() const { return static_cast<int>(times.size()); }
};

// times[k] = lo + k*(hi-lo)/(J-1); a single point lo for J = 1.
LandmarkGrid landmarks_equally_spaced(double lo, double hi, int J);

// Default landmark rule: J points equally spaced between the 10th and 90th
// percentile of the observed event times.
LandmarkGrid landmarks_default(const std::vector<SubjectRecord>& records, int J = 5);

// One value per (subject, landmark); rows aligned with the record order that
// produced them. Values may lie outside [0,1] and are never clamped.
struct PseudoValues {
  std::vector<std::string> subject_ids;
  Eigen::MatrixXd values;  // n x J
};

// Exact jackknife: Y_ij = N*S(t_j) - (N-1)*S^{-i}(t_j), both product-limit
// fits on the pooled data. Parallel over subjects; _serial is the plain-loop
// reference kept for kernel-parity tests.
PseudoValues pseudo_exact(const std::vector<SubjectRecord>& records, const LandmarkGrid& grid);
PseudoValues pseudo_exact_serial(const std::vector<SubjectRecord>& records,
                                 const LandmarkGrid& grid);

// Influence-function route: Y_ij = S(t_j) + psi_i(t_j) with S and psi read
// from the shared state.
PseudoValues pseudo_federated(const KmState& state, const std::vector<SubjectRecord>& records,
                              const LandmarkGrid& grid);
PseudoValues pseudo_federated_serial(const KmState& state,
                                     const std::vector<SubjectRecord>& records,
                                     const LandmarkGrid& grid);

// Long-format design: J rows per subject, clustered by subject. Columns are
// J landmark indicators (no shared global intercept), the d covariates, and
// per-landmark interaction columns for the flagged covariates with the first
// landmark as reference (gamma_1 = 0, so J-1 free columns per flagged
// covariate).
struct DesignMatrix {
  std::vector<std::string> colnames;
  Eigen::MatrixXd X;           // n_rows x p
  Eigen::VectorXd y;           // pseudo-value responses
  std::vector<int> cluster;    // row -> cluster ordinal; contiguous runs
  std::vector<int> landmark;   // row -> landmark index, 0-based
  int n_landmarks = 0;
  int n_covariates = 0;
  std::vector<int> tv_covariates;  // covariate ordinals with interaction columns
  long n_clusters = 0;

  long rows() const { return X.rows(); }
  int cols() const { return static_cast<int>(X.cols()); }
};

DesignMatrix build_design(const std::vector<SubjectRecord>& records, const PseudoValues& pseudo,
                          const LandmarkGrid& grid,
                          const std::vector<std::string>& covariate_names,
                          const std::vector<std::string>& time_varying);

}  // namespace fedsurv
