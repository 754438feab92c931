#pragma once

// Kaplan-Meier machinery: the pooled product-limit estimator, the empirical
// influence function of the KM estimator, and the record-at-a-time streaming
// update used by the cross-site chain.
//
// A state keeps the survival curve plus risk/event tallies on a fixed time
// grid. The survival curve is updated by the influence recursion
// S_{n+1}(t) = S_n(t) + psi(t)/(n+1); the tallies are updated exactly, and
// the cumulative hazard integrand int_0^t dL(u)/Yhat(u) is rederived from
// them after every update (summing raw per-record increments instead would
// overcount by a log factor along the stream). Curves are read as
// right-continuous step functions at the floor grid position.

#include <vector>

#include "fedsurv/types.hpp"

namespace fedsurv {

struct KmState {
  std::vector<double> grid;                  // strictly increasing time points
  std::vector<double> survival;              // S(t) at each grid point
  std::vector<double> cum_hazard_integrand;  // int_0^t dL(u)/Yhat(u), from tallies
  std::vector<double> at_risk_fraction;      // risk_count / n_processed
  std::vector<double> risk_count;            // #{X_i >= t} (integer-valued)
  std::vector<double> event_weight;          // event mass tallied at each grid position
  long n_processed = 0;
  long clamp_events = 0;  // diagnostic: updates that pushed S outside [0,1]

  std::size_t size() const { return grid.size(); }
};

struct InfluenceContribution {
  std::string subject_id;
  std::vector<double> values;  // psi(t) on the state's grid
};

// Largest index g with grid[g] <= t, or -1 if t < grid.front().
int floor_index(const std::vector<double>& grid, double t);

// Smallest index g with grid[g] >= t, or grid.size() if t > grid.back().
// Off-grid records are relocated to this cell for tally and indicator reads.
int ceil_index(const std::vector<double>& grid, double t);

// Pooled product-limit fit. The grid is the sorted union of the distinct
// observed times and any caller-supplied extra points (landmarks). Risk set
// at t is {i : X_i >= t}; at tied times events precede censorings.
KmState km_pooled(const std::vector<SubjectRecord>& records,
                  const std::vector<double>& extra_grid_points = {});

// Empirical KM influence function of one record against the current state:
//   psi(t) = -S(t) * [ event * 1(X <= t) / Y(X)  -  int_0^{min(X,t)} dL/Y ]
// with Y and the integral read from the state at the floor grid position.
InfluenceContribution km_influence(const KmState& state, const SubjectRecord& record);

// Absorb one record: S(t) += psi(t)/(n+1) (clamped to [0,1]), then refresh
// the tallies and rederive the hazard integrand so later evaluations see the
// record.
void km_update(KmState& state, const SubjectRecord& record);

// Sample a full-resolution state onto a coarser shared grid. survival and
// cum_hazard_integrand are floor-read step functions; the at-risk counts are
// recounted exactly from the records that produced the state, and the event
// tallies are refactored from the integrand increments so the curve is
// reproduced exactly on the shared grid.
KmState km_restrict(const KmState& full, const std::vector<double>& shared_grid,
                    const std::vector<SubjectRecord>& records);

// Rebuild a state from the vectors a KM-stage message carries. Event tallies
// are recovered from the integrand increments: d[g] = dC[g] * Y[g]^2 / n.
KmState km_from_parts(std::vector<double> grid, std::vector<double> survival,
                      std::vector<double> cum_hazard_integrand,
                      std::vector<double> at_risk_fraction, long n_processed);

}  // namespace fedsurv
