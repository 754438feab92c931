#pragma once

// Independent oracles used by the tests. These deliberately take the dumbest
// correct route (full refits, grid search, finite differences) and must stay
// independent of the implementation paths they check.

#include <algorithm>
#include <cmath>
#include <vector>

#include "fedsurv/km.hpp"
#include "fedsurv/types.hpp"

namespace oracles {

// Kaplan-Meier survival at time t by a fresh pooled fit.
inline double km_at(const std::vector<fedsurv::SubjectRecord>& records, double t) {
  const fedsurv::KmState km = fedsurv::km_pooled(records, {t});
  const int p = fedsurv::floor_index(km.grid, t);
  return p < 0 ? 1.0 : km.survival[p];
}

// Exact jackknife pseudo-value by brute-force leave-one-out refits.
inline double jackknife_pseudo(const std::vector<fedsurv::SubjectRecord>& records,
                               std::size_t drop, double t) {
  std::vector<fedsurv::SubjectRecord> rest;
  rest.reserve(records.size() - 1);
  for (std::size_t i = 0; i < records.size(); ++i)
    if (i != drop) rest.push_back(records[i]);
  const double n = static_cast<double>(records.size());
  return n * km_at(records, t) - (n - 1.0) * km_at(rest, t);
}

// 1-D maximiser of f over [lo, hi] by grid search plus local refinement.
template <typename F>
double grid_search_max(F&& f, double lo, double hi, int coarse = 2001) {
  double best_x = lo, best = f(lo);
  for (int i = 0; i < coarse; ++i) {
    const double x = lo + (hi - lo) * i / (coarse - 1.0);
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  double step = (hi - lo) / (coarse - 1.0);
  while (step > 1e-7) {
    for (double x : {best_x - step, best_x + step}) {
      const double v = f(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    step *= 0.5;
  }
  return best_x;
}

// deterministic little generator for property loops
struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  double u01() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = state;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
};

// small random censored dataset for property tests
inline std::vector<fedsurv::SubjectRecord> random_survival_data(std::uint64_t seed, int n,
                                                                double censor_prob = 0.4) {
  TestRng rng(seed);
  std::vector<fedsurv::SubjectRecord> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    fedsurv::SubjectRecord r;
    r.subject_id = "p" + std::to_string(i);
    r.time = -std::log(1.0 - rng.u01() + 1e-12) * 5.0;
    r.event = rng.u01() < censor_prob ? 0 : 1;
    r.covariates = {rng.uniform(-2, 2), rng.u01() < 0.5 ? 0.0 : 1.0};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace oracles
