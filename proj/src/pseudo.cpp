#include "fedsurv/pseudo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fedsurv/parallel.hpp"

namespace fedsurv {

LandmarkGrid landmarks_equally_spaced(double lo, double hi, int J) {
  if (!(lo > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("landmarks: lo must be positive and finite");
  if (J < 1) throw std::invalid_argument("landmarks: J must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("landmarks: lo must be < hi");
  LandmarkGrid g;
  g.times.resize(J);
  if (J == 1) {
    g.times[0] = lo;
  } else {
    const double step = (hi - lo) / static_cast<double>(J - 1);
    for (int k = 0; k < J; ++k) g.times[k] = lo + step * k;
    g.times[J - 1] = hi;  // avoid drift at the right endpoint
  }
  return g;
}

LandmarkGrid landmarks_default(const std::vector<SubjectRecord>& records, int J) {
  std::vector<double> ev;
  for (const auto& r : records)
    if (r.event == 1) ev.push_back(r.time);
  if (ev.size() < 2) throw std::invalid_argument("landmarks: need at least two observed events");
  std::sort(ev.begin(), ev.end());
  const auto q = [&](double p) {
    const double idx = p * static_cast<double>(ev.size() - 1);
    return ev[static_cast<std::size_t>(std::llround(idx))];
  };
  double lo = q(0.10), hi = q(0.90);
  if (!(lo < hi)) throw std::invalid_argument("landmarks: degenerate event-time quantiles");
  return landmarks_equally_spaced(lo, hi, J);
}

namespace {

// Event-time tallies of the pooled sample, restricted to times <= t_max.
struct EventTallies {
  std::vector<double> times;  // distinct event times, increasing
  std::vector<double> d;      // events at each time
  std::vector<double> y;      // #{X_i >= time}
  std::vector<int> lm_end;    // per landmark: #event times <= t_j
};

EventTallies make_tallies(const std::vector<SubjectRecord>& records, const LandmarkGrid& grid) {
  std::vector<double> all;
  all.reserve(records.size());
  for (const auto& r : records) all.push_back(r.time);
  std::sort(all.begin(), all.end());

  const double t_max = grid.times.back();
  std::vector<double> ev;
  for (const auto& r : records)
    if (r.event == 1 && r.time <= t_max) ev.push_back(r.time);
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());

  EventTallies t;
  t.times = std::move(ev);
  t.d.assign(t.times.size(), 0.0);
  t.y.assign(t.times.size(), 0.0);
  for (const auto& r : records)
    if (r.event == 1 && r.time <= t_max) {
      const auto it = std::lower_bound(t.times.begin(), t.times.end(), r.time);
      t.d[static_cast<std::size_t>(it - t.times.begin())] += 1.0;
    }
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    // #{X_i >= u} = n - #{X_i < u}
    const auto below = std::lower_bound(all.begin(), all.end(), t.times[k]) - all.begin();
    t.y[k] = static_cast<double>(records.size() - static_cast<std::size_t>(below));
  }
  t.lm_end.resize(grid.times.size());
  for (std::size_t j = 0; j < grid.times.size(); ++j)
    t.lm_end[j] = static_cast<int>(
        std::upper_bound(t.times.begin(), t.times.end(), grid.times[j]) - t.times.begin());
  return t;
}

// Leave-one-out product-limit values at the landmarks using the tallies.
// remove_time/remove_event describe the dropped subject; pass event = -1 to
// keep the full sample.
void loo_survival(const EventTallies& t, double remove_time, int remove_event,
                  double* out /* size J */) {
  double prod = 1.0;
  int k = 0;
  for (std::size_t j = 0; j < t.lm_end.size(); ++j) {
    for (; k < t.lm_end[j]; ++k) {
      double d = t.d[k];
      double y = t.y[k];
      if (remove_event >= 0) {
        if (remove_event == 1 && remove_time == t.times[k]) d -= 1.0;
        if (remove_time >= t.times[k]) y -= 1.0;
      }
      if (y > 0.0 && d > 0.0) prod *= 1.0 - d / y;
    }
    out[j] = prod;
  }
}

template <bool Parallel>
PseudoValues pseudo_exact_impl(const std::vector<SubjectRecord>& records,
                               const LandmarkGrid& grid) {
  validate_dataset(records);
  const long n = static_cast<long>(records.size());
  if (n < 2) throw std::invalid_argument("jackknife needs two subjects");
  double t_obs_max = 0.0;
  for (const auto& r : records) t_obs_max = std::max(t_obs_max, r.time);
  for (double t : grid.times)
    if (!(t > 0.0) || !(t < t_obs_max))
      throw std::invalid_argument("landmark outside (0, max observed time)");

  const EventTallies tal = make_tallies(records, grid);
  const int J = grid.J();
  std::vector<double> s_full(J);
  loo_survival(tal, 0.0, -1, s_full.data());

  PseudoValues out;
  out.subject_ids.resize(records.size());
  out.values.resize(n, J);

  const double nN = static_cast<double>(n);
#pragma omp parallel for schedule(static) if (Parallel)
  for (long i = 0; i < n; ++i) {
    std::vector<double> s_loo(J);
    loo_survival(tal, records[i].time, records[i].event, s_loo.data());
    for (int j = 0; j < J; ++j)
      out.values(i, j) = nN * s_full[j] - (nN - 1.0) * s_loo[j];
  }
  for (long i = 0; i < n; ++i) out.subject_ids[i] = records[i].subject_id;
  return out;
}

template <bool Parallel>
PseudoValues pseudo_federated_impl(const KmState& state,
                                   const std::vector<SubjectRecord>& records,
                                   const LandmarkGrid& grid) {
  validate_dataset(records);
  if (state.n_processed < 1) throw std::invalid_argument("pseudo_federated: empty state");
  const int J = grid.J();
  const long n = static_cast<long>(records.size());

  // landmark read positions; reject landmarks past the last positive-risk time
  std::vector<int> lm_pos(J);
  for (int j = 0; j < J; ++j) {
    const int p = floor_index(state.grid, grid.times[j]);
    if (p >= 0 && !(state.at_risk_fraction[p] > 0.0))
      throw std::invalid_argument("landmark beyond last positive-risk time");
    lm_pos[j] = p;
  }
  // the empty-risk-set error is detected up front so the parallel loop below
  // cannot throw
  const int G = static_cast<int>(state.size());
  for (const auto& r : records) {
    const int pos = ceil_index(state.grid, r.time);
    if (r.event == 1 && pos < G && !(state.at_risk_fraction[pos] > 0.0))
      throw std::runtime_error("empty risk set at subject time (subject " + r.subject_id + ")");
  }

  PseudoValues out;
  out.subject_ids.resize(records.size());
  out.values.resize(n, J);

#pragma omp parallel for schedule(static) if (Parallel)
  for (long i = 0; i < n; ++i) {
    const auto& r = records[i];
    // reads are keyed on the record's relocated grid position, matching the
    // tally convention of the shared state
    const int pos = ceil_index(state.grid, r.time);
    const int read = std::min(pos, G - 1);
    const double y_at_x = state.at_risk_fraction[read];
    const double integ_at_x = state.cum_hazard_integrand[read];
    for (int j = 0; j < J; ++j) {
      const int p = lm_pos[j];
      const double s_t = p < 0 ? 1.0 : state.survival[p];
      const double integ_t = p < 0 ? 0.0 : state.cum_hazard_integrand[p];
      double bracket = -std::min(integ_at_x, integ_t);
      if (r.event == 1 && p >= pos) bracket += 1.0 / y_at_x;
      out.values(i, j) = s_t - s_t * bracket;
    }
  }
  for (long i = 0; i < n; ++i) out.subject_ids[i] = records[i].subject_id;
  return out;
}

}  // namespace

PseudoValues pseudo_exact(const std::vector<SubjectRecord>& records, const LandmarkGrid& grid) {
  return pseudo_exact_impl<true>(records, grid);
}

PseudoValues pseudo_exact_serial(const std::vector<SubjectRecord>& records,
                                 const LandmarkGrid& grid) {
  return pseudo_exact_impl<false>(records, grid);
}

PseudoValues pseudo_federated(const KmState& state, const std::vector<SubjectRecord>& records,
                              const LandmarkGrid& grid) {
  return pseudo_federated_impl<true>(state, records, grid);
}

PseudoValues pseudo_federated_serial(const KmState& state,
                                     const std::vector<SubjectRecord>& records,
                                     const LandmarkGrid& grid) {
  return pseudo_federated_impl<false>(state, records, grid);
}

DesignMatrix build_design(const std::vector<SubjectRecord>& records, const PseudoValues& pseudo,
                          const LandmarkGrid& grid,
                          const std::vector<std::string>& covariate_names,
                          const std::vector<std::string>& time_varying) {
  validate_dataset(records);
  const long n = static_cast<long>(records.size());
  const int J = grid.J();
  const int d = static_cast<int>(covariate_dim(records));
  if (pseudo.values.rows() != n || pseudo.values.cols() != J)
    throw std::invalid_argument("mismatched subject sets: pseudo-value shape");
  for (long i = 0; i < n; ++i)
    if (pseudo.subject_ids[i] != records[i].subject_id)
      throw std::invalid_argument("mismatched subject sets: subject ids");
  if (static_cast<int>(covariate_names.size()) != d)
    throw std::invalid_argument("covariate name count does not match data");

  DesignMatrix dm;
  dm.n_landmarks = J;
  dm.n_covariates = d;
  dm.n_clusters = n;
  for (const auto& tv : time_varying) {
    const auto it = std::find(covariate_names.begin(), covariate_names.end(), tv);
    if (it == covariate_names.end())
      throw std::invalid_argument("time-varying covariate not in dataset: " + tv);
    dm.tv_covariates.push_back(static_cast<int>(it - covariate_names.begin()));
  }

  const int p = J + d + static_cast<int>(dm.tv_covariates.size()) * (J - 1);
  dm.colnames.reserve(p);
  for (int j = 0; j < J; ++j) dm.colnames.push_back("t" + std::to_string(j + 1));
  for (const auto& c : covariate_names) dm.colnames.push_back(c);
  for (int tv : dm.tv_covariates)
    for (int j = 1; j < J; ++j)
      dm.colnames.push_back(covariate_names[tv] + ":t" + std::to_string(j + 1));

  dm.X = Eigen::MatrixXd::Zero(n * J, p);
  dm.y.resize(n * J);
  dm.cluster.resize(n * J);
  dm.landmark.resize(n * J);

  for (long i = 0; i < n; ++i) {
    for (int j = 0; j < J; ++j) {
      const long row = i * J + j;
      dm.X(row, j) = 1.0;
      for (int c = 0; c < d; ++c) dm.X(row, J + c) = records[i].covariates[c];
      int col = J + d;
      for (int tv : dm.tv_covariates) {
        if (j >= 1) dm.X(row, col + j - 1) = records[i].covariates[tv];
        col += J - 1;
      }
      dm.y(row) = pseudo.values(i, j);
      dm.cluster[row] = static_cast<int>(i);
      dm.landmark[row] = j;
    }
  }
  return dm;
}

}  // namespace fedsurv
