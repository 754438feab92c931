#include "fedsurv/km.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedsurv {

int floor_index(const std::vector<double>& grid, double t) {
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  return static_cast<int>(it - grid.begin()) - 1;
}

int ceil_index(const std::vector<double>& grid, double t) {
  auto it = std::lower_bound(grid.begin(), grid.end(), t);
  return static_cast<int>(it - grid.begin());  // == grid.size() when t > back
}

namespace {

// derive at_risk_fraction and the hazard integrand from the current tallies
void rebuild_derived(KmState& s) {
  const double n = static_cast<double>(s.n_processed);
  double integ = 0.0;
  for (std::size_t g = 0; g < s.size(); ++g) {
    const double y = s.risk_count[g];
    s.at_risk_fraction[g] = y / n;
    if (s.event_weight[g] > 0.0 && y > 0.0) integ += n * s.event_weight[g] / (y * y);
    s.cum_hazard_integrand[g] = integ;
  }
}

// recover event tallies from integrand increments: dC[g] = n * d[g] / Y[g]^2
std::vector<double> events_from_integrand(const std::vector<double>& integrand,
                                          const std::vector<double>& risk_count, long n) {
  std::vector<double> d(integrand.size(), 0.0);
  double prev = 0.0;
  for (std::size_t g = 0; g < integrand.size(); ++g) {
    const double inc = integrand[g] - prev;
    prev = integrand[g];
    if (inc > 0.0 && risk_count[g] > 0.0)
      d[g] = inc * risk_count[g] * risk_count[g] / static_cast<double>(n);
  }
  return d;
}

}  // namespace

KmState km_pooled(const std::vector<SubjectRecord>& records,
                  const std::vector<double>& extra_grid_points) {
  validate_dataset(records);
  const std::size_t n = records.size();

  std::vector<double> grid;
  grid.reserve(n + extra_grid_points.size());
  for (const auto& r : records) grid.push_back(r.time);
  for (double t : extra_grid_points) {
    if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("invalid grid point");
    grid.push_back(t);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const std::size_t G = grid.size();
  KmState s;
  s.grid = std::move(grid);
  s.survival.assign(G, 1.0);
  s.cum_hazard_integrand.assign(G, 0.0);
  s.at_risk_fraction.assign(G, 0.0);
  s.risk_count.assign(G, 0.0);
  s.event_weight.assign(G, 0.0);
  s.n_processed = static_cast<long>(n);

  for (const auto& r : records) {
    const int pos = floor_index(s.grid, r.time);  // observed times are on the grid
    if (r.event == 1) s.event_weight[pos] += 1.0;
    s.risk_count[pos] += 1.0;
  }
  // suffix-sum: Y[g] = #{X_i >= grid[g]}
  for (std::size_t g = G - 1; g-- > 0;) s.risk_count[g] += s.risk_count[g + 1];

  double surv = 1.0;
  for (std::size_t g = 0; g < G; ++g) {
    const double y = s.risk_count[g];
    // once the risk set is empty the curve stays frozen at its last value
    if (s.event_weight[g] > 0.0 && y > 0.0) surv *= 1.0 - s.event_weight[g] / y;
    s.survival[g] = surv;
  }
  rebuild_derived(s);
  return s;
}

InfluenceContribution km_influence(const KmState& state, const SubjectRecord& record) {
  if (state.n_processed < 1) throw std::invalid_argument("km_influence: state holds no subjects");
  if (!std::isfinite(record.time) || record.time < 0.0)
    throw std::invalid_argument("invalid record: time must be finite and nonnegative (subject " +
                                record.subject_id + ")");

  const auto& grid = state.grid;
  // An off-grid record is relocated up to the next grid point -- the same
  // cell its event mass is tallied into, and the same grouping the
  // right-continuous survival read uses. Keeping every read keyed on that
  // position preserves 1(X <= t) exactly at all grid points and makes the
  // influence contributions of a state's own records cancel exactly, which
  // keeps the streaming chain drift-free.
  const int G = static_cast<int>(grid.size());
  const int pos = ceil_index(grid, record.time);  // == G when beyond the grid
  const int read = std::min(pos, G - 1);
  const double y_at_x = state.at_risk_fraction[read];
  const double integ_at_x = state.cum_hazard_integrand[read];

  if (record.event == 1 && pos < G && !(y_at_x > 0.0))
    throw std::runtime_error("empty risk set at subject time (subject " + record.subject_id + ")");

  InfluenceContribution out;
  out.subject_id = record.subject_id;
  out.values.resize(grid.size());

  for (int g = 0; g < G; ++g) {
    const double integ_min = std::min(integ_at_x, state.cum_hazard_integrand[g]);
    double bracket = -integ_min;
    if (record.event == 1 && g >= pos) bracket += 1.0 / y_at_x;
    out.values[g] = -state.survival[g] * bracket;
  }
  return out;
}

void km_update(KmState& state, const SubjectRecord& record) {
  // tallies are refreshed first, so the influence evaluation sees the record
  // in the risk set -- the same convention km_influence uses for records that
  // are already constituents of the state
  const long n1 = state.n_processed + 1;
  const int G = static_cast<int>(state.size());
  const int pos = ceil_index(state.grid, record.time);
  for (int g = 0; g <= std::min(pos, G - 1); ++g) state.risk_count[g] += 1.0;
  // an event beyond the last grid point contributes no hazard inside the grid
  if (record.event == 1 && pos < G) state.event_weight[pos] += 1.0;
  state.n_processed = n1;
  rebuild_derived(state);

  const InfluenceContribution psi = km_influence(state, record);
  const double inv_n1 = 1.0 / static_cast<double>(n1);
  bool clamped = false;
  for (std::size_t g = 0; g < state.size(); ++g) {
    double v = state.survival[g] + psi.values[g] * inv_n1;
    if (v < 0.0 || v > 1.0) {
      clamped = true;
      v = std::clamp(v, 0.0, 1.0);
    }
    state.survival[g] = v;
  }
  if (clamped) state.clamp_events += 1;
}

KmState km_restrict(const KmState& full, const std::vector<double>& shared_grid,
                    const std::vector<SubjectRecord>& records) {
  KmState s;
  s.grid = shared_grid;
  const std::size_t G = shared_grid.size();
  s.survival.resize(G);
  s.cum_hazard_integrand.resize(G);
  s.at_risk_fraction.resize(G);
  s.risk_count.assign(G, 0.0);
  s.event_weight.assign(G, 0.0);
  s.n_processed = full.n_processed;

  for (std::size_t g = 0; g < G; ++g) {
    const int fi = floor_index(full.grid, shared_grid[g]);
    s.survival[g] = fi < 0 ? 1.0 : full.survival[fi];
  }
  // risk/event tallies are recounted on the shared grid and the hazard
  // integrand rederived from them, so the state is internally consistent at
  // this resolution
  std::vector<double> risk_at(G + 1, 0.0);
  for (const auto& r : records) {
    const int pos = ceil_index(shared_grid, r.time);
    risk_at[pos] += 1.0;
    if (r.event == 1 && pos < static_cast<int>(G)) s.event_weight[pos] += 1.0;
  }
  double acc = risk_at[G];
  for (std::size_t g = G; g-- > 0;) {
    acc += risk_at[g];
    s.risk_count[g] = acc;
  }
  rebuild_derived(s);
  return s;
}

KmState km_from_parts(std::vector<double> grid, std::vector<double> survival,
                      std::vector<double> cum_hazard_integrand,
                      std::vector<double> at_risk_fraction, long n_processed) {
  KmState s;
  const std::size_t G = grid.size();
  if (survival.size() != G || cum_hazard_integrand.size() != G || at_risk_fraction.size() != G)
    throw std::invalid_argument("km_from_parts: vector length mismatch");
  s.grid = std::move(grid);
  s.survival = std::move(survival);
  s.cum_hazard_integrand = std::move(cum_hazard_integrand);
  s.at_risk_fraction = std::move(at_risk_fraction);
  s.n_processed = n_processed;
  s.risk_count.resize(G);
  for (std::size_t g = 0; g < G; ++g)
    s.risk_count[g] = static_cast<double>(
        std::llround(s.at_risk_fraction[g] * static_cast<double>(n_processed)));
  s.event_weight = events_from_integrand(s.cum_hazard_integrand, s.risk_count, n_processed);
  return s;
}

}  // namespace fedsurv
