#include "fedsurv/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fedsurv/rng.hpp"

namespace fedsurv {

std::string scenario_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::ph_exponential: return "ph";
    case ScenarioKind::weibull_tv: return "weibull";
    case ScenarioKind::hetero: return "hetero";
  }
  return "?";
}

std::vector<long> ph_sites_balanced() { return {1500, 1500, 1500, 1500, 1500}; }
std::vector<long> ph_sites_skewed() { return {3000, 3000, 1000, 400, 100}; }

namespace {

double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// E_{X,T}[ f(lambda(X,T)) ] with X ~ N(0,1), T | X ~ Bern(expit(0.5 X)),
// by trapezoid quadrature on [-8, 8].
template <typename F>
double gaussian_mixture_expectation(F&& f) {
  constexpr int n = 4001;
  constexpr double lo = -8.0, hi = 8.0;
  const double h = (hi - lo) / (n - 1);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = lo + h * i;
    const double phi = std::exp(-0.5 * x * x) / 2.5066282746310005024;
    const double p1 = expit(0.5 * x);
    const double v = (1.0 - p1) * f(x, 0.0) + p1 * f(x, 1.0);
    acc += (i == 0 || i == n - 1 ? 0.5 : 1.0) * phi * v;
  }
  return acc * h;
}

long checked_sum(const std::vector<long>& sizes) {
  long s = 0;
  for (long v : sizes) {
    if (v < 1) throw std::invalid_argument("site sizes must be >= 1");
    s += v;
  }
  return s;
}

}  // namespace

double analytic_event_rate(double h0, double beta_x, double beta_t, double censor_rate) {
  return gaussian_mixture_expectation([&](double x, double t) {
    const double lam = h0 * std::exp(beta_x * x + beta_t * t);
    return lam / (lam + censor_rate);
  });
}

double calibrate_ph_censoring(double h0, double beta_x, double beta_t, double target) {
  if (!(target > 0.0 && target < 1.0))
    throw std::invalid_argument("event-rate target must be in (0,1)");
  double lo = 1e-10, hi = 1e3;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (analytic_event_rate(h0, beta_x, beta_t, mid) > target)
      lo = mid;  // too few censored, raise the rate
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double analytic_treatment_rate() {
  return gaussian_mixture_expectation([](double, double t) { return t; });
}

ScenarioConfig make_ph_config(double event_rate, const std::vector<long>& site_sizes,
                              std::uint64_t seed) {
  ScenarioConfig c;
  c.kind = ScenarioKind::ph_exponential;
  c.site_sizes = site_sizes.empty() ? ph_sites_balanced() : site_sizes;
  c.n_total = checked_sum(c.site_sizes);
  c.beta_x = std::log(0.7);
  c.beta_t = std::log(1.15);
  if (std::abs(event_rate - 0.30) < 1e-12) {
    c.baseline_hazard = 1.0 / 20.0;
  } else if (std::abs(event_rate - 0.10) < 1e-12) {
    c.baseline_hazard = 1.0 / 50.0;
  } else {
    throw std::invalid_argument("event rate must be 0.3 or 0.1");
  }
  c.event_rate_target = event_rate;
  c.censor_rate = calibrate_ph_censoring(c.baseline_hazard, c.beta_x, c.beta_t, event_rate);
  c.seed = seed;
  return c;
}

ScenarioConfig make_weibull_config(std::uint64_t seed) {
  ScenarioConfig c;
  c.kind = ScenarioKind::weibull_tv;
  c.site_sizes = {3000, 500, 300, 200, 150, 150, 150, 100, 100, 100,
                  100,  100, 100, 100, 100, 50,  50,  50,  50,  50};
  c.n_total = checked_sum(c.site_sizes);  // 5500 across 20 sites, 50..3000
  c.seed = seed;
  return c;
}

ScenarioConfig make_hetero_config(double delta, long target_size, std::uint64_t seed) {
  ScenarioConfig c;
  c.kind = ScenarioKind::hetero;
  // multiset {3000, 1000, 500, 100, 50} replicated to K = 23 / N = 8500
  c.site_sizes = {3000, 1000, 1000, 1000, 500, 500};
  for (int i = 0; i < 13; ++i) c.site_sizes.push_back(100);
  for (int i = 0; i < 4; ++i) c.site_sizes.push_back(50);
  c.n_total = checked_sum(c.site_sizes);
  c.beta_x = std::log(0.7);
  c.beta_t = std::log(1.5);
  c.baseline_hazard = 1.0 / 20.0;
  c.event_rate_target = 0.30;
  c.censor_rate = calibrate_ph_censoring(c.baseline_hazard, c.beta_x, c.beta_t, 0.30);
  c.hetero.delta = delta;
  c.hetero.target_size = target_size;
  const auto it = std::find(c.site_sizes.begin(), c.site_sizes.end(), target_size);
  if (it == c.site_sizes.end())
    throw std::invalid_argument("target size not in site_sizes");
  c.hetero.target_site = static_cast<int>(it - c.site_sizes.begin());
  c.seed = seed;
  return c;
}

double true_cloglog_coeff(double t, const WeibullParams& wp) {
  if (!(t > 0.0)) throw std::invalid_argument("true_cloglog_coeff: t must be positive");
  const double shape1 = wp.shape_base + wp.shape_trt;
  const double scale0 = wp.scale_base;
  const double scale1 = wp.scale_base * std::exp(wp.scale_log_t);
  return shape1 * std::log(t / scale1) - wp.shape_base * std::log(t / scale0);
}

std::vector<std::vector<SubjectRecord>> generate(const ScenarioConfig& config) {
  if (config.site_sizes.empty()) throw std::invalid_argument("no site sizes");
  const int K = static_cast<int>(config.site_sizes.size());
  const CounterRng root(config.seed, 0xFED5u);

  std::vector<std::vector<SubjectRecord>> sites(K);
  for (int k = 0; k < K; ++k) {
    const CounterRng rng = root.substream(static_cast<std::uint64_t>(k) + 1);
    const long nk = config.site_sizes[k];
    auto& out = sites[k];
    out.reserve(nk);

    double beta_t = config.beta_t;
    if (config.kind == ScenarioKind::hetero && k == config.hetero.target_site)
      beta_t += config.hetero.delta;

    for (long i = 0; i < nk; ++i) {
      const std::uint64_t base = static_cast<std::uint64_t>(i) * 8;
      const double x = rng.normal(base);                       // uses base, base+1
      const double t_ind = rng.bernoulli(base + 2, expit(0.5 * x)) ? 1.0 : 0.0;

      double event_time, censor_time;
      if (config.kind == ScenarioKind::weibull_tv) {
        const auto& wp = config.weibull;
        const double shape = wp.shape_base + wp.shape_trt * t_ind;
        const double scale =
            wp.scale_base * std::exp(wp.scale_log_x * x + wp.scale_log_t * t_ind);
        const double u = rng.u01_open(base + 3);
        event_time = scale * std::pow(-std::log(u), 1.0 / shape);
        censor_time = std::min(rng.exponential(base + 4, wp.censor_rate), wp.censor_trunc);
      } else {
        const double lam = config.baseline_hazard * std::exp(config.beta_x * x + beta_t * t_ind);
        event_time = rng.exponential(base + 3, lam);
        censor_time = rng.exponential(base + 4, config.censor_rate);
      }

      SubjectRecord r;
      r.subject_id = "s" + std::to_string(k + 1) + "_" + std::to_string(i + 1);
      r.site_id = "site_" + std::to_string(k + 1);
      r.time = std::min(event_time, censor_time);
      r.event = event_time <= censor_time ? 1 : 0;
      r.covariates = {x, t_ind};
      out.push_back(std::move(r));
    }
  }
  return sites;
}

}  // namespace fedsurv
