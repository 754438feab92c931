#pragma once

// Deterministic seeded generators for the three experiment designs, plus the
// analytic truth oracles used to score them. All randomness flows through the
// counter-based generator in rng.hpp, so identical configs give byte-identical
// datasets and per-site generation is order-independent.

#include <cstdint>
#include <string>
#include <vector>

#include "fedsurv/types.hpp"

namespace fedsurv {

enum class ScenarioKind { ph_exponential, weibull_tv, hetero };

std::string scenario_name(ScenarioKind k);

struct WeibullParams {
  double shape_base = 0.5;
  double shape_trt = 1.7;   // shape = shape_base + shape_trt * T
  double scale_base = 15.0;
  double scale_log_x = -0.35667494393873238;  // ln(0.7)
  double scale_log_t = 0.69314718055994531;   // ln(2)
  double censor_rate = 0.034657359027997264;  // -ln(0.5)/20
  double censor_trunc = 40.0;
};

struct HeteroParams {
  long target_size = 100;
  double delta = 0.0;
  int target_site = -1;  // resolved site index
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::ph_exponential;
  long n_total = 0;
  std::vector<long> site_sizes;
  double beta_x = 0.0;
  double beta_t = 0.0;
  double baseline_hazard = 0.05;
  double event_rate_target = 0.30;
  double censor_rate = 0.0;  // resolved at config time
  WeibullParams weibull;
  HeteroParams hetero;
  std::uint64_t seed = 1;
  std::string rng_name = "splitmix64-counter";
};

// Named site-size presets for the proportional-hazards experiments.
std::vector<long> ph_sites_balanced();  // 1500 x 5
std::vector<long> ph_sites_skewed();    // 3000, 3000, 1000, 400, 100

// event_rate must be 0.30 (h0 = 1/20) or 0.10 (h0 = 1/50); censoring is
// calibrated so the analytic event probability matches it.
ScenarioConfig make_ph_config(double event_rate, const std::vector<long>& site_sizes,
                              std::uint64_t seed);
ScenarioConfig make_weibull_config(std::uint64_t seed);
ScenarioConfig make_hetero_config(double delta, long target_size, std::uint64_t seed);

// One record vector per site.
std::vector<std::vector<SubjectRecord>> generate(const ScenarioConfig& config);

// Population cloglog-scale treatment coefficient of the Weibull design at X=0:
// log H(t | T=1) - log H(t | T=0) with H(t) = (t/scale)^shape.
double true_cloglog_coeff(double t, const WeibullParams& wp = WeibullParams());

// P(event) = E[lambda / (lambda + c)] under the PH design, by quadrature.
double analytic_event_rate(double h0, double beta_x, double beta_t, double censor_rate);

// Root-find the censoring rate that hits the target event probability.
double calibrate_ph_censoring(double h0, double beta_x, double beta_t, double target);

// Analytic marginal P(T = 1) = E[expit(0.5 X)], by quadrature.
double analytic_treatment_rate();

}  // namespace fedsurv
