// Times the serial reference implementations against the OpenMP kernels and
// reports the largest result discrepancy alongside the speedup.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "fedsurv/baselines.hpp"
#include "fedsurv/federation.hpp"
#include "fedsurv/glm.hpp"
#include "fedsurv/parallel.hpp"
#include "fedsurv/pseudo.hpp"
#include "fedsurv/simgen.hpp"

using namespace fedsurv;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_ms(F&& f, int repeats) {
  f();  // warm up
  const double t0 = now_ms();
  for (int i = 0; i < repeats; ++i) f();
  return (now_ms() - t0) / repeats;
}

void report(const char* name, double serial_ms, double parallel_ms, double max_diff) {
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx   max|diff| = %.3g\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  // one larger PH dataset drives all kernels
  ScenarioConfig cfg = make_ph_config(0.30, {4000}, 20240501);
  const auto sites = generate(cfg);
  const auto& records = sites[0];
  const LandmarkGrid grid = landmarks_default(records, 5);

  {
    PseudoValues a, b;
    const double ts = time_ms([&] { a = pseudo_exact_serial(records, grid); }, 3);
    const double tp = time_ms([&] { b = pseudo_exact(records, grid); }, 3);
    report("pseudo_exact", ts, tp, (a.values - b.values).cwiseAbs().maxCoeff());
  }

  const std::vector<double> hs = handshake_grid(records, grid, 200);
  const KmState km = km_restrict(km_pooled(records, hs), hs, records);
  {
    PseudoValues a, b;
    const double ts = time_ms([&] { a = pseudo_federated_serial(km, records, grid); }, 20);
    const double tp = time_ms([&] { b = pseudo_federated(km, records, grid); }, 20);
    report("pseudo_federated", ts, tp, (a.values - b.values).cwiseAbs().maxCoeff());
  }

  const PseudoValues pv = pseudo_federated(km, records, grid);
  const DesignMatrix dm = build_design(records, pv, grid, {"z1", "z2"}, {"z2"});
  const Eigen::VectorXd beta = default_beta_init(dm, LinkKind::cloglog);
  {
    ScoreHessian a, b;
    const double ts = time_ms([&] { a = score_hessian_serial(dm, LinkKind::cloglog, beta); }, 20);
    const double tp = time_ms([&] { b = score_hessian(dm, LinkKind::cloglog, beta); }, 20);
    const double diff = std::max((a.U - b.U).cwiseAbs().maxCoeff(),
                                 (a.H - b.H).cwiseAbs().maxCoeff());
    report("score_hessian", ts, tp, diff);
  }

  {
    // end-to-end federated replicate (kernels inside use OpenMP)
    ScenarioConfig fed_cfg = make_ph_config(0.30, ph_sites_skewed(), 7);
    const auto fed_sites = generate(fed_cfg);
    FederationOptions opts;
    double beta_t = 0.0;
    const double tp = time_ms(
        [&] {
          const FederationResult r = run_federation_data(fed_sites, {"z1", "z2"}, opts);
          beta_t = r.report.beta[r.report.beta.size() - 1];
        },
        3);
    std::printf("%-28s %13s %10.2f ms           beta_T = %.4f\n", "federated replicate (N=7500)",
                "-", tp, beta_t);
  }
  return 0;
}
