#include "fedsurv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fedsurv/baselines.hpp"
#include "fedsurv/cox.hpp"
#include "fedsurv/debias.hpp"
#include "fedsurv/federation.hpp"
#include "fedsurv/io.hpp"
#include "fedsurv/simgen.hpp"

namespace fs = std::filesystem;

namespace fedsurv {

namespace {

std::uint64_t env_default_seed() {
  if (const char* env = std::getenv("FEDSURV_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return static_cast<std::uint64_t>(v);
  }
  return 1;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<long> parse_site_sizes(const std::string& flag) {
  if (flag == "balanced") return ph_sites_balanced();
  if (flag == "skewed") return ph_sites_skewed();
  std::vector<long> sizes;
  for (const auto& tok : split_list(flag)) sizes.push_back(std::stol(tok));
  if (sizes.empty()) throw CLI::ValidationError("--sites", "no site sizes given");
  return sizes;
}

GridSpec parse_landmarks_flag(const std::string& flag) {
  GridSpec spec;
  if (flag.empty()) return spec;
  const auto parts = split_list(flag);
  if (parts.size() != 3)
    throw CLI::ValidationError("--landmarks", "expected lo,hi,J");
  spec.use_default = false;
  spec.lo = std::stod(parts[0]);
  spec.hi = std::stod(parts[1]);
  spec.J = std::stoi(parts[2]);
  return spec;
}

struct LoadedSites {
  std::vector<std::string> dirs;
  std::vector<std::string> covariate_names;
  std::vector<std::vector<SubjectRecord>> records;
  std::vector<SubjectRecord> pooled;
};

LoadedSites load_sites(const std::string& dataset_dir) {
  LoadedSites out;
  out.dirs = list_site_dirs(dataset_dir);
  for (std::size_t k = 0; k < out.dirs.size(); ++k) {
    SiteData sd = read_site_csv((fs::path(out.dirs[k]) / "data.csv").string());
    if (k == 0) {
      out.covariate_names = sd.covariate_names;
    } else if (sd.covariate_names != out.covariate_names) {
      throw std::runtime_error("schema mismatch between sites: " + out.dirs[k]);
    }
    out.pooled.insert(out.pooled.end(), sd.records.begin(), sd.records.end());
    out.records.push_back(std::move(sd.records));
  }
  return out;
}

int coef_index(const FitReport& rep, const std::string& term) {
  const auto it = std::find(rep.terms.begin(), rep.terms.end(), term);
  if (it == rep.terms.end()) throw std::runtime_error("coefficient not found: " + term);
  return static_cast<int>(it - rep.terms.begin());
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const std::string& scenario, std::uint64_t seed, const std::string& out_dir,
                 const std::string& sites_flag, double event_rate, double delta,
                 long target_size) {
  ScenarioConfig config;
  if (scenario == "ph") {
    config = make_ph_config(event_rate, parse_site_sizes(sites_flag), seed);
  } else if (scenario == "weibull") {
    config = make_weibull_config(seed);
  } else if (scenario == "hetero") {
    config = make_hetero_config(delta, target_size, seed);
  } else {
    throw std::runtime_error("unknown scenario: " + scenario);
  }

  const auto sites = generate(config);
  ensure_dir(out_dir);
  const int K = static_cast<int>(sites.size());
  const std::vector<std::string> cov_names = {"z1", "z2"};
  for (int k = 0; k < K; ++k) {
    const std::string dir = (fs::path(out_dir) / site_dir_name(k, K)).string();
    ensure_dir(dir);
    write_site_csv((fs::path(dir) / "data.csv").string(), sites[k], cov_names);
  }
  write_manifest((fs::path(out_dir) / "manifest.json").string(), config);
  std::cout << "wrote " << K << " site directories under " << out_dir << "\n";
  return 0;
}

// --------------------------------------------------------------------- fit

int cmd_fit(const std::string& dataset_dir, const std::string& link_flag,
            const std::string& landmarks_flag, const std::string& tv_flag,
            const std::string& mode, const std::string& pseudo_flag,
            const std::string& out_dir) {
  const LinkKind link = link_from_string(link_flag);
  const GridSpec grid_spec = parse_landmarks_flag(landmarks_flag);
  const std::vector<std::string> tv = split_list(tv_flag);
  ensure_dir(out_dir);
  const std::string fit_path = (fs::path(out_dir) / "fit.csv").string();
  const std::string km_path = (fs::path(out_dir) / "km.csv").string();

  if (mode == "federated") {
    FederationOptions opts;
    opts.link = link;
    opts.grid = grid_spec;
    opts.time_varying = tv;
    const FederationResult res = run_federation(list_site_dirs(dataset_dir), opts);
    write_fit_csv(fit_path, res.report);
    write_km_csv(km_path, res.km.grid, res.km.survival);
  } else if (mode == "pooled") {
    const LoadedSites sites = load_sites(dataset_dir);
    if (pseudo_flag == "influence") {
      const PooledInfluenceFit res =
          pooled_influence_fit(sites.pooled, sites.covariate_names, grid_spec, link, tv);
      write_fit_csv(fit_path, res.report);
      write_km_csv(km_path, res.km.grid, res.km.survival);
    } else if (pseudo_flag == "exact") {
      const LandmarkGrid landmarks = resolve_landmarks(grid_spec, sites.pooled);
      const FitReport rep =
          pooled_pseudo_fit(sites.pooled, landmarks, link, tv, sites.covariate_names);
      write_fit_csv(fit_path, rep);
      const std::vector<double> grid =
          handshake_grid(sites.pooled, landmarks, grid_spec.quantile_points);
      const KmState km = km_restrict(km_pooled(sites.pooled, grid), grid, sites.pooled);
      write_km_csv(km_path, km.grid, km.survival);
    } else {
      throw std::runtime_error("--pseudo must be influence or exact");
    }
  } else if (mode == "cox") {
    const LoadedSites sites = load_sites(dataset_dir);
    const CoxFit fit = cox_fit(sites.pooled);
    FitReport rep;
    rep.terms = sites.covariate_names;
    rep.beta = fit.beta;
    rep.covariance = fit.covariance;
    const int d = static_cast<int>(fit.beta.size());
    rep.std_errors.resize(d);
    rep.wald_z.resize(d);
    rep.p_values.resize(d);
    for (int i = 0; i < d; ++i) {
      rep.std_errors[i] = std::sqrt(std::max(fit.covariance(i, i), 0.0));
      rep.wald_z[i] = rep.std_errors[i] > 0 ? fit.beta[i] / rep.std_errors[i] : 0.0;
      rep.p_values[i] = normal_two_sided_p(rep.wald_z[i]);
    }
    write_fit_csv(fit_path, rep);
  } else {
    throw std::runtime_error("--mode must be federated, pooled or cox");
  }
  std::cout << "wrote " << fit_path << "\n";
  return 0;
}

// ------------------------------------------------------------------ debias

int cmd_debias(const std::string& global_path, const std::string& dataset_dir, double c1,
               const std::string& rule_flag, const std::string& link_flag,
               const std::string& landmarks_flag, const std::string& tv_flag,
               const std::string& out_dir) {
  const LinkKind link = link_from_string(link_flag);
  const GridSpec grid_spec = parse_landmarks_flag(landmarks_flag);
  const std::vector<std::string> tv = split_list(tv_flag);

  const auto global_rows = read_fit_csv(global_path);
  const LoadedSites sites = load_sites(dataset_dir);
  const long K = static_cast<long>(sites.records.size());
  const long N = static_cast<long>(sites.pooled.size());
  const int d = static_cast<int>(sites.covariate_names.size());

  DebiasConfig cfg;
  cfg.c1 = c1;
  if (rule_flag == "algorithm2") {
    cfg.rule = ThresholdRule::algorithm2;
  } else if (rule_flag == "text") {
    cfg.rule = ThresholdRule::text;
  } else {
    throw std::runtime_error("--rule must be algorithm2 or text");
  }

  // the default landmark rule reproduces what a federated fit of the same
  // dataset would have used (site 1's event-time percentiles)
  const LandmarkGrid landmarks = resolve_landmarks(grid_spec, sites.records[0]);
  ensure_dir(out_dir);

  for (long k = 0; k < K; ++k) {
    const auto& recs = sites.records[k];
    const std::string site_name = fs::path(sites.dirs[k]).filename().string();
    const FitReport local =
        pooled_pseudo_fit(recs, landmarks, link, tv, sites.covariate_names);

    Eigen::VectorXd beta_global(local.terms.size());
    for (std::size_t i = 0; i < local.terms.size(); ++i) {
      const auto it = std::find_if(global_rows.begin(), global_rows.end(),
                                   [&](const FitCsvRow& r) { return r.term == local.terms[i]; });
      if (it == global_rows.end())
        throw std::runtime_error("global fit is missing term '" + local.terms[i] +
                                 "' (check --landmarks/--time-varying)");
      beta_global[static_cast<int>(i)] = it->estimate;
    }

    const DebiasResult res =
        debias_site(beta_global, local.beta, local.std_errors, cfg, K, N,
                    static_cast<long>(recs.size()), d, site_name);
    if (res.degenerate_fallback)
      std::cerr << "warning: K ^ d = 1 makes the algorithm2 threshold zero at " << site_name
                << "; fell back to the text rule\n";

    const std::string path = (fs::path(out_dir) / (site_name + "_debiased.csv")).string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "term,local,global,lambda,debiased,shrunk\n";
    for (std::size_t i = 0; i < local.terms.size(); ++i) {
      const int ii = static_cast<int>(i);
      out << local.terms[i] << ',' << format_double(res.beta_local[ii]) << ','
          << format_double(res.beta_global[ii]) << ',' << format_double(res.lambda[ii]) << ','
          << format_double(res.beta_debiased[ii]) << ',' << (res.shrunk_mask[ii] ? 1 : 0)
          << '\n';
    }
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- benchmark

struct RepError {
  bool failed = false;
  std::string message;
};

void note_failure(RepError& err, const std::exception& e) {
  if (!err.failed) {
    err.failed = true;
    err.message = e.what();
  }
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  long n = 0;
  for (double x : v)
    if (std::isfinite(x)) {
      s += x;
      ++n;
    }
  return n > 0 ? s / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  long n = 0;
  for (double x : v)
    if (std::isfinite(x)) {
      s += (x - m) * (x - m);
      ++n;
    }
  return n > 1 ? s / static_cast<double>(n - 1) : std::numeric_limits<double>::quiet_NaN();
}

double mse_of(const std::vector<double>& v, double truth) {
  double s = 0.0;
  long n = 0;
  for (double x : v)
    if (std::isfinite(x)) {
      s += (x - truth) * (x - truth);
      ++n;
    }
  return n > 0 ? s / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

int cmd_benchmark(int figure, int reps, std::uint64_t seed, const std::string& out_path,
                  double event_rate, const std::string& sites_flag,
                  const std::string& landmarks_flag, double c1) {
  const std::vector<std::string> cov_names = {"z1", "z2"};
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);

  if (figure == 1) {
    ScenarioConfig base = make_ph_config(event_rate, parse_site_sizes(sites_flag), seed);
    const double truth = base.beta_t;
    std::vector<double> fed(reps), cox(reps);
    std::vector<RepError> errs(reps);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < reps; ++r) {
      try {
        ScenarioConfig cfg = base;
        cfg.seed = seed + static_cast<std::uint64_t>(r);
        const auto sites = generate(cfg);
        FederationOptions opts;
        opts.grid = parse_landmarks_flag(landmarks_flag);
        const FederationResult res = run_federation_data(sites, cov_names, opts);
        fed[r] = res.report.beta[coef_index(res.report, "z2")];
        std::vector<SubjectRecord> pooled;
        for (const auto& s : sites) pooled.insert(pooled.end(), s.begin(), s.end());
        cox[r] = cox_fit(pooled).beta[1];
      } catch (const std::exception& e) {
        note_failure(errs[r], e);
      }
    }
    for (const auto& e : errs)
      if (e.failed) throw std::runtime_error("replicate failed: " + e.message);

    out << "rep,method,bias_T\n";
    for (int r = 0; r < reps; ++r) {
      out << r << ",pooled_cox," << format_double(cox[r] - truth) << '\n';
      out << r << ",fed_pseudo," << format_double(fed[r] - truth) << '\n';
    }
    std::vector<double> fb(reps), cb(reps);
    for (int r = 0; r < reps; ++r) {
      fb[r] = fed[r] - truth;
      cb[r] = cox[r] - truth;
    }
    std::ofstream sum(out_path + ".summary.csv");
    sum << "method,mean_bias,variance,mse\n";
    sum << "pooled_cox," << format_double(mean_of(cb)) << ',' << format_double(variance_of(cox))
        << ',' << format_double(mse_of(cox, truth)) << '\n';
    sum << "fed_pseudo," << format_double(mean_of(fb)) << ',' << format_double(variance_of(fed))
        << ',' << format_double(mse_of(fed, truth)) << '\n';
  } else if (figure == 2) {
    ScenarioConfig base = make_weibull_config(seed);
    GridSpec grid_spec = parse_landmarks_flag(landmarks_flag);
    if (landmarks_flag.empty()) {
      // the informative window of the Weibull design; the event-percentile
      // default would start where the treated arm has no events yet
      grid_spec.use_default = false;
      grid_spec.lo = 5.0;
      grid_spec.hi = 25.0;
      grid_spec.J = 5;
    }
    const int J = grid_spec.J;
    Eigen::MatrixXd est(reps, J);
    std::vector<double> lm_times(J, 0.0);
    std::vector<RepError> errs(reps);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < reps; ++r) {
      try {
        ScenarioConfig cfg = base;
        cfg.seed = seed + static_cast<std::uint64_t>(r);
        const auto sites = generate(cfg);
        FederationOptions opts;
        opts.grid = grid_spec;
        opts.time_varying = {"z2"};
        const FederationResult res = run_federation_data(sites, cov_names, opts);
        for (const auto& e : res.report.landmark_effects)
          if (e.covariate == "z2") est(r, e.landmark_index - 1) = e.estimate;
        if (r == 0)
          for (int j = 0; j < J; ++j) lm_times[j] = res.landmarks.times[j];
      } catch (const std::exception& e) {
        note_failure(errs[r], e);
      }
    }
    for (const auto& e : errs)
      if (e.failed) throw std::runtime_error("replicate failed: " + e.message);

    out << "rep,landmark_index,landmark_time,estimate,true_value\n";
    for (int r = 0; r < reps; ++r)
      for (int j = 0; j < J; ++j)
        out << r << ',' << (j + 1) << ',' << format_double(lm_times[j]) << ','
            << format_double(est(r, j)) << ','
            << format_double(true_cloglog_coeff(lm_times[j], base.weibull)) << '\n';
    std::ofstream sum(out_path + ".summary.csv");
    sum << "landmark_index,landmark_time,mean_estimate,true_value,bias,variance,mse\n";
    for (int j = 0; j < J; ++j) {
      std::vector<double> col(est.col(j).data(), est.col(j).data() + reps);
      const double truth = true_cloglog_coeff(lm_times[j], base.weibull);
      sum << (j + 1) << ',' << format_double(lm_times[j]) << ','
          << format_double(mean_of(col)) << ',' << format_double(truth) << ','
          << format_double(mean_of(col) - truth) << ',' << format_double(variance_of(col)) << ','
          << format_double(mse_of(col, truth)) << '\n';
    }
  } else if (figure == 3) {
    const std::vector<long> target_sizes = {500, 100, 50};
    const std::vector<double> deltas = {0.05, 0.15, 0.3, 0.5};
    std::ofstream repf(out_path + ".reps.csv");
    repf << "delta,target_size,rep,method,estimate\n";
    out << "delta,target_size,method,bias,variance,mse\n";

    int cell = 0;
    for (long tsz : target_sizes) {
      for (double delta : deltas) {
        ++cell;
        std::vector<double> g(reps), l(reps), dbs(reps);
        std::vector<RepError> errs(reps);
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < reps; ++r) {
          try {
            ScenarioConfig cfg = make_hetero_config(delta, tsz, 0);
            cfg.seed = seed + 1000003ULL * static_cast<std::uint64_t>(cell) +
                       static_cast<std::uint64_t>(r);
            const auto sites = generate(cfg);
            FederationOptions opts;
            const FederationResult res = run_federation_data(sites, cov_names, opts);
            const int it = coef_index(res.report, "z2");
            g[r] = res.report.beta[it];

            const auto& target = sites[cfg.hetero.target_site];
            try {
              l[r] = cox_fit(target).beta[1];
            } catch (const std::exception&) {
              l[r] = std::numeric_limits<double>::quiet_NaN();  // separation at tiny sites
            }
            try {
              const FitReport local = pooled_pseudo_fit(target, res.landmarks,
                                                        LinkKind::cloglog, {}, cov_names);
              DebiasConfig dcfg;
              dcfg.c1 = c1;
              const DebiasResult db = debias_site(
                  res.report.beta, local.beta, local.std_errors, dcfg,
                  static_cast<long>(sites.size()), cfg.n_total, tsz, 2, "target");
              dbs[r] = db.beta_debiased[coef_index(local, "z2")];
            } catch (const std::exception&) {
              dbs[r] = std::numeric_limits<double>::quiet_NaN();
            }
          } catch (const std::exception& e) {
            note_failure(errs[r], e);
          }
        }
        for (const auto& e : errs)
          if (e.failed) throw std::runtime_error("replicate failed: " + e.message);

        const double truth = std::log(1.5) + delta;
        for (int r = 0; r < reps; ++r) {
          repf << format_double(delta) << ',' << tsz << ',' << r << ",global,"
               << format_double(g[r]) << '\n';
          repf << format_double(delta) << ',' << tsz << ',' << r << ",local,"
               << format_double(l[r]) << '\n';
          repf << format_double(delta) << ',' << tsz << ',' << r << ",debiased,"
               << format_double(dbs[r]) << '\n';
        }
        const auto emit = [&](const char* name, const std::vector<double>& v) {
          out << format_double(delta) << ',' << tsz << ',' << name << ','
              << format_double(mean_of(v) - truth) << ',' << format_double(variance_of(v)) << ','
              << format_double(mse_of(v, truth)) << '\n';
        };
        emit("global", g);
        emit("local", l);
        emit("debiased", dbs);
      }
    }
  } else {
    throw std::runtime_error("--figure must be 1, 2 or 3");
  }
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"fedsurv: federated survival analysis with distributed pseudo-observations"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic multi-site dataset");
  std::string sim_scenario;
  std::uint64_t sim_seed = env_default_seed();
  std::string sim_out;
  std::string sim_sites = "balanced";
  double sim_event_rate = 0.3;
  double sim_delta = 0.0;
  long sim_target_size = 100;
  sim->add_option("--scenario", sim_scenario, "ph|weibull|hetero")->required();
  sim->add_option("--seed", sim_seed, "RNG seed (default: FEDSURV_SEED or 1)");
  sim->add_option("--out", sim_out, "output directory")->required();
  sim->add_option("--sites", sim_sites, "balanced|skewed|comma list of sizes (ph only)");
  sim->add_option("--event-rate", sim_event_rate, "0.3 or 0.1 (ph only)");
  sim->add_option("--delta", sim_delta, "target-site deviation (hetero only)");
  sim->add_option("--target-size", sim_target_size, "target-site size (hetero only)");

  // fit
  auto* fit = app.add_subcommand("fit", "fit survival models over site directories");
  std::string fit_sites, fit_out = ".";
  std::string fit_link = "cloglog";
  std::string fit_landmarks, fit_tv;
  std::string fit_mode = "federated";
  std::string fit_pseudo = "influence";
  fit->add_option("--sites", fit_sites, "dataset directory with site subdirectories")->required();
  fit->add_option("--link", fit_link, "identity|logit|cloglog");
  fit->add_option("--landmarks", fit_landmarks, "lo,hi,J (default: event-time percentiles)");
  fit->add_option("--time-varying", fit_tv, "comma list of covariates with landmark interactions");
  fit->add_option("--mode", fit_mode, "federated|pooled|cox");
  fit->add_option("--pseudo", fit_pseudo, "influence|exact (pooled mode)");
  fit->add_option("--out", fit_out, "output directory for fit.csv / km.csv");

  // debias
  auto* deb = app.add_subcommand("debias", "site-level soft-thresholding against a global fit");
  std::string deb_global, deb_sites, deb_out = ".";
  double deb_c1 = 2.0;
  std::string deb_rule = "algorithm2";
  std::string deb_link = "cloglog";
  std::string deb_landmarks, deb_tv;
  deb->add_option("--global", deb_global, "global fit.csv")->required();
  deb->add_option("--sites", deb_sites, "dataset directory")->required();
  deb->add_option("--c1", deb_c1, "threshold tuning constant (>= 1)");
  deb->add_option("--rule", deb_rule, "algorithm2|text");
  deb->add_option("--link", deb_link, "identity|logit|cloglog");
  deb->add_option("--landmarks", deb_landmarks, "lo,hi,J used by the global fit");
  deb->add_option("--time-varying", deb_tv, "comma list matching the global fit");
  deb->add_option("--out", deb_out, "output directory");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "replicate the simulation experiments");
  int bench_figure = 0;
  int bench_reps = 100;
  std::uint64_t bench_seed = env_default_seed();
  std::string bench_out;
  double bench_event_rate = 0.3;
  std::string bench_sites = "balanced";
  std::string bench_landmarks;
  double bench_c1 = 2.0;
  bench->add_option("--figure", bench_figure, "1|2|3")->required();
  bench->add_option("--reps", bench_reps, "replicates");
  bench->add_option("--seed", bench_seed, "RNG seed (default: FEDSURV_SEED or 1)");
  bench->add_option("--out", bench_out, "output CSV")->required();
  bench->add_option("--event-rate", bench_event_rate, "0.3 or 0.1 (figure 1)");
  bench->add_option("--sites", bench_sites, "balanced|skewed (figure 1)");
  bench->add_option("--landmarks", bench_landmarks, "lo,hi,J override");
  bench->add_option("--c1", bench_c1, "debias tuning constant (figure 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sim->parsed())
      return cmd_simulate(sim_scenario, sim_seed, sim_out, sim_sites, sim_event_rate, sim_delta,
                          sim_target_size);
    if (fit->parsed())
      return cmd_fit(fit_sites, fit_link, fit_landmarks, fit_tv, fit_mode, fit_pseudo, fit_out);
    if (deb->parsed())
      return cmd_debias(deb_global, deb_sites, deb_c1, deb_rule, deb_link, deb_landmarks, deb_tv,
                        deb_out);
    if (bench->parsed())
      return cmd_benchmark(bench_figure, bench_reps, bench_seed, bench_out, bench_event_rate,
                           bench_sites, bench_landmarks, bench_c1);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.push_back("fedsurv");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : full) argv.push_back(s.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace fedsurv
