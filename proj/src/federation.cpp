#include "fedsurv/federation.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>

#include "fedsurv/io.hpp"

namespace fs = std::filesystem;

namespace fedsurv {

namespace {

// message transport between site visits; post returns a handle fetch accepts
struct Mailbox {
  virtual ~Mailbox() = default;
  virtual std::string post(const std::string& name, const std::string& bytes) = 0;
  virtual std::string fetch(const std::string& handle) = 0;
};

struct MemoryMailbox : Mailbox {
  std::map<std::string, std::string> store;
  std::string post(const std::string& name, const std::string& bytes) override {
    store[name] = bytes;
    return name;
  }
  std::string fetch(const std::string& handle) override { return store.at(handle); }
};

struct DirMailbox : Mailbox {
  fs::path dir;
  explicit DirMailbox(fs::path d) : dir(std::move(d)) { fs::create_directories(dir); }
  std::string post(const std::string& name, const std::string& bytes) override {
    const std::string path = (dir / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write message file " + path);
    out << bytes;
    return path;
  }
  std::string fetch(const std::string& handle) override {
    std::ifstream in(handle, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open message file " + handle);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
};

KmState state_from_message(const SiteMessage& m) {
  return km_from_parts(m.grid, m.survival, m.cum_hazard_integrand, m.at_risk_fraction, m.n_cum);
}

SiteMessage message_from_km(const KmState& s) {
  SiteMessage m;
  m.stage = MessageStage::km;
  m.grid = s.grid;
  m.n_cum = s.n_processed;
  m.survival = s.survival;
  m.cum_hazard_integrand = s.cum_hazard_integrand;
  m.at_risk_fraction = s.at_risk_fraction;
  return m;
}

SiteMessage message_from_state(const RenewableState& s, const std::vector<double>& grid) {
  SiteMessage m;
  m.stage = MessageStage::gee;
  m.grid = grid;
  m.n_cum = s.n_cum;
  m.schema = s.schema;
  m.beta = s.beta;
  m.info = 0.5 * (s.info + s.info.transpose());
  m.meat = 0.5 * (s.meat + s.meat.transpose());
  return m;
}

RenewableState state_from_gee_message(const SiteMessage& m, const std::vector<double>& landmarks,
                                      long sites_processed) {
  RenewableState s;
  s.beta = m.beta;
  s.info = m.info;
  s.meat = m.meat;
  s.schema = m.schema;
  s.landmarks = landmarks;
  s.n_cum = m.n_cum;
  s.sites_processed = sites_processed;
  return s;
}

FederationResult run_chain(const std::vector<std::vector<SubjectRecord>>& sites,
                           const std::vector<std::string>& covariate_names,
                           const FederationOptions& options, Mailbox& mailbox) {
  const int K = static_cast<int>(sites.size());
  if (K == 0) throw std::invalid_argument("run_federation: no sites");
  if (sites[0].empty()) throw std::runtime_error("site 1 has no records");
  for (const auto& recs : sites)
    if (!recs.empty()) validate_dataset(recs);
  for (const auto& tv : options.time_varying)
    if (std::find(covariate_names.begin(), covariate_names.end(), tv) == covariate_names.end())
      throw std::invalid_argument("time-varying covariate not in dataset: " + tv);

  FederationResult result;
  result.visit_counts.assign(K, 0);

  const auto post = [&](const std::string& name, const SiteMessage& m) {
    const std::string bytes = serialize_message(m);
    result.message_bytes.push_back(static_cast<long>(bytes.size()));
    return mailbox.post(name, bytes);
  };

  // ---- pass 1: sequential distributed Kaplan-Meier ----
  result.landmarks = resolve_landmarks(options.grid, sites[0]);
  const std::vector<double> grid =
      handshake_grid(sites[0], result.landmarks, options.grid.quantile_points);

  result.visit_counts[0] += 1;
  KmState km = km_restrict(km_pooled(sites[0], grid), grid, sites[0]);
  std::string km_handle = post("km_site_1.json", message_from_km(km));

  for (int k = 1; k < K; ++k) {
    result.visit_counts[k] += 1;
    KmState local = state_from_message(parse_message(mailbox.fetch(km_handle)));
    for (const auto& r : sites[k]) km_update(local, r);
    km_handle = post("km_site_" + std::to_string(k + 1) + ".json", message_from_km(local));
  }
  // the final pass-1 message doubles as the broadcast every site reads in pass 2
  const std::string broadcast_handle = km_handle;
  result.km = state_from_message(parse_message(mailbox.fetch(broadcast_handle)));

  // ---- pass 2: renewable estimating equation against the shared state ----
  std::string gee_handle;
  for (int k = 0; k < K; ++k) {
    result.visit_counts[k] += 1;
    const KmState shared = state_from_message(parse_message(mailbox.fetch(broadcast_handle)));
    RenewableState state;
    if (k == 0) {
      const PseudoValues pv = pseudo_federated(shared, sites[k], result.landmarks);
      const DesignMatrix dm =
          build_design(sites[k], pv, result.landmarks, covariate_names, options.time_varying);
      state = renew_init(dm, options.link, result.landmarks.times);
    } else {
      const SiteMessage prev = parse_message(mailbox.fetch(gee_handle));
      state = state_from_gee_message(prev, result.landmarks.times, k);
      if (sites[k].empty()) {
        state.sites_processed += 1;
      } else {
        const PseudoValues pv = pseudo_federated(shared, sites[k], result.landmarks);
        const DesignMatrix dm =
            build_design(sites[k], pv, result.landmarks, covariate_names, options.time_varying);
        renew_update(state, dm, options.link);
      }
    }
    gee_handle =
        post("gee_site_" + std::to_string(k + 1) + ".json", message_from_state(state, grid));
  }

  const SiteMessage last = parse_message(mailbox.fetch(gee_handle));
  result.report = finalize(state_from_gee_message(last, result.landmarks.times, K),
                           options.time_varying);
  return result;
}

}  // namespace

LandmarkGrid resolve_landmarks(const GridSpec& spec,
                               const std::vector<SubjectRecord>& site1_records) {
  if (spec.use_default) return landmarks_default(site1_records, spec.J);
  return landmarks_equally_spaced(spec.lo, spec.hi, spec.J);
}

std::vector<double> handshake_grid(const std::vector<SubjectRecord>& site1_records,
                                   const LandmarkGrid& landmarks, int quantile_points) {
  std::vector<double> times;
  times.reserve(site1_records.size());
  for (const auto& r : site1_records) times.push_back(r.time);
  std::sort(times.begin(), times.end());

  const double t_max = times.back();
  for (double t : landmarks.times)
    if (!(t > 0.0) || !(t < t_max))
      throw std::invalid_argument(
          "grid/landmark incompatibility: landmark outside (0, max observed time of site 1)");

  std::vector<double> grid = landmarks.times;
  const int G = std::max(2, quantile_points);
  for (int g = 0; g < G; ++g) {
    const double q = static_cast<double>(g) / static_cast<double>(G - 1);
    const auto idx =
        static_cast<std::size_t>(std::llround(q * static_cast<double>(times.size() - 1)));
    grid.push_back(times[idx]);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

FederationResult run_federation_data(const std::vector<std::vector<SubjectRecord>>& site_records,
                                     const std::vector<std::string>& covariate_names,
                                     const FederationOptions& options) {
  MemoryMailbox mailbox;
  return run_chain(site_records, covariate_names, options, mailbox);
}

FederationResult run_federation(const std::vector<std::string>& site_dirs,
                                const FederationOptions& options) {
  if (site_dirs.empty()) throw std::invalid_argument("run_federation: no sites");
  std::vector<std::vector<SubjectRecord>> sites;
  std::vector<std::string> covariate_names;
  for (std::size_t k = 0; k < site_dirs.size(); ++k) {
    SiteData sd = read_site_csv((fs::path(site_dirs[k]) / "data.csv").string());
    if (k == 0) {
      covariate_names = sd.covariate_names;
    } else if (sd.covariate_names != covariate_names) {
      throw std::runtime_error("schema mismatch between sites: " + site_dirs[k]);
    }
    sites.push_back(std::move(sd.records));
  }

  fs::path mailbox_dir;
  const bool own_mailbox = options.mailbox_dir.empty();
  if (own_mailbox) {
    std::random_device rd;
    mailbox_dir = fs::temp_directory_path() /
                  ("fedsurv_mbx_" + std::to_string(static_cast<unsigned>(rd())));
  } else {
    mailbox_dir = options.mailbox_dir;
  }

  DirMailbox mailbox(mailbox_dir);
  try {
    FederationResult r = run_chain(sites, covariate_names, options, mailbox);
    if (own_mailbox && !options.keep_mailbox) fs::remove_all(mailbox_dir);
    return r;
  } catch (...) {
    if (own_mailbox && !options.keep_mailbox) fs::remove_all(mailbox_dir);
    throw;
  }
}

}  // namespace fedsurv
