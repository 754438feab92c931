#pragma once

// One-shot sequential federation over site datasets.
//
// Pass 1 (KM): site 1 seeds the shared state with its pooled product-limit
// fit evaluated on the handshake grid (caller landmarks plus quantile points
// of site 1's observed times); every later site streams its records through
// the influence update. Pass 2 (GEE): the final state is broadcast, each site
// builds influence-approximate pseudo-values against it and the renewable
// chain runs in site order. Sites exchange only serialized SiteMessages, so
// each hop is O(p^2 + G) bytes regardless of site size. The directory-based
// orchestrator hands the messages over as files in a mailbox directory; the
// in-memory variant keeps the identical byte stream in strings (the 17-digit
// float rendering round-trips exactly, so both produce identical results).

#include <string>
#include <vector>

#include "fedsurv/km.hpp"
#include "fedsurv/message.hpp"
#include "fedsurv/pseudo.hpp"
#include "fedsurv/renewable.hpp"

namespace fedsurv {

struct GridSpec {
  bool use_default = true;  // J points between the 10th/90th percentile of
                            // site 1's event times
  double lo = 0.0;
  double hi = 0.0;
  int J = 5;
  int quantile_points = 200;  // G, the handshake-grid resolution
};

struct FederationOptions {
  LinkKind link = LinkKind::cloglog;
  GridSpec grid;
  std::vector<std::string> time_varying;
  std::string mailbox_dir;  // dir orchestrator only; empty = unique temp dir
  bool keep_mailbox = false;
};

struct FederationResult {
  FitReport report;
  KmState km;  // final shared state
  LandmarkGrid landmarks;
  std::vector<long> message_bytes;  // size of every message, in hop order
  std::vector<int> visit_counts;    // per site; the protocol visits each exactly twice
};

// Directory orchestrator: each site_dir must contain data.csv with a
// consistent covariate header.
FederationResult run_federation(const std::vector<std::string>& site_dirs,
                                const FederationOptions& options);

// In-memory orchestrator over already-loaded per-site records.
FederationResult run_federation_data(const std::vector<std::vector<SubjectRecord>>& site_records,
                                     const std::vector<std::string>& covariate_names,
                                     const FederationOptions& options);

// Shared-grid construction (exposed for tests): landmarks plus G quantile
// points of the given observed times, sorted and deduplicated.
std::vector<double> handshake_grid(const std::vector<SubjectRecord>& site1_records,
                                   const LandmarkGrid& landmarks, int quantile_points);

LandmarkGrid resolve_landmarks(const GridSpec& spec,
                               const std::vector<SubjectRecord>& site1_records);

}  // namespace fedsurv
