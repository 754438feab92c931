#pragma once

// File formats: the site dataset CSV (header subject_id,time,event,z1,...,zd;
// UTF-8; '.' decimal point; no missing values), the fit/km/debias report CSVs
// and the simulation manifest. Floats are written with 17 significant digits
// so every file round-trips exactly.

#include <string>
#include <vector>

#include "fedsurv/renewable.hpp"
#include "fedsurv/simgen.hpp"
#include "fedsurv/types.hpp"

namespace fedsurv {

std::string format_double(double v);  // %.17g

struct SiteData {
  std::string site_id;
  std::vector<std::string> covariate_names;
  std::vector<SubjectRecord> records;
};

// Strict parse; malformed rows are rejected with their line number.
SiteData read_site_csv(const std::string& path);
void write_site_csv(const std::string& path, const std::vector<SubjectRecord>& records,
                    const std::vector<std::string>& covariate_names);

// fit.csv: term,estimate,std_error,z,p with per-landmark rows (term cov@tj)
// appended for time-varying covariates.
void write_fit_csv(const std::string& path, const FitReport& report);

struct FitCsvRow {
  std::string term;
  double estimate, std_error, z, p;
};
std::vector<FitCsvRow> read_fit_csv(const std::string& path);

// km.csv: time,survival over the shared grid.
void write_km_csv(const std::string& path, const std::vector<double>& grid,
                  const std::vector<double>& survival);

// manifest.json echoing the fully resolved scenario configuration.
void write_manifest(const std::string& path, const ScenarioConfig& config);

// Site subdirectories of a dataset directory, sorted by name; each must
// contain data.csv.
std::vector<std::string> list_site_dirs(const std::string& dataset_dir);

// Zero-padded directory name ("site_01") so lexicographic order matches
// site order.
std::string site_dir_name(int site_index, int n_sites);

void ensure_dir(const std::string& path);

}  // namespace fedsurv
