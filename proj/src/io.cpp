#include "fedsurv/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace fedsurv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double_strict(const std::string& s, const std::string& path, long line,
                           const char* what) {
  if (s.empty())
    throw std::runtime_error(path + " line " + std::to_string(line) + ": missing " + what);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw std::runtime_error(path + " line " + std::to_string(line) + ": invalid " + what +
                             " '" + s + "'");
  return v;
}

}  // namespace

SiteData read_site_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "subject_id" || header[1] != "time" ||
      header[2] != "event")
    throw std::runtime_error(path + " line 1: header must be subject_id,time,event,z1,...");

  SiteData site;
  site.site_id = fs::path(path).parent_path().filename().string();
  for (std::size_t c = 3; c < header.size(); ++c) {
    if (header[c].empty())
      throw std::runtime_error(path + " line 1: empty covariate name");
    site.covariate_names.push_back(header[c]);
  }
  const std::size_t ncols = header.size();

  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != ncols)
      throw std::runtime_error(path + " line " + std::to_string(lineno) + ": expected " +
                               std::to_string(ncols) + " fields, got " +
                               std::to_string(fields.size()));
    SubjectRecord r;
    r.subject_id = fields[0];
    r.site_id = site.site_id;
    if (r.subject_id.empty())
      throw std::runtime_error(path + " line " + std::to_string(lineno) + ": missing subject_id");
    r.time = parse_double_strict(fields[1], path, lineno, "time");
    if (r.time < 0.0)
      throw std::runtime_error(path + " line " + std::to_string(lineno) + ": negative time");
    if (fields[2] == "0") {
      r.event = 0;
    } else if (fields[2] == "1") {
      r.event = 1;
    } else {
      throw std::runtime_error(path + " line " + std::to_string(lineno) +
                               ": event must be 0 or 1");
    }
    for (std::size_t c = 3; c < ncols; ++c)
      r.covariates.push_back(parse_double_strict(fields[c], path, lineno, "covariate"));
    site.records.push_back(std::move(r));
  }
  return site;
}

void write_site_csv(const std::string& path, const std::vector<SubjectRecord>& records,
                    const std::vector<std::string>& covariate_names) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "subject_id,time,event";
  for (const auto& n : covariate_names) out << ',' << n;
  out << '\n';
  for (const auto& r : records) {
    out << r.subject_id << ',' << format_double(r.time) << ',' << r.event;
    for (double z : r.covariates) out << ',' << format_double(z);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_fit_csv(const std::string& path, const FitReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "term,estimate,std_error,z,p\n";
  for (std::size_t i = 0; i < report.terms.size(); ++i) {
    out << report.terms[i] << ',' << format_double(report.beta[i]) << ','
        << format_double(report.std_errors[i]) << ',' << format_double(report.wald_z[i]) << ','
        << format_double(report.p_values[i]) << '\n';
  }
  for (const auto& e : report.landmark_effects) {
    out << e.covariate << "@t" << e.landmark_index << ',' << format_double(e.estimate) << ','
        << format_double(e.std_error) << ',' << format_double(e.wald_z) << ','
        << format_double(e.p_value) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<FitCsvRow> read_fit_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) !=
      std::vector<std::string>{"term", "estimate", "std_error", "z", "p"})
    throw std::runtime_error(path + ": not a fit.csv file");
  std::vector<FitCsvRow> rows;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5)
      throw std::runtime_error(path + " line " + std::to_string(lineno) + ": expected 5 fields");
    FitCsvRow r;
    r.term = f[0];
    r.estimate = parse_double_strict(f[1], path, lineno, "estimate");
    r.std_error = parse_double_strict(f[2], path, lineno, "std_error");
    r.z = parse_double_strict(f[3], path, lineno, "z");
    r.p = parse_double_strict(f[4], path, lineno, "p");
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_km_csv(const std::string& path, const std::vector<double>& grid,
                  const std::vector<double>& survival) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "time,survival\n";
  for (std::size_t g = 0; g < grid.size(); ++g)
    out << format_double(grid[g]) << ',' << format_double(survival[g]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_manifest(const std::string& path, const ScenarioConfig& config) {
  nlohmann::ordered_json j;
  j["scenario"] = scenario_name(config.kind);
  j["seed"] = config.seed;
  j["rng"] = config.rng_name;
  j["n_total"] = config.n_total;
  j["site_sizes"] = config.site_sizes;
  if (config.kind != ScenarioKind::weibull_tv) {
    j["beta_x"] = config.beta_x;
    j["beta_t"] = config.beta_t;
    j["baseline_hazard"] = config.baseline_hazard;
    j["event_rate_target"] = config.event_rate_target;
    j["censor_rate"] = config.censor_rate;
  } else {
    j["weibull"] = {{"shape_base", config.weibull.shape_base},
                    {"shape_trt", config.weibull.shape_trt},
                    {"scale_base", config.weibull.scale_base},
                    {"scale_log_x", config.weibull.scale_log_x},
                    {"scale_log_t", config.weibull.scale_log_t},
                    {"censor_rate", config.weibull.censor_rate},
                    {"censor_trunc", config.weibull.censor_trunc}};
  }
  if (config.kind == ScenarioKind::hetero) {
    j["delta"] = config.hetero.delta;
    j["target_size"] = config.hetero.target_size;
    j["target_site"] = config.hetero.target_site;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::vector<std::string> list_site_dirs(const std::string& dataset_dir) {
  std::vector<std::string> dirs;
  if (!fs::is_directory(dataset_dir))
    throw std::runtime_error("not a directory: " + dataset_dir);
  for (const auto& e : fs::directory_iterator(dataset_dir))
    if (e.is_directory() && fs::exists(e.path() / "data.csv"))
      dirs.push_back(e.path().string());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty())
    throw std::runtime_error("no site directories with data.csv under " + dataset_dir);
  return dirs;
}

std::string site_dir_name(int site_index, int n_sites) {
  int width = 1;
  for (int v = n_sites; v >= 10; v /= 10) ++width;
  std::string num = std::to_string(site_index + 1);
  while (static_cast<int>(num.size()) < width) num.insert(num.begin(), '0');
  return "site_" + num;
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create directory " + path + ": " + ec.message());
}

}  // namespace fedsurv
