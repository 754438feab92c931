#include "fedsurv/message.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "fedsurv/io.hpp"

namespace fedsurv {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

void append_double(std::string& out, double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("serialize_message: nonfinite value");
  out += format_double(v);
}

void append_vector(std::string& out, const char* name, const std::vector<double>& v) {
  out += "\"";
  out += name;
  out += "\":[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    append_double(out, v[i]);
  }
  out += ']';
}

void append_matrix_row_major(std::string& out, const char* name, const Eigen::MatrixXd& m) {
  out += "\"";
  out += name;
  out += "\":[";
  bool first = true;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (!first) out += ',';
      first = false;
      append_double(out, m(r, c));
    }
  out += ']';
}

// canonical body: every field except the trailing checksum, fixed order
std::string canonical_body(const SiteMessage& msg) {
  std::string out = "{\"protocol_version\":\"" + msg.protocol_version + "\",";
  out += "\"stage\":\"";
  out += (msg.stage == MessageStage::km ? "km" : "gee");
  out += "\",";
  append_vector(out, "grid", msg.grid);
  out += ",\"n_cum\":" + std::to_string(msg.n_cum);
  if (msg.stage == MessageStage::km) {
    out += ',';
    append_vector(out, "survival", msg.survival);
    out += ',';
    append_vector(out, "cum_hazard_integrand", msg.cum_hazard_integrand);
    out += ',';
    append_vector(out, "at_risk_fraction", msg.at_risk_fraction);
  } else {
    out += ",\"schema\":[";
    for (std::size_t i = 0; i < msg.schema.size(); ++i) {
      if (i) out += ',';
      out += nlohmann::json(msg.schema[i]).dump();
    }
    out += "],";
    std::vector<double> b(msg.beta.data(), msg.beta.data() + msg.beta.size());
    append_vector(out, "beta", b);
    out += ',';
    append_matrix_row_major(out, "info", msg.info);
    out += ',';
    append_matrix_row_major(out, "meat", msg.meat);
  }
  return out;
}

std::vector<double> get_double_vector(const nlohmann::json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_array())
    throw MessageParseError(std::string("missing array field: ") + name);
  std::vector<double> out;
  out.reserve(j[name].size());
  for (const auto& v : j[name]) {
    if (!v.is_number()) throw MessageParseError(std::string("non-numeric entry in ") + name);
    const double x = v.get<double>();
    if (!std::isfinite(x))
      throw MessageParseError(std::string("nonfinite entry in ") + name);
    out.push_back(x);
  }
  return out;
}

Eigen::MatrixXd to_square_matrix(const std::vector<double>& flat, std::size_t dim,
                                 const char* name) {
  if (flat.size() != dim * dim)
    throw MessageParseError(std::string(name) + ": expected " + std::to_string(dim * dim) +
                            " entries, got " + std::to_string(flat.size()));
  Eigen::MatrixXd m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = flat[r * dim + c];
  double maxabs = 0.0, asym = 0.0;
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      maxabs = std::max(maxabs, std::abs(m(r, c)));
      asym = std::max(asym, std::abs(m(r, c) - m(c, r)));
    }
  if (asym > 1e-9 * std::max(1.0, maxabs))
    throw MessageParseError(std::string("asymmetric matrix: ") + name);
  return m;
}

}  // namespace

std::string serialize_message(const SiteMessage& msg) {
  std::string body = canonical_body(msg);
  char cks[24];
  std::snprintf(cks, sizeof(cks), "%016llx",
                static_cast<unsigned long long>(fnv1a64(body)));
  body += ",\"checksum\":\"";
  body += cks;
  body += "\"}";
  return body;
}

SiteMessage parse_message(const std::string& bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw MessageParseError("malformed message payload: " + std::string(e.what()),
                            static_cast<long>(e.byte));
  }

  SiteMessage m;
  if (!j.contains("protocol_version") || !j["protocol_version"].is_string())
    throw MessageParseError("missing protocol_version");
  m.protocol_version = j["protocol_version"].get<std::string>();
  if (m.protocol_version != "fedsurv/1")
    throw MessageParseError("unsupported protocol version: " + m.protocol_version);

  const std::string stage = j.value("stage", std::string());
  if (stage == "km") {
    m.stage = MessageStage::km;
  } else if (stage == "gee") {
    m.stage = MessageStage::gee;
  } else {
    throw MessageParseError("unknown stage: '" + stage + "'");
  }

  m.grid = get_double_vector(j, "grid");
  if (!j.contains("n_cum") || !j["n_cum"].is_number_integer())
    throw MessageParseError("missing n_cum");
  m.n_cum = j["n_cum"].get<long>();

  if (m.stage == MessageStage::km) {
    m.survival = get_double_vector(j, "survival");
    m.cum_hazard_integrand = get_double_vector(j, "cum_hazard_integrand");
    m.at_risk_fraction = get_double_vector(j, "at_risk_fraction");
    const std::size_t G = m.grid.size();
    if (m.survival.size() != G || m.cum_hazard_integrand.size() != G ||
        m.at_risk_fraction.size() != G)
      throw MessageParseError("km vectors must match the grid length");
  } else {
    if (!j.contains("schema") || !j["schema"].is_array())
      throw MessageParseError("missing schema");
    for (const auto& s : j["schema"]) {
      if (!s.is_string()) throw MessageParseError("schema entries must be strings");
      m.schema.push_back(s.get<std::string>());
    }
    const std::size_t p = m.schema.size();
    const auto beta = get_double_vector(j, "beta");
    if (beta.size() != p) throw MessageParseError("beta length does not match schema");
    m.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(p));
    m.info = to_square_matrix(get_double_vector(j, "info"), p, "info");
    m.meat = to_square_matrix(get_double_vector(j, "meat"), p, "meat");
  }

  if (!j.contains("checksum") || !j["checksum"].is_string())
    throw MessageParseError("missing checksum");
  const std::string given = j["checksum"].get<std::string>();
  char expect[24];
  std::snprintf(expect, sizeof(expect), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_body(m))));
  if (given != expect) throw MessageParseError("checksum mismatch");
  return m;
}

}  // namespace fedsurv
