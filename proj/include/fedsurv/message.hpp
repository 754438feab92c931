#pragma once

// Inter-site message envelope. Canonical JSON with a fixed field order,
// floats rendered with 17 significant digits, and a trailing FNV-1a 64-bit
// checksum computed over the canonical body bytes. Messages carry only
// grid-sized vectors and p x p matrices -- nothing that scales with a site's
// subject count.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace fedsurv {

enum class MessageStage { km, gee };

struct SiteMessage {
  std::string protocol_version = "fedsurv/1";
  MessageStage stage = MessageStage::km;
  std::vector<double> grid;
  long n_cum = 0;
  // stage == km
  std::vector<double> survival;
  std::vector<double> cum_hazard_integrand;
  std::vector<double> at_risk_fraction;
  // stage == gee
  std::vector<std::string> schema;
  Eigen::VectorXd beta;
  Eigen::MatrixXd info;
  Eigen::MatrixXd meat;
};

std::uint64_t fnv1a64(const std::string& bytes);

// Throws std::invalid_argument on nonfinite payload values.
std::string serialize_message(const SiteMessage& msg);

// Structured failure with the byte offset where parsing stopped (when known).
struct MessageParseError : std::runtime_error {
  explicit MessageParseError(const std::string& what, long byte_offset = -1)
      : std::runtime_error(what), offset(byte_offset) {}
  long offset;
};

// Validates version, stage, checksum, finiteness, matrix shape and symmetry
// (tolerance 1e-9 relative to the largest entry, floor 1).
SiteMessage parse_message(const std::string& bytes);

}  // namespace fedsurv
