#include "fedsurv/link.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedsurv {

LinkKind link_from_string(const std::string& name) {
  if (name == "identity") return LinkKind::identity;
  if (name == "logit") return LinkKind::logit;
  if (name == "cloglog") return LinkKind::cloglog;
  throw std::invalid_argument("unknown link: " + name);
}

std::string link_name(LinkKind kind) {
  switch (kind) {
    case LinkKind::identity: return "identity";
    case LinkKind::logit: return "logit";
    case LinkKind::cloglog: return "cloglog";
  }
  return "?";
}

LinkEval link_eval(LinkKind kind, double eta) {
  switch (kind) {
    case LinkKind::identity:
      return {eta, 1.0};
    case LinkKind::logit: {
      const double e = std::clamp(eta, -30.0, 30.0);
      const double mu = 1.0 / (1.0 + std::exp(-e));
      return {mu, mu * (1.0 - mu)};
    }
    case LinkKind::cloglog: {
      // survival scale: mu = exp(-exp(eta)); exp(eta) clamped to [1e-10, 30]
      const double ee = std::clamp(std::exp(std::min(eta, 30.0)), 1e-10, 30.0);
      const double mu = std::exp(-ee);
      return {mu, -ee * mu};
    }
  }
  return {0.0, 0.0};
}

double link_g(LinkKind kind, double mu) {
  switch (kind) {
    case LinkKind::identity: return mu;
    case LinkKind::logit: return std::log(mu / (1.0 - mu));
    case LinkKind::cloglog: return std::log(-std::log(mu));
  }
  return 0.0;
}

double link_inverse(LinkKind kind, double eta) { return link_eval(kind, eta).mu; }

double link_weight_sign(LinkKind kind) { return kind == LinkKind::cloglog ? -1.0 : 1.0; }

}  // namespace fedsurv
