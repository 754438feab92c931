#pragma once

#include <string>

namespace fedsurv {

// Link functions for the pseudo-value GLM. cloglog is on the survival scale:
// g(mu) = log(-log(mu)), mu = exp(-exp(eta)), so under proportional hazards
// the covariate coefficients are log hazard ratios.
enum class LinkKind { identity, logit, cloglog };

LinkKind link_from_string(const std::string& name);
std::string link_name(LinkKind kind);

struct LinkEval {
  double mu;
  double w;  // dmu/deta (negative for cloglog)
};

// Evaluate mu and W at a linear predictor value. eta is clamped to a safe
// range before exponentiation, so no overflow is possible.
LinkEval link_eval(LinkKind kind, double eta);

double link_g(LinkKind kind, double mu);          // g(mu)
double link_inverse(LinkKind kind, double eta);   // g^{-1}(eta)

// Sign of W for the link (+1 identity/logit, -1 cloglog). Weight matrices are
// accumulated with |W|; Newton steps multiply by this sign.
double link_weight_sign(LinkKind kind);

}  // namespace fedsurv
