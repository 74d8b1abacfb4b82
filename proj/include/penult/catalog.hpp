#pragma once

#include <map>
#include <string>
#include <vector>

#include "penult/model.hpp"

namespace penult {

struct ParamInfo {
  std::string name;
  double default_value = 0.0;
  std::string description;
};

struct CatalogEntry {
  std::string name;
  Family family = Family::tail_exp;
  std::string description;
  /// How the reference theta follows from the parameters, e.g. "1/alpha".
  std::string theta_rule;
  std::vector<ParamInfo> params;
};

using ModelParams = std::map<std::string, double>;

/// Every built-in model, in listing order.
const std::vector<CatalogEntry>& catalog();

/// Throws Error(unknown_model) for an unknown name.
const CatalogEntry& catalog_entry(const std::string& name);

/// Builds a catalog model. Missing parameters take their defaults; unknown
/// names or parameters throw Error(unknown_model) / Error(invalid_argument).
/// pure-weibull accepts either theta or alpha = 1/theta.
WeibullTypeModel make_model(const std::string& name, const ModelParams& params = {});

/// Model sources for classical distributions, usable outside the catalog.
namespace classical {

ClassicalSpec normal();
ClassicalSpec exponential();
ClassicalSpec logistic();
ClassicalSpec gamma(double shape);

}  // namespace classical

}  // namespace penult
