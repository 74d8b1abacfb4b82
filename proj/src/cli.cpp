#include "penult/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "penult/catalog.hpp"
#include "penult/error.hpp"
#include "penult/norming.hpp"
#include "penult/penultimate.hpp"
#include "penult/vonmises.hpp"

#ifndef PENULT_VERSION
#define PENULT_VERSION "0.0.0"
#endif

namespace penult::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kTool = "penult";

constexpr std::array<std::string_view, 9> kParamFlags = {"theta", "alpha", "beta",     "shape", "delta",
                                                          "lambda", "sv-power", "sv-c", "sv-d"};

/// Malformed command line; exit code 2 with error code "usage".
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

struct RunConfig {
  std::string command;
  std::string model_name;
  ModelParams model_params;
  std::vector<double> log_n_list = {10.0, 20.0, 40.0};
  GridSpec grid;
  std::vector<double> t_grid = {1e2, 1e4, 1e6, 1e8, 1e10};
  Format format = Format::csv;
  std::string output_path;
  GammaMode gamma_mode = GammaMode::exact;
};

// ---- formatting -----------------------------------------------------------

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json error_object(std::string_view code, std::string_view message) {
  return Json{{"error", {{"code", code}, {"message", message}}}};
}

Json error_object(const Error& e) { return error_object(to_string(e.code()), e.what()); }

// ---- argument parsing -----------------------------------------------------

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_real(const std::string& token, std::string_view flag) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (token.empty() || end != begin + token.size() || !std::isfinite(v)) {
    throw UsageError(std::string(flag) + ": cannot parse '" + token + "' as a finite number");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, std::string_view flag) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_real(part, flag));
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

GridSpec parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("--grid: expected lo:hi:count, got '" + text + "'");
  GridSpec g;
  g.lo = parse_real(parts[0], "--grid");
  g.hi = parse_real(parts[1], "--grid");
  const double count = parse_real(parts[2], "--grid");
  if (count != std::floor(count) || count < 1.0 || count > 1e8) {
    throw UsageError("--grid: count must be a positive integer, got '" + parts[2] + "'");
  }
  g.count = static_cast<int>(count);
  return g;
}

/// --n takes integer block sizes; log n is what the library consumes.
std::vector<double> log_n_from_counts(const std::string& text) {
  std::vector<double> out;
  for (double n : parse_list(text, "--n")) {
    if (n != std::floor(n) || n < 1.0) throw UsageError("--n: block sizes must be positive integers");
    out.push_back(std::log(n));
  }
  return out;
}

/// "--grid -3:6:1000" would read the value as a short option; glue it on.
std::vector<std::string> glue_values(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--grid" && i + 1 < args.size()) {
      out.push_back("--grid=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

struct Flags {
  std::string model;
  std::array<std::string, kParamFlags.size()> params;
  std::string log_n;
  std::string n;
  std::string grid;
  std::string t_grid;
  std::string gamma_mode = "exact";
  std::string format = "csv";
  std::string out;
};

bool given(const CLI::App* sub, std::string_view flag) {
  const CLI::Option* o = sub->get_option_no_throw("--" + std::string(flag));
  return o != nullptr && o->count() > 0;
}

RunConfig to_config(const CLI::App* sub, const Flags& f) {
  RunConfig cfg;
  cfg.command = sub->get_name();
  cfg.model_name = f.model;
  for (std::size_t i = 0; i < kParamFlags.size(); ++i) {
    if (given(sub, kParamFlags[i])) {
      cfg.model_params[std::string(kParamFlags[i])] = parse_real(f.params[i], "--" + std::string(kParamFlags[i]));
    }
  }
  if (given(sub, "log-n")) cfg.log_n_list = parse_list(f.log_n, "--log-n");
  if (given(sub, "n")) cfg.log_n_list = log_n_from_counts(f.n);
  if (given(sub, "grid")) cfg.grid = parse_grid(f.grid);
  if (given(sub, "t-grid")) cfg.t_grid = parse_list(f.t_grid, "--t-grid");
  cfg.gamma_mode = f.gamma_mode == "asymptotic" ? GammaMode::asymptotic : GammaMode::exact;
  cfg.format = cfg.command == "report" || f.format == "json" ? Format::json : Format::csv;
  cfg.output_path = f.out;
  if (cfg.command != "models" && cfg.model_name.empty()) throw UsageError(cfg.command + ": --model is required");
  if (cfg.command == "models" && cfg.model_name.empty() && !cfg.model_params.empty()) {
    throw UsageError("models: parameter flags need --model");
  }
  return cfg;
}

void add_options(CLI::App* sub, Flags& f, bool levels, bool grid, bool t_grid, bool format) {
  sub->add_option("--model", f.model, "catalog model name (see `models`)");
  for (std::size_t i = 0; i < kParamFlags.size(); ++i) {
    sub->add_option("--" + std::string(kParamFlags[i]), f.params[i], "model parameter");
  }
  if (levels) {
    auto* log_n = sub->add_option("--log-n", f.log_n, "comma list of log n (default 10,20,40)");
    auto* n = sub->add_option("--n", f.n, "comma list of integer block sizes n");
    log_n->excludes(n);
  }
  if (grid) {
    sub->add_option("--grid", f.grid, "lo:hi:count (default -3:6:1000)");
    sub->add_option("--gamma-mode", f.gamma_mode, "exact|asymptotic")
        ->check(CLI::IsMember({"exact", "asymptotic"}));
  }
  if (t_grid) sub->add_option("--t-grid", f.t_grid, "comma list of ascending t (default 1e2,...,1e10)");
  if (format) sub->add_option("--format", f.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", f.out, "output file (default standard output)");
}

// ---- shared pieces --------------------------------------------------------

/// Catalog defaults overridden by the given values; alpha replaces theta.
ModelParams effective_params(const CatalogEntry& entry, const ModelParams& given_params) {
  ModelParams p;
  for (const auto& info : entry.params) p[info.name] = info.default_value;
  if (given_params.count("alpha")) p.erase("theta");
  for (const auto& [k, v] : given_params) p[k] = v;
  return p;
}

Json params_json(const ModelParams& p) {
  Json j = Json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

Json meta(const RunConfig& cfg) {
  Json m;
  m["tool"] = kTool;
  m["version"] = PENULT_VERSION;
  m["command"] = cfg.command;
  if (!cfg.model_name.empty()) {
    m["model"] = cfg.model_name;
    m["parameters"] = params_json(effective_params(catalog_entry(cfg.model_name), cfg.model_params));
  }
  m["norming_convention"] = kNormingConvention;
  return m;
}

Json grid_json(const GridSpec& g) { return Json{{"lo", g.lo}, {"hi", g.hi}, {"count", g.count}}; }

Json tolerances_json() {
  const numerics::DiffConfig diff;
  return Json{
      {"derivative",
       {{"tolerance", diff.tolerance},
        {"richardson_levels", diff.richardson_levels},
        {"sweep_richardson_levels", kSweepRichardsonLevels},
        {"step_search", diff.step_search},
        {"max_relative_reach", diff.max_relative_reach}}},
      {"hazard_inverse_rel_tol", kHazardInverseTolerance},
      {"theta_one_tolerance", kThetaOneTolerance},
      {"remainder_denominator_cutoff", kRemainderCutoff},
      {"verdict",
       {{"terminal_magnitude", kTerminalMagnitude},
        {"shrink_factor", kShrinkFactor},
        {"limit_agreement", kLimitAgreement},
        {"max_failed_fraction", kMaxFailedFraction}}},
  };
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---- rows -----------------------------------------------------------------

Json norming_row(const NormingConstants& nc) {
  return Json{{"log_n", nc.log_n}, {"b_exact", nc.b_exact}, {"b_asymptotic", nc.b_asymptotic}, {"a_scale", nc.a_scale}};
}

Json penultimate_row(const PenultimateIndex& p) {
  return Json{{"log_n", p.log_n},
              {"b_exact", p.b_exact},
              {"gamma_exact", p.gamma_exact},
              {"gamma_asymptotic", opt(p.gamma_asymptotic)},
              {"classification", to_string(p.classification)},
              {"rate_ultimate", opt(p.rate_ultimate)},
              {"rate_penultimate", opt(p.rate_penultimate)},
              {"ultimate_rate_exact", p.ultimate_rate_exact},
              {"gamma_prime_exact", p.gamma_prime_exact},
              {"gamma_prime_direct", p.gamma_prime_direct}};
}

Json errors_row(const ErrorComparison& e) {
  return Json{{"log_n", e.log_n},
              {"gamma_mode", to_string(e.gamma_mode)},
              {"gamma_used", e.gamma_used},
              {"sup_error_ultimate", e.sup_error_ultimate},
              {"sup_error_penultimate", e.sup_error_penultimate},
              {"argmax_ultimate", e.argmax_ultimate},
              {"argmax_penultimate", e.argmax_penultimate},
              {"clipped_points", e.clipped.size()},
              {"remainder_max_deviation", opt(e.remainder_max_deviation)}};
}

Json verdict_json(const Verdict& v) {
  return Json{{"kind", to_string(v.kind)}, {"limit", opt(v.limit)}, {"expected", opt(v.expected)}, {"reason", v.reason}};
}

Json sweep_json(const ConditionReport& r) {
  Json conditions = Json::array();
  for (Condition c : kConditions) {
    const auto& seq = r[c];
    conditions.push_back(Json{{"condition", to_string(c)},
                              {"values", seq.values},
                              {"failed", seq.failed},
                              {"degenerate", seq.degenerate},
                              {"verdict", verdict_json(seq.verdict)}});
  }
  return Json{{"t_grid", r.t_grid},
              {"derivative_path", to_string(r.path)},
              {"max_error_estimate", r.max_error_estimate},
              {"low_confidence", r.low_confidence},
              {"conditions", conditions}};
}

// ---- commands -------------------------------------------------------------

std::string cmd_models(const RunConfig& cfg) {
  std::vector<const CatalogEntry*> entries;
  if (cfg.model_name.empty()) {
    for (const auto& e : catalog()) entries.push_back(&e);
  } else {
    entries.push_back(&catalog_entry(cfg.model_name));
  }
  std::string csv = "name,family,theta,theta_rule,theta_is_one,parameters,description\n";
  Json rows = Json::array();
  for (const CatalogEntry* e : entries) {
    const ModelParams given_params = cfg.model_name.empty() ? ModelParams{} : cfg.model_params;
    const WeibullTypeModel m = make_model(e->name, given_params);
    const ModelParams p = effective_params(*e, given_params);
    std::string plist;
    for (const auto& [k, v] : p) plist += (plist.empty() ? "" : ";") + k + "=" + num(v);
    csv += csv_field(e->name) + "," + std::string(to_string(e->family)) + "," + num(m.theta()) + "," +
           csv_field(e->theta_rule) + "," + (m.theta_is_one() ? "true" : "false") + "," + csv_field(plist) + "," +
           csv_field(e->description) + "\n";
    rows.push_back(Json{{"name", e->name},
                        {"family", to_string(e->family)},
                        {"theta", m.theta()},
                        {"theta_rule", e->theta_rule},
                        {"theta_is_one", m.theta_is_one()},
                        {"parameters", params_json(p)},
                        {"description", e->description}});
  }
  if (cfg.format == Format::csv) return csv;
  return dump(Json{{"meta", meta(cfg)}, {"models", rows}});
}

std::string cmd_norming(const RunConfig& cfg, const WeibullTypeModel& m) {
  std::string csv = "log_n,b_exact,b_asymptotic,a_scale\n";
  Json rows = Json::array();
  for (double ell : cfg.log_n_list) {
    const NormingConstants nc = norming(m, ell);
    csv += num(nc.log_n) + "," + num(nc.b_exact) + "," + num(nc.b_asymptotic) + "," + num(nc.a_scale) + "\n";
    rows.push_back(norming_row(nc));
  }
  if (cfg.format == Format::csv) return csv;
  return dump(Json{{"meta", meta(cfg)}, {"rows", rows}});
}

std::string cmd_penultimate(const RunConfig& cfg, const WeibullTypeModel& m) {
  std::string csv = "log_n,gamma_exact,gamma_asymptotic,classification,rate_ultimate,rate_penultimate,gamma_prime_exact\n";
  Json rows = Json::array();
  for (double ell : cfg.log_n_list) {
    const PenultimateIndex p = penultimate_index(m, ell);
    csv += num(p.log_n) + "," + num(p.gamma_exact) + "," + num(p.gamma_asymptotic) + "," +
           std::string(to_string(p.classification)) + "," + num(p.rate_ultimate) + "," + num(p.rate_penultimate) +
           "," + num(p.gamma_prime_exact) + "\n";
    rows.push_back(penultimate_row(p));
  }
  if (cfg.format == Format::csv) return csv;
  return dump(Json{{"meta", meta(cfg)}, {"rows", rows}});
}

std::string cmd_errors(const RunConfig& cfg, const WeibullTypeModel& m) {
  std::string csv =
      "log_n,gamma_mode,gamma_used,sup_error_ultimate,sup_error_penultimate,argmax_ultimate,argmax_penultimate,"
      "clipped_points,remainder_max_deviation\n";
  Json rows = Json::array();
  for (double ell : cfg.log_n_list) {
    const ErrorComparison e = error_comparison(m, ell, cfg.grid, cfg.gamma_mode);
    csv += num(e.log_n) + "," + std::string(to_string(e.gamma_mode)) + "," + num(e.gamma_used) + "," +
           num(e.sup_error_ultimate) + "," + num(e.sup_error_penultimate) + "," + num(e.argmax_ultimate) + "," +
           num(e.argmax_penultimate) + "," + std::to_string(e.clipped.size()) + "," +
           num(e.remainder_max_deviation) + "\n";
    rows.push_back(errors_row(e));
  }
  if (cfg.format == Format::csv) return csv;
  Json mt = meta(cfg);
  mt["grid"] = grid_json(cfg.grid);
  mt["gamma_mode"] = to_string(cfg.gamma_mode);
  return dump(Json{{"meta", mt}, {"rows", rows}});
}

std::string cmd_vonmises(const RunConfig& cfg, const WeibullTypeModel& m) {
  const ConditionReport r = condition_sweep(m, cfg.t_grid);
  if (cfg.format == Format::json) {
    Json doc{{"meta", meta(cfg)}};
    doc.update(sweep_json(r));
    return dump(doc);
  }
  std::string csv = "t";
  for (Condition c : kConditions) csv += "," + std::string(to_string(c));
  csv += "\n";
  for (std::size_t i = 0; i < r.t_grid.size(); ++i) {
    csv += num(r.t_grid[i]);
    for (Condition c : kConditions) csv += "," + num(r[c].values[i]);
    csv += "\n";
  }
  csv += "\ncondition,verdict,limit,expected,reason\n";
  for (Condition c : kConditions) {
    const Verdict& v = r[c].verdict;
    csv += std::string(to_string(c)) + "," + std::string(to_string(v.kind)) + "," + num(v.limit) + "," +
           num(v.expected) + "," + csv_field(v.reason) + "\n";
  }
  return csv;
}

/// Runs one level and stores either its row or its error object.
template <class F>
Json guarded_row(double ell, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    Json row{{"log_n", ell}};
    row.update(error_object(e));
    return row;
  }
}

std::string cmd_report(const RunConfig& cfg, const WeibullTypeModel& m) {
  Json doc;
  doc["meta"] = meta(cfg);
  doc["tolerances"] = tolerances_json();
  doc["config"] = Json{{"log_n", cfg.log_n_list},
                       {"grid", grid_json(cfg.grid)},
                       {"t_grid", cfg.t_grid},
                       {"gamma_mode", to_string(cfg.gamma_mode)}};

  Json norming_rows = Json::array();
  Json exact_rows = Json::array();
  Json error_rows = Json::array();
  for (double ell : cfg.log_n_list) {
    norming_rows.push_back(guarded_row(ell, [&] { return norming_row(norming(m, ell)); }));
    exact_rows.push_back(guarded_row(ell, [&] {
      const PenultimateIndex p = penultimate_index(m, ell);
      return Json{{"log_n", p.log_n},
                  {"b_exact", p.b_exact},
                  {"gamma_exact", p.gamma_exact},
                  {"ultimate_rate_exact", p.ultimate_rate_exact},
                  {"gamma_prime_exact", p.gamma_prime_exact},
                  {"gamma_prime_direct", p.gamma_prime_direct}};
    }));
    error_rows.push_back(guarded_row(ell, [&] { return errors_row(error_comparison(m, ell, cfg.grid, cfg.gamma_mode)); }));
  }

  Json asymptotic;
  if (m.theta_is_one()) {
    try {
      penultimate_asymptotics(m, cfg.log_n_list.front());
    } catch (const Error& e) {
      asymptotic = error_object(e);
    }
  } else {
    asymptotic = Json::array();
    for (double ell : cfg.log_n_list) {
      asymptotic.push_back(guarded_row(ell, [&] {
        const PenultimateAsymptotics a = penultimate_asymptotics(m, ell);
        return Json{{"log_n", ell},
                    {"gamma_asymptotic", a.gamma_asymptotic},
                    {"classification", to_string(a.classification)},
                    {"rate_ultimate", a.rate_ultimate},
                    {"rate_penultimate", a.rate_penultimate}};
      }));
    }
  }

  doc["norming"] = Json{{"rows", norming_rows}};
  doc["penultimate"] = Json{{"exact", exact_rows}, {"asymptotic", asymptotic}};
  doc["errors"] = Json{{"rows", error_rows}};
  try {
    doc["vonmises"] = sweep_json(condition_sweep(m, cfg.t_grid));
  } catch (const Error& e) {
    doc["vonmises"] = error_object(e);
  }
  return dump(doc);
}

std::string dispatch(const RunConfig& cfg) {
  if (cfg.command == "models") return cmd_models(cfg);
  const WeibullTypeModel m = make_model(cfg.model_name, cfg.model_params);
  if (cfg.command == "norming") return cmd_norming(cfg, m);
  if (cfg.command == "penultimate") return cmd_penultimate(cfg, m);
  if (cfg.command == "errors") return cmd_errors(cfg, m);
  if (cfg.command == "vonmises") return cmd_vonmises(cfg, m);
  return cmd_report(cfg, m);
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_model:
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_block_size:
    case ErrorCode::insufficient_grid:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Penultimate extreme value approximations for Weibull-type tails", std::string(kTool)};
  app.set_version_flag("--version", PENULT_VERSION);
  app.require_subcommand(1, 1);
  Flags f;
  add_options(app.add_subcommand("models", "list built-in models"), f, false, false, false, true);
  add_options(app.add_subcommand("norming", "norming constants a_n, b_n"), f, true, false, false, true);
  add_options(app.add_subcommand("penultimate", "penultimate tail index gamma_n"), f, true, false, false, true);
  add_options(app.add_subcommand("errors", "sup distances to the ultimate and penultimate GEV"), f, true, true, false,
              true);
  add_options(app.add_subcommand("vonmises", "von Mises condition sweep"), f, false, false, true, true);
  add_options(app.add_subcommand("report", "all of the above as one JSON document"), f, true, true, true, false);

  RunConfig cfg;
  try {
    std::vector<std::string> argv = glue_values(args);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
    cfg = to_config(app.get_subcommands().front(), f);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << error_object("usage", e.what()).dump() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << error_object("usage", e.what()).dump() << "\n";
    return kExitUsage;
  }

  std::string text;
  try {
    text = dispatch(cfg);
  } catch (const Error& e) {
    err << error_object(e).dump() << "\n";
    return exit_code_for(e.code());
  }

  if (cfg.output_path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(cfg.output_path, std::ios::binary);
  file << text;
  if (!file) {
    err << error_object("usage", "cannot write " + cfg.output_path).dump() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace penult::cli
