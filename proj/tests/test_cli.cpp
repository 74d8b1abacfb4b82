#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "penult/catalog.hpp"
#include "penult/cli.hpp"
#include "penult/penultimate.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = penult::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string c; std::getline(in, c, ',');) v.push_back(c);
  if (!line.empty() && line.back() == ',') v.emplace_back();
  return v;
}

/// Header row to cell map for a one-row CSV table.
std::map<std::string, std::string> single_row(const std::string& text) {
  const auto ls = lines(text);
  REQUIRE(ls.size() == 2);
  const auto head = cells(ls[0]);
  const auto row = cells(ls[1]);
  REQUIRE(head.size() == row.size());
  std::map<std::string, std::string> m;
  for (std::size_t i = 0; i < head.size(); ++i) m[head[i]] = row[i];
  return m;
}

json error_of(const Result& r) { return json::parse(r.err).at("error"); }

}  // namespace

TEST_CASE("penultimate row for theta = 2 at log n = 25") {
  const auto r = run({"penultimate", "--model", "pure-weibull", "--theta", "2", "--log-n", "25"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[0] ==
        "log_n,gamma_exact,gamma_asymptotic,classification,rate_ultimate,rate_penultimate,gamma_prime_exact");
  const auto row = single_row(r.out);
  CHECK(std::stod(row.at("gamma_asymptotic")) == doctest::Approx(0.04).epsilon(1e-15));
  CHECK(row.at("classification") == "frechet");
}

TEST_CASE("normal errors favour the penultimate approximation") {
  const auto r = run({"errors", "--model", "normal", "--log-n", "6.9078", "--grid", "-3:6:1000"});
  REQUIRE(r.code == 0);
  const auto row = single_row(r.out);
  CHECK(std::stod(row.at("sup_error_penultimate")) < std::stod(row.at("sup_error_ultimate")));
  CHECK(row.at("gamma_mode") == "exact");
}

TEST_CASE("vonmises gomes84 limit for theta = 1/2") {
  const auto r = run({"vonmises", "--model", "pure-weibull", "--theta", "0.5", "--t-grid", "1e2,1e4,1e6,1e8,1e10",
                      "--format", "json"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  const json& g = doc.at("conditions").at(4);
  CHECK(g.at("condition") == "gomes84");
  CHECK(g.at("verdict").at("kind") == "confirmed_limit");
  CHECK(g.at("verdict").at("limit").get<double>() == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("vonmises csv has a value table and a verdict table") {
  const auto r = run({"vonmises", "--model", "pure-weibull", "--theta", "2"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 13);
  CHECK(ls[0] == "t,first_order,second_order,penultimate,anderson,gomes84");
  CHECK(ls[6].empty());
  CHECK(ls[7] == "condition,verdict,limit,expected,reason");
  CHECK(ls[12].rfind("gomes84,confirmed_limit,", 0) == 0);
}

TEST_CASE("models listing") {
  const auto r = run({"models"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  CHECK(ls[0] == "name,family,theta,theta_rule,theta_is_one,parameters,description");
  CHECK(ls.size() == penult::catalog().size() + 1);
  bool normal = false, exponential = false;
  for (const auto& l : ls) {
    if (l.rfind("normal,classical,0.5,", 0) == 0) normal = true;
    if (l.rfind("exponential,classical,1,1,true,", 0) == 0) exponential = true;
  }
  CHECK(normal);
  CHECK(exponential);
  // the gamma description contains a comma and must be quoted
  CHECK(r.out.find("\"Gamma(shape, 1)\"") != std::string::npos);

  const auto w = run({"models", "--model", "pure-weibull", "--alpha", "4"});
  REQUIRE(w.code == 0);
  const auto row = single_row(w.out);
  CHECK(row.at("theta") == "0.25");
  CHECK(row.at("parameters") == "alpha=4;lambda=1");
}

TEST_CASE("report sections") {
  SUBCASE("pure Weibull theta = 2 confirms every condition") {
    const auto r = run({"report", "--model", "pure-weibull", "--theta", "2"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    for (const char* s : {"meta", "tolerances", "config", "norming", "penultimate", "errors", "vonmises"}) {
      CHECK(doc.contains(s));
    }
    for (const auto& c : doc.at("vonmises").at("conditions")) {
      CHECK(c.at("verdict").at("kind") != "not_confirmed");
    }
    CHECK(doc.at("penultimate").at("asymptotic").is_array());
  }
  SUBCASE("exponential reports the theta = 1 exclusion") {
    const auto r = run({"report", "--model", "exponential"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("penultimate").at("asymptotic").at("error").at("code") == "theta_one_excluded");
    CHECK(doc.at("penultimate").at("exact").size() == 3);
    CHECK(doc.at("penultimate").at("exact").at(0).contains("gamma_exact"));
  }
  SUBCASE("exact Gumbel has vanishing sup errors") {
    const auto r = run({"report", "--model", "gumbel-fixture"});
    REQUIRE(r.code == 0);
    for (const auto& row : json::parse(r.out).at("errors").at("rows")) {
      CHECK(row.at("sup_error_ultimate").get<double>() <= 1e-14);
      CHECK(row.at("sup_error_penultimate").get<double>() <= 1e-14);
    }
  }
  SUBCASE("failing levels are reported per row") {
    const auto r = run({"report", "--model", "weibull-log-power", "--theta", "0.5", "--sv-power", "2", "--log-n",
                        "5,20"});
    REQUIRE(r.code == 0);
    const json rows = json::parse(r.out).at("norming").at("rows");
    CHECK(rows.at(0).at("error").at("code") == "below_range");
    CHECK(rows.at(1).contains("b_exact"));
  }
}

TEST_CASE("exit codes") {
  SUBCASE("unknown model") {
    const auto r = run({"norming", "--model", "cauchy"});
    CHECK(r.code == penult::cli::kExitUsage);
    CHECK(error_of(r).at("code") == "unknown_model");
    CHECK(r.out.empty());
  }
  SUBCASE("parameter the model does not take") {
    const auto r = run({"norming", "--model", "normal", "--theta", "2"});
    CHECK(r.code == penult::cli::kExitUsage);
    CHECK(error_of(r).at("code") == "invalid_argument");
  }
  SUBCASE("malformed flags") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{}, {"norming"}, {"norming", "--model", "normal", "--log-n", "ten"},
          {"errors", "--model", "normal", "--grid", "-3:6"}, {"norming", "--model", "normal", "--n", "1.5"},
          {"errors", "--model", "normal", "--gamma-mode", "fast"}, {"norming", "--model", "normal", "--format", "xml"},
          {"frobnicate"}}) {
      const auto r = run(args);
      CHECK(r.code == penult::cli::kExitUsage);
      CHECK(error_of(r).at("code") == "usage");
    }
  }
  SUBCASE("numeric failures carry their codes") {
    const auto asym = run({"errors", "--model", "exponential", "--gamma-mode", "asymptotic"});
    CHECK(asym.code == penult::cli::kExitNumeric);
    CHECK(error_of(asym).at("code") == "theta_one_excluded");
    const auto range = run({"norming", "--model", "weibull-log-power", "--theta", "0.5", "--sv-power", "2",
                            "--log-n", "1"});
    CHECK(range.code == penult::cli::kExitNumeric);
    CHECK(error_of(range).at("code") == "below_range");
  }
  SUBCASE("help") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("penultimate") != std::string::npos);
  }
}

TEST_CASE("output is deterministic and round-trips") {
  const std::vector<std::string> args = {"penultimate", "--model", "normal", "--format", "csv"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  const auto model = penult::make_model("normal");
  const auto ls = lines(a.out);
  REQUIRE(ls.size() == 4);
  CHECK(std::stod(cells(ls[1])[1]) == penult::penultimate_index(model, 10.0).gamma_exact);
}

TEST_CASE("--n converts block sizes to log n") {
  const auto r = run({"norming", "--model", "normal", "--n", "1000"});
  REQUIRE(r.code == 0);
  CHECK(std::stod(single_row(r.out).at("log_n")) == std::log(1000.0));
}

TEST_CASE("--out writes the table to a file") {
  const std::string path = "test_cli_out.csv";
  const auto r = run({"norming", "--model", "normal", "--log-n", "10", "--out", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == run({"norming", "--model", "normal", "--log-n", "10"}).out);
  std::remove(path.c_str());
}
