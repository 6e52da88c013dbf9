#include <doctest.h>

#include <chrono>
#include <string>

#include "solitonjet/error.hpp"
#include "solitonjet/scenario.hpp"

using namespace solitonjet;

namespace {

ErrorKind kind_of(std::string_view text) {
  try {
    run_suite(parse_scenario_text(text));
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

std::string message_of(std::string_view text) {
  try {
    run_suite(parse_scenario_text(text));
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("every built-in scenario in `all` passes within its time budget") {
  for (const BuiltinScenario& b : builtin_scenarios()) {
    if (!b.in_all) continue;
    CAPTURE(b.name);
    const auto start = std::chrono::steady_clock::now();
    const ResidualReport r = run_suite(builtin_scenario(b.name));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CAPTURE(report_to_text(r));
    CHECK(r.pass);
    CHECK(!r.entries.empty());
    CHECK(seconds < 2.0);
  }
}

TEST_CASE("negative-control-lambda fails on AKNS_LAX_X") {
  const ResidualReport r = run_suite(builtin_scenario("negative-control-lambda"));
  CHECK_FALSE(r.pass);
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].equation == "AKNS_LAX_X");
  CHECK(r.entries[0].max_relative_residual >= 1e-3);
}

TEST_CASE("scenario structure is validated before anything runs") {
  CHECK_THROWS_AS(parse_scenario_text("{"), Error);
  CHECK_THROWS_AS(parse_scenario_text(R"j({"family": "akns"})j"), Error);
  CHECK_THROWS_AS(parse_scenario_text(R"j({"name": "x", "colour": 1})j"), Error);
  CHECK_THROWS_AS(parse_scenario_text(R"j({"name": "x", "family": "kdv"})j"), Error);
  CHECK_THROWS_AS(parse_scenario_text(R"j({"name": "x", "tolerance": -1})j"), Error);
  // Forward reference to a stage defined later.
  CHECK_THROWS_AS(parse_scenario_text(R"j({"name": "x", "chain": [
      {"op": "iterate", "as": "one", "solution": "seed", "manifold": "e1.phi"},
      {"op": "seed", "as": "seed"}]})j"),
                  Error);
  CHECK_THROWS_AS(parse_scenario_text(R"j({"name": "x", "chain": [
      {"op": "seed", "as": "s"}, {"op": "seed", "as": "s"}]})j"),
                  Error);
  CHECK_THROWS_AS(parse_scenario_text(R"j({"name": "x", "chain": [{"op": "teleport", "as": "s"}]})j"), Error);
  CHECK_THROWS_AS(parse_scenario_text(R"j({"name": "x", "equations": [{"equation": "NOPE"}]})j"), Error);
  CHECK_THROWS_AS(parse_scenario_text(R"j({"name": "x", "chain": [{"op": "seed", "as": "s"}],
      "equations": [{"equation": "AKNS_PDE", "bind": {"M": "t.M"}}]})j"),
                  Error);
  CHECK_THROWS_AS(builtin_scenario("no-such-scenario"), Error);
  CHECK_THROWS_AS(load_scenario_file("/nonexistent/scenario.json"), Error);
}

TEST_CASE("construction errors keep their kind and name the stage") {
  const char* zero_k = R"j({"name": "x", "family": "akns", "seed": 0.5, "modes": [{"k": 0}],
      "chain": [{"op": "seed", "as": "seed"}, {"op": "eigen", "as": "bad", "mode": 0}]})j";
  CHECK(kind_of(zero_k) == ErrorKind::InvalidMode);
  CHECK(message_of(zero_k).find("stage 2 'bad' (eigen)") != std::string::npos);

  const char* same = R"j({"name": "x", "family": "akns", "seed": 0.5, "modes": [{"k": 1}],
      "chain": [{"op": "seed", "as": "seed"}, {"op": "eigen", "as": "e1"}, {"op": "eigen", "as": "e2"},
                {"op": "darboux", "as": "d", "potential": "seed.M", "first": "e1", "second": "e2"}]})j";
  CHECK(kind_of(same) == ErrorKind::DegeneratePair);

  // An eigenfunction of the wrong potential is rejected by the pair validation.
  const char* wrong = R"j({"name": "x", "family": "akns", "seed": 0.5, "modes": [{"k": 1}, {"k": 2}],
      "chain": [{"op": "seed", "as": "seed"}, {"op": "eigen", "as": "e1", "mode": 0},
                {"op": "eigen", "as": "e2", "mode": 1}, {"op": "soliton", "as": "one", "modes": [0]},
                {"op": "darboux", "as": "d", "potential": "one.M", "first": "e1", "second": "e2"}]})j";
  CHECK(kind_of(wrong) == ErrorKind::NotEigenfunction);

  const char* missing = R"j({"name": "x", "chain": [{"op": "seed", "as": "s"}],
      "equations": [{"equation": "AKNS_LAX_X", "bind": {"M": "s.M"}}]})j";
  CHECK(kind_of(missing) == ErrorKind::MissingBinding);
  CHECK(message_of(missing).find("equation 1") != std::string::npos);
}

TEST_CASE("expectations, expr stages and random sampling") {
  const ResidualReport r = run_suite(parse_scenario_text(R"j({"name": "x", "family": "akns",
      "chain": [{"op": "expr", "as": "f", "expr": "x^2*y"}, {"op": "expr", "as": "g", "expr": "exp(x)*exp(y)"},
                {"op": "expr", "as": "h", "expr": "exp(x + y)"}],
      "equations": [
        {"equation": "AKNS_PDE", "bind": {"M": "f.value"}, "expect": "nonzero", "tolerance": 1e-2},
        {"equation": "AKNS_PDE", "bind": {"M": "f.value"}, "expect": "info"},
        {"equation": "FIELD_EQUAL", "bind": {"lhs": "g.value", "rhs": "h.value"}, "sample": {"random": 30},
         "tolerance": 1e-14}]})j"));
  CHECK(r.pass);
  REQUIRE(r.entries.size() == 3);
  CHECK(r.entries[2].points_evaluated == 30);
  const auto j = report_to_json(r);
  CHECK(j["entries"][0]["expect"] == "nonzero");
  CHECK(j["entries"][1]["pass"] == true);
}

TEST_CASE("report JSON is byte-identical across runs and thread counts") {
  const Scenario s = builtin_scenario("akns-two-soliton");
  const std::string one = report_to_json(run_suite(s, {kDefaultPoleGuard, 1})).dump(2);
  const std::string many = report_to_json(run_suite(s, {kDefaultPoleGuard, 4})).dump(2);
  CHECK(one == many);
  CHECK(one == report_to_json(run_suite(s)).dump(2));
}
