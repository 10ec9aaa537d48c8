#include <catch_amalgamated.hpp>

#include "elcomp/report.hpp"
#include "support.hpp"

using namespace elcomp;

namespace {

CommandArgs args_for(const std::string& file) {
  CommandArgs a;
  a.problem = std::string(ELCOMP_PROBLEMS_DIR) + "/" + file;
  return a;
}

}  // namespace

TEST_CASE("certify report schema", "[report]") {
  const auto r = run_command("certify", args_for("coop_pair.prob"));
  CHECK(r.exit_code == exit_ok);
  const Json& j = r.report;
  for (const char* key : {"command", "conditions", "cw", "eigen", "errors", "gauge", "input_digest", "lambda",
                          "margins", "mode", "notes", "oracle", "problem", "settings", "structure", "theorem",
                          "timings", "tool_version", "verdict"}) {
    INFO(key);
    CHECK(j.contains(key));
  }
  CHECK(j["verdict"] == "HoldsThm1");
  CHECK(j["theorem"] == 1);
  CHECK(j["command"] == "certify");
  CHECK(j["tool_version"] == tool_version());
  CHECK(j["errors"].empty());
  CHECK(j["oracle"]["inverse_positive"] == true);
  CHECK(j["lambda"].get<double>() > 0);
  CHECK(j["input_digest"].get<std::string>().size() == 16);
  CHECK(j["timings"].contains("total_ms"));
  CHECK(r.text.find("HoldsThm1") != std::string::npos);
}

TEST_CASE("reports are deterministic apart from timings", "[report][property]") {
  for (const char* file : {"lap1d.prob", "competitive_pair.prob", "predator_prey.prob", "thm6_failure.prob"}) {
    INFO(file);
    const auto a = run_command("certify", args_for(file));
    const auto b = run_command("certify", args_for(file));
    CHECK(canonical_dump(a.report) == canonical_dump(b.report));
    CHECK(canonical_dump(a.report).find("total_ms") == std::string::npos);
    CHECK(a.report.contains("timings"));
  }
}

TEST_CASE("competitive example report", "[report]") {
  const auto r = run_command("certify", args_for("competitive_pair.prob"));
  const Json& j = r.report;
  CHECK(j["verdict"] == "HoldsThm4");
  CHECK(j["gauge"]["sigma"] == Json::array({1, -1}));
  CHECK(j["gauged_oracle"]["inverse_positive"] == true);
  CHECK(j["oracle"]["inverse_positive"] == false);
  CHECK(std::abs(j["margins"]["column_sum"].get<double>() - 2.5) <= 0.05);
  CHECK(std::abs(j["margins"]["diagonal"].get<double>() - 2.0) <= 0.04);
}

TEST_CASE("exit codes", "[report]") {
  const auto missing = run_command("certify", args_for("no_such_file.prob"));
  CHECK(missing.exit_code == exit_input);
  REQUIRE(missing.report["errors"].size() == 1);
  CHECK(missing.report["errors"][0].get<std::string>().rfind("IoError", 0) == 0);
  CHECK(missing.report["verdict"].is_null());

  auto small = args_for("lap1d.prob");
  small.certify.oracle_max_dof = 10;
  CHECK(run_command("oracle", small).exit_code == exit_numerical);

  // Species 1 does not feed back: the cooperative part is reducible.
  CHECK(run_command("eigen", args_for("thm6_failure.prob")).exit_code == exit_structure);

  CHECK(run_command("certify", args_for("quasi_demo.prob")).exit_code == exit_input);

  auto pair = args_for("quasi_demo.prob");
  pair.sub = std::string(ELCOMP_PROBLEMS_DIR) + "/quasi_demo.sub";
  pair.super = std::string(ELCOMP_PROBLEMS_DIR) + "/quasi_demo.super";
  const auto q = run_command("certify", pair);
  CHECK(q.exit_code == exit_ok);
  CHECK(q.report["verdict"] == "HoldsThm8");

  CHECK(exit_code_for(ErrorCode::parse) == 2);
  CHECK(exit_code_for(ErrorCode::non_elliptic_linearization) == 2);
  CHECK(exit_code_for(ErrorCode::singular_matrix) == 3);
  CHECK(exit_code_for(ErrorCode::infeasible_epsilon) == 3);
  CHECK(exit_code_for(ErrorCode::not_z_matrix) == 4);
  CHECK(exit_code_for(ErrorCode::structure_unsupported) == 4);
}

TEST_CASE("failure report carries the counterexample", "[report]") {
  const auto r = run_command("certify", args_for("thm6_failure.prob"));
  CHECK(r.exit_code == exit_ok);
  CHECK(r.report["verdict"] == "FailsThm6");
  CHECK(r.report["oracle"]["inverse_positive"] == false);

  const auto c = run_command("counterexample", args_for("thm6_failure.prob"));
  CHECK(c.exit_code == exit_ok);
  CHECK(c.report.dump().find("verified") != std::string::npos);
}

TEST_CASE("other commands run", "[report]") {
  for (const char* cmd : {"eigen", "oracle", "solve", "gauge"}) {
    INFO(cmd);
    auto a = args_for("coop_pair.prob");
    a.builtin = std::string(cmd) == "solve";
    const auto r = run_command(cmd, a);
    CHECK(r.exit_code == exit_ok);
    CHECK(r.report["command"] == cmd);
    CHECK(r.report["errors"].empty());
  }
  // solve needs a right-hand side source.
  CHECK(run_command("solve", args_for("coop_pair.prob")).exit_code == exit_input);

  auto comp = args_for("lap1d.prob");
  comp.component = 1;
  const auto e = run_command("eigen", comp);
  CHECK(e.report["lambda"].get<double>() == Catch::Approx(test::discrete_dirichlet(1.0, 128)).epsilon(1e-8));
}
