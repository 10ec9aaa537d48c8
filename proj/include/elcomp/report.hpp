#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "elcomp/certify.hpp"
#include "elcomp/error.hpp"
#include "elcomp/oracle.hpp"
#include "elcomp/spectral.hpp"

namespace elcomp {

using Json = nlohmann::json;

/// Exit status of a command.
enum ExitCode : int { exit_ok = 0, exit_input = 2, exit_numerical = 3, exit_structure = 4 };

int exit_code_for(ErrorCode code);

struct CommandArgs {
  std::string problem;
  CertifyOptions certify;
  std::uint64_t seed = 0;
  std::optional<std::size_t> component;  // 1-based
  bool cooperative = false;
  bool gauge = false;
  std::optional<std::size_t> probe;
  std::optional<std::string> rhs_file;
  bool builtin = false;
  std::optional<std::string> out;
  std::optional<std::string> sub;
  std::optional<std::string> super;
};

struct CommandResult {
  int exit_code = exit_ok;
  /// Sorted-key report; "timings" is the only run-dependent member.
  Json report;
  std::string text;
};

/// Runs one of: certify, eigen, oracle, solve, counterexample, gauge,
/// linearize, thm8. Library errors are caught and mapped to exit codes; the
/// report then carries them under "errors".
CommandResult run_command(const std::string& command, const CommandArgs& args);

Json to_json(const Verdict& v, const Grid& grid);
Json to_json(const OracleReport& r);
Json to_json(const GaugeResult& g);
Json to_json(const EigenSummary& e);
Json to_json(const StructureClass& s);

/// Human-readable summary of a verdict.
std::string describe(const Verdict& v);

/// The report without its "timings" member, serialized; equal for repeated runs.
std::string canonical_dump(const Json& report);

std::string tool_version();

}  // namespace elcomp
