#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ots/dc_analysis.hpp"
#include "ots/ots_problem.hpp"
#include "ots/ots_solve.hpp"

namespace ots {

struct RunConfig {
  enum class Command { Solve, Enumerate, Security, Verify };
  Command command = Command::Solve;

  std::filesystem::path case_path;
  std::filesystem::path limits_path;  // rating override CSV for .m cases
  std::string backend = "auto";
  int max_open = -1;
  std::vector<int> open_ids;                 // security command
  std::filesystem::path verify_report_path;  // verify command

  std::optional<std::filesystem::path> report_path;  // default: stdout
  std::optional<std::filesystem::path> dot_dir;
  std::optional<std::filesystem::path> lp_path;

  ProblemOptions problem;
  SolveOptions solve;
  EnumerateOptions enumerate;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

// Executes one command: loads the case, runs it, writes the report JSON (to
// report_path or stdout) plus any requested DOT/LP files. Errors print a
// JSON object {"error": {"type", "message"}} to stderr and return kExitError;
// kExitInfeasible means no secure state exists. Verify returns kExitError
// with the discrepancy list on stderr when the report does not check out.
int run(const RunConfig& config);

}  // namespace ots
