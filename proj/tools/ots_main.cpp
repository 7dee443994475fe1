#include <cstddef>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ots/run.hpp"

namespace {

// CLI11's vector-of-int parsing rejects `--open ""`, which must mean "open
// nothing"; split by hand and skip empty tokens instead.
bool parse_open_ids(const std::vector<std::string>& args, std::vector<int>* ids,
                    std::string* bad) {
  for (const std::string& arg : args) {
    std::size_t start = 0;
    while (start <= arg.size()) {
      const std::size_t comma = arg.find(',', start);
      const std::size_t len = (comma == std::string::npos) ? arg.size() - start : comma - start;
      const std::string token = arg.substr(start, len);
      if (!token.empty()) {
        std::size_t used = 0;
        int id = 0;
        try {
          id = std::stoi(token, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != token.size()) {
          *bad = token;
          return false;
        }
        ids->push_back(id);
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return true;
}

int cli_error(const std::string& message) {
  nlohmann::json j;
  j["error"] = {{"type", "cli"}, {"message", message}};
  std::cerr << j.dump() << std::endl;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-based preventive transmission switching"};
  app.require_subcommand(1);

  ots::RunConfig config;
  std::string case_path, limits_path, report_path, dot_dir, lp_path, verify_report;
  std::vector<std::string> open_args;

  auto add_common = [&](CLI::App* cmd, bool with_dot) {
    cmd->add_option("case", case_path, "grid case file (JSON, or MATPOWER .m)")->required();
    cmd->add_option("--limits", limits_path, "branch rating override CSV for .m cases");
    cmd->add_option("--report", report_path, "write the report JSON here instead of stdout");
    if (with_dot) cmd->add_option("--dot", dot_dir, "directory for Graphviz panels");
    cmd->add_option("--theta-max", config.problem.theta_max_rad,
                    "angle box half-width in radians");
    cmd->add_option("--sigma-max", config.problem.sigma_max, "generation scaling upper bound");
    cmd->add_option("--overload-tol", config.solve.analysis.overload_tol_mw,
                    "overload tolerance in MW");
  };

  CLI::App* solve = app.add_subcommand("solve", "find the minimum-risk switching state");
  add_common(solve, true);
  solve->add_option("--backend", config.backend, "MILP backend name")
      ->envname("OTS_BACKEND");
  solve->add_option("--max-open", config.max_open, "cap on the number of openings");
  solve->add_option("--lp", lp_path, "dump the model in LP format");
  solve->add_option("--time-limit", config.solve.backend.time_limit_s,
                    "solver time limit in seconds");
  solve->add_option("--rel-gap", config.solve.backend.rel_gap, "relative MIP gap target");

  CLI::App* enumerate = app.add_subcommand("enumerate", "exhaustively score switching states");
  add_common(enumerate, true);
  enumerate->add_option("--max-open", config.max_open, "cap on the number of openings")
      ->required();
  enumerate->add_option("--threads", config.enumerate.threads, "worker threads (0 = all cores)");

  CLI::App* security = app.add_subcommand("security", "analyze one switching state");
  add_common(security, true);
  security->add_option("--open", open_args,
                       "comma-separated branch ids to open preventively (\"\" for none)");

  CLI::App* verify = app.add_subcommand("verify", "recheck a report against the oracle");
  verify->add_option("case", case_path, "grid case file (JSON, or MATPOWER .m)")->required();
  verify->add_option("--limits", limits_path, "branch rating override CSV for .m cases");
  verify->add_option("report", verify_report, "report JSON produced by solve/enumerate/security")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return cli_error(e.what());
  }

  std::string bad;
  if (!parse_open_ids(open_args, &config.open_ids, &bad))
    return cli_error("--open: '" + bad + "' is not a branch id");

  if (solve->parsed()) config.command = ots::RunConfig::Command::Solve;
  if (enumerate->parsed()) config.command = ots::RunConfig::Command::Enumerate;
  if (security->parsed()) config.command = ots::RunConfig::Command::Security;
  if (verify->parsed()) config.command = ots::RunConfig::Command::Verify;

  config.case_path = case_path;
  config.limits_path = limits_path;
  if (!report_path.empty()) config.report_path = report_path;
  if (!dot_dir.empty()) config.dot_dir = dot_dir;
  if (!lp_path.empty()) config.lp_path = lp_path;
  config.verify_report_path = verify_report;

  return ots::run(config);
}
