#include "ots/run.hpp"

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "ots/dot_report.hpp"
#include "ots/errors.hpp"
#include "ots/grid.hpp"
#include "ots/matpower.hpp"
#include "ots/milp.hpp"
#include "ots/solver.hpp"

namespace ots {

namespace {

using nlohmann::json;

void emit_error(const std::string& type, const std::string& message) {
  json j;
  j["error"] = {{"type", type}, {"message", message}};
  std::cerr << j.dump() << std::endl;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

void write_report(const RunConfig& config, const GridCase& grid, const SecurityReport& report,
                  const OtsSolution* solution) {
  json j = json::parse(report_to_json_string(report));
  if (solution) {
    j["solution"] = {{"openings", solution->state.open_ids()},
                     {"objective_mw", solution->objective_mw},
                     {"gap", solution->gap},
                     {"provenance", solution->provenance}};
  }
  const std::string text = j.dump(2) + "\n";
  if (config.report_path)
    write_text(*config.report_path, text);
  else
    std::cout << text;
  if (config.dot_dir) emit_dot(grid, report, *config.dot_dir);
}

GridCase load_any(const RunConfig& config) {
  if (config.case_path.extension() == ".m") {
    MatpowerOptions mopts;
    mopts.limits_override = config.limits_path;
    return import_matpower(config.case_path, mopts);
  }
  if (!config.limits_path.empty())
    throw ValidationError("--limits applies only to MATPOWER (.m) cases");
  return load_case(config.case_path);
}

// The oracle must judge by the same bounds the optimization model encodes.
AnalysisOptions mirrored_analysis(const RunConfig& config) {
  AnalysisOptions options = config.solve.analysis;
  options.sigma_max = config.problem.sigma_max;
  options.theta_max_rad = config.problem.theta_max_rad;
  return options;
}

int run_solve(const RunConfig& config) {
  GridCase grid = load_any(config);
  ProblemOptions popts = config.problem;
  popts.max_open = config.max_open;
  OtsProblem problem = OtsProblem::build_full(grid, popts);
  if (config.lp_path) write_text(*config.lp_path, milp::serialize_lp(problem.model()));

  auto backend = make_backend(config.backend);
  SolveOptions sopts = config.solve;
  sopts.analysis = mirrored_analysis(config);
  const OtsSolution solution = solve(problem, *backend, sopts);
  const SecurityReport report = security_report(grid, solution.state, sopts.analysis);
  write_report(config, grid, report, &solution);
  return kExitOk;
}

int run_enumerate(const RunConfig& config) {
  GridCase grid = load_any(config);
  if (config.max_open < 0)
    throw ValidationError("enumerate needs --max-open");
  EnumerateOptions eopts = config.enumerate;
  eopts.analysis = mirrored_analysis(config);
  const OtsSolution solution = enumerate(grid, config.max_open, eopts);
  const SecurityReport report = security_report(grid, solution.state, eopts.analysis);
  write_report(config, grid, report, &solution);
  return kExitOk;
}

int run_security(const RunConfig& config) {
  GridCase grid = load_any(config);
  const SwitchingState state = SwitchingState::from_ids(
      static_cast<std::size_t>(grid.num_branches()), config.open_ids);
  const auto problems = validate_switching(grid, state);
  if (!problems.empty()) throw ValidationError(problems.front());
  const SecurityReport report = security_report(grid, state, mirrored_analysis(config));
  write_report(config, grid, report, nullptr);
  return kExitOk;
}

int run_verify(const RunConfig& config) {
  GridCase grid = load_any(config);

  std::ifstream in(config.verify_report_path);
  if (!in) throw IoError("cannot read report " + config.verify_report_path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const SecurityReport report = report_from_json_string(text);

  OtsSolution claimed;
  claimed.state = report.state;
  claimed.objective_mw = report.risk_mw;
  try {
    const json j = json::parse(text);
    if (j.contains("solution")) {
      claimed.objective_mw = j["solution"].value("objective_mw", report.risk_mw);
      claimed.provenance = j["solution"].value("provenance", "");
    }
  } catch (const json::exception&) {
    // the schema part already parsed; a malformed extension block is ignored
  }

  const auto discrepancies = verify(grid, claimed, config.solve.analysis);
  if (discrepancies.empty()) {
    json j;
    j["ok"] = true;
    j["state"] = report.state.open_ids();
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  json j;
  j["ok"] = false;
  j["discrepancies"] = json::array();
  for (const Discrepancy& d : discrepancies)
    j["discrepancies"].push_back({{"code", d.code}, {"message", d.message}});
  std::cerr << j.dump(2) << std::endl;
  return kExitError;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    switch (config.command) {
      case RunConfig::Command::Solve:
        return run_solve(config);
      case RunConfig::Command::Enumerate:
        return run_enumerate(config);
      case RunConfig::Command::Security:
        return run_security(config);
      case RunConfig::Command::Verify:
        return run_verify(config);
    }
    emit_error("internal", "unknown command");
    return kExitError;
  } catch (const InfeasibleProblem& ex) {
    emit_error("infeasible", ex.what());
    return kExitInfeasible;
  } catch (const ParseError& ex) {
    emit_error("parse", ex.what());
    return kExitError;
  } catch (const ValidationError& ex) {
    emit_error("validation", ex.what());
    return kExitError;
  } catch (const InfeasibleBalance& ex) {
    emit_error("balance", ex.what());
    return kExitError;
  } catch (const SingularSystem& ex) {
    emit_error("numerics", ex.what());
    return kExitError;
  } catch (const BackendFailure& ex) {
    emit_error("backend", ex.what());
    return kExitError;
  } catch (const IoError& ex) {
    emit_error("io", ex.what());
    return kExitError;
  } catch (const std::exception& ex) {
    emit_error("internal", ex.what());
    return kExitError;
  }
}

}  // namespace ots
