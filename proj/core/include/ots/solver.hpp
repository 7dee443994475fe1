#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ots/milp.hpp"

namespace ots {

enum class SolveStatus { Optimal, Infeasible, Unbounded, TimeLimit, Error };

struct BackendResult {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;           // terms only; the model offset is not included
  std::vector<double> values;       // one entry per model variable when Optimal
  double gap = 0.0;                 // relative MIP gap reported by the solver
  std::string message;
};

struct BackendOptions {
  double time_limit_s = 0.0;  // <= 0 means no limit
  double rel_gap = 0.0;       // prove optimality by default
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  virtual BackendResult solve(const milp::ModelIR& model, const BackendOptions& options) = 0;
};

// "scipy": a persistent Python child running scipy's HiGHS-based MILP solver,
// models handed over as JSON files. "auto" picks the first available backend.
// Throws BackendFailure for unknown names or when nothing is available.
std::unique_ptr<SolverBackend> make_backend(const std::string& name = "auto");

// Names make_backend accepts, for diagnostics.
std::vector<std::string> known_backends();

}  // namespace ots
