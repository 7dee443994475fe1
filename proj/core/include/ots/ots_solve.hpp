#pragma once

#include <map>
#include <string>
#include <vector>

#include "ots/dc_analysis.hpp"
#include "ots/grid.hpp"
#include "ots/ots_problem.hpp"
#include "ots/solver.hpp"

namespace ots {

struct OtsSolution {
  SwitchingState state;
  double objective_mw = 0.0;  // expected unserved load of the state
  double gap = 0.0;
  std::string provenance;     // backend name or "enumerate"
  std::map<std::string, double> assignment;  // full variable assignment if solved
};

struct SolveOptions {
  BackendOptions backend;
  double integrality_tol = 1e-6;
  AnalysisOptions analysis;  // used for the post-solve verification
};

// Solves the MILP and decodes the optimal switching state. Binaries are
// rounded within integrality_tol (further off is a BackendFailure). The
// objective is re-evaluated on the rounded assignment and the solution is
// checked with verify() before returning. Throws InfeasibleProblem when no
// state is secure.
OtsSolution solve(const OtsProblem& problem, SolverBackend& backend,
                  const SolveOptions& options = {});

struct EnumerateOptions {
  AnalysisOptions analysis;
  int threads = 0;  // 0 = hardware concurrency
};

// Exhaustively scores every switching state with at most max_open openings
// against the same security rules the MILP encodes (zero overloads, sigma and
// angle-spread bounds). Deterministic: ties break toward fewer openings, then
// the lexicographically smallest open-id list. Throws InfeasibleProblem when
// no candidate passes.
OtsSolution enumerate(const GridCase& grid, int max_open, const EnumerateOptions& options = {});

// True when the state passes every security rule the MILP enforces; used by
// enumerate and exposed for tests. Fills `why` when given and insecure.
bool state_secure(const GridCase& grid, const SwitchingState& state,
                  const AnalysisOptions& options, std::string* why = nullptr);

struct Discrepancy {
  std::string code;     // "state", "connectivity", "overload", "risk", "energization"
  std::string message;
};

// Re-derives the security report for the solution's state and cross-checks:
// the state is admissible, nothing overloads in base or contingency
// topologies, the claimed objective matches the oracle risk within
// 1e-6 * max(1, risk), and any pi values in the assignment equal the oracle
// energization indicators. Empty result = verified.
std::vector<Discrepancy> verify(const GridCase& grid, const OtsSolution& solution,
                                const AnalysisOptions& options = {});

}  // namespace ots
