#include "ots/ots_solve.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ots/errors.hpp"

namespace ots {

namespace {

constexpr double kBoundSlack = 1e-9;

double angle_spread(const std::vector<double>& angles, const EnergizedSet* energized) {
  double lo = 0.0, hi = 0.0;
  bool seen = false;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (energized && !energized->energized[i]) continue;
    if (!seen) {
      lo = hi = angles[i];
      seen = true;
    } else {
      lo = std::min(lo, angles[i]);
      hi = std::max(hi, angles[i]);
    }
  }
  return seen ? hi - lo : 0.0;
}

// One security evaluation, shared by enumerate() and state_secure() so the
// exhaustive oracle and the MILP agree on what "secure" means: connected base,
// no overloads anywhere, balanceable islands, sigma within its bound, and
// angle spreads fitting the +-theta_max box. A contingency may de-energize
// any subset of buses, the stranded load is simply charged to the risk.
bool evaluate_state(const GridCase& grid, std::span<const std::uint8_t> mask, int source,
                    const AnalysisOptions& options, double* risk, std::string* why) {
  auto fail = [&](std::string reason) {
    if (why) *why = std::move(reason);
    return false;
  };

  const EnergizedSet base_set = energized_set(grid, mask, source);
  if (!base_set.all()) return fail("openings disconnect the base topology");

  const int nb = grid.num_buses();
  std::vector<double> injections(static_cast<std::size_t>(nb));
  for (const Bus& bus : grid.buses())
    injections[static_cast<std::size_t>(bus.id)] = bus.gen_mw - bus.load_mw;

  const DcFlowResult base_flow = dc_flow(grid, mask, injections, source);
  for (const Branch& br : grid.branches()) {
    if (mask[static_cast<std::size_t>(br.id)]) continue;
    if (std::abs(base_flow.flows_mw[static_cast<std::size_t>(br.id)]) >
        br.limit_mw + options.overload_tol_mw)
      return fail("base topology overloads branch " + std::to_string(br.id));
  }
  if (angle_spread(base_flow.angles_rad, nullptr) >
      2.0 * options.theta_max_rad + kBoundSlack)
    return fail("base angle spread exceeds the +-theta_max box");

  double total_risk = 0.0;
  std::vector<std::uint8_t> cmask(mask.begin(), mask.end());
  for (int c : grid.contingencies()) {
    const std::uint8_t before = cmask[static_cast<std::size_t>(c)];
    cmask[static_cast<std::size_t>(c)] = 1;
    const EnergizedSet energized = energized_set(grid, cmask, source);
    Rebalance balance;
    try {
      balance = rebalance(grid, energized);
    } catch (const InfeasibleBalance& ex) {
      return fail("contingency " + std::to_string(c) + ": " + ex.what());
    }
    if (balance.sigma > options.sigma_max + kBoundSlack)
      return fail("contingency " + std::to_string(c) + " needs sigma " +
                  std::to_string(balance.sigma) + " above the bound");
    for (int i = 0; i < nb; ++i)
      injections[static_cast<std::size_t>(i)] =
          balance.gen_mw[static_cast<std::size_t>(i)] - balance.load_mw[static_cast<std::size_t>(i)];
    const DcFlowResult flow = dc_flow(grid, cmask, injections, source);
    for (const Branch& br : grid.branches()) {
      if (cmask[static_cast<std::size_t>(br.id)]) continue;
      if (std::abs(flow.flows_mw[static_cast<std::size_t>(br.id)]) >
          br.limit_mw + options.overload_tol_mw)
        return fail("contingency " + std::to_string(c) + " overloads branch " +
                    std::to_string(br.id));
    }
    if (angle_spread(flow.angles_rad, &energized) > 2.0 * options.theta_max_rad + kBoundSlack)
      return fail("contingency " + std::to_string(c) + " angle spread exceeds the box");

    double lost = 0.0;
    for (const Bus& bus : grid.buses())
      if (!energized.is_energized(bus.id)) lost += bus.load_mw;
    total_risk += grid.probability(c) * lost;
    cmask[static_cast<std::size_t>(c)] = before;
  }
  if (risk) *risk = total_risk;
  return true;
}

}  // namespace

bool state_secure(const GridCase& grid, const SwitchingState& state,
                  const AnalysisOptions& options, std::string* why) {
  if (state.open.size() != static_cast<std::size_t>(grid.num_branches())) {
    if (why) *why = "state covers a different branch count than the grid";
    return false;
  }
  return evaluate_state(grid, state.open, resolve_source(grid), options, nullptr, why);
}

OtsSolution enumerate(const GridCase& grid, int max_open, const EnumerateOptions& options) {
  if (max_open < 0) throw ValidationError("max_open must be non-negative");
  const int ne = grid.num_branches();
  const int source = resolve_source(grid);

  // Candidates in tie-break order: fewer openings first, then lexicographic.
  std::vector<std::vector<int>> candidates;
  std::vector<int> combo;
  auto descend = [&](auto&& self, int next, int remaining) -> void {
    if (remaining == 0) {
      candidates.push_back(combo);
      return;
    }
    for (int e = next; e <= ne - remaining; ++e) {
      combo.push_back(e);
      self(self, e + 1, remaining - 1);
      combo.pop_back();
    }
  };
  for (int k = 0; k <= std::min(max_open, ne); ++k) descend(descend, 0, k);

  struct Best {
    double risk = 0.0;
    std::size_t index = 0;
    bool found = false;
  };
  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t num_threads = std::max<std::size_t>(
      1, options.threads > 0 ? static_cast<std::size_t>(options.threads)
                             : std::min<std::size_t>(hw ? hw : 1, candidates.size()));
  std::vector<Best> bests(num_threads);
  std::vector<std::thread> workers;
  const std::size_t chunk = (candidates.size() + num_threads - 1) / num_threads;
  for (std::size_t t = 0; t < num_threads; ++t) {
    workers.emplace_back([&, t]() {
      std::vector<std::uint8_t> mask(static_cast<std::size_t>(ne));
      Best local;
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(candidates.size(), begin + chunk);
      for (std::size_t idx = begin; idx < end; ++idx) {
        std::fill(mask.begin(), mask.end(), std::uint8_t{0});
        for (int e : candidates[idx]) mask[static_cast<std::size_t>(e)] = 1;
        double risk = 0.0;
        if (!evaluate_state(grid, mask, source, options.analysis, &risk, nullptr)) continue;
        if (!local.found || risk < local.risk || (risk == local.risk && idx < local.index)) {
          local = {risk, idx, true};
        }
      }
      bests[t] = local;
    });
  }
  for (auto& worker : workers) worker.join();

  Best best;
  for (const Best& candidate : bests) {
    if (!candidate.found) continue;
    if (!best.found || candidate.risk < best.risk ||
        (candidate.risk == best.risk && candidate.index < best.index))
      best = candidate;
  }
  if (!best.found)
    throw InfeasibleProblem("no switching state with at most " + std::to_string(max_open) +
                            " openings passes the security rules");

  OtsSolution solution;
  solution.state = SwitchingState::from_ids(static_cast<std::size_t>(ne),
                                            candidates[best.index]);
  solution.objective_mw = best.risk;
  solution.provenance = "enumerate";
  return solution;
}

OtsSolution solve(const OtsProblem& problem, SolverBackend& backend,
                  const SolveOptions& options) {
  const BackendResult result = backend.solve(problem.model(), options.backend);
  switch (result.status) {
    case SolveStatus::Optimal:
      break;
    case SolveStatus::Infeasible:
      throw InfeasibleProblem("no switching state satisfies all security constraints" +
                              (problem.options().max_open >= 0
                                   ? " with at most " + std::to_string(problem.options().max_open) +
                                         " openings"
                                   : ""));
    case SolveStatus::Unbounded:
      throw BackendFailure("solver reports an unbounded model; the encoding is defective");
    case SolveStatus::TimeLimit:
      throw BackendFailure("solver hit its time limit before proving optimality");
    case SolveStatus::Error:
      throw BackendFailure("solver failed: " + result.message);
  }

  const milp::ModelIR& model = problem.model();
  std::vector<double> values = result.values;
  if (values.size() != static_cast<std::size_t>(model.num_vars()))
    throw BackendFailure("solver returned no assignment despite optimal status");
  for (int i = 0; i < model.num_vars(); ++i) {
    const auto& info = model.var(milp::VarRef{i});
    if (info.kind != milp::VarKind::Binary) continue;
    const double rounded = std::round(values[static_cast<std::size_t>(i)]);
    if (std::abs(values[static_cast<std::size_t>(i)] - rounded) > options.integrality_tol)
      throw BackendFailure("binary variable " + info.name + " came back at " +
                           std::to_string(values[static_cast<std::size_t>(i)]));
    values[static_cast<std::size_t>(i)] = rounded;
  }

  OtsSolution solution;
  solution.state =
      SwitchingState::all_closed(static_cast<std::size_t>(problem.grid().num_branches()));
  for (int e = 0; e < problem.grid().num_branches(); ++e)
    solution.state.open[static_cast<std::size_t>(e)] =
        values[static_cast<std::size_t>(problem.var_open(e).index)] > 0.5 ? 1 : 0;

  // The objective depends on the energization binaries alone; rebuilding it
  // from the rounded pi kills solver float noise.
  double objective = 0.0;
  for (int slot = 1; slot < problem.num_slots(); ++slot) {
    const double p = problem.grid().probability(problem.contingency_of_slot(slot));
    for (const Bus& bus : problem.grid().buses()) {
      if (bus.load_mw <= 0) continue;
      const double pi =
          values[static_cast<std::size_t>(problem.var_pi(slot, bus.id).index)];
      objective += p * bus.load_mw * (1.0 - pi);
    }
  }
  solution.objective_mw = objective;
  solution.gap = result.gap;
  solution.provenance = backend.name();
  for (int i = 0; i < model.num_vars(); ++i)
    solution.assignment[model.var(milp::VarRef{i}).name] = values[static_cast<std::size_t>(i)];

  const auto discrepancies = verify(problem.grid(), solution, options.analysis);
  if (!discrepancies.empty())
    throw BackendFailure("solver solution failed verification: " + discrepancies.front().code +
                         ": " + discrepancies.front().message);
  return solution;
}

std::vector<Discrepancy> verify(const GridCase& grid, const OtsSolution& solution,
                                const AnalysisOptions& options) {
  std::vector<Discrepancy> out;
  if (solution.state.open.size() != static_cast<std::size_t>(grid.num_branches())) {
    out.push_back({"state", "state covers a different branch count than the grid"});
    return out;
  }
  for (const std::string& problem : validate_switching(grid, solution.state)) {
    out.push_back({"connectivity", problem});
  }
  if (!out.empty()) return out;

  SecurityReport report;
  try {
    report = security_report(grid, solution.state, options);
  } catch (const InfeasibleBalance& ex) {
    out.push_back({"balance", ex.what()});
    return out;
  }

  if (!report.base.overloads.empty()) {
    std::string ids;
    for (int e : report.base.overloads) ids += (ids.empty() ? "" : ", ") + std::to_string(e);
    out.push_back({"overload", "base topology overloads branches {" + ids + "}"});
  }
  for (const ContingencyOutcome& outcome : report.contingencies) {
    if (outcome.overloads.empty()) continue;
    std::string ids;
    for (int e : outcome.overloads) ids += (ids.empty() ? "" : ", ") + std::to_string(e);
    out.push_back({"overload", "contingency " + std::to_string(outcome.contingency) +
                                   " overloads branches {" + ids + "}"});
  }

  if (std::abs(report.risk_mw - solution.objective_mw) >
      1e-6 * std::max(1.0, std::abs(report.risk_mw))) {
    out.push_back({"risk", "claimed objective " + std::to_string(solution.objective_mw) +
                               " MW, oracle risk " + std::to_string(report.risk_mw) + " MW"});
  }

  if (!solution.assignment.empty()) {
    const auto& contingencies = grid.contingencies();
    for (std::size_t k = 0; k < contingencies.size(); ++k) {
      const ContingencyOutcome& outcome = report.contingencies[k];
      for (int i = 0; i < grid.num_buses(); ++i) {
        const std::string name =
            "pi." + std::to_string(k + 1) + "." + std::to_string(i);
        const auto it = solution.assignment.find(name);
        if (it == solution.assignment.end()) continue;
        const double expected = outcome.energized.is_energized(i) ? 1.0 : 0.0;
        if (std::abs(it->second - expected) > 1e-6) {
          out.push_back({"energization",
                         name + " = " + std::to_string(it->second) + " but the oracle says " +
                             std::to_string(expected) + " for contingency " +
                             std::to_string(contingencies[k])});
        }
      }
    }
  }
  return out;
}

}  // namespace ots
