#include "ots/dc_analysis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "ots/errors.hpp"

namespace ots {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

Rebalance rebalance(const GridCase& grid, const EnergizedSet& energized) {
  Rebalance result;
  const std::size_t n = static_cast<std::size_t>(grid.num_buses());
  result.gen_mw.assign(n, 0.0);
  result.load_mw.assign(n, 0.0);

  double gen_sum = 0.0, load_sum = 0.0;
  for (const Bus& bus : grid.buses()) {
    if (!energized.is_energized(bus.id)) continue;
    gen_sum += bus.gen_mw;
    load_sum += bus.load_mw;
  }
  if (gen_sum <= 0.0) {
    if (load_sum > 0.0)
      throw InfeasibleBalance("energized area carries " + fmt(load_sum) +
                              " MW of load but no generation");
    result.sigma = 1.0;
    return result;
  }
  result.sigma = load_sum / gen_sum;
  for (const Bus& bus : grid.buses()) {
    if (!energized.is_energized(bus.id)) continue;
    result.gen_mw[static_cast<std::size_t>(bus.id)] = result.sigma * bus.gen_mw;
    result.load_mw[static_cast<std::size_t>(bus.id)] = bus.load_mw;
  }
  return result;
}

DcFlowResult dc_flow(const GridCase& grid, std::span<const std::uint8_t> open_mask,
                     std::span<const double> injections_mw, int reference_bus) {
  const int nb = grid.num_buses();
  const int ne = grid.num_branches();
  if (open_mask.size() != static_cast<std::size_t>(ne))
    throw ValidationError("open mask size does not match the branch count");
  if (injections_mw.size() != static_cast<std::size_t>(nb))
    throw ValidationError("injection vector size does not match the bus count");
  if (reference_bus < 0 || reference_bus >= nb)
    throw ValidationError("reference bus does not exist");

  double max_abs_inj = 0.0;
  for (double p : injections_mw) max_abs_inj = std::max(max_abs_inj, std::abs(p));
  const double balance_tol = 1e-6 * std::max(1.0, max_abs_inj);

  // Label connected components of the closed subgraph; scanning start buses
  // in ascending order makes each component's first bus its lowest id.
  std::vector<int> comp(static_cast<std::size_t>(nb), -1);
  std::vector<std::vector<int>> comp_buses;
  std::vector<int> stack;
  for (int start = 0; start < nb; ++start) {
    if (comp[static_cast<std::size_t>(start)] >= 0) continue;
    const int id = static_cast<int>(comp_buses.size());
    comp_buses.emplace_back();
    comp[static_cast<std::size_t>(start)] = id;
    stack.assign(1, start);
    while (!stack.empty()) {
      const int bus = stack.back();
      stack.pop_back();
      comp_buses[static_cast<std::size_t>(id)].push_back(bus);
      for (int e : grid.incident(bus)) {
        if (open_mask[static_cast<std::size_t>(e)]) continue;
        const int other = grid.opposite(e, bus);
        if (comp[static_cast<std::size_t>(other)] < 0) {
          comp[static_cast<std::size_t>(other)] = id;
          stack.push_back(other);
        }
      }
    }
  }

  std::vector<std::vector<int>> comp_branches(comp_buses.size());
  for (const Branch& br : grid.branches())
    if (!open_mask[static_cast<std::size_t>(br.id)])
      comp_branches[static_cast<std::size_t>(comp[static_cast<std::size_t>(br.from)])].push_back(
          br.id);

  DcFlowResult result;
  result.flows_mw.assign(static_cast<std::size_t>(ne), 0.0);
  result.angles_rad.assign(static_cast<std::size_t>(nb), 0.0);

  std::vector<int> local(static_cast<std::size_t>(nb), -1);
  for (std::size_t ci = 0; ci < comp_buses.size(); ++ci) {
    const auto& buses = comp_buses[ci];
    double sum = 0.0;
    for (int bus : buses) sum += injections_mw[static_cast<std::size_t>(bus)];
    if (std::abs(sum) > balance_tol)
      throw ValidationError("injections sum to " + fmt(sum) + " MW in a component; expected 0");

    const int m = static_cast<int>(buses.size());
    if (m == 1) continue;  // isolated bus, angle 0, no incident closed branch

    int ref = buses.front();
    if (comp[static_cast<std::size_t>(reference_bus)] == static_cast<int>(ci))
      ref = reference_bus;
    // Local indices with the reference eliminated.
    int next = 0;
    for (int bus : buses) local[static_cast<std::size_t>(bus)] = (bus == ref) ? -1 : next++;

    Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(m - 1, m - 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m - 1);
    for (int bus : buses) {
      const int li = local[static_cast<std::size_t>(bus)];
      if (li >= 0) rhs[li] = injections_mw[static_cast<std::size_t>(bus)];
    }
    for (int e : comp_branches[ci]) {
      const Branch& br = grid.branches()[static_cast<std::size_t>(e)];
      const double b = grid.susceptance_mw(e);
      const int lf = local[static_cast<std::size_t>(br.from)];
      const int lt = local[static_cast<std::size_t>(br.to)];
      if (lf >= 0) laplacian(lf, lf) += b;
      if (lt >= 0) laplacian(lt, lt) += b;
      if (lf >= 0 && lt >= 0) {
        laplacian(lf, lt) -= b;
        laplacian(lt, lf) -= b;
      }
    }

    Eigen::LDLT<Eigen::MatrixXd> factor(laplacian);
    if (factor.info() != Eigen::Success)
      throw SingularSystem("susceptance system could not be factorized");
    const Eigen::VectorXd phi = factor.solve(rhs);
    if ((laplacian * phi - rhs).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, max_abs_inj))
      throw SingularSystem("susceptance system is numerically singular");

    for (int bus : buses) {
      const int li = local[static_cast<std::size_t>(bus)];
      result.angles_rad[static_cast<std::size_t>(bus)] = (li >= 0) ? phi[li] : 0.0;
    }
    for (int e : comp_branches[ci]) {
      const Branch& br = grid.branches()[static_cast<std::size_t>(e)];
      result.flows_mw[static_cast<std::size_t>(e)] =
          grid.susceptance_mw(e) * (result.angles_rad[static_cast<std::size_t>(br.to)] -
                                    result.angles_rad[static_cast<std::size_t>(br.from)]);
    }
  }
  return result;
}

std::vector<int> effective_open(const GridCase& grid, const SwitchingState& state,
                                int contingency) {
  if (state.open.size() != static_cast<std::size_t>(grid.num_branches()))
    throw ValidationError("state covers a different branch count than the grid");
  std::vector<int> ids = state.open_ids();
  if (contingency != kBaseCase) {
    if (contingency < 0 || contingency >= grid.num_branches())
      throw ValidationError("contingency references unknown branch " +
                            std::to_string(contingency));
    if (!state.is_open(contingency)) {
      ids.insert(std::lower_bound(ids.begin(), ids.end(), contingency), contingency);
    }
  }
  return ids;
}

ContingencyOutcome analyze_contingency(const GridCase& grid, const SwitchingState& state,
                                       int contingency, const AnalysisOptions& options) {
  if (!validate_switching(grid, state).empty())
    throw ValidationError("pre-contingency topology must be connected");
  if (contingency != kBaseCase &&
      (contingency < 0 || contingency >= grid.num_branches()))
    throw ValidationError("contingency references unknown branch " + std::to_string(contingency));

  std::vector<std::uint8_t> mask = state.open;
  if (contingency != kBaseCase) mask[static_cast<std::size_t>(contingency)] = 1;

  ContingencyOutcome outcome;
  outcome.contingency = contingency;
  const int source = resolve_source(grid);
  outcome.energized = energized_set(grid, mask, source);

  const Rebalance balance = rebalance(grid, outcome.energized);
  outcome.sigma = balance.sigma;

  std::vector<double> injections(static_cast<std::size_t>(grid.num_buses()), 0.0);
  for (int i = 0; i < grid.num_buses(); ++i)
    injections[static_cast<std::size_t>(i)] = balance.gen_mw[static_cast<std::size_t>(i)] -
                                              balance.load_mw[static_cast<std::size_t>(i)];

  DcFlowResult flow = dc_flow(grid, mask, injections, source);
  outcome.flows_mw = std::move(flow.flows_mw);
  outcome.angles_rad = std::move(flow.angles_rad);

  for (const Branch& br : grid.branches()) {
    if (mask[static_cast<std::size_t>(br.id)]) continue;
    if (std::abs(outcome.flows_mw[static_cast<std::size_t>(br.id)]) >
        br.limit_mw + options.overload_tol_mw)
      outcome.overloads.push_back(br.id);
  }

  for (const Bus& bus : grid.buses())
    if (!outcome.energized.is_energized(bus.id)) outcome.load_lost_mw += bus.load_mw;

  if (outcome.sigma < options.sigma_warn_low || outcome.sigma > options.sigma_warn_high)
    outcome.warnings.push_back("generation scaled by " + fmt(outcome.sigma) +
                               ", outside the plausible band [" + fmt(options.sigma_warn_low) +
                               ", " + fmt(options.sigma_warn_high) + "]");
  return outcome;
}

SecurityReport security_report(const GridCase& grid, const SwitchingState& state,
                               const AnalysisOptions& options) {
  SecurityReport report;
  report.state = state;
  report.base = analyze_contingency(grid, state, kBaseCase, options);
  const double total_load = grid.total_load_mw();
  for (int c : grid.contingencies()) {
    ContingencyOutcome outcome = analyze_contingency(grid, state, c, options);
    report.risk_mw += grid.probability(c) * outcome.load_lost_mw;
    if (!outcome.overloads.empty()) ++report.overloading_contingencies;
    if (!outcome.energized.all()) {
      ++report.deenergizing_contingencies;
      if (total_load > 0)
        report.avg_loss_fraction_deenergizing += outcome.load_lost_mw / total_load;
    }
    if (total_load > 0) report.avg_loss_fraction_all += outcome.load_lost_mw / total_load;
    report.contingencies.push_back(std::move(outcome));
  }
  if (!report.contingencies.empty())
    report.avg_loss_fraction_all /= static_cast<double>(report.contingencies.size());
  if (report.deenergizing_contingencies > 0)
    report.avg_loss_fraction_deenergizing /= static_cast<double>(report.deenergizing_contingencies);
  return report;
}

}  // namespace ots
