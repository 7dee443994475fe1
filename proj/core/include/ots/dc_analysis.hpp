#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ots/connectivity.hpp"
#include "ots/grid.hpp"

namespace ots {

inline constexpr int kBaseCase = -1;  // pseudo contingency id for the base topology

struct AnalysisOptions {
  double overload_tol_mw = 1e-6;
  // Bounds mirrored from the optimization model; security screening treats
  // states outside them as insecure so both judges agree.
  double sigma_max = 3.0;
  double theta_max_rad = 3.14159265358979323846;
  // Scaling factors outside this band are flagged as implausible dispatch.
  double sigma_warn_low = 0.5;
  double sigma_warn_high = 2.0;
};

struct Rebalance {
  std::vector<double> gen_mw;   // per bus, scaled generation on energized buses
  std::vector<double> load_mw;  // per bus, load on energized buses
  double sigma = 1.0;
};

// Proportionally scales generation on the energized buses so it matches the
// energized load exactly. Throws InfeasibleBalance when the energized load is
// positive but no generation remains; sigma is 1 when both are zero.
Rebalance rebalance(const GridCase& grid, const EnergizedSet& energized);

struct DcFlowResult {
  std::vector<double> flows_mw;   // per branch; exactly 0 on open branches
  std::vector<double> angles_rad; // per bus; 0 at each component's reference
};

// Solves the susceptance system on each connected component of the closed
// subgraph. `injections_mw` must sum to ~0 within every component. The
// component containing `reference_bus` is referenced at that bus, all others
// at their lowest-id bus. Flows follow f = b * (angle[to] - angle[from]).
DcFlowResult dc_flow(const GridCase& grid, std::span<const std::uint8_t> open_mask,
                     std::span<const double> injections_mw, int reference_bus);

// Branch ids opened once `contingency` is added to the preventive openings.
std::vector<int> effective_open(const GridCase& grid, const SwitchingState& state,
                                int contingency);

struct ContingencyOutcome {
  int contingency = kBaseCase;  // branch id, or kBaseCase
  EnergizedSet energized;
  double sigma = 1.0;
  std::vector<double> flows_mw;
  std::vector<double> angles_rad;
  std::vector<int> overloads;  // ascending branch ids with |flow| > limit + tol
  double load_lost_mw = 0.0;
  std::vector<std::string> warnings;
};

// Evaluates one topology: energized set from the resolved source, proportional
// rebalance, DC flow, overload scan. Precondition: the pre-contingency closed
// subgraph is connected.
ContingencyOutcome analyze_contingency(const GridCase& grid, const SwitchingState& state,
                                       int contingency, const AnalysisOptions& options = {});

struct SecurityReport {
  SwitchingState state;
  ContingencyOutcome base;
  std::vector<ContingencyOutcome> contingencies;  // in grid.contingencies() order
  double risk_mw = 0.0;  // sum of probability * load_lost over contingencies
  int overloading_contingencies = 0;
  int deenergizing_contingencies = 0;
  double avg_loss_fraction_all = 0.0;          // mean over all contingencies of lost/total
  double avg_loss_fraction_deenergizing = 0.0; // mean over de-energizing ones, 0 if none
};

SecurityReport security_report(const GridCase& grid, const SwitchingState& state,
                               const AnalysisOptions& options = {});

// Serialization of the report schema (angles and warnings are not part of it).
std::string report_to_json_string(const SecurityReport& report);
SecurityReport report_from_json_string(const std::string& text);
void save_report(const SecurityReport& report, const std::filesystem::path& path);
SecurityReport load_report(const std::filesystem::path& path);

// Field-wise equality on the serialized schema.
bool report_schema_equal(const SecurityReport& a, const SecurityReport& b);

}  // namespace ots
