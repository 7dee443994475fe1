#pragma once

#include <map>
#include <vector>

#include "ots/dc_analysis.hpp"
#include "ots/grid.hpp"
#include "ots/milp.hpp"

namespace ots {

struct ProblemOptions {
  double theta_max_rad = 3.14159265358979323846;
  double sigma_max = 3.0;
  int max_open = -1;  // negative = no cardinality cap on openings
};

// Mixed-integer encoding of the switching problem. Variables live in slots:
// slot 0 is the base topology, slot k >= 1 is grid.contingencies()[k-1].
// Names follow "family.slot.index": v.<branch>, pi.<slot>.<bus>,
// psi.<slot>.<bus>.<branch>, fstar.<slot>.<branch>, f.<slot>.<branch>,
// phi.<slot>.<bus>, sigma.<slot>, pstar.<slot>.<bus>, ghat.<slot>.<bus>,
// dhat.<slot>.<bus>. ghat/dhat exist only where gen/load is positive; the
// base slot has no pi/psi/sigma (energization and dispatch are constants
// there).
//
// The constructor creates every variable; the build_* methods append
// constraint groups and may be called in any order. build_full() runs them
// all.
class OtsProblem {
 public:
  OtsProblem(GridCase grid, const ProblemOptions& options = {});

  static OtsProblem build_full(GridCase grid, const ProblemOptions& options = {});

  // Mirror-flow connectedness of the base topology: opening a branch kills
  // its mirror flow, every non-source bus sinks one unit, the source emits
  // |V|-1 units.
  void build_base_connectedness();

  // Energization indicators for one contingency: psi/or propagation from the
  // source plus mirror flows sized by pi. The contingency branch contributes
  // a constant-open w; other branches reuse v directly.
  void build_contingency_connectedness(int contingency);

  // DC flow equations, conservation with served load / scaled generation,
  // total balance, and branch limits for one slot (kBaseCase or a
  // contingency id).
  void build_balancing_and_flows(int contingency_or_base);

  // Probability-weighted expected unserved load over all contingencies.
  // The constant part (sum of probabilities times total load) goes to the
  // model's objective offset.
  void build_objective();

  const GridCase& grid() const { return grid_; }
  const ProblemOptions& options() const { return options_; }
  int source() const { return source_; }
  milp::ModelIR& model() { return model_; }
  const milp::ModelIR& model() const { return model_; }

  int num_slots() const { return static_cast<int>(grid_.contingencies().size()) + 1; }
  int slot_of(int contingency) const;          // contingency id -> slot >= 1
  int contingency_of_slot(int slot) const;     // slot >= 1 -> contingency id

  milp::VarRef var_open(int branch) const { return v_[branch]; }
  milp::VarRef var_pi(int slot, int bus) const { return pi_[slot][bus]; }
  milp::VarRef var_sigma(int slot) const { return sigma_[slot]; }
  milp::VarRef var_flow(int slot, int branch) const { return flow_[slot][branch]; }
  milp::VarRef var_angle(int slot, int bus) const { return angle_[slot][bus]; }
  milp::VarRef var_mirror_flow(int slot, int branch) const { return fstar_[slot][branch]; }

  // Big-M used by the flow equation of a branch: 2 * b_mw * theta_max.
  double flow_big_m(int branch) const;

 private:
  GridCase grid_;
  ProblemOptions options_;
  int source_;
  milp::ModelIR model_;

  std::vector<milp::VarRef> v_;
  std::vector<std::vector<milp::VarRef>> fstar_;  // [slot][branch]
  std::vector<std::vector<milp::VarRef>> flow_;   // [slot][branch]
  std::vector<std::vector<milp::VarRef>> angle_;  // [slot][bus]
  std::vector<std::vector<milp::VarRef>> pi_;     // [slot][bus], slot >= 1
  std::map<std::pair<int, int>, milp::VarRef> psi_;  // (slot * nb + bus, branch)
  std::vector<milp::VarRef> sigma_;               // [slot], slot >= 1
  std::vector<milp::VarRef> pstar_src_;           // [slot], slot >= 1
  std::vector<std::vector<milp::VarRef>> ghat_;   // [slot][bus], invalid if no gen
  std::vector<std::vector<milp::VarRef>> dhat_;   // [slot][bus], invalid if no load

  milp::VarRef psi_var(int slot, int bus, int branch) const;
  void create_variables();
};

}  // namespace ots
