#include "ots/ots_problem.hpp"

#include <string>

#include "ots/connectivity.hpp"
#include "ots/errors.hpp"

namespace ots {

namespace {

std::string name2(const char* family, int a, int b) {
  return std::string(family) + "." + std::to_string(a) + "." + std::to_string(b);
}

std::string name3(const char* family, int a, int b, int c) {
  return name2(family, a, b) + "." + std::to_string(c);
}

}  // namespace

OtsProblem::OtsProblem(GridCase grid, const ProblemOptions& options)
    : grid_(std::move(grid)), options_(options), source_(resolve_source(grid_)) {
  if (!(options_.theta_max_rad > 0)) throw ValidationError("theta_max must be positive");
  if (!(options_.sigma_max > 0)) throw ValidationError("sigma_max must be positive");
  create_variables();
}

OtsProblem OtsProblem::build_full(GridCase grid, const ProblemOptions& options) {
  OtsProblem problem(std::move(grid), options);
  problem.build_base_connectedness();
  problem.build_balancing_and_flows(kBaseCase);
  for (int c : problem.grid_.contingencies()) {
    problem.build_contingency_connectedness(c);
    problem.build_balancing_and_flows(c);
  }
  problem.build_objective();
  return problem;
}

int OtsProblem::slot_of(int contingency) const {
  const auto& list = grid_.contingencies();
  for (std::size_t k = 0; k < list.size(); ++k)
    if (list[k] == contingency) return static_cast<int>(k) + 1;
  throw ValidationError("branch " + std::to_string(contingency) + " is not a contingency");
}

int OtsProblem::contingency_of_slot(int slot) const {
  if (slot < 1 || slot >= num_slots()) throw ValidationError("slot out of range");
  return grid_.contingencies()[static_cast<std::size_t>(slot - 1)];
}

double OtsProblem::flow_big_m(int branch) const {
  return 2.0 * grid_.susceptance_mw(branch) * options_.theta_max_rad;
}

milp::VarRef OtsProblem::psi_var(int slot, int bus, int branch) const {
  return psi_.at({slot * grid_.num_buses() + bus, branch});
}

void OtsProblem::create_variables() {
  const int nb = grid_.num_buses();
  const int ne = grid_.num_branches();
  const int slots = num_slots();
  const double n_units = static_cast<double>(nb);
  const double theta = options_.theta_max_rad;

  v_.resize(static_cast<std::size_t>(ne));
  for (int e = 0; e < ne; ++e) v_[static_cast<std::size_t>(e)] = model_.add_binary("v." + std::to_string(e));

  fstar_.assign(static_cast<std::size_t>(slots), {});
  flow_.assign(static_cast<std::size_t>(slots), {});
  angle_.assign(static_cast<std::size_t>(slots), {});
  pi_.assign(static_cast<std::size_t>(slots), {});
  sigma_.assign(static_cast<std::size_t>(slots), {});
  pstar_src_.assign(static_cast<std::size_t>(slots), {});
  ghat_.assign(static_cast<std::size_t>(slots), {});
  dhat_.assign(static_cast<std::size_t>(slots), {});

  for (int slot = 0; slot < slots; ++slot) {
    const int c = (slot == 0) ? kBaseCase : contingency_of_slot(slot);
    auto& fstar = fstar_[static_cast<std::size_t>(slot)];
    auto& flow = flow_[static_cast<std::size_t>(slot)];
    auto& angle = angle_[static_cast<std::size_t>(slot)];
    fstar.resize(static_cast<std::size_t>(ne));
    flow.resize(static_cast<std::size_t>(ne));
    angle.resize(static_cast<std::size_t>(nb));

    if (slot > 0) {
      auto& pi = pi_[static_cast<std::size_t>(slot)];
      pi.resize(static_cast<std::size_t>(nb));
      for (int i = 0; i < nb; ++i) {
        pi[static_cast<std::size_t>(i)] = model_.add_binary(name2("pi", slot, i));
        if (i == source_) model_.fix(pi[static_cast<std::size_t>(i)], 1.0);
      }
      for (int i = 0; i < nb; ++i) {
        for (int e : grid_.incident(i)) {
          const milp::VarRef psi = model_.add_binary(name3("psi", slot, i, e));
          if (e == c) model_.fix(psi, 0.0);
          psi_[{slot * nb + i, e}] = psi;
        }
      }
    }

    for (int e = 0; e < ne; ++e) {
      fstar[static_cast<std::size_t>(e)] =
          model_.add_continuous(name2("fstar", slot, e), -(n_units - 1), n_units - 1);
      if (e == c) model_.fix(fstar[static_cast<std::size_t>(e)], 0.0);
    }
    for (int e = 0; e < ne; ++e) {
      const double cap = flow_big_m(e);
      flow[static_cast<std::size_t>(e)] = model_.add_continuous(name2("f", slot, e), -cap, cap);
      if (e == c) model_.fix(flow[static_cast<std::size_t>(e)], 0.0);
    }
    for (int i = 0; i < nb; ++i)
      angle[static_cast<std::size_t>(i)] =
          model_.add_continuous(name2("phi", slot, i), -theta, theta);

    if (slot > 0) {
      sigma_[static_cast<std::size_t>(slot)] =
          model_.add_continuous("sigma." + std::to_string(slot), 0.0, options_.sigma_max);
      pstar_src_[static_cast<std::size_t>(slot)] =
          model_.add_continuous(name2("pstar", slot, source_), -(n_units - 1), 0.0);
      auto& ghat = ghat_[static_cast<std::size_t>(slot)];
      auto& dhat = dhat_[static_cast<std::size_t>(slot)];
      ghat.resize(static_cast<std::size_t>(nb));
      dhat.resize(static_cast<std::size_t>(nb));
      for (int i = 0; i < nb; ++i) {
        const Bus& bus = grid_.buses()[static_cast<std::size_t>(i)];
        if (bus.gen_mw > 0)
          ghat[static_cast<std::size_t>(i)] = model_.add_continuous(
              name2("ghat", slot, i), 0.0, options_.sigma_max * bus.gen_mw);
        if (bus.load_mw > 0)
          dhat[static_cast<std::size_t>(i)] =
              model_.add_continuous(name2("dhat", slot, i), 0.0, bus.load_mw);
      }
    }
  }
}

void OtsProblem::build_base_connectedness() {
  const int nb = grid_.num_buses();
  const double n_units = static_cast<double>(nb);
  const auto& fstar = fstar_[0];

  for (int e = 0; e < grid_.num_branches(); ++e)
    milp::encode_zero_when(model_, fstar[static_cast<std::size_t>(e)],
                           v_[static_cast<std::size_t>(e)], n_units, /*complement=*/false,
                           "base_conn.open_zero");

  for (int i = 0; i < nb; ++i) {
    milp::LinExpr lhs;
    for (int e : grid_.incident(i)) {
      const Branch& br = grid_.branches()[static_cast<std::size_t>(e)];
      lhs.add(br.to == i ? 1.0 : -1.0, fstar[static_cast<std::size_t>(e)]);
    }
    if (i == source_)
      model_.add_constraint(lhs, milp::Sense::EQ, -(n_units - 1), "base_conn.balance_src");
    else
      model_.add_constraint(lhs, milp::Sense::EQ, 1.0, "base_conn.balance");
  }
}

void OtsProblem::build_contingency_connectedness(int contingency) {
  const int slot = slot_of(contingency);
  const int nb = grid_.num_buses();
  const double n_units = static_cast<double>(nb);
  const auto& fstar = fstar_[static_cast<std::size_t>(slot)];
  const auto& pi = pi_[static_cast<std::size_t>(slot)];

  // Reachability: a bus is energized iff some incident closed, surviving
  // branch leads to an energized bus. The contingency branch's indicator is
  // the constant 1 (its psi is fixed to zero); other branches borrow v. The
  // source is exempt: it anchors the propagation with its pi fixed to one
  // even when an outage strands it, so its own disjunction must not demand a
  // live neighbour.
  for (int i = 0; i < nb; ++i) {
    std::vector<milp::VarRef> inputs;
    for (int e : grid_.incident(i)) {
      const milp::VarRef psi = psi_var(slot, i, e);
      inputs.push_back(psi);
      if (e == contingency) continue;
      milp::encode_and_not(model_, psi, pi[static_cast<std::size_t>(grid_.opposite(e, i))],
                           v_[static_cast<std::size_t>(e)], "cont_conn.reach");
    }
    if (i == source_) continue;
    milp::encode_or(model_, pi[static_cast<std::size_t>(i)], inputs, "cont_conn.propagate");
  }

  for (int e = 0; e < grid_.num_branches(); ++e) {
    if (e == contingency) continue;  // mirror flow is fixed to zero
    milp::encode_zero_when(model_, fstar[static_cast<std::size_t>(e)],
                           v_[static_cast<std::size_t>(e)], n_units, /*complement=*/false,
                           "cont_conn.open_zero");
  }

  for (int i = 0; i < nb; ++i) {
    milp::LinExpr lhs;
    for (int e : grid_.incident(i)) {
      const Branch& br = grid_.branches()[static_cast<std::size_t>(e)];
      lhs.add(br.to == i ? 1.0 : -1.0, fstar[static_cast<std::size_t>(e)]);
    }
    if (i == source_) {
      lhs.add(-1.0, pstar_src_[static_cast<std::size_t>(slot)]);
      model_.add_constraint(lhs, milp::Sense::EQ, 0.0, "cont_conn.balance_src");
    } else {
      lhs.add(-1.0, pi[static_cast<std::size_t>(i)]);
      model_.add_constraint(lhs, milp::Sense::EQ, 0.0, "cont_conn.balance");
    }
  }
}

void OtsProblem::build_balancing_and_flows(int contingency_or_base) {
  const bool base = contingency_or_base == kBaseCase;
  const int slot = base ? 0 : slot_of(contingency_or_base);
  const int nb = grid_.num_buses();
  const auto& flow = flow_[static_cast<std::size_t>(slot)];
  const auto& angle = angle_[static_cast<std::size_t>(slot)];
  const char* eq_tag = base ? "base_flow.eq" : "cont_flow.eq";
  const char* cap_tag = base ? "base_flow.cap" : "cont_flow.cap";
  const char* bal_tag = base ? "base_flow.balance" : "cont_flow.balance";

  for (int e = 0; e < grid_.num_branches(); ++e) {
    if (!base && e == contingency_or_base) continue;  // flow is fixed to zero
    const Branch& br = grid_.branches()[static_cast<std::size_t>(e)];
    milp::encode_flow_equation(model_, flow[static_cast<std::size_t>(e)],
                               grid_.susceptance_mw(e),
                               angle[static_cast<std::size_t>(br.to)],
                               angle[static_cast<std::size_t>(br.from)],
                               v_[static_cast<std::size_t>(e)], flow_big_m(e), eq_tag);
    milp::encode_abs_limit(model_, flow[static_cast<std::size_t>(e)], br.limit_mw, cap_tag);
  }

  for (int i = 0; i < nb; ++i) {
    const Bus& bus = grid_.buses()[static_cast<std::size_t>(i)];
    milp::LinExpr lhs;
    for (int e : grid_.incident(i)) {
      const Branch& br = grid_.branches()[static_cast<std::size_t>(e)];
      lhs.add(br.to == i ? 1.0 : -1.0, flow[static_cast<std::size_t>(e)]);
    }
    if (base) {
      model_.add_constraint(lhs, milp::Sense::EQ, bus.gen_mw - bus.load_mw, bal_tag);
      continue;
    }
    const milp::VarRef ghat = ghat_[static_cast<std::size_t>(slot)][static_cast<std::size_t>(i)];
    const milp::VarRef dhat = dhat_[static_cast<std::size_t>(slot)][static_cast<std::size_t>(i)];
    if (ghat.valid()) lhs.add(-1.0, ghat);
    if (dhat.valid()) lhs.add(1.0, dhat);
    model_.add_constraint(lhs, milp::Sense::EQ, 0.0, bal_tag);
  }

  if (base) return;

  const auto& pi = pi_[static_cast<std::size_t>(slot)];
  milp::LinExpr total;
  for (int i = 0; i < nb; ++i) {
    const Bus& bus = grid_.buses()[static_cast<std::size_t>(i)];
    const milp::VarRef ghat = ghat_[static_cast<std::size_t>(slot)][static_cast<std::size_t>(i)];
    const milp::VarRef dhat = dhat_[static_cast<std::size_t>(slot)][static_cast<std::size_t>(i)];
    if (ghat.valid()) {
      milp::LinExpr scaled;
      scaled.add(bus.gen_mw, sigma_[static_cast<std::size_t>(slot)]);
      milp::encode_product(model_, ghat, scaled, pi[static_cast<std::size_t>(i)],
                           options_.sigma_max * bus.gen_mw, /*complement=*/false,
                           "balance.gen_scale");
      total.add(1.0, ghat);
    }
    if (dhat.valid()) {
      milp::LinExpr served;
      served.add(1.0, dhat).add(-bus.load_mw, pi[static_cast<std::size_t>(i)]);
      model_.add_constraint(served, milp::Sense::EQ, 0.0, "balance.load_served");
      total.add(-1.0, dhat);
    }
  }
  if (!total.terms().empty())
    model_.add_constraint(total, milp::Sense::EQ, 0.0, "balance.total");
}

void OtsProblem::build_objective() {
  milp::LinExpr objective;
  double offset = 0.0;
  for (int slot = 1; slot < num_slots(); ++slot) {
    const double p = grid_.probability(contingency_of_slot(slot));
    offset += p * grid_.total_load_mw();
    for (int i = 0; i < grid_.num_buses(); ++i) {
      const milp::VarRef dhat =
          dhat_[static_cast<std::size_t>(slot)][static_cast<std::size_t>(i)];
      if (dhat.valid()) objective.add(-p, dhat);
    }
  }
  objective.add(offset);
  model_.set_objective(objective);

  if (options_.max_open >= 0) {
    milp::LinExpr count;
    for (const milp::VarRef v : v_) count.add(1.0, v);
    model_.add_constraint(count, milp::Sense::LE, static_cast<double>(options_.max_open),
                          "policy.max_open");
  }
}

}  // namespace ots
