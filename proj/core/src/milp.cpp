#include "ots/milp.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "ots/errors.hpp"

namespace ots::milp {

namespace {

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw ValidationError(std::string(what) + " must be finite");
}

std::vector<LinTerm> canonical_terms(std::vector<LinTerm> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const LinTerm& a, const LinTerm& b) { return a.var < b.var; });
  std::vector<LinTerm> merged;
  for (const LinTerm& t : terms) {
    check_finite(t.coef, "coefficient");
    if (!merged.empty() && merged.back().var == t.var)
      merged.back().coef += t.coef;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const LinTerm& t) { return t.coef == 0.0; });
  return merged;
}

void check_binary(const ModelIR& m, VarRef v, const char* role) {
  if (m.var(v).kind != VarKind::Binary)
    throw ValidationError(std::string(role) + " must be a binary variable, " + m.var(v).name +
                          " is not");
}

}  // namespace

LinExpr& LinExpr::add(double coef, VarRef v) {
  if (!v.valid()) throw ValidationError("expression references an invalid variable");
  check_finite(coef, "coefficient");
  terms_.push_back({coef, v.index});
  return *this;
}

VarRef ModelIR::add_var(std::string name, VarKind kind, double lower, double upper) {
  if (name.empty()) throw ValidationError("variable names must not be empty");
  check_finite(lower, "lower bound");
  check_finite(upper, "upper bound");
  if (lower > upper)
    throw ValidationError("variable " + name + " has lower bound above upper bound");
  if (by_name(name)) throw ValidationError("variable " + name + " already exists");
  if (kind == VarKind::Binary) {
    if (lower < 0 || upper > 1)
      throw ValidationError("binary variable " + name + " must have bounds within [0, 1]");
    ++num_binaries_;
  }
  vars_.push_back({std::move(name), kind, lower, upper});
  const VarRef ref{static_cast<int>(vars_.size()) - 1};
  name_index_.emplace(vars_.back().name, ref.index);
  return ref;
}

void ModelIR::set_bounds(VarRef v, double lower, double upper) {
  check_finite(lower, "lower bound");
  check_finite(upper, "upper bound");
  if (lower > upper) throw ValidationError("lower bound above upper bound");
  VarInfo& info = vars_[static_cast<std::size_t>(v.index)];
  if (info.kind == VarKind::Binary && (lower < 0 || upper > 1))
    throw ValidationError("binary variable " + info.name + " must stay within [0, 1]");
  info.lower = lower;
  info.upper = upper;
}

void ModelIR::add_constraint(const LinExpr& lhs, Sense sense, double rhs, std::string tag) {
  if (tag.empty()) throw ValidationError("constraints need a non-empty tag");
  check_finite(rhs, "right-hand side");
  LinConstraint c;
  c.terms = canonical_terms(lhs.terms());
  for (const LinTerm& t : c.terms)
    if (t.var < 0 || t.var >= num_vars())
      throw ValidationError("constraint " + tag + " references an unknown variable");
  if (c.terms.empty())
    throw ValidationError("constraint " + tag + " has no variables after canonicalization");
  c.sense = sense;
  c.rhs = rhs - lhs.constant();
  c.tag = std::move(tag);
  constraints_.push_back(std::move(c));
}

void ModelIR::set_objective(const LinExpr& expr) {
  objective_ = canonical_terms(expr.terms());
  objective_offset_ = expr.constant();
}

std::optional<VarRef> ModelIR::by_name(std::string_view name) const {
  const auto it = name_index_.find(std::string(name));
  if (it == name_index_.end()) return std::nullopt;
  return VarRef{it->second};
}

double ModelIR::objective_value(std::span<const double> values) const {
  double total = objective_offset_;
  for (const LinTerm& t : objective_) total += t.coef * values[static_cast<std::size_t>(t.var)];
  return total;
}

// --- encoders ----------------------------------------------------------------

namespace {

void check_m(double M) {
  if (!(M > 0) || !std::isfinite(M)) throw ValidationError("big-M must be positive and finite");
}

}  // namespace

void encode_zero_when(ModelIR& m, VarRef a, VarRef u, double M, bool complement,
                      std::string_view tag) {
  check_m(M);
  check_binary(m, u, "indicator");
  // a <= M * (1 - u)   [u complemented: a <= M * u]
  // -a <= M * (1 - u)
  for (const double sign : {1.0, -1.0}) {
    LinExpr lhs;
    lhs.add(sign, a);
    double rhs = complement ? 0.0 : M;
    // move the indicator to the left: a + M*u <= M (plain), a - M*u <= 0 (compl)
    lhs.add(complement ? -M : M, u);
    m.add_constraint(lhs, Sense::LE, rhs, std::string(tag));
  }
}

void encode_product(ModelIR& m, VarRef a, const LinExpr& expr, VarRef u, double M, bool complement,
                    std::string_view tag) {
  check_m(M);
  check_binary(m, u, "indicator");
  // Active side (indicator true): a = expr, within M of it otherwise.
  //   a - expr <= M * (1 - t)   and   expr - a <= M * (1 - t)
  // Inactive side: a = 0, within M otherwise.
  //   a <= M * t   and   -a <= M * t
  // where t = u or (1 - u) when complemented.
  for (const double sign : {1.0, -1.0}) {
    LinExpr lhs;
    lhs.add(sign, a);
    for (const LinTerm& t : expr.terms()) lhs.add(-sign * t.coef, VarRef{t.var});
    double rhs = sign * expr.constant();
    if (!complement) {
      lhs.add(M, u);  // t = u: M * (1 - u) on the right
      rhs += M;
    } else {
      lhs.add(-M, u);  // t = 1 - u: M * u on the right
    }
    m.add_constraint(lhs, Sense::LE, rhs, std::string(tag));
  }
  for (const double sign : {1.0, -1.0}) {
    LinExpr lhs;
    lhs.add(sign, a);
    double rhs = 0.0;
    if (!complement) {
      lhs.add(-M, u);  // a <= M * u
    } else {
      lhs.add(M, u);  // a <= M * (1 - u)
      rhs = M;
    }
    m.add_constraint(lhs, Sense::LE, rhs, std::string(tag));
  }
}

void encode_flow_equation(ModelIR& m, VarRef f, double b, VarRef phi_to, VarRef phi_from, VarRef w,
                          double M, std::string_view tag) {
  if (!(b > 0) || !std::isfinite(b)) throw ValidationError("susceptance must be positive");
  LinExpr delta;
  delta.add(b, phi_to).add(-b, phi_from);
  encode_product(m, f, delta, w, M, /*complement=*/true, tag);
}

void encode_abs_limit(ModelIR& m, VarRef f, double limit, std::string_view tag) {
  if (!(limit > 0) || !std::isfinite(limit))
    throw ValidationError("flow limit must be positive and finite");
  {
    LinExpr lhs;
    lhs.add(1.0, f);
    m.add_constraint(lhs, Sense::LE, limit, std::string(tag));
  }
  {
    LinExpr lhs;
    lhs.add(-1.0, f);
    m.add_constraint(lhs, Sense::LE, limit, std::string(tag));
  }
}

void encode_or(ModelIR& m, VarRef x, std::span<const VarRef> inputs, std::string_view tag) {
  if (inputs.empty()) throw ValidationError("OR needs at least one input");
  check_binary(m, x, "OR output");
  for (VarRef in : inputs) check_binary(m, in, "OR input");
  for (VarRef in : inputs) {
    LinExpr lhs;
    lhs.add(1.0, x).add(-1.0, in);
    m.add_constraint(lhs, Sense::GE, 0.0, std::string(tag));
  }
  LinExpr lhs;
  lhs.add(1.0, x);
  for (VarRef in : inputs) lhs.add(-1.0, in);
  m.add_constraint(lhs, Sense::LE, 0.0, std::string(tag));
}

void encode_and_not(ModelIR& m, VarRef psi, VarRef pi, VarRef w, std::string_view tag) {
  check_binary(m, psi, "AND-NOT output");
  check_binary(m, pi, "AND-NOT input");
  check_binary(m, w, "AND-NOT input");
  {
    LinExpr lhs;
    lhs.add(1.0, psi).add(-1.0, pi);
    m.add_constraint(lhs, Sense::LE, 0.0, std::string(tag));
  }
  {
    LinExpr lhs;
    lhs.add(1.0, psi).add(1.0, w);
    m.add_constraint(lhs, Sense::LE, 1.0, std::string(tag));
  }
  {
    LinExpr lhs;
    lhs.add(1.0, psi).add(-1.0, pi).add(1.0, w);
    m.add_constraint(lhs, Sense::GE, 0.0, std::string(tag));
  }
}

// --- evaluation ----------------------------------------------------------------

bool satisfies(const LinConstraint& c, std::span<const double> values, double tol) {
  double lhs = 0.0;
  for (const LinTerm& t : c.terms) lhs += t.coef * values[static_cast<std::size_t>(t.var)];
  switch (c.sense) {
    case Sense::LE:
      return lhs <= c.rhs + tol;
    case Sense::GE:
      return lhs >= c.rhs - tol;
    case Sense::EQ:
      return std::abs(lhs - c.rhs) <= tol;
  }
  return false;
}

std::vector<std::string> violated_constraints(const ModelIR& m, std::span<const double> values,
                                              double tol) {
  if (values.size() != static_cast<std::size_t>(m.num_vars()))
    throw ValidationError("assignment size does not match the variable count");
  std::vector<std::string> out;
  const auto& cons = m.constraints();
  for (std::size_t i = 0; i < cons.size(); ++i)
    if (!satisfies(cons[i], values, tol))
      out.push_back(cons[i].tag + "#" + std::to_string(i));
  for (int i = 0; i < m.num_vars(); ++i) {
    const VarInfo& info = m.var(VarRef{i});
    const double x = values[static_cast<std::size_t>(i)];
    if (x < info.lower - tol || x > info.upper + tol) out.push_back("bounds:" + info.name);
  }
  return out;
}

std::string model_stats_json(const ModelIR& m) {
  nlohmann::json j;
  j["variables"] = m.num_vars();
  j["binaries"] = m.num_binaries();
  j["continuous"] = m.num_vars() - m.num_binaries();
  j["constraints"] = m.num_constraints();
  std::map<std::string, int> by_tag;
  for (const LinConstraint& c : m.constraints()) {
    const auto dot = c.tag.find('.');
    ++by_tag[dot == std::string::npos ? c.tag : c.tag.substr(0, dot)];
  }
  j["constraints_by_group"] = by_tag;
  return j.dump(2);
}

}  // namespace ots::milp
