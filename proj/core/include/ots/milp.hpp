#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ots::milp {

enum class VarKind { Continuous, Binary };

struct VarRef {
  int index = -1;
  bool valid() const { return index >= 0; }
  bool operator==(const VarRef&) const = default;
};

struct VarInfo {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = 0.0;
};

enum class Sense { LE, EQ, GE };

struct LinTerm {
  double coef = 0.0;
  int var = -1;
};

// Lightweight builder for sum(coef_i * x_i) + constant.
class LinExpr {
 public:
  LinExpr() = default;
  /*implicit*/ LinExpr(double constant) : constant_(constant) {}
  /*implicit*/ LinExpr(VarRef v) { add(1.0, v); }

  LinExpr& add(double coef, VarRef v);
  LinExpr& add(double constant) {
    constant_ += constant;
    return *this;
  }
  const std::vector<LinTerm>& terms() const { return terms_; }
  double constant() const { return constant_; }

 private:
  std::vector<LinTerm> terms_;
  double constant_ = 0.0;
};

struct LinConstraint {
  std::vector<LinTerm> terms;  // canonical: ascending var index, merged, no zeros
  Sense sense = Sense::LE;
  double rhs = 0.0;
  std::string tag;  // role label, e.g. "base_conn.flow_cap"
};

class ModelIR {
 public:
  VarRef add_var(std::string name, VarKind kind, double lower, double upper);
  VarRef add_continuous(std::string name, double lower, double upper) {
    return add_var(std::move(name), VarKind::Continuous, lower, upper);
  }
  VarRef add_binary(std::string name) { return add_var(std::move(name), VarKind::Binary, 0.0, 1.0); }

  void set_bounds(VarRef v, double lower, double upper);
  void fix(VarRef v, double value) { set_bounds(v, value, value); }

  // Canonicalizes lhs (merges duplicate variables, drops zero coefficients,
  // folds the constant into rhs) and appends the constraint.
  void add_constraint(const LinExpr& lhs, Sense sense, double rhs, std::string tag);

  void set_objective(const LinExpr& expr);  // constant becomes the offset
  double objective_offset() const { return objective_offset_; }
  const std::vector<LinTerm>& objective() const { return objective_; }

  const std::vector<VarInfo>& vars() const { return vars_; }
  const VarInfo& var(VarRef v) const { return vars_[static_cast<std::size_t>(v.index)]; }
  const std::vector<LinConstraint>& constraints() const { return constraints_; }
  std::optional<VarRef> by_name(std::string_view name) const;

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_binaries() const { return num_binaries_; }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }

  // Objective value of an assignment (offset included).
  double objective_value(std::span<const double> values) const;

 private:
  std::vector<VarInfo> vars_;
  std::vector<LinConstraint> constraints_;
  std::vector<LinTerm> objective_;
  double objective_offset_ = 0.0;
  int num_binaries_ = 0;
  std::unordered_map<std::string, int> name_index_;
};

// --- Big-M / logical encoders -----------------------------------------------
//
// Each encoder appends rows forcing the stated relation for integral values
// of the indicator. `complement` uses (1 - u) as the indicator without
// introducing an auxiliary variable. M must be positive and large enough to
// deactivate the rows on the slack side; callers size it from their bounds.

// u = 1 (or 0 when complemented) forces a = 0; otherwise |a| <= M.
void encode_zero_when(ModelIR& m, VarRef a, VarRef u, double M, bool complement,
                      std::string_view tag);

// u = 1 (or 0 when complemented) forces a = expr; otherwise a = 0.
// |expr| <= M must hold over the feasible box.
void encode_product(ModelIR& m, VarRef a, const LinExpr& expr, VarRef u, double M,
                    bool complement, std::string_view tag);

// f = b * (phi_to - phi_from) when w = 0; f = 0 when w = 1.
void encode_flow_equation(ModelIR& m, VarRef f, double b, VarRef phi_to, VarRef phi_from,
                          VarRef w, double M, std::string_view tag);

// |f| <= limit.
void encode_abs_limit(ModelIR& m, VarRef f, double limit, std::string_view tag);

// x = OR(inputs) for binary x, inputs.
void encode_or(ModelIR& m, VarRef x, std::span<const VarRef> inputs, std::string_view tag);

// psi = pi AND NOT w for binary psi, pi, w.
void encode_and_not(ModelIR& m, VarRef psi, VarRef pi, VarRef w, std::string_view tag);

// --- Evaluation helpers ------------------------------------------------------

bool satisfies(const LinConstraint& c, std::span<const double> values, double tol);
// Tags of constraints violated by the assignment, with row indexes.
std::vector<std::string> violated_constraints(const ModelIR& m, std::span<const double> values,
                                              double tol);

// --- Serialization -----------------------------------------------------------

// Deterministic LP-format text (CPLEX conventions). Row names carry the
// constraint tag plus its index. Identical models serialize to identical bytes.
std::string serialize_lp(const ModelIR& m);
// Parses text produced by serialize_lp (round-trip support; not a general
// LP reader).
ModelIR parse_lp(const std::string& text);

// Counts by kind plus per-tag-prefix constraint counts, as a JSON string.
std::string model_stats_json(const ModelIR& m);

}  // namespace ots::milp
