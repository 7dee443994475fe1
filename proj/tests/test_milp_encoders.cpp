#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "ots/errors.hpp"
#include "ots/milp.hpp"

using namespace ots::milp;

namespace {

bool feasible(const ModelIR& m, const std::vector<double>& values) {
  return violated_constraints(m, values, 1e-9).empty();
}

}  // namespace

TEST_CASE("model bookkeeping and assignment checks") {
  ModelIR m;
  const VarRef x = m.add_binary("x");
  const VarRef y = m.add_continuous("y", -5.0, 5.0);
  CHECK(m.num_vars() == 2);
  CHECK(m.num_binaries() == 1);
  CHECK(m.by_name("x") == x);
  CHECK_FALSE(m.by_name("z").has_value());
  CHECK_THROWS_AS(m.add_binary("x"), ots::ValidationError);  // duplicate name
  CHECK_THROWS_AS(m.add_continuous("w", 2.0, 1.0), ots::ValidationError);

  LinExpr lhs;
  lhs.add(1.0, x).add(2.0, y).add(1.0, x);  // duplicate merges to 2x
  m.add_constraint(lhs, Sense::LE, 4.0, "demo.cap");
  REQUIRE(m.num_constraints() == 1);
  CHECK(m.constraints()[0].terms.size() == 2);
  CHECK(m.constraints()[0].terms[0].coef == 2.0);

  CHECK(satisfies(m.constraints()[0], std::vector<double>{1.0, 1.0}, 1e-9));
  CHECK_FALSE(satisfies(m.constraints()[0], std::vector<double>{1.0, 1.5}, 1e-9));
  CHECK(feasible(m, {0.0, 2.0}));
  CHECK_FALSE(feasible(m, {1.0, 2.0}));
  CHECK(violated_constraints(m, std::vector<double>{1.0, 2.0}, 1e-9).front().find("demo.cap") !=
        std::string::npos);

  m.set_objective(LinExpr().add(3.0, y).add(7.0));
  CHECK(m.objective_offset() == 7.0);
  CHECK(m.objective_value(std::vector<double>{0.0, 2.0}) == doctest::Approx(13.0));

  CHECK_THROWS_AS(m.add_constraint(LinExpr(1.0), Sense::LE, 0.0, ""), ots::ValidationError);
}

TEST_CASE("zero-when encoder") {
  for (const bool complement : {false, true}) {
    ModelIR m;
    const VarRef a = m.add_continuous("a", -20.0, 20.0);
    const VarRef u = m.add_binary("u");
    encode_zero_when(m, a, u, 10.0, complement, "t.zero");
    for (const double uv : {0.0, 1.0}) {
      const bool active = complement ? uv == 0.0 : uv == 1.0;
      for (const double av : {-10.5, -10.0, -4.0, 0.0, 0.5, 10.0, 10.5}) {
        const bool allowed = active ? av == 0.0 : std::abs(av) <= 10.0;
        CHECK(feasible(m, {av, uv}) == allowed);
      }
    }
  }
  ModelIR m;
  const VarRef a = m.add_continuous("a", -1.0, 1.0);
  const VarRef u = m.add_binary("u");
  CHECK_THROWS_AS(encode_zero_when(m, a, u, 0.0, false, "t"), ots::ValidationError);
  CHECK_THROWS_AS(encode_zero_when(m, a, u, -2.0, false, "t"), ots::ValidationError);
}

TEST_CASE("product encoder pins a to the expression or to zero") {
  for (const bool complement : {false, true}) {
    ModelIR m;
    const VarRef a = m.add_continuous("a", -20.0, 20.0);
    const VarRef y = m.add_continuous("y", -2.0, 2.0);
    const VarRef u = m.add_binary("u");
    LinExpr expr;
    expr.add(2.0, y).add(-3.0);  // 2y - 3, within [-7, 1]
    encode_product(m, a, expr, u, 10.0, complement, "t.prod");
    for (const double uv : {0.0, 1.0}) {
      const bool active = complement ? uv == 0.0 : uv == 1.0;
      for (const double yv : {-2.0, -0.5, 0.0, 1.75, 2.0}) {
        const double ev = 2.0 * yv - 3.0;
        for (const double av : {ev, 0.0, ev + 0.25, 0.3}) {
          const bool allowed = active ? av == ev : av == 0.0;
          CHECK(feasible(m, {av, yv, uv}) == allowed);
        }
      }
    }
  }
  ModelIR m;
  const VarRef a = m.add_continuous("a", -1.0, 1.0);
  const VarRef u = m.add_binary("u");
  CHECK_THROWS_AS(encode_product(m, a, LinExpr(1.0), u, 0.0, false, "t"),
                  ots::ValidationError);
}

TEST_CASE("flow equation encoder") {
  ModelIR m;
  const VarRef f = m.add_continuous("f", -50.0, 50.0);
  const VarRef to = m.add_continuous("to", -3.0, 3.0);
  const VarRef from = m.add_continuous("from", -3.0, 3.0);
  const VarRef w = m.add_binary("w");
  const double b = 2.0;
  encode_flow_equation(m, f, b, to, from, w, 2.0 * b * 3.0, "t.flow");

  for (const double tv : {-3.0, -1.0, 0.0, 0.25, 3.0}) {
    for (const double fv : {-3.0, 0.0, 2.0}) {
      const double expected = b * (tv - fv);
      // Closed: the flow equals b times the angle difference, nothing else.
      CHECK(feasible(m, {expected, tv, fv, 0.0}));
      CHECK_FALSE(feasible(m, {expected + 0.5, tv, fv, 0.0}));
      // Open: the flow dies and the angles float free.
      CHECK(feasible(m, {0.0, tv, fv, 1.0}));
      if (expected != 0.0) CHECK_FALSE(feasible(m, {expected, tv, fv, 1.0}));
    }
  }

  CHECK_THROWS_AS(encode_flow_equation(m, f, -1.0, to, from, w, 12.0, "t"),
                  ots::ValidationError);
  CHECK_THROWS_AS(encode_flow_equation(m, f, b, to, from, w, 0.0, "t"), ots::ValidationError);
}

TEST_CASE("absolute limit encoder") {
  ModelIR m;
  const VarRef f = m.add_continuous("f", -500.0, 500.0);
  encode_abs_limit(m, f, 100.0, "t.cap");
  CHECK(feasible(m, {50.0}));
  CHECK(feasible(m, {100.0}));
  CHECK(feasible(m, {-100.0}));  // boundary holds on both sides
  CHECK_FALSE(feasible(m, {-150.0}));
  CHECK_FALSE(feasible(m, {100.001}));
  CHECK_THROWS_AS(encode_abs_limit(m, f, 0.0, "t"), ots::ValidationError);
}

TEST_CASE("or encoder over one, two, and three inputs") {
  for (int arity = 1; arity <= 3; ++arity) {
    ModelIR m;
    const VarRef x = m.add_binary("x");
    std::vector<VarRef> inputs;
    for (int i = 0; i < arity; ++i) inputs.push_back(m.add_binary("i" + std::to_string(i)));
    encode_or(m, x, inputs, "t.or");
    for (int pattern = 0; pattern < (1 << arity); ++pattern) {
      bool any = false;
      std::vector<double> values(static_cast<std::size_t>(arity) + 1, 0.0);
      for (int i = 0; i < arity; ++i) {
        values[static_cast<std::size_t>(i) + 1] = (pattern >> i) & 1;
        any = any || ((pattern >> i) & 1);
      }
      for (const double xv : {0.0, 1.0}) {
        values[0] = xv;
        CHECK(feasible(m, values) == ((xv == 1.0) == any));
      }
    }
  }
  ModelIR m;
  const VarRef x = m.add_binary("x");
  CHECK_THROWS_AS(encode_or(m, x, {}, "t"), ots::ValidationError);
}

TEST_CASE("and-not encoder") {
  ModelIR m;
  const VarRef psi = m.add_binary("psi");
  const VarRef pi = m.add_binary("pi");
  const VarRef w = m.add_binary("w");
  encode_and_not(m, psi, pi, w, "t.andnot");
  for (const double pv : {0.0, 1.0})
    for (const double wv : {0.0, 1.0})
      for (const double sv : {0.0, 1.0}) {
        const bool expected = pv == 1.0 && wv == 0.0;
        CHECK(feasible(m, {sv, pv, wv}) == ((sv == 1.0) == expected));
      }
}

TEST_CASE("disjunction of guarded reaches, the full propagation shape") {
  // pi = OR over neighbors of (pi_neighbor AND NOT w): two neighbors give
  // 16 input patterns, each with a single admissible (psi1, psi2, pi) triple.
  ModelIR m;
  const VarRef pi = m.add_binary("pi");
  const VarRef p1 = m.add_binary("p1");
  const VarRef p2 = m.add_binary("p2");
  const VarRef w1 = m.add_binary("w1");
  const VarRef w2 = m.add_binary("w2");
  const VarRef psi1 = m.add_binary("psi1");
  const VarRef psi2 = m.add_binary("psi2");
  encode_and_not(m, psi1, p1, w1, "t.psi");
  encode_and_not(m, psi2, p2, w2, "t.psi");
  const VarRef reach[] = {psi1, psi2};
  encode_or(m, pi, reach, "t.agg");

  for (int pattern = 0; pattern < 16; ++pattern) {
    const double p1v = pattern & 1, p2v = (pattern >> 1) & 1;
    const double w1v = (pattern >> 2) & 1, w2v = (pattern >> 3) & 1;
    const double e1 = (p1v == 1.0 && w1v == 0.0) ? 1.0 : 0.0;
    const double e2 = (p2v == 1.0 && w2v == 0.0) ? 1.0 : 0.0;
    const double epi = (e1 == 1.0 || e2 == 1.0) ? 1.0 : 0.0;
    int admissible = 0;
    for (int guess = 0; guess < 8; ++guess) {
      const double s1 = guess & 1, s2 = (guess >> 1) & 1, pv = (guess >> 2) & 1;
      const bool ok = feasible(m, {pv, p1v, p2v, w1v, w2v, s1, s2});
      if (ok) {
        ++admissible;
        CHECK(s1 == e1);
        CHECK(s2 == e2);
        CHECK(pv == epi);
      }
    }
    CHECK(admissible == 1);
  }
}
