#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "ots/errors.hpp"
#include "ots/milp.hpp"

namespace ots::milp {

namespace {

// Shortest round-trip decimal form, identical across platforms.
std::string num(double value) {
  if (value == 0.0) value = 0.0;  // normalize -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void append_terms(std::string& out, const std::vector<LinTerm>& terms,
                  const std::vector<VarInfo>& vars, bool lead_with_sign) {
  bool first = !lead_with_sign;
  for (const LinTerm& t : terms) {
    const double mag = std::abs(t.coef);
    if (first) {
      if (t.coef < 0) out += "- ";
      first = false;
    } else {
      out += (t.coef < 0) ? " - " : " + ";
    }
    if (mag != 1.0) {
      out += num(mag);
      out += ' ';
    }
    out += vars[static_cast<std::size_t>(t.var)].name;
  }
}

struct Tokenizer {
  const std::string& text;
  std::size_t pos = 0;

  explicit Tokenizer(const std::string& t) : text(t) {}

  // Tokens: identifiers/keywords, numbers, and the punctuation : + - <= >= =
  std::vector<std::string> all() {
    std::vector<std::string> tokens;
    while (pos < text.size()) {
      const char ch = text[pos];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos;
        continue;
      }
      if (ch == ':' || ch == '+' || ch == '-') {
        tokens.emplace_back(1, ch);
        ++pos;
        continue;
      }
      if (ch == '<' || ch == '>') {
        if (pos + 1 >= text.size() || text[pos + 1] != '=')
          throw ParseError("LP: expected '=' after inequality sign");
        tokens.push_back(std::string(1, ch) + "=");
        pos += 2;
        continue;
      }
      if (ch == '=') {
        tokens.emplace_back("=");
        ++pos;
        continue;
      }
      std::size_t end = pos;
      while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])) &&
             text[end] != ':' && text[end] != '+' && text[end] != '<' && text[end] != '>' &&
             text[end] != '=')
        ++end;
      tokens.push_back(text.substr(pos, end - pos));
      pos = end;
    }
    return tokens;
  }
};

bool is_number(const std::string& token, double* value) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto res = std::from_chars(begin, end, *value);
  return res.ec == std::errc() && res.ptr == end;
}

}  // namespace

std::string serialize_lp(const ModelIR& m) {
  std::string out;
  out += "Minimize\n obj:";
  {
    std::string expr;
    if (m.objective_offset() != 0.0 || m.objective().empty())
      expr += num(m.objective_offset());
    if (!m.objective().empty()) {
      if (!expr.empty()) {
        expr += (m.objective().front().coef < 0) ? " - " : " + ";
        std::vector<LinTerm> rest = m.objective();
        const double mag = std::abs(rest.front().coef);
        if (mag != 1.0) {
          expr += num(mag);
          expr += ' ';
        }
        expr += m.vars()[static_cast<std::size_t>(rest.front().var)].name;
        rest.erase(rest.begin());
        append_terms(expr, rest, m.vars(), true);
      } else {
        append_terms(expr, m.objective(), m.vars(), false);
      }
    }
    out += ' ';
    out += expr;
    out += '\n';
  }
  out += "Subject To\n";
  const auto& cons = m.constraints();
  for (std::size_t i = 0; i < cons.size(); ++i) {
    out += ' ';
    out += cons[i].tag;
    out += '#';
    out += std::to_string(i);
    out += ": ";
    append_terms(out, cons[i].terms, m.vars(), false);
    switch (cons[i].sense) {
      case Sense::LE:
        out += " <= ";
        break;
      case Sense::GE:
        out += " >= ";
        break;
      case Sense::EQ:
        out += " = ";
        break;
    }
    out += num(cons[i].rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const VarInfo& info : m.vars()) {
    out += ' ';
    out += num(info.lower);
    out += " <= ";
    out += info.name;
    out += " <= ";
    out += num(info.upper);
    out += '\n';
  }
  bool any_binary = false;
  for (const VarInfo& info : m.vars()) {
    if (info.kind != VarKind::Binary) continue;
    if (!any_binary) {
      out += "Binaries\n";
      any_binary = true;
    }
    out += ' ';
    out += info.name;
    out += '\n';
  }
  out += "End\n";
  return out;
}

ModelIR parse_lp(const std::string& text) {
  std::vector<std::string> tokens = Tokenizer(text).all();
  std::size_t at = 0;
  auto peek = [&]() -> const std::string& {
    static const std::string empty;
    return at < tokens.size() ? tokens[at] : empty;
  };
  auto take = [&]() -> std::string {
    if (at >= tokens.size()) throw ParseError("LP: unexpected end of input");
    return tokens[at++];
  };
  auto expect = [&](const std::string& want) {
    const std::string got = take();
    if (got != want) throw ParseError("LP: expected '" + want + "', got '" + got + "'");
  };

  expect("Minimize");
  expect("obj");
  expect(":");

  struct RawTerm {
    double coef;
    std::string name;
  };
  struct RawRow {
    std::string name;
    std::vector<RawTerm> terms;
    double constant = 0.0;
    Sense sense = Sense::LE;
    double rhs = 0.0;
  };

  // True when tokens[i] opens the next row ("name :").
  auto starts_row = [&](std::size_t i) {
    return i + 1 < tokens.size() && tokens[i + 1] == ":";
  };
  // Reads sign-separated terms until a relational operator or the next row.
  auto parse_expr = [&](std::vector<RawTerm>* terms, double* constant) {
    bool first = true;
    while (at < tokens.size()) {
      double sign = 1.0;
      bool had_sign = false;
      if (peek() == "+" || peek() == "-") {
        had_sign = true;
        sign = (take() == "-") ? -1.0 : 1.0;
      } else if (!first) {
        break;
      }
      if (peek() == "<=" || peek() == ">=" || peek() == "=" || starts_row(at)) {
        if (had_sign) throw ParseError("LP: dangling sign in expression");
        break;
      }
      double value = 0.0;
      if (is_number(peek(), &value)) {
        take();
        double dummy = 0.0;
        const bool ident_follows = at < tokens.size() && !is_number(peek(), &dummy) &&
                                   peek() != "+" && peek() != "-" && peek() != "<=" &&
                                   peek() != ">=" && peek() != "=" && !starts_row(at);
        if (ident_follows)
          terms->push_back({sign * value, take()});
        else
          *constant += sign * value;
      } else {
        terms->push_back({sign, take()});
      }
      first = false;
    }
  };

  RawRow objective;
  parse_expr(&objective.terms, &objective.constant);

  expect("Subject");
  expect("To");

  std::vector<RawRow> rows;
  while (peek() != "Bounds") {
    RawRow row;
    row.name = take();
    expect(":");
    parse_expr(&row.terms, &row.constant);
    const std::string op = take();
    if (op == "<=")
      row.sense = Sense::LE;
    else if (op == ">=")
      row.sense = Sense::GE;
    else if (op == "=")
      row.sense = Sense::EQ;
    else
      throw ParseError("LP: expected a relational operator, got '" + op + "'");
    double rhs = 0.0;
    double sign = 1.0;
    if (peek() == "-") {
      take();
      sign = -1.0;
    }
    if (!is_number(take(), &rhs)) throw ParseError("LP: right-hand side must be a number");
    row.rhs = sign * rhs - row.constant;
    rows.push_back(std::move(row));
  }

  expect("Bounds");
  ModelIR model;
  while (peek() != "Binaries" && peek() != "End") {
    double lower = 0.0, upper = 0.0, sign = 1.0;
    if (peek() == "-") {
      take();
      sign = -1.0;
    }
    if (!is_number(take(), &lower)) throw ParseError("LP: bound lines start with a number");
    lower *= sign;
    expect("<=");
    const std::string name = take();
    expect("<=");
    sign = 1.0;
    if (peek() == "-") {
      take();
      sign = -1.0;
    }
    if (!is_number(take(), &upper)) throw ParseError("LP: bound lines end with a number");
    model.add_continuous(name, lower, sign * upper);
  }

  std::vector<std::string> binaries;
  if (peek() == "Binaries") {
    take();
    while (peek() != "End") binaries.push_back(take());
  }
  expect("End");

  // Rebuild with binary kinds in the original creation order.
  ModelIR out;
  for (const VarInfo& info : model.vars()) {
    const bool is_binary =
        std::find(binaries.begin(), binaries.end(), info.name) != binaries.end();
    out.add_var(info.name, is_binary ? VarKind::Binary : VarKind::Continuous, info.lower,
                info.upper);
  }
  auto resolve = [&](const std::string& name) -> VarRef {
    const auto ref = out.by_name(name);
    if (!ref) throw ParseError("LP: unknown variable '" + name + "'");
    return *ref;
  };
  for (const RawRow& row : rows) {
    LinExpr lhs;
    for (const RawTerm& t : row.terms) lhs.add(t.coef, resolve(t.name));
    const auto hash = row.name.rfind('#');
    std::string tag = (hash == std::string::npos) ? row.name : row.name.substr(0, hash);
    out.add_constraint(lhs, row.sense, row.rhs, std::move(tag));
  }
  LinExpr obj;
  obj.add(objective.constant);
  for (const RawTerm& t : objective.terms) obj.add(t.coef, resolve(t.name));
  out.set_objective(obj);
  return out;
}

}  // namespace ots::milp
