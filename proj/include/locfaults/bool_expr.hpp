#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "locfaults/linear_expr.hpp"

namespace locfaults {

// Boolean combination of linear comparisons: literals, comparisons, and
// !/&&/|| nodes. This is the expression form used by pre/postconditions and
// branch guards.
template <typename Var>
struct BoolExpr {
  enum class Kind { Lit, Cmp, Not, And, Or };

  Kind kind = Kind::Lit;
  bool lit = true;                      // Lit
  LinearExpr<Var> lhs, rhs;             // Cmp
  Relop op = Relop::Eq;                 // Cmp
  std::vector<BoolExpr> children;       // Not (1) / And / Or

  static BoolExpr literal(bool value) {
    BoolExpr b;
    b.kind = Kind::Lit;
    b.lit = value;
    return b;
  }

  static BoolExpr cmp(LinearExpr<Var> lhs, Relop op, LinearExpr<Var> rhs) {
    BoolExpr b;
    b.kind = Kind::Cmp;
    b.lhs = std::move(lhs);
    b.op = op;
    b.rhs = std::move(rhs);
    return b;
  }

  static BoolExpr negation(BoolExpr inner) {
    BoolExpr b;
    b.kind = Kind::Not;
    b.children.push_back(std::move(inner));
    return b;
  }

  static BoolExpr conjunction(std::vector<BoolExpr> cs) {
    BoolExpr b;
    b.kind = Kind::And;
    b.children = std::move(cs);
    return b;
  }

  static BoolExpr disjunction(std::vector<BoolExpr> cs) {
    BoolExpr b;
    b.kind = Kind::Or;
    b.children = std::move(cs);
    return b;
  }

  bool evaluate(const std::map<Var, Int>& env) const {
    switch (kind) {
      case Kind::Lit: return lit;
      case Kind::Cmp: return relop_holds(op, lhs.evaluate(env), rhs.evaluate(env));
      case Kind::Not: return !children.front().evaluate(env);
      case Kind::And:
        for (const auto& c : children)
          if (!c.evaluate(env)) return false;
        return true;
      case Kind::Or:
        for (const auto& c : children)
          if (c.evaluate(env)) return true;
        return false;
    }
    return false;
  }

  template <typename Var2, typename Fn>
  BoolExpr<Var2> transform(Fn&& fn) const {
    BoolExpr<Var2> b;
    b.kind = static_cast<typename BoolExpr<Var2>::Kind>(kind);
    b.lit = lit;
    b.op = op;
    if (kind == Kind::Cmp) {
      b.lhs = lhs.template transform<Var2>(fn);
      b.rhs = rhs.template transform<Var2>(fn);
    }
    b.children.reserve(children.size());
    for (const auto& c : children) b.children.push_back(c.template transform<Var2>(fn));
    return b;
  }

  bool operator==(const BoolExpr&) const = default;

  std::string str() const {
    switch (kind) {
      case Kind::Lit: return lit ? "true" : "false";
      case Kind::Cmp: return lhs.str() + " " + relop_symbol(op) + " " + rhs.str();
      case Kind::Not: return "!(" + children.front().str() + ")";
      case Kind::And:
      case Kind::Or: {
        const char* sep = kind == Kind::And ? " && " : " || ";
        std::string out;
        for (size_t i = 0; i < children.size(); ++i) {
          if (i) out += sep;
          const auto& c = children[i];
          bool wrap = c.kind == Kind::And || c.kind == Kind::Or;
          out += wrap ? "(" + c.str() + ")" : c.str();
        }
        return out;
      }
    }
    return "";
  }
};

}  // namespace locfaults
