#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "locfaults/ast.hpp"
#include "locfaults/bool_expr.hpp"
#include "locfaults/linear_expr.hpp"

namespace locfaults {

// A program variable at a definite point of one path: versions increase with
// each assignment along the path (inputs are version 0).
struct VersionedVar {
  std::string name;
  int version = 0;

  auto operator<=>(const VersionedVar&) const = default;
};

inline std::string var_display(const VersionedVar& v) {
  return v.name + "#" + std::to_string(v.version);
}

using VarExpr = LinearExpr<VersionedVar>;
using VarBool = BoolExpr<VersionedVar>;
using Env = std::map<VersionedVar, Int>;
using VersionMap = std::map<std::string, int>;

enum class ProvenanceKind {
  Assignment,
  Condition,
  DeviatedCondition,
  Precondition,
  Postcondition,
  CounterExample,
};

struct Provenance {
  int line = 0;
  ProvenanceKind kind = ProvenanceKind::Assignment;

  auto operator<=>(const Provenance&) const = default;
};

// Atomic linear integer constraint in canonical form: variable terms on the
// left, a constant on the right, relop in {==, !=, <=, >=}. Strict
// comparisons are tightened at construction (x < c becomes x <= c-1), which
// keeps negation an involution.
class Constraint {
 public:
  Constraint() = default;

  Constraint(const VarExpr& lhs, Relop op, const VarExpr& rhs, Provenance label = {})
      : label_(label) {
    VarExpr diff = lhs - rhs;
    rhs_ = -diff.constant();
    diff.add_constant(-diff.constant());
    lhs_ = std::move(diff);
    switch (op) {
      case Relop::Lt:
        op_ = Relop::Le;
        rhs_ -= 1;
        break;
      case Relop::Gt:
        op_ = Relop::Ge;
        rhs_ += 1;
        break;
      default:
        op_ = op;
        break;
    }
  }

  const VarExpr& lhs() const { return lhs_; }
  Relop relop() const { return op_; }
  Int rhs() const { return rhs_; }
  const Provenance& label() const { return label_; }
  int line() const { return label_.line; }

  bool evaluate(const Env& env) const { return relop_holds(op_, lhs_.evaluate(env), rhs_); }

  // Integer-exact complement: !(x <= 3) is (x >= 4).
  Constraint negated() const {
    Constraint c = *this;
    switch (op_) {
      case Relop::Eq: c.op_ = Relop::Ne; break;
      case Relop::Ne: c.op_ = Relop::Eq; break;
      case Relop::Le:
        c.op_ = Relop::Ge;
        c.rhs_ += 1;
        break;
      case Relop::Ge:
        c.op_ = Relop::Le;
        c.rhs_ -= 1;
        break;
      default: break;  // Lt/Gt never stored
    }
    return c;
  }

  std::string str() const {
    return lhs_.str() + " " + relop_symbol(op_) + " " + std::to_string(rhs_);
  }

  bool operator==(const Constraint&) const = default;
  auto operator<=>(const Constraint&) const = default;

 private:
  VarExpr lhs_;
  Relop op_ = Relop::Eq;
  Int rhs_ = 0;
  Provenance label_;
};

// Boolean combination of atomic constraints, in negation normal form. The
// translation of a branch condition is usually a plain conjunction, but the
// benchmarks use || in guards, so disjunctive nodes must survive down to the
// solver, which case-splits on them.
class ConstraintTree {
 public:
  enum class Kind { Atom, All, Any };

  ConstraintTree() : kind_(Kind::All) {}

  static ConstraintTree atom(Constraint c) {
    ConstraintTree t;
    t.kind_ = Kind::Atom;
    t.atom_ = std::move(c);
    return t;
  }

  static ConstraintTree all(std::vector<ConstraintTree> children) {
    ConstraintTree t;
    t.kind_ = Kind::All;
    t.children_ = std::move(children);
    return t;
  }

  static ConstraintTree any(std::vector<ConstraintTree> children) {
    ConstraintTree t;
    t.kind_ = Kind::Any;
    t.children_ = std::move(children);
    return t;
  }

  Kind kind() const { return kind_; }
  const Constraint& as_atom() const { return atom_; }
  const std::vector<ConstraintTree>& children() const { return children_; }

  bool evaluate(const Env& env) const {
    switch (kind_) {
      case Kind::Atom: return atom_.evaluate(env);
      case Kind::All:
        for (const auto& c : children_)
          if (!c.evaluate(env)) return false;
        return true;
      case Kind::Any:
        for (const auto& c : children_)
          if (c.evaluate(env)) return true;
        return false;
    }
    return false;
  }

  ConstraintTree negated() const {
    switch (kind_) {
      case Kind::Atom: return atom(atom_.negated());
      case Kind::All:
      case Kind::Any: {
        std::vector<ConstraintTree> flipped;
        flipped.reserve(children_.size());
        for (const auto& c : children_) flipped.push_back(c.negated());
        return kind_ == Kind::All ? any(std::move(flipped)) : all(std::move(flipped));
      }
    }
    return {};
  }

  // The list of atoms when the tree is a pure conjunction, nullopt otherwise.
  std::optional<std::vector<Constraint>> flatten_conjunction() const {
    std::vector<Constraint> atoms;
    if (!collect_conjuncts(atoms)) return std::nullopt;
    return atoms;
  }

  template <typename Fn>
  void for_each_atom(Fn&& fn) const {
    if (kind_ == Kind::Atom) {
      fn(atom_);
    } else {
      for (const auto& c : children_) c.for_each_atom(fn);
    }
  }

  std::string str() const {
    switch (kind_) {
      case Kind::Atom: return atom_.str();
      case Kind::All:
      case Kind::Any: {
        if (children_.empty()) return kind_ == Kind::All ? "true" : "false";
        std::string out = "(";
        for (size_t i = 0; i < children_.size(); ++i) {
          if (i) out += kind_ == Kind::All ? " && " : " || ";
          out += children_[i].str();
        }
        return out + ")";
      }
    }
    return "";
  }

  bool operator==(const ConstraintTree&) const = default;

 private:
  bool collect_conjuncts(std::vector<Constraint>& atoms) const {
    switch (kind_) {
      case Kind::Atom:
        atoms.push_back(atom_);
        return true;
      case Kind::All:
        for (const auto& c : children_)
          if (!c.collect_conjuncts(atoms)) return false;
        return true;
      case Kind::Any:
        return children_.size() == 1 && children_.front().collect_conjuncts(atoms);
    }
    return false;
  }

  Kind kind_ = Kind::All;
  Constraint atom_;
  std::vector<ConstraintTree> children_;
};

// ---------------------------------------------------------------------------
// cstr: translation of program constructs into constraints
// ---------------------------------------------------------------------------

// target := rhs turns into the equality target - rhs = 0.
inline Constraint cstr_assign(const VersionedVar& target, const VarExpr& rhs, int line) {
  return Constraint(VarExpr::variable(target), Relop::Eq, rhs,
                    Provenance{line, ProvenanceKind::Assignment});
}

namespace detail {

inline ConstraintTree to_tree(const VarBool& b, bool negate, const Provenance& label) {
  using BK = VarBool::Kind;
  switch (b.kind) {
    case BK::Lit:
      // true -> empty conjunction, false -> empty disjunction
      return (b.lit != negate) ? ConstraintTree::all({}) : ConstraintTree::any({});
    case BK::Cmp: {
      Constraint c(b.lhs, b.op, b.rhs, label);
      return ConstraintTree::atom(negate ? c.negated() : c);
    }
    case BK::Not:
      return to_tree(b.children.front(), !negate, label);
    case BK::And:
    case BK::Or: {
      std::vector<ConstraintTree> parts;
      parts.reserve(b.children.size());
      for (const auto& c : b.children) parts.push_back(to_tree(c, negate, label));
      bool conj = (b.kind == BK::And) != negate;
      return conj ? ConstraintTree::all(std::move(parts)) : ConstraintTree::any(std::move(parts));
    }
  }
  return {};
}

}  // namespace detail

// Normalizes a condition into negation normal form over canonical atoms.
// Negations are pushed to the leaves (De Morgan) and folded into the atoms.
inline ConstraintTree cstr_cond(const VarBool& cond, Provenance label) {
  return detail::to_tree(cond, false, label);
}

// ---------------------------------------------------------------------------
// versioning
// ---------------------------------------------------------------------------

inline VersionedVar at_version(const std::string& name, const VersionMap& versions) {
  auto it = versions.find(name);
  return VersionedVar{name, it == versions.end() ? 0 : it->second};
}

inline VarExpr at_versions(const NameExpr& e, const VersionMap& versions) {
  return e.transform<VersionedVar>([&](const std::string& n) { return at_version(n, versions); });
}

inline VarBool at_versions(const NameBool& b, const VersionMap& versions) {
  return b.transform<VersionedVar>([&](const std::string& n) { return at_version(n, versions); });
}

}  // namespace locfaults
