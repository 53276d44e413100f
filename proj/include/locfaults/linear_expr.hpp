#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace locfaults {

using Int = long long;

struct UnboundVariable : std::runtime_error {
  explicit UnboundVariable(const std::string& what) : std::runtime_error(what) {}
};

// Relational operators of the comparison language. Lt and Gt exist on the
// surface; constraint construction folds them into Le/Ge (integer
// tightening) so that negation stays closed over {Eq, Ne, Le, Ge}.
enum class Relop { Eq, Ne, Lt, Le, Gt, Ge };

inline const char* relop_symbol(Relop op) {
  switch (op) {
    case Relop::Eq: return "==";
    case Relop::Ne: return "!=";
    case Relop::Lt: return "<";
    case Relop::Le: return "<=";
    case Relop::Gt: return ">";
    case Relop::Ge: return ">=";
  }
  return "?";
}

inline bool relop_holds(Relop op, Int lhs, Int rhs) {
  switch (op) {
    case Relop::Eq: return lhs == rhs;
    case Relop::Ne: return lhs != rhs;
    case Relop::Lt: return lhs < rhs;
    case Relop::Le: return lhs <= rhs;
    case Relop::Gt: return lhs > rhs;
    case Relop::Ge: return lhs >= rhs;
  }
  return false;
}

inline std::string var_display(const std::string& v) { return v; }

// Linear integer expression: sum of coefficient*variable terms plus a
// constant. Zero coefficients are never stored and terms follow the variable
// ordering, so two equal expressions have identical representations.
template <typename Var>
class LinearExpr {
 public:
  LinearExpr() = default;
  explicit LinearExpr(Int constant) : constant_(constant) {}

  static LinearExpr variable(Var v, Int coef = 1) {
    LinearExpr e;
    e.add_term(std::move(v), coef);
    return e;
  }

  void add_term(const Var& v, Int coef) {
    if (coef == 0) return;
    auto it = terms_.find(v);
    if (it == terms_.end()) {
      terms_.emplace(v, coef);
    } else {
      it->second += coef;
      if (it->second == 0) terms_.erase(it);
    }
  }

  void add_constant(Int c) { constant_ += c; }

  const std::map<Var, Int>& terms() const { return terms_; }
  Int constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }

  LinearExpr& operator+=(const LinearExpr& o) {
    for (const auto& [v, c] : o.terms_) add_term(v, c);
    constant_ += o.constant_;
    return *this;
  }

  LinearExpr& operator-=(const LinearExpr& o) {
    for (const auto& [v, c] : o.terms_) add_term(v, -c);
    constant_ -= o.constant_;
    return *this;
  }

  friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
  friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }

  LinearExpr negated() const {
    LinearExpr e;
    for (const auto& [v, c] : terms_) e.terms_.emplace(v, -c);
    e.constant_ = -constant_;
    return e;
  }

  LinearExpr scaled(Int k) const {
    LinearExpr e;
    if (k != 0) {
      for (const auto& [v, c] : terms_) e.terms_.emplace(v, c * k);
      e.constant_ = constant_ * k;
    }
    return e;
  }

  Int evaluate(const std::map<Var, Int>& env) const {
    Int acc = constant_;
    for (const auto& [v, c] : terms_) {
      auto it = env.find(v);
      if (it == env.end()) throw UnboundVariable("unbound variable " + var_display(v));
      acc += c * it->second;
    }
    return acc;
  }

  // Rebuilds the expression over another variable type (used when renaming
  // program variables into their per-path versions).
  template <typename Var2, typename Fn>
  LinearExpr<Var2> transform(Fn&& fn) const {
    LinearExpr<Var2> e(constant_);
    for (const auto& [v, c] : terms_) e.add_term(fn(v), c);
    return e;
  }

  bool operator==(const LinearExpr&) const = default;
  auto operator<=>(const LinearExpr&) const = default;

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, c] : terms_) {
      if (first) {
        if (c == -1) {
          os << "-";
        } else if (c != 1) {
          os << c << "*";
        }
      } else {
        os << (c < 0 ? " - " : " + ");
        Int a = c < 0 ? -c : c;
        if (a != 1) os << a << "*";
      }
      os << var_display(v);
      first = false;
    }
    if (first) {
      os << constant_;
    } else if (constant_ != 0) {
      os << (constant_ < 0 ? " - " : " + ") << (constant_ < 0 ? -constant_ : constant_);
    }
    return os.str();
  }

 private:
  std::map<Var, Int> terms_;
  Int constant_ = 0;
};

}  // namespace locfaults
