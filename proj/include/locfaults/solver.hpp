#pragma once

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <vector>

#include "locfaults/constraints.hpp"

namespace locfaults {

struct DomainTooLarge : std::runtime_error {
  DomainTooLarge() : std::runtime_error("search budget exceeded (domain too large)") {}
};

struct Domain {
  Int lo = 0;
  Int hi = 0;

  bool empty() const { return lo > hi; }
  bool singleton() const { return lo == hi; }
  Int size() const { return empty() ? 0 : hi - lo + 1; }
};

struct SolverConfig {
  Int default_lo = -1'000'000;
  Int default_hi = 1'000'000;
  long long node_budget = 1'000'000;  // branch nodes per is_feasible call
  bool trace = false;
};

struct Verdict {
  bool feasible = false;
  Env witness;                     // one value per registered variable
  std::vector<bool> selectors_on;  // selector i (1-based) at index i-1
};

// Constraint store: hard constraint trees, soft constraints guarded by
// selector variables, an optional AtMost bound on how many selectors may be
// off, and blocking clauses requiring at least one listed selector on.
class Store {
 public:
  explicit Store(SolverConfig config = {}) : config_(config) {}

  void add_hard(const Constraint& c) { add_hard(ConstraintTree::atom(c)); }

  void add_hard(const ConstraintTree& t) {
    hard_.push_back(t);
    t.for_each_atom([&](const Constraint& a) { register_vars(a); });
  }

  // Returns the selector id (dense, 1-based) guarding the constraint.
  int add_soft(const Constraint& c) {
    soft_.push_back(c);
    register_vars(c);
    return static_cast<int>(soft_.size());
  }

  // At most k of the listed selectors may be off.
  void set_atmost(std::vector<int> selectors, int k) {
    atmost_ = AtMost{std::move(selectors), k};
  }

  void clear_atmost() { atmost_.reset(); }

  // At least one of the listed selectors must be on (blocks every superset
  // of an already-found correction set).
  void add_blocking_clause(std::vector<int> selectors) {
    blocking_.push_back(std::move(selectors));
  }

  void set_domain(const VersionedVar& v, Int lo, Int hi) {
    register_var(v);
    domains_[v] = Domain{lo, hi};
  }

  struct AtMost {
    std::vector<int> selectors;
    int k = 0;
  };

  const std::vector<ConstraintTree>& hard() const { return hard_; }
  const std::vector<Constraint>& soft() const { return soft_; }
  const std::optional<AtMost>& atmost() const { return atmost_; }
  const std::vector<std::vector<int>>& blocking() const { return blocking_; }
  const std::vector<VersionedVar>& variables() const { return vars_; }
  const SolverConfig& config() const { return config_; }

  Domain domain_of(const VersionedVar& v) const {
    auto it = domains_.find(v);
    if (it != domains_.end()) return it->second;
    return Domain{config_.default_lo, config_.default_hi};
  }

 private:
  void register_vars(const Constraint& c) {
    for (const auto& [v, coef] : c.lhs().terms()) register_var(v);
  }

  void register_var(const VersionedVar& v) {
    if (seen_.insert(v).second) vars_.push_back(v);
  }

  std::vector<ConstraintTree> hard_;
  std::vector<Constraint> soft_;
  std::optional<AtMost> atmost_;
  std::vector<std::vector<int>> blocking_;
  std::map<VersionedVar, Domain> domains_;
  std::vector<VersionedVar> vars_;  // registration order = branching order
  std::set<VersionedVar> seen_;
  SolverConfig config_;
};

namespace detail {

inline Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int ceil_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

enum class Status { Entailed, Refuted, Unknown };

// Branch-and-prune search over one store. Works on value-copied states, so
// the store itself is never mutated.
class Search {
 public:
  explicit Search(const Store& store) : store_(store) {
    for (const auto& v : store.variables()) index_.emplace(v, static_cast<int>(index_.size()));
  }

  Verdict run() {
    State root;
    root.dom.reserve(store_.variables().size());
    for (const auto& v : store_.variables()) root.dom.push_back(store_.domain_of(v));
    root.sel.assign(store_.soft().size(), 0);
    for (const auto& t : store_.hard()) activate(root, t);

    Verdict verdict;
    if (auto leaf = search(root)) {
      verdict.feasible = true;
      verdict.witness = std::move(leaf->first);
      verdict.selectors_on = std::move(leaf->second);
      self_check(verdict);
    }
    return verdict;
  }

 private:
  struct State {
    std::vector<Domain> dom;
    std::vector<int8_t> sel;  // 0 undecided, 1 on, 2 off
    std::vector<Constraint> active;
    std::vector<ConstraintTree> pending;  // disjunctions awaiting a case split
  };

  void activate(State& st, const ConstraintTree& t) {
    switch (t.kind()) {
      case ConstraintTree::Kind::Atom: st.active.push_back(t.as_atom()); break;
      case ConstraintTree::Kind::All:
        for (const auto& c : t.children()) activate(st, c);
        break;
      case ConstraintTree::Kind::Any: st.pending.push_back(t); break;
    }
  }

  // Interval of the constraint's left-hand side over the current box.
  std::pair<Int, Int> range(const State& st, const Constraint& c) const {
    Int lo = 0, hi = 0;
    for (const auto& [v, coef] : c.lhs().terms()) {
      const Domain& d = st.dom[var_index(v)];
      if (coef > 0) {
        lo += coef * d.lo;
        hi += coef * d.hi;
      } else {
        lo += coef * d.hi;
        hi += coef * d.lo;
      }
    }
    return {lo, hi};
  }

  Status atom_status(const State& st, const Constraint& c) const {
    auto [lo, hi] = range(st, c);
    switch (c.relop()) {
      case Relop::Le:
        if (hi <= c.rhs()) return Status::Entailed;
        if (lo > c.rhs()) return Status::Refuted;
        return Status::Unknown;
      case Relop::Ge:
        if (lo >= c.rhs()) return Status::Entailed;
        if (hi < c.rhs()) return Status::Refuted;
        return Status::Unknown;
      case Relop::Eq:
        if (lo == c.rhs() && hi == c.rhs()) return Status::Entailed;
        if (c.rhs() < lo || c.rhs() > hi) return Status::Refuted;
        return Status::Unknown;
      case Relop::Ne:
        if (c.rhs() < lo || c.rhs() > hi) return Status::Entailed;
        if (lo == c.rhs() && hi == c.rhs()) return Status::Refuted;
        return Status::Unknown;
      default: return Status::Unknown;
    }
  }

  Status tree_status(const State& st, const ConstraintTree& t) const {
    switch (t.kind()) {
      case ConstraintTree::Kind::Atom: return atom_status(st, t.as_atom());
      case ConstraintTree::Kind::All: {
        bool unknown = false;
        for (const auto& c : t.children()) {
          Status s = tree_status(st, c);
          if (s == Status::Refuted) return Status::Refuted;
          if (s == Status::Unknown) unknown = true;
        }
        return unknown ? Status::Unknown : Status::Entailed;
      }
      case ConstraintTree::Kind::Any: {
        bool unknown = false;
        for (const auto& c : t.children()) {
          Status s = tree_status(st, c);
          if (s == Status::Entailed) return Status::Entailed;
          if (s == Status::Unknown) unknown = true;
        }
        return unknown ? Status::Unknown : Status::Refuted;
      }
    }
    return Status::Unknown;
  }

  bool tighten(State& st, int vi, Int lo, Int hi, const Constraint& why) {
    Domain& d = st.dom[vi];
    Int nlo = std::max(d.lo, lo);
    Int nhi = std::min(d.hi, hi);
    if (nlo == d.lo && nhi == d.hi) return false;
    if (store_.config().trace)
      std::cerr << "[prune] " << var_display(store_.variables()[vi]) << ": [" << d.lo << ","
                << d.hi << "] -> [" << nlo << "," << nhi << "] by " << why.str() << "\n";
    d.lo = nlo;
    d.hi = nhi;
    return true;
  }

  // Bounds-consistency shaving of one atom; false signals an empty domain.
  bool shave(State& st, const Constraint& c, bool& changed) {
    const auto& terms = c.lhs().terms();
    auto [emin, emax] = range(st, c);
    for (const auto& [v, coef] : terms) {
      int vi = var_index(v);
      const Domain d = st.dom[vi];
      Int tmin = coef > 0 ? coef * d.lo : coef * d.hi;
      Int tmax = coef > 0 ? coef * d.hi : coef * d.lo;
      Int others_min = emin - tmin;
      Int others_max = emax - tmax;
      switch (c.relop()) {
        case Relop::Le: {
          // coef*x <= rhs - others_min
          Int bound = c.rhs() - others_min;
          if (coef > 0)
            changed |= tighten(st, vi, d.lo, floor_div(bound, coef), c);
          else
            changed |= tighten(st, vi, ceil_div(bound, coef), d.hi, c);
          break;
        }
        case Relop::Ge: {
          // coef*x >= rhs - others_max
          Int bound = c.rhs() - others_max;
          if (coef > 0)
            changed |= tighten(st, vi, ceil_div(bound, coef), d.hi, c);
          else
            changed |= tighten(st, vi, d.lo, floor_div(bound, coef), c);
          break;
        }
        case Relop::Eq: {
          Int ub = c.rhs() - others_min;
          Int lb = c.rhs() - others_max;
          if (coef > 0) {
            changed |= tighten(st, vi, ceil_div(lb, coef), floor_div(ub, coef), c);
          } else {
            changed |= tighten(st, vi, ceil_div(ub, coef), floor_div(lb, coef), c);
          }
          break;
        }
        case Relop::Ne: {
          // prunes only at the domain bounds, once every other term is fixed
          if (others_min != others_max) break;
          Int residue = c.rhs() - others_min;
          if (residue % coef != 0) break;
          Int banned = residue / coef;
          Domain& dd = st.dom[vi];
          if (dd.lo == banned && dd.hi == banned) return false;
          if (dd.lo == banned) {
            ++dd.lo;
            changed = true;
          } else if (dd.hi == banned) {
            --dd.hi;
            changed = true;
          }
          break;
        }
        default: break;
      }
      if (st.dom[vi].empty()) return false;
      // refresh the cached expression range after a prune
      if (changed) {
        auto r = range(st, c);
        emin = r.first;
        emax = r.second;
      }
    }
    return true;
  }

  bool propagate(State& st) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : st.active) {
        if (!shave(st, c, changed)) return false;
        if (atom_status(st, c) == Status::Refuted) return false;
      }
    }
    for (const auto& t : st.pending)
      if (tree_status(st, t) == Status::Refuted) return false;
    return true;
  }

  bool blocking_violated(const State& st) const {
    for (const auto& clause : store_.blocking()) {
      bool possible = false;
      for (int sel : clause) {
        if (st.sel[static_cast<size_t>(sel - 1)] != 2) {
          possible = true;
          break;
        }
      }
      if (!possible) return true;
    }
    return false;
  }

  int off_count(const State& st) const {
    if (!store_.atmost()) return 0;
    int off = 0;
    for (int sel : store_.atmost()->selectors)
      if (st.sel[static_cast<size_t>(sel - 1)] == 2) ++off;
    return off;
  }

  using Leaf = std::pair<Env, std::vector<bool>>;

  std::optional<Leaf> search(State st) {
    if (++nodes_ > store_.config().node_budget) throw DomainTooLarge();
    if (!propagate(st)) return std::nullopt;

    // selectors first: enforcement of a soft constraint is by inclusion
    for (size_t i = 0; i < st.sel.size(); ++i) {
      if (st.sel[i] != 0) continue;
      State on = st;
      on.sel[i] = 1;
      activate(on, ConstraintTree::atom(store_.soft()[i]));
      if (auto leaf = search(std::move(on))) return leaf;
      st.sel[i] = 2;
      if (store_.atmost() && off_count(st) > store_.atmost()->k) return std::nullopt;
      if (blocking_violated(st)) return std::nullopt;
      return search(std::move(st));
    }

    // case splits on disjunctions
    for (size_t i = 0; i < st.pending.size(); ++i) {
      Status s = tree_status(st, st.pending[i]);
      if (s == Status::Entailed) continue;
      if (s == Status::Refuted) return std::nullopt;
      ConstraintTree t = st.pending[i];
      st.pending.erase(st.pending.begin() + static_cast<std::ptrdiff_t>(i));
      for (const auto& child : t.children()) {
        State branch = st;
        activate(branch, child);
        if (auto leaf = search(std::move(branch))) return leaf;
      }
      return std::nullopt;
    }

    // case splits on disequalities: expr != c  ->  expr <= c-1 | expr >= c+1
    for (size_t i = 0; i < st.active.size(); ++i) {
      const Constraint& c = st.active[i];
      if (c.relop() != Relop::Ne || atom_status(st, c) != Status::Unknown) continue;
      Constraint low(c.lhs(), Relop::Le, VarExpr(c.rhs() - 1), c.label());
      Constraint high(c.lhs(), Relop::Ge, VarExpr(c.rhs() + 1), c.label());
      State left = st;
      left.active[i] = low;
      if (auto leaf = search(std::move(left))) return leaf;
      st.active[i] = high;
      return search(std::move(st));
    }

    // accept as soon as the whole box is a solution
    bool all_entailed = true;
    for (const auto& c : st.active) {
      if (atom_status(st, c) != Status::Entailed) {
        all_entailed = false;
        break;
      }
    }
    if (all_entailed) return make_leaf(st);

    // bisect the widest domain, smaller half first
    int pick = -1;
    Int best = 1;
    for (size_t i = 0; i < st.dom.size(); ++i) {
      if (st.dom[i].size() > best) {
        best = st.dom[i].size();
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) return std::nullopt;  // fully fixed yet not entailed: refuted box
    Domain d = st.dom[static_cast<size_t>(pick)];
    Int mid = d.lo + (d.hi - d.lo) / 2;
    State lower = st;
    lower.dom[static_cast<size_t>(pick)] = Domain{d.lo, mid};
    if (auto leaf = search(std::move(lower))) return leaf;
    st.dom[static_cast<size_t>(pick)] = Domain{mid + 1, d.hi};
    return search(std::move(st));
  }

  Leaf make_leaf(const State& st) const {
    Env env;
    for (size_t i = 0; i < st.dom.size(); ++i) env[store_.variables()[i]] = st.dom[i].lo;
    std::vector<bool> sel(st.sel.size());
    for (size_t i = 0; i < st.sel.size(); ++i) sel[i] = st.sel[i] == 1;
    return {env, sel};
  }

  // Exact re-evaluation of the leaf; the search is only trusted after this.
  void self_check(const Verdict& v) const {
    for (const auto& t : store_.hard())
      if (!t.evaluate(v.witness)) throw std::logic_error("solver witness violates hard constraint");
    int off = 0;
    for (size_t i = 0; i < store_.soft().size(); ++i) {
      if (v.selectors_on[i]) {
        if (!store_.soft()[i].evaluate(v.witness))
          throw std::logic_error("solver witness violates enabled soft constraint");
      }
    }
    if (store_.atmost()) {
      for (int sel : store_.atmost()->selectors)
        if (!v.selectors_on[static_cast<size_t>(sel - 1)]) ++off;
      if (off > store_.atmost()->k) throw std::logic_error("solver witness violates AtMost");
    }
    for (const auto& clause : store_.blocking()) {
      bool sat = false;
      for (int sel : clause) sat = sat || v.selectors_on[static_cast<size_t>(sel - 1)];
      if (!sat) throw std::logic_error("solver witness violates blocking clause");
    }
  }

  int var_index(const VersionedVar& v) const { return index_.at(v); }

  const Store& store_;
  std::map<VersionedVar, int> index_;
  long long nodes_ = 0;
};

}  // namespace detail

// Complete feasibility decision over the store's finite domains.
// Deterministic: fixed variable order (registration), ascending values,
// selectors on-first. Throws DomainTooLarge past the node budget.
inline Verdict is_feasible(const Store& store) { return detail::Search(store).run(); }

}  // namespace locfaults
