#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "locfaults/solver.hpp"

namespace locfaults {

struct NotInfeasible : std::runtime_error {
  NotInfeasible() : std::runtime_error("constraint system is feasible; nothing to correct") {}
};

// A minimal correction set: removing `constraints` from the soft set makes
// the rest feasible, and putting any one of them back breaks it again.
struct Mcs {
  std::vector<int> soft_indices;        // 0-based indices into the soft list
  std::vector<Constraint> constraints;  // the corresponding constraints
  std::vector<int> lines;               // sorted, deduplicated provenance lines

  size_t cardinality() const { return soft_indices.size(); }

  bool operator==(const Mcs&) const = default;
};

namespace detail {

inline Mcs make_mcs(const std::vector<int>& soft_indices, const std::vector<Constraint>& soft) {
  Mcs m;
  m.soft_indices = soft_indices;
  std::set<int> lines;
  for (int i : soft_indices) {
    m.constraints.push_back(soft[static_cast<size_t>(i)]);
    lines.insert(soft[static_cast<size_t>(i)].line());
  }
  m.lines.assign(lines.begin(), lines.end());
  return m;
}

// Minimality of a candidate: hard ∧ (soft \ U) ∧ {c} must be infeasible for
// every c in U. Cheap re-derivation, so the invariant is checked rather than
// trusted to the enumeration order.
inline bool is_minimal_correction(const std::vector<ConstraintTree>& hard,
                                  const std::vector<Constraint>& soft,
                                  const std::vector<int>& candidate, const SolverConfig& config) {
  std::set<int> removed(candidate.begin(), candidate.end());
  for (int put_back : candidate) {
    Store st(config);
    for (const auto& h : hard) st.add_hard(h);
    for (size_t i = 0; i < soft.size(); ++i)
      if (!removed.count(static_cast<int>(i)) || static_cast<int>(i) == put_back)
        st.add_hard(soft[i]);
    if (is_feasible(st).feasible) return false;
  }
  return true;
}

}  // namespace detail

// Enumerates every MCS of cardinality <= mcs_bound of the soft constraints
// relative to the hard ones, in nondecreasing cardinality. Selector
// variables guard the soft constraints; each layer k solves under
// AtMost(off, k) and blocks each found set in both the layer store and the
// global store. Throws NotInfeasible when hard ∧ soft is satisfiable.
inline std::vector<Mcs> mcs_enumerate(const std::vector<ConstraintTree>& hard,
                                      const std::vector<Constraint>& soft, int mcs_bound,
                                      const SolverConfig& config = {}) {
  if (mcs_bound < 1) throw std::invalid_argument("mcs_bound must be >= 1");

  Store store(config);
  for (const auto& h : hard) store.add_hard(h);
  std::vector<int> all_selectors;
  for (const auto& s : soft) all_selectors.push_back(store.add_soft(s));

  // precondition: the full system must be infeasible
  store.set_atmost(all_selectors, 0);
  if (is_feasible(store).feasible) throw NotInfeasible();

  std::vector<Mcs> found;
  int n = static_cast<int>(soft.size());
  for (int k = 1; k <= std::min(mcs_bound, n); ++k) {
    store.clear_atmost();
    if (!is_feasible(store).feasible) break;  // every correction already blocked
    store.set_atmost(all_selectors, k);
    for (;;) {
      Verdict v = is_feasible(store);
      if (!v.feasible) break;
      std::vector<int> off;
      std::vector<int> off_selectors;
      for (size_t i = 0; i < v.selectors_on.size(); ++i) {
        if (!v.selectors_on[i]) {
          off.push_back(static_cast<int>(i));
          off_selectors.push_back(static_cast<int>(i) + 1);
        }
      }
      if (off.empty()) throw std::logic_error("zero-off witness on an infeasible system");
      if (detail::is_minimal_correction(hard, soft, off, config))
        found.push_back(detail::make_mcs(off, soft));
      store.add_blocking_clause(off_selectors);
    }
  }
  // reporting order: by cardinality, then lexicographic on the line sets
  std::stable_sort(found.begin(), found.end(), [](const Mcs& a, const Mcs& b) {
    if (a.cardinality() != b.cardinality()) return a.cardinality() < b.cardinality();
    if (a.lines != b.lines) return a.lines < b.lines;
    return a.soft_indices < b.soft_indices;
  });
  return found;
}

}  // namespace locfaults
