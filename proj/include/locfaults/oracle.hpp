#pragma once

// Test-support oracles. Everything here decides by exhaustive enumeration
// over the finite domains and never calls the branch-and-prune solver, so
// agreement between the two is meaningful.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "locfaults/mcs.hpp"
#include "locfaults/solver.hpp"

namespace locfaults::oracle {

struct OracleTooLarge : std::runtime_error {
  OracleTooLarge() : std::runtime_error("domain product too large for exhaustive enumeration") {}
};

namespace detail {

inline constexpr long long kMaxPoints = 10'000'000;

// Walks every point of the domain box in lexicographic order (ascending per
// variable, first variable slowest) and calls fn(env) until it returns true.
template <typename Fn>
bool enumerate_grid(const std::vector<VersionedVar>& vars, const std::vector<Domain>& doms,
                    Fn&& fn) {
  long long points = 1;
  for (const auto& d : doms) {
    if (d.empty()) return false;
    points *= d.size();
    if (points > kMaxPoints) throw OracleTooLarge();
  }
  std::vector<Int> value(doms.size());
  for (size_t i = 0; i < doms.size(); ++i) value[i] = doms[i].lo;
  Env env;
  for (;;) {
    for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = value[i];
    if (fn(env)) return true;
    size_t i = doms.size();
    while (i > 0) {
      --i;
      if (value[i] < doms[i].hi) {
        ++value[i];
        for (size_t j = i + 1; j < doms.size(); ++j) value[j] = doms[j].lo;
        break;
      }
      if (i == 0) return false;
    }
    if (doms.empty()) return false;
  }
}

}  // namespace detail

// Ground-truth feasibility by exhaustive enumeration. Selectors are chosen
// greedily per point: a soft constraint's selector is on exactly when the
// point satisfies it, which is optimal for both AtMost and blocking clauses.
inline Verdict brute_force_feasible(const Store& store) {
  const auto& vars = store.variables();
  std::vector<Domain> doms;
  doms.reserve(vars.size());
  for (const auto& v : vars) doms.push_back(store.domain_of(v));

  Verdict verdict;
  detail::enumerate_grid(vars, doms, [&](const Env& env) {
    for (const auto& h : store.hard())
      if (!h.evaluate(env)) return false;
    std::vector<bool> on(store.soft().size());
    for (size_t i = 0; i < store.soft().size(); ++i) on[i] = store.soft()[i].evaluate(env);
    if (store.atmost()) {
      int off = 0;
      for (int sel : store.atmost()->selectors)
        if (!on[static_cast<size_t>(sel - 1)]) ++off;
      if (off > store.atmost()->k) return false;
    }
    for (const auto& clause : store.blocking()) {
      bool sat = false;
      for (int sel : clause) sat = sat || on[static_cast<size_t>(sel - 1)];
      if (!sat) return false;
    }
    verdict.feasible = true;
    verdict.witness = env;
    verdict.selectors_on = std::move(on);
    return true;
  });
  return verdict;
}

namespace detail {

struct ViolationMasks {
  std::vector<uint32_t> masks;  // distinct violated-soft masks over hard-feasible points
  bool any_hard_point = false;
};

inline ViolationMasks collect_masks(const std::vector<ConstraintTree>& hard,
                                    const std::vector<Constraint>& soft,
                                    const SolverConfig& config) {
  if (soft.size() > 16) throw OracleTooLarge();
  std::set<VersionedVar> seen;
  std::vector<VersionedVar> vars;
  auto reg = [&](const Constraint& c) {
    for (const auto& [v, coef] : c.lhs().terms())
      if (seen.insert(v).second) vars.push_back(v);
  };
  for (const auto& h : hard) h.for_each_atom(reg);
  for (const auto& s : soft) reg(s);

  std::vector<Domain> doms(vars.size(), Domain{config.default_lo, config.default_hi});
  ViolationMasks out;
  std::set<uint32_t> masks;
  enumerate_grid(vars, doms, [&](const Env& env) {
    for (const auto& h : hard)
      if (!h.evaluate(env)) return false;
    out.any_hard_point = true;
    uint32_t mask = 0;
    for (size_t i = 0; i < soft.size(); ++i)
      if (!soft[i].evaluate(env)) mask |= (1u << i);
    masks.insert(mask);
    return false;  // keep going; we need every distinct mask
  });
  out.masks.assign(masks.begin(), masks.end());
  return out;
}

inline bool mask_correction(const std::vector<uint32_t>& masks, uint32_t subset) {
  for (uint32_t m : masks)
    if ((m & ~subset) == 0) return true;
  return false;
}

template <typename Fn>
void for_each_subset_ascending(int n, int max_size, Fn&& fn) {
  for (int size = 1; size <= max_size && size <= n; ++size) {
    std::vector<int> idx(static_cast<size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<size_t>(i)] = i;
    for (;;) {
      fn(idx);
      int i = size - 1;
      while (i >= 0 && idx[static_cast<size_t>(i)] == n - size + i) --i;
      if (i < 0) break;
      ++idx[static_cast<size_t>(i)];
      for (int j = i + 1; j < size; ++j)
        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace detail

// Reference MCS enumeration: every point of the domain grid is classified
// once, then subsets are tested by ascending size against the recorded
// violation masks (a subset corrects the system exactly when it covers some
// hard-feasible point's violations). Both Mcs invariants are enforced.
inline std::vector<Mcs> mcs_brute_force(const std::vector<ConstraintTree>& hard,
                                        const std::vector<Constraint>& soft, int bound,
                                        const SolverConfig& config = {}) {
  detail::ViolationMasks vm = detail::collect_masks(hard, soft, config);
  for (uint32_t m : vm.masks)
    if (m == 0) throw NotInfeasible();

  int n = static_cast<int>(soft.size());
  std::vector<Mcs> found;
  std::vector<uint32_t> found_masks;
  detail::for_each_subset_ascending(n, std::min(bound, n), [&](const std::vector<int>& idx) {
    uint32_t subset = 0;
    for (int i : idx) subset |= (1u << i);
    for (uint32_t prior : found_masks)
      if ((prior & ~subset) == 0) return;  // superset of a known MCS
    if (!detail::mask_correction(vm.masks, subset)) return;
    for (int c : idx)  // minimality: putting c back must break it again
      if (detail::mask_correction(vm.masks, subset & ~(1u << c))) return;
    found.push_back(locfaults::detail::make_mcs(idx, soft));
    found_masks.push_back(subset);
  });
  return found;
}

// Reference MUS enumeration (soft-index sets): minimal soft subsets that are
// infeasible together with the hard constraints.
inline std::vector<std::vector<int>> mus_brute_force(const std::vector<ConstraintTree>& hard,
                                                     const std::vector<Constraint>& soft,
                                                     const SolverConfig& config = {}) {
  detail::ViolationMasks vm = detail::collect_masks(hard, soft, config);
  int n = static_cast<int>(soft.size());

  // sat-masks: which soft subsets each hard-feasible point satisfies
  std::vector<uint32_t> sat;
  sat.reserve(vm.masks.size());
  uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
  for (uint32_t m : vm.masks) sat.push_back(full & ~m);

  auto subset_sat = [&](uint32_t subset) {
    for (uint32_t s : sat)
      if ((subset & ~s) == 0) return true;
    return false;
  };

  if (!vm.any_hard_point) return {{}};  // hard alone is already infeasible

  std::vector<std::vector<int>> found;
  std::vector<uint32_t> found_masks;
  detail::for_each_subset_ascending(n, n, [&](const std::vector<int>& idx) {
    uint32_t subset = 0;
    for (int i : idx) subset |= (1u << i);
    for (uint32_t prior : found_masks)
      if ((prior & ~subset) == 0) return;  // superset of a known MUS
    if (subset_sat(subset)) return;        // still satisfiable
    for (int c : idx)                      // minimality
      if (!subset_sat(subset & ~(1u << c))) return;
    found.push_back(idx);
    found_masks.push_back(subset);
  });
  return found;
}

// True when `candidate` is an irreducible hitting set of the family: it
// meets every member and no proper subset does.
inline bool mus_hitting_check(const std::vector<std::vector<int>>& family,
                              const std::vector<int>& candidate) {
  auto hits_all = [&](const std::set<int>& h) {
    for (const auto& member : family) {
      bool hit = false;
      for (int x : member) hit = hit || h.count(x);
      if (!hit) return false;
    }
    return true;
  };
  std::set<int> cand(candidate.begin(), candidate.end());
  if (!hits_all(cand)) return false;
  for (int drop : cand) {
    std::set<int> smaller = cand;
    smaller.erase(drop);
    if (hits_all(smaller)) return false;
  }
  return true;
}

// All irreducible hitting sets of a family over elements 0..n-1.
inline std::vector<std::vector<int>> irreducible_hitting_sets(
    const std::vector<std::vector<int>>& family, int n) {
  std::vector<std::vector<int>> out;
  detail::for_each_subset_ascending(n, n, [&](const std::vector<int>& idx) {
    if (mus_hitting_check(family, idx)) out.push_back(idx);
  });
  return out;
}

}  // namespace locfaults::oracle
