#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "locfaults/cfg.hpp"
#include "locfaults/interp.hpp"
#include "locfaults/mcs.hpp"

namespace locfaults {

using CounterExample = std::map<std::string, Int>;

struct CounterExampleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The inputs satisfy the postcondition: there is nothing to localize.
struct NotACounterExample : CounterExampleError {
  NotACounterExample() : CounterExampleError("inputs satisfy the postcondition") {}
};

struct PreconditionViolated : CounterExampleError {
  PreconditionViolated() : CounterExampleError("inputs violate the precondition") {}
};

struct MalformedCounterExample : CounterExampleError {
  explicit MalformedCounterExample(const std::string& what) : CounterExampleError(what) {}
};

// One report row: the set of deviated condition lines (empty for the plain
// counterexample path) and the MCSs of the corresponding constraint system.
// The hard/soft stores are kept so tests can re-check feasibility claims.
struct ReportEntry {
  std::vector<int> deviation_path;  // condition lines in path order
  std::set<int> deviations;        // same lines as a set (rendering order)
  std::vector<Mcs> mcs_list;
  std::vector<ConstraintTree> hard_store;
  std::vector<Constraint> soft_store;
};

struct McsReport {
  CounterExample counterexample;
  std::vector<ReportEntry> entries;
  double preprocess_ms = 0.0;
  double localize_ms = 0.0;
  long long correct_calls = 0;  // concrete does-the-deviation-repair probes
};

struct LocalizeOptions {
  int k_max = 3;       // maximum number of deviated conditions
  int mcs_bound = 3;   // cardinality bound of enumerated MCSs
  SolverConfig solver;
};

// Checks that `ce` binds exactly the program inputs, satisfies the
// precondition, and drives a concrete execution that violates the
// postcondition.
inline void validate_ce(const Program& p, const CounterExample& ce) {
  for (const auto& in : p.inputs)
    if (!ce.count(in)) throw MalformedCounterExample("counterexample misses input '" + in + "'");
  for (const auto& [name, value] : ce) {
    (void)value;
    if (std::find(p.inputs.begin(), p.inputs.end(), name) == p.inputs.end())
      throw MalformedCounterExample("counterexample binds unknown input '" + name + "'");
  }
  RunOutcome out = run_program(p, ce);
  if (!out.pre_holds) throw PreconditionViolated();
  if (out.post_holds) throw NotACounterExample();
}

// True when some recorded correcting deviation sequence is a prefix of the
// candidate: once flipping a set of conditions satisfies the postcondition,
// flipping further conditions along that same path is pointless.
inline bool prefix_pruned(const std::vector<std::vector<int>>& correcting_sets,
                          const std::vector<int>& candidate) {
  for (const auto& recorded : correcting_sets) {
    if (recorded.size() > candidate.size()) continue;
    if (std::equal(recorded.begin(), recorded.end(), candidate.begin())) return true;
  }
  return false;
}

namespace detail {

struct PathState {
  Env env;                      // propagation facts: variable = constant
  VersionMap versions;          // current version per base name
  std::vector<int> deviated_lines;
  std::vector<ConstraintTree> deviated_dirs;  // constraint of each deviated branch
  std::vector<Constraint> assigns;            // CSP_a
  int k_remaining = 0;
};

class Localizer {
 public:
  Localizer(const Program& p, const Cfg& cfg, const CounterExample& ce,
            const LocalizeOptions& opt)
      : prog_(p), cfg_(cfg), ce_(ce), opt_(opt) {
    for (const auto& in : p.inputs) {
      VersionedVar v0{in, 0};
      base_hard_.push_back(ConstraintTree::atom(Constraint(
          VarExpr::variable(v0), Relop::Eq, VarExpr(ce.at(in)),
          Provenance{0, ProvenanceKind::CounterExample})));
    }
    VersionMap zero;
    base_hard_.push_back(cstr_cond(at_versions(p.precondition, zero),
                                   Provenance{p.pre_line, ProvenanceKind::Precondition}));
  }

  McsReport run() {
    McsReport report;
    report.counterexample = ce_;

    PathState init;
    for (const auto& in : prog_.inputs) init.env[VersionedVar{in, 0}] = ce_.at(in);

    // Counterexample path first (k = 0), then the deviating pass.
    init.k_remaining = 0;
    kmax_pass_ = false;
    dfs(cfg_.root, init);
    if (opt_.k_max > 0) {
      init.k_remaining = opt_.k_max;
      kmax_pass_ = true;
      dfs(cfg_.root, init);
    }

    finalize(report);
    report.correct_calls = correct_calls_;
    return report;
  }

 private:
  void dfs(NodeId id, PathState st) {
    const CfgNode& n = cfg_.node(id);
    switch (n.kind) {
      case CfgNode::Kind::Precondition:
        dfs(n.next, std::move(st));
        return;

      case CfgNode::Kind::Postcondition: {
        // Only the plain counterexample path produces an entry here; the
        // deviating pass would merely duplicate it.
        if (kmax_pass_) return;
        ReportEntry entry;
        entry.hard_store = base_hard_;
        entry.hard_store.push_back(
            cstr_cond(at_versions(n.expr, st.versions),
                      Provenance{n.line, ProvenanceKind::Postcondition}));
        entry.soft_store = st.assigns;
        entry.mcs_list = mcs_enumerate(entry.hard_store, entry.soft_store, opt_.mcs_bound,
                                       opt_.solver);
        record(std::move(entry));
        return;
      }

      case CfgNode::Kind::AssignBlock: {
        for (const auto& a : n.assigns) {
          VarExpr rhs = at_versions(a.rhs, st.versions);
          Int value = rhs.evaluate(st.env);  // propagate(ass, P)
          VersionedVar target{a.target, st.versions[a.target] + 1};
          st.versions[a.target] = target.version;
          st.env[target] = value;
          st.assigns.push_back(cstr_assign(target, rhs, a.line));
        }
        dfs(n.next, std::move(st));
        return;
      }

      case CfgNode::Kind::Guard: {
        // A failing guard means the path needs more loop iterations than the
        // unrolling provides: fatal on the counterexample path, dead end on
        // deviated ones.
        if (at_versions(n.expr, st.versions).evaluate(st.env)) {
          dfs(n.next, std::move(st));
          return;
        }
        if (st.deviated_lines.empty()) throw UnrollBoundExceeded(n.line);
        return;
      }

      case CfgNode::Kind::Condition: {
        VarBool cond = at_versions(n.expr, st.versions);
        bool taken = cond.evaluate(st.env);
        NodeId next = taken ? n.left : n.right;
        NodeId devie = taken ? n.right : n.left;
        // Constraint of the branch the counterexample follows; its negation
        // forces the deviation.
        Provenance label{n.line, ProvenanceKind::DeviatedCondition};
        ConstraintTree taken_dir =
            taken ? cstr_cond(cond, label) : cstr_cond(cond, label).negated();

        if (st.k_remaining > 0) {
          std::vector<int> candidate = st.deviated_lines;
          candidate.push_back(n.line);
          if (!prefix_pruned(correcting_sets_, candidate)) {
            ++correct_calls_;
            if (correct_from(devie, st.env, st.versions)) {
              // The deviation repairs the path: the deviated conditions are
              // themselves a correction, and the MCSs of the prefix under
              // the flipped conditions point at suspect assignments.
              correcting_sets_.push_back(candidate);
              ReportEntry entry;
              entry.deviation_path = candidate;
              entry.deviations.insert(candidate.begin(), candidate.end());
              entry.hard_store = base_hard_;
              for (const auto& d : st.deviated_dirs) entry.hard_store.push_back(d);
              entry.hard_store.push_back(taken_dir.negated());
              entry.soft_store = st.assigns;
              entry.mcs_list = mcs_enumerate(entry.hard_store, entry.soft_store, opt_.mcs_bound,
                                             opt_.solver);
              record(std::move(entry));
            } else if (st.k_remaining > 1) {
              PathState dev = st;
              dev.deviated_lines = candidate;
              dev.deviated_dirs.push_back(taken_dir.negated());
              dev.k_remaining -= 1;
              dfs(devie, std::move(dev));
            }
          }
        }
        dfs(next, std::move(st));
        return;
      }
    }
  }

  // Concretely follows the path from `id` under the propagated facts and
  // reports whether the postcondition holds at the sink.
  bool correct_from(NodeId id, Env env, VersionMap versions) const {
    for (;;) {
      const CfgNode& n = cfg_.node(id);
      switch (n.kind) {
        case CfgNode::Kind::Precondition:
          id = n.next;
          break;
        case CfgNode::Kind::Postcondition:
          return at_versions(n.expr, versions).evaluate(env);
        case CfgNode::Kind::Guard:
          if (!at_versions(n.expr, versions).evaluate(env)) return false;
          id = n.next;
          break;
        case CfgNode::Kind::AssignBlock:
          for (const auto& a : n.assigns) {
            Int value = at_versions(a.rhs, versions).evaluate(env);
            VersionedVar target{a.target, versions[a.target] + 1};
            versions[a.target] = target.version;
            env[target] = value;
          }
          id = n.next;
          break;
        case CfgNode::Kind::Condition:
          id = at_versions(n.expr, versions).evaluate(env) ? n.left : n.right;
          break;
      }
    }
  }

  void record(ReportEntry entry) { raw_entries_.push_back(std::move(entry)); }

  // Deterministic report order: by deviation-set size, then by the sorted
  // lines, then by the MCS lists; identical rows collapse.
  void finalize(McsReport& report) {
    auto mcs_lines = [](const ReportEntry& e) {
      std::vector<std::vector<int>> out;
      for (const auto& m : e.mcs_list) out.push_back(m.lines);
      return out;
    };
    std::stable_sort(raw_entries_.begin(), raw_entries_.end(),
                     [&](const ReportEntry& a, const ReportEntry& b) {
                       if (a.deviations.size() != b.deviations.size())
                         return a.deviations.size() < b.deviations.size();
                       if (a.deviations != b.deviations) return a.deviations < b.deviations;
                       return mcs_lines(a) < mcs_lines(b);
                     });
    for (auto& e : raw_entries_) {
      if (!report.entries.empty()) {
        const ReportEntry& last = report.entries.back();
        if (last.deviations == e.deviations && mcs_lines(last) == mcs_lines(e)) continue;
      }
      report.entries.push_back(std::move(e));
    }
  }

  const Program& prog_;
  const Cfg& cfg_;
  CounterExample ce_;
  LocalizeOptions opt_;
  bool kmax_pass_ = false;
  std::vector<ConstraintTree> base_hard_;  // CE facts + precondition
  std::vector<std::vector<int>> correcting_sets_;
  std::vector<ReportEntry> raw_entries_;
  long long correct_calls_ = 0;
};

}  // namespace detail

struct CfgRun {
  std::map<std::string, Int> env;  // final value per base name
  bool post_holds = false;
};

// Concrete execution of the CFG path selected by the inputs, with lazy
// per-path versioning. Used to cross-check CFG construction against the
// reference interpreter.
inline CfgRun execute_cfg(const Cfg& cfg, const std::map<std::string, Int>& inputs) {
  Env env;
  VersionMap versions;
  for (const auto& [name, value] : inputs) env[VersionedVar{name, 0}] = value;
  NodeId id = cfg.root;
  for (;;) {
    const CfgNode& n = cfg.node(id);
    switch (n.kind) {
      case CfgNode::Kind::Precondition:
        id = n.next;
        break;
      case CfgNode::Kind::Guard:
        if (!at_versions(n.expr, versions).evaluate(env)) throw UnrollBoundExceeded(n.line);
        id = n.next;
        break;
      case CfgNode::Kind::AssignBlock:
        for (const auto& a : n.assigns) {
          Int value = at_versions(a.rhs, versions).evaluate(env);
          VersionedVar target{a.target, versions[a.target] + 1};
          versions[a.target] = target.version;
          env[target] = value;
        }
        id = n.next;
        break;
      case CfgNode::Kind::Condition:
        id = at_versions(n.expr, versions).evaluate(env) ? n.left : n.right;
        break;
      case CfgNode::Kind::Postcondition: {
        CfgRun out;
        out.post_holds = at_versions(n.expr, versions).evaluate(env);
        for (const auto& [v, value] : env)
          if (v.version == (versions.count(v.name) ? versions.at(v.name) : 0))
            out.env[v.name] = value;
        return out;
      }
    }
  }
}

// Whole pipeline on a loop-free program: validate the counterexample, build
// the CFG, walk the counterexample path, then re-walk deviating up to k_max
// conditions, enumerating bounded MCSs per recorded path.
inline McsReport localize(const Program& loop_free, const CounterExample& ce,
                          const LocalizeOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  validate_ce(loop_free, ce);

  auto t0 = clock::now();
  Cfg cfg = build_cfg(loop_free);
  auto t1 = clock::now();

  detail::Localizer loc(loop_free, cfg, ce, opt);
  McsReport report = loc.run();
  auto t2 = clock::now();

  report.preprocess_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  report.localize_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return report;
}

}  // namespace locfaults
