#pragma once

#include <map>
#include <set>
#include <string>

#include "locfaults/ast.hpp"

namespace locfaults {

struct UnrollBoundExceeded : std::runtime_error {
  int line;
  explicit UnrollBoundExceeded(int line)
      : std::runtime_error("loop bound exceeded at line " + std::to_string(line)), line(line) {}
};

struct RunOutcome {
  std::map<std::string, Int> env;  // final variable values
  bool pre_holds = false;
  bool post_holds = false;
};

namespace detail {

inline constexpr long long kLoopFuel = 1'000'000;

inline void exec_stmts(const std::vector<Stmt>& body, std::map<std::string, Int>& env,
                       const std::set<int>& flips, long long& fuel) {
  for (const auto& s : body) {
    switch (s.kind) {
      case Stmt::Kind::Assign:
        env[s.target] = s.rhs.evaluate(env);
        break;
      case Stmt::Kind::IfElse: {
        bool taken = s.cond.evaluate(env);
        if (flips.count(s.line)) taken = !taken;
        exec_stmts(taken ? s.then_body : s.else_body, env, flips, fuel);
        break;
      }
      case Stmt::Kind::While:
        while (s.cond.evaluate(env)) {
          if (--fuel <= 0) throw std::runtime_error("loop fuel exhausted (non-terminating loop?)");
          exec_stmts(s.then_body, env, flips, fuel);
        }
        break;
      case Stmt::Kind::Guard:
        if (!s.cond.evaluate(env)) throw UnrollBoundExceeded(s.line);
        break;
    }
  }
}

}  // namespace detail

// Reference interpreter. Loops run concretely (used to cross-check
// unrolling); condition statements whose line is in `flips` take the
// opposite branch, which re-executes a reported deviation set.
inline RunOutcome run_program(const Program& p, const std::map<std::string, Int>& inputs,
                              const std::set<int>& flips = {}) {
  RunOutcome out;
  out.env = inputs;
  for (const auto& in : p.inputs)
    if (!out.env.count(in)) throw UnboundVariable("missing input " + in);
  out.pre_holds = p.precondition.evaluate(out.env);
  long long fuel = detail::kLoopFuel;
  detail::exec_stmts(p.body, out.env, flips, fuel);
  out.post_holds = p.postcondition.evaluate(out.env);
  return out;
}

}  // namespace locfaults
