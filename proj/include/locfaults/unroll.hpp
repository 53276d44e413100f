#pragma once

#include <vector>

#include "locfaults/ast.hpp"

namespace locfaults {

namespace detail {

inline std::vector<Stmt> unroll_stmts(const std::vector<Stmt>& body, int bound);

// while (c) body  becomes, for bound b:
//   if (c) { body; if (c) { body; ... guard(!c); } }
// with b nested conditionals. The innermost guard asserts that the loop
// condition is exhausted, so an execution needing more than b iterations is
// detected instead of silently truncated.
inline Stmt unroll_while(const Stmt& loop, int bound) {
  std::vector<Stmt> body = unroll_stmts(loop.then_body, bound);
  Stmt inner = Stmt::guard(NameBool::negation(loop.cond), loop.line);
  for (int depth = 0; depth < bound; ++depth) {
    std::vector<Stmt> level = body;
    level.push_back(inner);
    inner = Stmt::if_else(loop.cond, std::move(level), {}, loop.line);
  }
  return inner;
}

inline std::vector<Stmt> unroll_stmts(const std::vector<Stmt>& body, int bound) {
  std::vector<Stmt> out;
  out.reserve(body.size());
  for (const auto& s : body) {
    switch (s.kind) {
      case Stmt::Kind::Assign:
      case Stmt::Kind::Guard:
        out.push_back(s);
        break;
      case Stmt::Kind::IfElse: {
        Stmt copy = s;
        copy.then_body = unroll_stmts(s.then_body, bound);
        copy.else_body = unroll_stmts(s.else_body, bound);
        out.push_back(std::move(copy));
        break;
      }
      case Stmt::Kind::While:
        out.push_back(unroll_while(s, bound));
        break;
    }
  }
  return out;
}

}  // namespace detail

// Replaces every loop by `bound` nested conditionals plus a bound guard.
// A program with no loops comes back unchanged.
inline Program unroll(const Program& p, int bound) {
  if (bound < 1) throw std::invalid_argument("unroll bound must be >= 1");
  Program out = p;
  out.body = detail::unroll_stmts(p.body, bound);
  return out;
}

}  // namespace locfaults
