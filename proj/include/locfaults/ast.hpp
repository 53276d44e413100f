#pragma once

#include <string>
#include <vector>

#include "locfaults/bool_expr.hpp"
#include "locfaults/linear_expr.hpp"

namespace locfaults {

using NameExpr = LinearExpr<std::string>;
using NameBool = BoolExpr<std::string>;

// One statement of the mini language. Guard statements never come from the
// parser; loop unrolling emits them to assert that the iteration bound was
// not exceeded.
struct Stmt {
  enum class Kind { Assign, IfElse, While, Guard };

  Kind kind = Kind::Assign;
  int line = 0;

  std::string target;                 // Assign
  NameExpr rhs;                       // Assign
  NameBool cond;                      // IfElse / While / Guard (asserted expr)
  std::vector<Stmt> then_body;        // IfElse / While body
  std::vector<Stmt> else_body;        // IfElse

  static Stmt assign(std::string target, NameExpr rhs, int line) {
    Stmt s;
    s.kind = Kind::Assign;
    s.target = std::move(target);
    s.rhs = std::move(rhs);
    s.line = line;
    return s;
  }

  static Stmt if_else(NameBool cond, std::vector<Stmt> then_body, std::vector<Stmt> else_body,
                      int line) {
    Stmt s;
    s.kind = Kind::IfElse;
    s.cond = std::move(cond);
    s.then_body = std::move(then_body);
    s.else_body = std::move(else_body);
    s.line = line;
    return s;
  }

  static Stmt while_loop(NameBool cond, std::vector<Stmt> body, int line) {
    Stmt s;
    s.kind = Kind::While;
    s.cond = std::move(cond);
    s.then_body = std::move(body);
    s.line = line;
    return s;
  }

  static Stmt guard(NameBool asserted, int line) {
    Stmt s;
    s.kind = Kind::Guard;
    s.cond = std::move(asserted);
    s.line = line;
    return s;
  }

  bool operator==(const Stmt&) const = default;
};

struct Program {
  std::string name;
  std::vector<std::string> inputs;    // declared in order, all int
  NameBool precondition;
  NameBool postcondition;
  std::vector<Stmt> body;
  int pre_line = 0;
  int post_line = 0;

  bool operator==(const Program&) const = default;
};

inline bool contains_loop(const std::vector<Stmt>& body) {
  for (const auto& s : body) {
    if (s.kind == Stmt::Kind::While) return true;
    if (contains_loop(s.then_body) || contains_loop(s.else_body)) return true;
  }
  return false;
}

inline bool contains_loop(const Program& p) { return contains_loop(p.body); }

namespace detail {

// Emits text so that every statement lands on its recorded source line,
// padding with blank lines as needed. Reparsing the output therefore
// reproduces the statement lines exactly. Passing line 0 keeps the text on
// the line currently being assembled (used for closing braces).
class SourceWriter {
 public:
  void emit(int line, const std::string& text) {
    while (line > line_) advance();
    if (!pending_.empty()) pending_ += ' ';
    pending_ += text;
  }

  std::string take() {
    if (!pending_.empty()) advance();
    return out_;
  }

 private:
  void advance() {
    out_ += pending_;
    out_ += '\n';
    pending_.clear();
    ++line_;
  }

  std::string out_;
  std::string pending_;
  int line_ = 1;
};

inline void write_stmts(SourceWriter& w, const std::vector<Stmt>& body);

inline void write_stmt(SourceWriter& w, const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Assign:
      w.emit(s.line, s.target + " = " + s.rhs.str() + ";");
      break;
    case Stmt::Kind::IfElse:
      w.emit(s.line, "if (" + s.cond.str() + ") {");
      write_stmts(w, s.then_body);
      w.emit(0, "}");
      if (!s.else_body.empty()) {
        w.emit(0, "else {");
        write_stmts(w, s.else_body);
        w.emit(0, "}");
      }
      break;
    case Stmt::Kind::While:
      w.emit(s.line, "while (" + s.cond.str() + ") {");
      write_stmts(w, s.then_body);
      w.emit(0, "}");
      break;
    case Stmt::Kind::Guard:
      w.emit(s.line, "guard (" + s.cond.str() + ");");
      break;
  }
}

inline void write_stmts(SourceWriter& w, const std::vector<Stmt>& body) {
  for (const auto& s : body) write_stmt(w, s);
}

}  // namespace detail

// Renders a program back to surface syntax, preserving statement line
// numbers, so parse(to_source(parse(text))) == parse(text).
inline std::string to_source(const Program& p) {
  detail::SourceWriter w;
  std::string header = "prog " + p.name + "(";
  for (size_t i = 0; i < p.inputs.size(); ++i) {
    if (i) header += ", ";
    header += "int " + p.inputs[i];
  }
  header += ") {";
  w.emit(1, header);
  w.emit(p.pre_line, "pre " + p.precondition.str() + ";");
  detail::write_stmts(w, p.body);
  w.emit(p.post_line, "post " + p.postcondition.str() + ";");
  w.emit(0, "}");
  return w.take();
}

}  // namespace locfaults
