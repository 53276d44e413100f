#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "locfaults/ast.hpp"

namespace locfaults {

struct SourceError : std::runtime_error {
  int line;
  int col;
  SourceError(const std::string& what, int line, int col)
      : std::runtime_error(what + " at line " + std::to_string(line) + ", col " +
                           std::to_string(col)),
        line(line),
        col(col) {}
};

struct SyntaxError : SourceError {
  using SourceError::SourceError;
};

struct UndeclaredVariable : SourceError {
  std::string name;
  UndeclaredVariable(std::string name, int line, int col)
      : SourceError("undeclared variable '" + name + "'", line, col), name(std::move(name)) {}
};

struct NonLinearExpression : SourceError {
  NonLinearExpression(int line, int col)
      : SourceError("nonlinear expression (only integer-linear terms are allowed)", line, col) {}
};

namespace detail {

struct Token {
  enum class Kind { Ident, Number, Punct, Eof };
  Kind kind = Kind::Eof;
  std::string text;
  Int value = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { next(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    next();
    return t;
  }

 private:
  void next() {
    skip_blanks();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) return;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok_.kind = Token::Kind::Ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        tok_.text += advance();
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      tok_.kind = Token::Kind::Number;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        tok_.text += advance();
      tok_.value = std::stoll(tok_.text);
      return;
    }
    tok_.kind = Token::Kind::Punct;
    tok_.text += advance();
    // two-character operators
    if (pos_ < src_.size()) {
      char d = src_[pos_];
      if ((c == '=' && d == '=') || (c == '!' && d == '=') || (c == '<' && d == '=') ||
          (c == '>' && d == '=') || (c == '&' && d == '&') || (c == '|' && d == '|'))
        tok_.text += advance();
    }
  }

  void skip_blanks() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  Program parse() {
    Program p;
    expect_ident("prog");
    p.name = expect(Token::Kind::Ident).text;
    expect_punct("(");
    if (!peek_punct(")")) {
      do {
        expect_ident("int");
        p.inputs.push_back(expect(Token::Kind::Ident).text);
      } while (accept_punct(","));
    }
    expect_punct(")");
    expect_punct("{");
    p.pre_line = lex_.peek().line;
    expect_ident("pre");
    p.precondition = parse_bool();
    expect_punct(";");
    while (!peek_ident("post")) p.body.push_back(parse_stmt());
    p.post_line = lex_.peek().line;
    expect_ident("post");
    p.postcondition = parse_bool();
    expect_punct(";");
    expect_punct("}");
    if (lex_.peek().kind != Token::Kind::Eof) fail("trailing input after program");
    return p;
  }

 private:
  Stmt parse_stmt() {
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::Ident) fail("expected statement");
    if (t.text == "if") return parse_if();
    if (t.text == "while") return parse_while();
    if (t.text == "pre" || t.text == "post" || t.text == "else" || t.text == "int" ||
        t.text == "prog" || t.text == "true" || t.text == "false")
      fail("expected statement");
    Token name = lex_.take();
    expect_punct("=");
    NameExpr rhs = parse_linear();
    expect_punct(";");
    return Stmt::assign(name.text, std::move(rhs), name.line);
  }

  Stmt parse_if() {
    Token kw = lex_.take();  // "if"
    expect_punct("(");
    NameBool cond = parse_bool();
    expect_punct(")");
    std::vector<Stmt> then_body = parse_block();
    std::vector<Stmt> else_body;
    if (peek_ident("else")) {
      lex_.take();
      if (peek_ident("if")) {
        else_body.push_back(parse_if());
      } else {
        else_body = parse_block();
      }
    }
    return Stmt::if_else(std::move(cond), std::move(then_body), std::move(else_body), kw.line);
  }

  Stmt parse_while() {
    Token kw = lex_.take();  // "while"
    expect_punct("(");
    NameBool cond = parse_bool();
    expect_punct(")");
    return Stmt::while_loop(std::move(cond), parse_block(), kw.line);
  }

  std::vector<Stmt> parse_block() {
    expect_punct("{");
    std::vector<Stmt> body;
    while (!peek_punct("}")) body.push_back(parse_stmt());
    expect_punct("}");
    return body;
  }

  NameBool parse_bool() {
    NameBool first = parse_bool_and();
    if (!peek_punct("||")) return first;
    std::vector<NameBool> parts{std::move(first)};
    while (accept_punct("||")) parts.push_back(parse_bool_and());
    return NameBool::disjunction(std::move(parts));
  }

  NameBool parse_bool_and() {
    NameBool first = parse_bool_atom();
    if (!peek_punct("&&")) return first;
    std::vector<NameBool> parts{std::move(first)};
    while (accept_punct("&&")) parts.push_back(parse_bool_atom());
    return NameBool::conjunction(std::move(parts));
  }

  NameBool parse_bool_atom() {
    if (accept_punct("!")) return NameBool::negation(parse_bool_atom());
    // Linear expressions contain no parentheses, so "(" always opens a
    // nested boolean expression here.
    if (accept_punct("(")) {
      NameBool inner = parse_bool();
      expect_punct(")");
      return inner;
    }
    if (peek_ident("true")) {
      lex_.take();
      return NameBool::literal(true);
    }
    if (peek_ident("false")) {
      lex_.take();
      return NameBool::literal(false);
    }
    NameExpr lhs = parse_linear();
    Relop op = parse_relop();
    NameExpr rhs = parse_linear();
    return NameBool::cmp(std::move(lhs), op, std::move(rhs));
  }

  Relop parse_relop() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Punct) {
      if (t.text == "==") return lex_.take(), Relop::Eq;
      if (t.text == "!=") return lex_.take(), Relop::Ne;
      if (t.text == "<") return lex_.take(), Relop::Lt;
      if (t.text == "<=") return lex_.take(), Relop::Le;
      if (t.text == ">") return lex_.take(), Relop::Gt;
      if (t.text == ">=") return lex_.take(), Relop::Ge;
    }
    fail("expected comparison operator");
  }

  NameExpr parse_linear() {
    NameExpr e;
    bool negate = accept_punct("-");
    parse_term(e, negate ? -1 : 1);
    for (;;) {
      if (accept_punct("+")) {
        parse_term(e, 1);
      } else if (accept_punct("-")) {
        parse_term(e, -1);
      } else {
        break;
      }
    }
    if (peek_punct("/") || peek_punct("*"))
      throw NonLinearExpression(lex_.peek().line, lex_.peek().col);
    return e;
  }

  void parse_term(NameExpr& e, Int sign) {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Number) {
      Token num = lex_.take();
      if (accept_punct("*")) {
        const Token& f = lex_.peek();
        if (f.kind == Token::Kind::Ident) {
          e.add_term(lex_.take().text, sign * num.value);
        } else if (f.kind == Token::Kind::Number) {
          e.add_constant(sign * num.value * lex_.take().value);
        } else {
          fail("expected variable or integer after '*'");
        }
      } else if (peek_punct("/")) {
        throw NonLinearExpression(lex_.peek().line, lex_.peek().col);
      } else {
        e.add_constant(sign * num.value);
      }
      return;
    }
    if (t.kind == Token::Kind::Ident) {
      Token name = lex_.take();
      if (accept_punct("*")) {
        const Token& f = lex_.peek();
        if (f.kind == Token::Kind::Number) {
          e.add_term(name.text, sign * lex_.take().value);
        } else {
          // variable * variable (or worse)
          throw NonLinearExpression(f.line, f.col);
        }
      } else if (peek_punct("/")) {
        throw NonLinearExpression(lex_.peek().line, lex_.peek().col);
      } else {
        e.add_term(name.text, sign);
      }
      return;
    }
    fail("expected linear term");
  }

  bool peek_punct(const char* s) const {
    return lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == s;
  }

  bool peek_ident(const char* s) const {
    return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == s;
  }

  bool accept_punct(const char* s) {
    if (!peek_punct(s)) return false;
    lex_.take();
    return true;
  }

  void expect_punct(const char* s) {
    if (!accept_punct(s)) fail(std::string("expected '") + s + "'");
  }

  void expect_ident(const char* s) {
    if (!peek_ident(s)) fail(std::string("expected '") + s + "'");
    lex_.take();
  }

  Token expect(Token::Kind kind) {
    if (lex_.peek().kind != kind) fail("unexpected token");
    return lex_.take();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, lex_.peek().line, lex_.peek().col);
  }

  Lexer lex_;
};

inline void check_expr_vars(const NameExpr& e, const std::set<std::string>& known, int line) {
  for (const auto& [v, c] : e.terms())
    if (!known.count(v)) throw UndeclaredVariable(v, line, 1);
}

inline void check_bool_vars(const NameBool& b, const std::set<std::string>& known, int line) {
  if (b.kind == NameBool::Kind::Cmp) {
    check_expr_vars(b.lhs, known, line);
    check_expr_vars(b.rhs, known, line);
  }
  for (const auto& c : b.children) check_bool_vars(c, known, line);
}

inline void check_stmts(const std::vector<Stmt>& body, std::set<std::string>& known,
                        std::set<int>& lines) {
  for (const auto& s : body) {
    if (!lines.insert(s.line).second)
      throw SyntaxError("multiple statements on line " + std::to_string(s.line), s.line, 1);
    switch (s.kind) {
      case Stmt::Kind::Assign:
        check_expr_vars(s.rhs, known, s.line);
        known.insert(s.target);
        break;
      case Stmt::Kind::IfElse: {
        check_bool_vars(s.cond, known, s.line);
        auto then_known = known;
        auto else_known = known;
        check_stmts(s.then_body, then_known, lines);
        check_stmts(s.else_body, else_known, lines);
        // only variables assigned on both sides are definitely defined
        for (const auto& v : then_known)
          if (else_known.count(v)) known.insert(v);
        break;
      }
      case Stmt::Kind::While: {
        check_bool_vars(s.cond, known, s.line);
        auto body_known = known;  // body may run zero times
        check_stmts(s.then_body, body_known, lines);
        break;
      }
      case Stmt::Kind::Guard:
        check_bool_vars(s.cond, known, s.line);
        break;
    }
  }
}

}  // namespace detail

// Checks declaration-before-use, duplicate inputs, and per-statement line
// uniqueness on a parsed program.
inline void check_program(const Program& p) {
  std::set<std::string> known;
  for (const auto& in : p.inputs)
    if (!known.insert(in).second)
      throw SyntaxError("duplicate input '" + in + "'", 1, 1);
  detail::check_bool_vars(p.precondition, known, p.pre_line);
  std::set<int> lines;
  detail::check_stmts(p.body, known, lines);
  detail::check_bool_vars(p.postcondition, known, p.post_line);
}

inline Program parse_program(std::string_view source) {
  Program p = detail::Parser(source).parse();
  check_program(p);
  return p;
}

}  // namespace locfaults
