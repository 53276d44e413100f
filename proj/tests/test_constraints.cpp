#include <catch2/catch.hpp>

#include <random>

#include "locfaults/constraints.hpp"

using namespace locfaults;

namespace {

VersionedVar vv(const char* name, int version = 0) { return VersionedVar{name, version}; }

VarExpr var(const char* name, int version = 0) { return VarExpr::variable(vv(name, version)); }

// random atoms over x,y,z version 0, small coefficients
Constraint random_atom(std::mt19937& rng) {
  static const char* names[] = {"x", "y", "z"};
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> cst(-20, 20);
  std::uniform_int_distribution<int> op(0, 5);
  VarExpr lhs;
  for (const char* n : names) lhs.add_term(vv(n), coef(rng));
  static const Relop ops[] = {Relop::Eq, Relop::Ne, Relop::Lt, Relop::Le, Relop::Gt, Relop::Ge};
  return Constraint(lhs, ops[op(rng)], VarExpr(cst(rng)));
}

Env random_env(std::mt19937& rng) {
  std::uniform_int_distribution<int> val(-25, 25);
  return Env{{vv("x"), val(rng)}, {vv("y"), val(rng)}, {vv("z"), val(rng)}};
}

}  // namespace

TEST_CASE("cstr_assign builds the defining equality with provenance") {
  // x1 = x0 + 1  ~>  x1 - x0 = 1
  Constraint c = cstr_assign(vv("x", 1), var("x", 0) + VarExpr(1), 12);
  CHECK(c.str() == "-x#0 + x#1 == 1");
  CHECK(c.relop() == Relop::Eq);
  CHECK(c.line() == 12);
  CHECK(c.label().kind == ProvenanceKind::Assignment);
}

TEST_CASE("cstr_assign examples") {
  Constraint c = cstr_assign(vv("x", 1), var("x", 0) + VarExpr(1), 3);
  // x1 - x0 = 1 up to canonical term order
  Env e{{vv("x", 0), 4}, {vv("x", 1), 5}};
  CHECK(c.evaluate(e));
  e[vv("x", 1)] = 6;
  CHECK_FALSE(c.evaluate(e));

  Constraint r = cstr_assign(vv("r", 1), var("i") - var("j"), 20);
  CHECK(r.evaluate(Env{{vv("i"), 0}, {vv("j"), 1}, {vv("r", 1), -1}}));
}

TEST_CASE("condition translation: conjunction flattens to atoms") {
  // (k == 1 && i != j)
  VarBool cond = VarBool::conjunction(
      {VarBool::cmp(var("k"), Relop::Eq, VarExpr(1)), VarBool::cmp(var("i"), Relop::Ne, var("j"))});
  ConstraintTree t = cstr_cond(cond, Provenance{16, ProvenanceKind::Condition});
  auto atoms = t.flatten_conjunction();
  REQUIRE(atoms.has_value());
  CHECK(atoms->size() == 2);
  CHECK((*atoms)[0].line() == 16);
}

TEST_CASE("condition translation: single comparison") {
  ConstraintTree t =
      cstr_cond(VarBool::cmp(var("i"), Relop::Le, var("j")), Provenance{1, ProvenanceKind::Condition});
  auto atoms = t.flatten_conjunction();
  REQUIRE(atoms.has_value());
  REQUIRE(atoms->size() == 1);
  CHECK((*atoms)[0].evaluate(Env{{vv("i"), 0}, {vv("j"), 0}}));
}

TEST_CASE("De Morgan pushes negation to the atoms") {
  // !(a < b || c < d)  ~>  a >= b && c >= d
  VarBool cond = VarBool::negation(VarBool::disjunction(
      {VarBool::cmp(var("a"), Relop::Lt, var("b")), VarBool::cmp(var("c"), Relop::Lt, var("d"))}));
  ConstraintTree t = cstr_cond(cond, Provenance{});
  auto atoms = t.flatten_conjunction();
  REQUIRE(atoms.has_value());
  REQUIRE(atoms->size() == 2);
  CHECK((*atoms)[0].relop() == Relop::Ge);
  CHECK((*atoms)[1].relop() == Relop::Ge);
  Env e{{vv("a"), 1}, {vv("b"), 1}, {vv("c"), 2}, {vv("d"), 1}};
  CHECK(t.evaluate(e));
  CHECK_FALSE(cstr_cond(cond, Provenance{}).negated().evaluate(e));
}

TEST_CASE("negation tightens over the integers") {
  Constraint le = Constraint(var("x"), Relop::Le, VarExpr(3));
  Constraint neg = le.negated();
  CHECK(neg.relop() == Relop::Ge);
  CHECK(neg.rhs() == 4);  // !(x <= 3) is x >= 4
  CHECK(neg.negated() == le);

  Constraint eq = Constraint(var("x"), Relop::Eq, var("y"));
  CHECK(eq.negated().relop() == Relop::Ne);
  CHECK(eq.negated().negated() == eq);
}

TEST_CASE("strict comparisons are canonicalized away") {
  Constraint lt = Constraint(var("x"), Relop::Lt, VarExpr(3));
  CHECK(lt.relop() == Relop::Le);
  CHECK(lt.rhs() == 2);
  Constraint gt = Constraint(var("x"), Relop::Gt, VarExpr(3));
  CHECK(gt.relop() == Relop::Ge);
  CHECK(gt.rhs() == 4);
}

TEST_CASE("negation is an involution and complements evaluation") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    Constraint c = random_atom(rng);
    CHECK(c.negated().negated() == c);
    Env env = random_env(rng);
    CHECK(c.negated().evaluate(env) == !c.evaluate(env));
  }
}

TEST_CASE("tree negation complements evaluation") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    ConstraintTree t = ConstraintTree::any(
        {ConstraintTree::atom(random_atom(rng)),
         ConstraintTree::all({ConstraintTree::atom(random_atom(rng)),
                              ConstraintTree::atom(random_atom(rng))})});
    Env env = random_env(rng);
    CHECK(t.negated().evaluate(env) == !t.evaluate(env));
  }
}

TEST_CASE("cstr_cond preserves truth under every environment") {
  std::mt19937 rng(44);
  std::uniform_int_distribution<int> shape(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    Constraint a = random_atom(rng);
    Constraint b = random_atom(rng);
    VarBool ba = VarBool::cmp(a.lhs(), a.relop(), VarExpr(a.rhs()));
    VarBool bb = VarBool::cmp(b.lhs(), b.relop(), VarExpr(b.rhs()));
    VarBool cond;
    switch (shape(rng)) {
      case 0: cond = VarBool::conjunction({ba, bb}); break;
      case 1: cond = VarBool::disjunction({ba, bb}); break;
      default: cond = VarBool::negation(VarBool::conjunction({ba, VarBool::negation(bb)}));
    }
    ConstraintTree t = cstr_cond(cond, Provenance{});
    Env env = random_env(rng);
    CHECK(t.evaluate(env) == cond.evaluate(env));
  }
}

TEST_CASE("evaluation requires bound variables") {
  Constraint c = Constraint(var("x") - var("y"), Relop::Eq, VarExpr(0));
  CHECK_THROWS_AS(c.evaluate(Env{{vv("x"), 1}}), UnboundVariable);
  CHECK(VarExpr(var("i") - var("j")).evaluate(Env{{vv("i"), 0}, {vv("j"), 1}}) == -1);
}

TEST_CASE("versioning maps names to their current version") {
  VersionMap versions{{"x", 2}};
  NameExpr e = NameExpr::variable("x") + NameExpr::variable("y");
  VarExpr v = at_versions(e, versions);
  CHECK(v.terms().count(vv("x", 2)) == 1);
  CHECK(v.terms().count(vv("y", 0)) == 1);
}
