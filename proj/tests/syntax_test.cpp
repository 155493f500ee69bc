#include <algorithm>

#include <gtest/gtest.h>

#include "pqk/metatheory.hpp"
#include "pqk/parser.hpp"
#include "support.hpp"

namespace pqk {
namespace {

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

TEST(Parse, ReturnUnit) { EXPECT_EQ(parse_term("return *"), Term::ret(Value::unit())); }

TEST(Parse, CaseBranchesInEitherOrder) {
  auto a = parse_term("let x = return * in case u { 0 => return x | 1 => return * }");
  auto b = parse_term("let x = return * in case u { 1 => return * | 0 => return x }");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.continuation().tree(), parse_tree("<u ? _ | _>"));
}

TEST(Parse, NestedCase) {
  auto m = parse_term("let x = return * in case u { 0 => case s { 0 => return x | 1 => return x } | 1 => return x }");
  EXPECT_EQ(m.continuation().tree(), parse_tree("<u ? <s ? _ | _> | _>"));
}

TEST(Parse, WhenSugarFillsTheOtherBranch) {
  auto program = parse_program(test::sample("example-let.pqk"));
  const Term& body = program.body;
  ASSERT_EQ(body.kind(), Term::Kind::Let);
  const auto& mu = body.continuation();
  EXPECT_EQ(mu.tree(), parse_tree("<u ? _ | _>"));
  EXPECT_EQ(mu.zero().leaf(), Term::ret(Value::label(Label("k"))));
  EXPECT_EQ(mu.one().leaf().kind(), Term::Kind::Apply);
}

TEST(Parse, ProgramHeader) {
  auto program = parse_program(test::sample("one-way-run.pqk"));
  EXPECT_EQ(program.input_order, (std::vector<Label>{Label("q"), Label("a")}));
  ASSERT_EQ(program.constants.size(), 3u);
  EXPECT_EQ(program.constants[1].first, "MeasLift");
  EXPECT_EQ(program.constants[1].second.tree(), parse_tree("<u ? _ | _>"));
}

TEST(Parse, GateNamesResolveToGateConstants) {
  auto m = parse_term("return fun (q : Qubit) -> apply(H, q)");
  ASSERT_EQ(m.kind(), Term::Kind::Return);
  const Term& body = m.first().body();
  ASSERT_EQ(body.first().kind(), Value::Kind::Boxed);
  EXPECT_TRUE(boxed_equiv(body.first().boxed_value(), gate_constant(GateSet::default_set().at("H"))));
}

TEST(Parse, ErrorsCarryPositions) {
  try {
    parse_term("let x = in return x");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.where().line, 1);
    EXPECT_EQ(e.where().column, 9);
  }
  try {
    parse_program("input(l:Qubit);\nreturn (@l,\n  @l");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.where().line, 3);
  }
  EXPECT_THROW(parse_term("let x = return * in case u { 0 => return x }"), SyntaxError);
  EXPECT_THROW(parse_term("*"), SyntaxError);
}

TEST(PrettyPrint, RoundTripsSamples) {
  for (const char* name : {"one-way.pqk", "one-way-run.pqk", "alice.pqk", "teleport.pqk", "teleport-branches.pqk",
                           "teleport-sim.pqk", "example-let.pqk"}) {
    auto program = parse_program(test::sample(name));
    auto printed = print_program(program);
    auto again = parse_program(printed);
    EXPECT_EQ(again.body, program.body) << name << "\n" << printed;
    EXPECT_EQ(again.input, program.input) << name;
  }
}

TEST(PrettyPrint, RoundTripsGeneratedTerms) {
  GenConfig cfg;
  cfg.seed = 3;
  for (const auto& item : gen_corpus(cfg, 200)) {
    auto printed = print_term(item.term);
    EXPECT_EQ(parse_term(printed), item.term) << printed;
  }
}

TEST(PrettyPrint, RoundTripsTypes) {
  for (const char* text : {"Unit", "Qubit * Bit", "Qubit -o Qubit -o[<u ? _ | _>] <u ? Qubit | Bit>",
                           "!(Qubit -o Bit)", "Circ[<u ? <s ? _ | _> | _>](Qubit * Qubit, <u ? <s ? Bit | Unit> | Qubit>)",
                           "(Unit -o Unit) * !Unit"}) {
    auto t = parse_type(text);
    EXPECT_EQ(parse_type(print_type(t)), t) << text;
  }
}

TEST(Substitute, Clauses) {
  Value w = Value::label(Label("l"));
  EXPECT_EQ(substitute(Value::var("x"), w, "x"), w);
  Value shadow = parse_value("fun (x : Qubit) -> return x");
  EXPECT_EQ(substitute(shadow, w, "x"), shadow);
  Value boxed = Value::boxed(gate_constant(GateSet::default_set().at("H")));
  EXPECT_EQ(substitute(boxed, w, "x"), boxed);
}

TEST(Substitute, AvoidsCapture) {
  Term m = parse_term("return fun (y : Unit) -> return (x, y)");
  Term out = substitute(m, Value::var("y"), "x");
  EXPECT_EQ(free_vars(out), std::set<std::string>{"y"});
  EXPECT_FALSE(alpha_equiv(out, parse_term("return fun (y : Unit) -> return (y, y)")));
}

TEST(Substitute, FreeVariablesBound) {
  GenConfig cfg;
  cfg.seed = 9;
  for (const auto& item : gen_corpus(cfg, 100)) {
    // Generated terms are closed: open them by substituting into their lambda bodies.
    if (item.term.kind() != Term::Kind::Return || item.term.first().kind() != Value::Kind::Lam) continue;
    const Value& lam = item.term.first();
    Value v = Value::pair(Value::var("z"), Value::var(lam.name()));
    Term out = substitute(lam.body(), v, lam.name());
    auto bound = free_vars(lam.body());
    bound.erase(lam.name());
    bound.insert({"z", lam.name()});
    EXPECT_TRUE(subset(free_vars(out), bound)) << print_term(out);
  }
}

TEST(AlphaEquiv, Examples) {
  EXPECT_TRUE(alpha_equiv(parse_value("fun (x : Unit) -> return x"), parse_value("fun (y : Unit) -> return y")));
  EXPECT_FALSE(alpha_equiv(parse_value("fun (x : Unit) -> return x"), parse_value("fun (y : Unit) -> return *")));
  EXPECT_TRUE(alpha_equiv(parse_type("Circ[<u ? _ | _>](Qubit, <u ? Unit | Unit>)"),
                          parse_type("Circ[<s ? _ | _>](Qubit, <s ? Unit | Unit>)")));
  EXPECT_FALSE(alpha_equiv(parse_type("Qubit -o[<u ? _ | _>] <u ? Qubit | Bit>"),
                           parse_type("Qubit -o[<s ? _ | _>] <s ? Qubit | Bit>")));
}

TEST(AlphaEquiv, PreservedBySubstitution) {
  Term m = parse_term("let z = return * in return (x, z)");
  Value v1 = parse_value("fun (a : Unit) -> return a");
  Value v2 = parse_value("fun (b : Unit) -> return b");
  EXPECT_TRUE(alpha_equiv(substitute(m, v1, "x"), substitute(m, v2, "x")));
}

TEST(FreeNames, Examples) {
  EXPECT_EQ(free_labels(Value::label(Label("l"))), std::set<Label>{Label("l")});
  EXPECT_TRUE(free_labels(Value::boxed(gate_constant(GateSet::default_set().at("CNOT")))).empty());
  Term apply = Term::apply({LiftedVar("v1")}, Value::var("c"), Value::var("w"));
  EXPECT_TRUE(free_lifted_vars(apply).contains(LiftedVar("v1")));
}

}  // namespace
}  // namespace pqk
