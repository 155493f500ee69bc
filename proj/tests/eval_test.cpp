#include <algorithm>

#include <gtest/gtest.h>

#include "pqk/crl_text.hpp"
#include "pqk/eval.hpp"
#include "pqk/metatheory.hpp"
#include "pqk/parser.hpp"
#include "support.hpp"

namespace pqk {
namespace {

RightConfig done(const EvalOutcome& outcome) {
  if (const auto* stuck = std::get_if<Stuck>(&outcome)) {
    ADD_FAILURE() << "stuck: " << stuck->detail;
  } else if (std::holds_alternative<FuelExhausted>(outcome)) {
    ADD_FAILURE() << "fuel exhausted";
  } else {
    return std::get<RightConfig>(outcome);
  }
  return {};
}

RightConfig run_program(const std::string& source, EvalEnv env = {}) {
  auto program = parse_program(source);
  return done(run_closed(program.body, env, program.input));
}

BoxedCircuit listing(const std::string& text) {
  auto parsed = parse_crl(text);
  return box_listing(parsed.circuit, parsed.input_order);
}

TEST(FreshLabels, Examples) {
  LabelSupply supply;
  auto [empty, unit] = freshlabels(supply, MType::unit());
  EXPECT_TRUE(empty.empty());
  EXPECT_EQ(unit, MValue::unit());
  auto [one, qubit] = freshlabels(supply, MType::qubit());
  EXPECT_EQ(one, (LabelContext{{Label("%0"), WireType::Qubit}}));
  EXPECT_EQ(qubit, MValue::label("%0"));
  LabelSupply again;
  auto [two, pair] = freshlabels(again, MType::tensor(MType::qubit(), MType::bit()));
  EXPECT_EQ(two, (LabelContext{{Label("%0"), WireType::Qubit}, {Label("%1"), WireType::Bit}}));
  EXPECT_EQ(pair, MValue::pair(MValue::label("%0"), MValue::label("%1")));
}

TEST(Eval, ReturnLeavesTheCircuitAlone) {
  Circuit c = parse_crl("input(q:Qubit); H(q) -> q1;").circuit;
  EvalEnv env;
  auto right = done(eval(LeftConfig{c, {}, parse_term("return @q1")}, env));
  EXPECT_EQ(right.circuit, c);
  EXPECT_EQ(right.value, Lifted<Value>(Value::label(Label("q1"))));
}

TEST(Eval, RunClosedReturnUnit) {
  EvalEnv env;
  auto right = done(run_closed(parse_term("return *"), env));
  EXPECT_EQ(right.circuit, Circuit{});
  EXPECT_EQ(right.value, Lifted<Value>(Value::unit()));
}

TEST(Eval, LetExample) {
  auto right = run_program(test::sample("example-let.pqk"));
  EXPECT_EQ(print_crl(right.circuit),
            "input(k:Qubit, l:Qubit);\nMeas(l) -> %0;\nlift(%0) => u;\n(u=1) ? H(k) -> %1;\n");
  EXPECT_EQ(right.value, Lifted<Value>(parse_tree("<u ? _ | _>"),
                                       {Value::label(Label("k")), Value::label(Label("%1"))}));
}

TEST(Eval, AliceBoxMatchesListing) {
  auto right = run_program(test::sample("alice.pqk"));
  EXPECT_EQ(right.circuit, Circuit{});
  ASSERT_EQ(right.value.leaf().kind(), Value::Kind::Boxed);
  EXPECT_TRUE(boxed_equiv(right.value.leaf().boxed_value(), listing(test::sample("alice.crl"))));
}

TEST(Eval, BoxedOneWayHasTheConditionalMeasurementShape) {
  std::string source = test::sample("one-way.pqk");
  auto body = source.find("return fun");
  std::string boxed = source.substr(0, body) + "box[Qubit * Qubit] lift return fun (p : Qubit * Qubit) ->\n" +
                      "  let (q, a) = p in\n  let f = (" + source.substr(body + 7) + ") q in\n  f a\n";
  auto right = run_program(boxed);
  auto expected = listing(
      "input(q:Qubit, a:Qubit); H(q) -> q1; Meas(q1) -> c; lift(c) => u; (u=1) ? Meas(a) -> a1;");
  ASSERT_EQ(right.value.leaf().kind(), Value::Kind::Boxed);
  EXPECT_TRUE(boxed_equiv(right.value.leaf().boxed_value(), expected))
      << print_crl(right.value.leaf().boxed_value().circuit);
}

TEST(Eval, TeleportBoxMatchesListing) {
  auto right = run_program(test::sample("teleport.pqk"));
  EXPECT_TRUE(boxed_equiv(right.value.leaf().boxed_value(), listing(test::sample("teleport.crl"))));
}

TEST(Eval, StuckOnForcingUnit) {
  EvalEnv env;
  auto outcome = run_closed(parse_term("force *"), env);
  ASSERT_TRUE(std::holds_alternative<Stuck>(outcome));
  EXPECT_EQ(std::get<Stuck>(outcome).reason, StuckReason::ForceNonLift);
}

TEST(Eval, StuckReasons) {
  auto reason = [](const char* source) {
    EvalEnv env;
    auto outcome = run_closed(parse_term(source), env);
    EXPECT_TRUE(std::holds_alternative<Stuck>(outcome)) << source;
    return std::holds_alternative<Stuck>(outcome) ? std::get<Stuck>(outcome).reason : StuckReason::AppNonLambda;
  };
  EXPECT_EQ(reason("* *"), StuckReason::AppNonLambda);
  EXPECT_EQ(reason("let (a, b) = * in return a"), StuckReason::DestNonPair);
  EXPECT_EQ(reason("box[Unit] *"), StuckReason::BoxNonLift);
  EXPECT_EQ(reason("apply(*, *)"), StuckReason::ApplyNonBoxed);
}

TEST(Eval, FuelZeroIsExhausted) {
  EvalEnv env;
  env.fuel = 0;
  EXPECT_TRUE(std::holds_alternative<FuelExhausted>(run_closed(parse_term("return *"), env)));
}

class CorpusEval : public ::testing::Test {
 protected:
  static const std::vector<CorpusItem>& corpus() {
    static const std::vector<CorpusItem> items = [] {
      GenConfig cfg;
      cfg.seed = 33;
      return gen_corpus(cfg, 150);
    }();
    return items;
  }
};

TEST_F(CorpusEval, Deterministic) {
  for (const auto& item : corpus()) {
    EvalEnv first;
    EvalEnv second;
    auto a = run_closed(item.term, first);
    auto b = run_closed(item.term, second);
    ASSERT_TRUE(std::holds_alternative<RightConfig>(a));
    ASSERT_TRUE(std::holds_alternative<RightConfig>(b));
    EXPECT_EQ(std::get<RightConfig>(a).circuit, std::get<RightConfig>(b).circuit);
    EXPECT_EQ(std::get<RightConfig>(a).value, std::get<RightConfig>(b).value);
    EXPECT_EQ(first.steps, second.steps);
    EXPECT_EQ(first.branch_independence_violations, 0u);
  }
}

TEST_F(CorpusEval, FuelMonotone) {
  for (const auto& item : corpus()) {
    EvalEnv full;
    auto reference = done(run_closed(item.term, full));
    for (std::uint64_t fuel : {full.steps, full.steps + 1, 2 * full.steps + 7}) {
      EvalEnv env;
      env.fuel = fuel;
      auto again = done(run_closed(item.term, env));
      EXPECT_EQ(again.circuit, reference.circuit);
      EXPECT_EQ(again.value, reference.value);
    }
    if (full.steps > 0) {
      EvalEnv short_env;
      short_env.fuel = full.steps - 1;
      EXPECT_TRUE(std::holds_alternative<FuelExhausted>(run_closed(item.term, short_env)));
    }
  }
}

TEST(Eval, OnlyAppendsToTheCircuit) {
  auto program = parse_program(test::sample("teleport-sim.pqk"));
  Circuit start = parse_crl("input(q0:Qubit); H(q0) -> q;").circuit;
  EvalEnv env;
  auto right = done(eval(LeftConfig{start, {}, program.body}, env));
  ASSERT_GE(right.circuit.instructions.size(), start.instructions.size());
  EXPECT_TRUE(std::equal(start.instructions.begin(), start.instructions.end(), right.circuit.instructions.begin()));
  EXPECT_EQ(right.circuit.input, start.input);
}

TEST(Eval, SkippingLetFlattenChangesTheResult) {
  auto program = parse_program(
      "input(l:Qubit, k:Qubit);\n"
      "circuit MeasLift = crl { input(l:Qubit); Meas(l) -> l1; lift(l1) => u; };\n"
      "let _ = apply[u](MeasLift, @l) in\n"
      "case u { 0 => apply[s](MeasLift, @k) | 1 => apply[s](MeasLift, @k) }");
  EvalEnv plain;
  auto expected = std::get<RightConfig>(run_closed(program.body, plain, program.input));
  EXPECT_EQ(expected.value.tree(), parse_tree("<u ? <s ? _ | _> | <s ? _ | _>>"));
  EvalEnv env;
  env.mutations.skip_let_flatten = true;
  auto mutated = std::get<RightConfig>(run_closed(program.body, env, program.input));
  EXPECT_EQ(mutated.value.tree(), parse_tree("<u ? _ | _>"));
}

}  // namespace
}  // namespace pqk
