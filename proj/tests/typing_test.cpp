#include <random>

#include <gtest/gtest.h>

#include "pqk/eval.hpp"
#include "pqk/metatheory.hpp"
#include "pqk/parser.hpp"
#include "pqk/typing.hpp"
#include "support.hpp"

namespace pqk {
namespace {

ComputationTyping type_program(const std::string& source) {
  auto program = parse_program(source);
  return type_closed(program.body, program.input);
}

// Kind and rule of the rejection.
std::pair<ErrorKind, std::string> rejection(const std::string& source) {
  try {
    type_program(source);
  } catch (const TypeError& e) {
    return {e.kind(), e.rule()};
  }
  ADD_FAILURE() << "expected a type error for " << source;
  return {ErrorKind::InvalidArgument, ""};
}

const char* kMeasLift = "circuit ML = crl { input(l:Qubit); Meas(l) -> l1; lift(l1) => u; };\n";

TEST(TypeValue, Examples) {
  TypingContext with_x;
  with_x.bind("x", Type::qubit());
  auto var = type_value(with_x, Value::var("x"));
  EXPECT_EQ(var.type, Type::qubit());
  EXPECT_TRUE(var.leftover.linear_vars().empty());

  TypingContext with_label(LabelContext{{Label("l"), WireType::Qubit}});
  auto label = type_value(with_label, Value::label(Label("l")));
  EXPECT_EQ(label.type, Type::qubit());
  EXPECT_TRUE(label.leftover.labels().empty());

  auto lift = type_value(TypingContext{}, parse_value("lift return *"));
  EXPECT_EQ(lift.type, Type::bang(Lifted<Type>(Type::unit())));
}

TEST(TypeTerm, ReturnUnit) {
  auto typing = type_closed(parse_term("return *"));
  EXPECT_EQ(typing.tree(), LiftingTree::leaf());
  EXPECT_EQ(typing.type, Lifted<Type>(Type::unit()));
}

TEST(TypeTerm, OneWayProgram) {
  auto typing = type_program(test::sample("one-way.pqk"));
  EXPECT_EQ(typing.tree(), LiftingTree::leaf());
  EXPECT_TRUE(alpha_equiv(typing.type, parse_lifted_type("Qubit -o Qubit -o[<u ? _ | _>] <u ? Qubit | Bit>")));
  // Branch types of the inner arrow: Qubit when u = 0, Bit when u = 1.
  const Type& inner = typing.type.leaf().codomain().leaf();
  EXPECT_EQ(inner.codomain().at({{LiftedVar("u"), false}}), Type::qubit());
  EXPECT_EQ(inner.codomain().at({{LiftedVar("u"), true}}), Type::bit());
}

TEST(TypeTerm, LetExample) {
  auto typing = type_program(test::sample("example-let.pqk"));
  EXPECT_EQ(typing.tree(), parse_tree("<u ? _ | _>"));
  EXPECT_EQ(typing.type, Lifted<Type>(parse_tree("<u ? _ | _>"), {Type::qubit(), Type::qubit()}));
}

TEST(TypeTerm, BoxedPrograms) {
  EXPECT_EQ(type_program(test::sample("alice.pqk")).type.leaf(), parse_type("Circ(Qubit * Qubit, Bit * Bit)"));
  EXPECT_TRUE(alpha_equiv(
      type_program(test::sample("teleport.pqk")).type.leaf(),
      parse_type("Circ[<a ? <b ? _ | _> | <b ? _ | _>>](Qubit * (Qubit * Qubit), <a ? <b ? Qubit | Qubit> | <b ? Qubit | Qubit>>)")));
}

TEST(TypeTerm, ApplyRenamesTheCircuitBinders) {
  auto typing = type_program(std::string(kMeasLift) + "input(q:Qubit);\napply[s](ML, @q)");
  EXPECT_EQ(typing.type, Lifted<Type>(parse_tree("<s ? _ | _>"), {Type::unit(), Type::unit()}));
}

TEST(TypeTerm, Rejections) {
  EXPECT_EQ(rejection(test::read_text(test::fixture_path("dup-label.pqk"))).first, ErrorKind::LinearityViolation);
  EXPECT_EQ(rejection(test::read_text(test::fixture_path("unused-label.pqk"))).first, ErrorKind::LeftoverLinear);
  EXPECT_EQ(rejection("return fun (q : Qubit) -> return *").first, ErrorKind::LeftoverLinear);
  EXPECT_EQ(rejection("force *"), std::make_pair(ErrorKind::TypeMismatch, std::string("force")));
  EXPECT_EQ(rejection("return x").first, ErrorKind::UnboundVar);
  EXPECT_EQ(rejection("return fun (q : Qubit) -> return lift return q"),
            std::make_pair(ErrorKind::NonParameterUnderLift, std::string("lift")));
  EXPECT_EQ(rejection(std::string(kMeasLift) + "input(q:Qubit);\napply(ML, @q)"),
            std::make_pair(ErrorKind::LiftedVarNotFresh, std::string("apply")));
  EXPECT_EQ(rejection(std::string(kMeasLift) + "input(q:Qubit);\nlet x = apply[u](ML, @q) in return x"),
            std::make_pair(ErrorKind::BranchArityMismatch, std::string("let")));
  EXPECT_EQ(rejection(std::string(kMeasLift) +
                      "input(q:Qubit, k:Qubit);\nlet x = apply[u](ML, @q) in case u { 0 => apply[u](ML, @k) | 1 => "
                      "apply[u](ML, @k) }")
                .first,
            ErrorKind::FlattenClash);
}

TEST(TypeTerm, EveryRejectionNamesARule) {
  for (const char* source : {"force *", "return x", "return (*, y)", "let (a, b) = * in return a",
                             "box[Qubit] lift return fun (q : Bit) -> return q"}) {
    try {
      type_closed(parse_term(source));
      ADD_FAILURE() << source;
    } catch (const TypeError& e) {
      EXPECT_FALSE(e.rule().empty()) << source;
    }
  }
}

TEST(TypeLiftedTerm, SingleLeafAgreesWithTypeTerm) {
  TypingContext ctx;
  Term m = parse_term("return x");
  auto lifted = type_lifted_term(ctx, "x", Lifted<Type>(Type::unit()), Lifted<Term>(m));
  TypingContext bound;
  bound.bind("x", Type::unit());
  EXPECT_EQ(lifted.branches.leaf(), type_term(bound, m).typing);
}

TEST(TypeLiftedTerm, BranchCountMismatch) {
  auto binder = Lifted<Type>(parse_tree("<u ? _ | _>"), {Type::unit(), Type::unit()});
  EXPECT_THROW(type_lifted_term(TypingContext{}, "x", binder, Lifted<Term>(parse_term("return x"))), TypeError);
}

TEST(MJudgmentBridge, Examples) {
  EXPECT_EQ(mjudgment_bridge({}, Value::unit()), MType::unit());
  EXPECT_EQ(mjudgment_bridge({{Label("l"), WireType::Bit}}, Value::label(Label("l"))), MType::bit());
  try {
    mjudgment_bridge({}, parse_value("fun (x : Unit) -> return x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAnMValue);
  }
}

TEST(MJudgmentBridge, AgreesWithValueTyping) {
  std::mt19937_64 rng(5);
  int next = 0;
  auto random_mvalue = [&](auto&& self, int depth, LabelContext& q) -> MValue {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 3 : 2);
    switch (pick(rng)) {
      case 0: return MValue::unit();
      case 1:
      case 2: {
        Label l("w" + std::to_string(next++));
        q.add(l, pick(rng) % 2 == 0 ? WireType::Qubit : WireType::Bit);
        return MValue::label(l);
      }
      default: {
        MValue left = self(self, depth - 1, q);
        return MValue::pair(left, self(self, depth - 1, q));
      }
    }
  };
  for (int i = 0; i < 200; ++i) {
    LabelContext q;
    MValue v = random_mvalue(random_mvalue, 3, q);
    MType bridged = mjudgment_bridge(q, from_mvalue(v));
    EXPECT_EQ(Type::from_mtype(bridged), type_closed_value(from_mvalue(v), q));
    EXPECT_EQ(bridged, type_mvalue(q, v));
  }
}

class CorpusTyping : public ::testing::Test {
 protected:
  static std::vector<CorpusItem> corpus() {
    GenConfig cfg;
    cfg.seed = 21;
    return gen_corpus(cfg, 150);
  }
};

TEST_F(CorpusTyping, Deterministic) {
  for (const auto& item : corpus()) EXPECT_EQ(type_closed(item.term), type_closed(item.term));
}

TEST_F(CorpusTyping, ParameterWeakening) {
  for (const auto& item : corpus()) {
    TypingContext ctx;
    ctx.bind("spare_thunk", Type::bang(Lifted<Type>(Type::unit())));
    ctx.bind("spare_circuit", parse_type("Circ(Qubit, Bit)"));
    auto weakened = type_term(ctx, item.term);
    EXPECT_EQ(weakened.typing, type_closed(item.term)) << print_term(item.term);
    EXPECT_TRUE(weakened.leftover.linear_vars().empty());
  }
}

TEST(Configurations, EmptyLeftConfiguration) {
  auto left = typecheck_left_config(Circuit{}, {}, parse_term("return *"));
  ASSERT_TRUE(left.check.ok) << left.check.detail;
  ASSERT_TRUE(left.typing);
  EXPECT_TRUE(left.typing->input.empty());
  EXPECT_EQ(left.typing->past, LiftingTree::leaf());
  EXPECT_EQ(left.typing->future, LiftingTree::leaf());
  EXPECT_EQ(left.typing->type, Lifted<Type>(Type::unit()));
  EXPECT_EQ(left.typing->outputs, Lifted<LabelContext>(LabelContext{}));
}

TEST(Configurations, StaleBranchFailsFirstConjunct) {
  Circuit c;
  c.input.add(Label("x"), WireType::Bit);
  c.instructions.push_back(LiftInstr{{}, Label("x"), LiftedVar("u")});
  auto left = typecheck_left_config(c, {}, parse_term("return *"));
  EXPECT_FALSE(left.check.ok);
  EXPECT_EQ(left.check.conjunct, "branch");
}

TEST(Configurations, EvaluatedLetExampleIsWellTyped) {
  auto program = parse_program(test::sample("example-let.pqk"));
  Circuit start;
  start.input = program.input;
  auto left = typecheck_left_config(start, {}, program.body);
  ASSERT_TRUE(left.check.ok) << left.check.detail;
  EvalEnv env;
  auto outcome = run_closed(program.body, env, program.input);
  ASSERT_TRUE(std::holds_alternative<RightConfig>(outcome));
  const auto& right = std::get<RightConfig>(outcome);
  auto check = typecheck_right_config(right.circuit, right.value, expectation_from(*left.typing, {}));
  EXPECT_TRUE(check.ok) << check.conjunct << ": " << check.detail;
}

}  // namespace
}  // namespace pqk
