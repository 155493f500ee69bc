#include <random>

#include <gtest/gtest.h>

#include "pqk/crl_text.hpp"
#include "pqk/json.hpp"
#include "pqk/metatheory.hpp"
#include "pqk/parser.hpp"

namespace pqk {
namespace {

// Serialize, print, reparse, deserialize.
Json reparsed(const Json& j) { return Json::parse(j.dump()); }

TEST(Json, TreeShape) {
  auto tree = parse_tree("<u ? _ | <s ? _ | _>>");
  Json j = to_json(tree);
  EXPECT_EQ(j.dump(), R"({"var":"u","zero":{"leaf":null},"one":{"var":"s","zero":{"leaf":null},"one":{"leaf":null}}})");
  EXPECT_EQ(tree_from_json(reparsed(j)), tree);
}

TEST(Json, LiftedObjects) {
  Lifted<int> xi(parse_tree("<u ? _ | _>"), {3, 4});
  Json j = lifted_to_json(xi, [](int x) { return Json(x); });
  EXPECT_EQ(j.dump(), R"({"var":"u","zero":{"leaf":3},"one":{"leaf":4}})");
  EXPECT_EQ(lifted_from_json<int>(reparsed(j), [](const Json& v) { return v.get<int>(); }), xi);
  EXPECT_THROW(lifted_from_json<int>(Json::parse(R"({"var":"u"})"), [](const Json& v) { return v.get<int>(); }),
               Error);
}

TEST(Json, Scalars) {
  Assignment a{{LiftedVar("u"), true}, {LiftedVar("s"), false}};
  EXPECT_EQ(to_json(a).dump(), R"({"s":0,"u":1})");
  EXPECT_EQ(assignment_from_json(reparsed(to_json(a))), a);
  MValue v = MValue::pair(MValue::label("q"), MValue::pair(MValue::unit(), MValue::label("b")));
  EXPECT_EQ(to_json(v).dump(), R"(["q",[null,"b"]])");
  EXPECT_EQ(mvalue_from_json(reparsed(to_json(v))), v);
  MType t = MType::tensor(MType::qubit(), MType::bit());
  EXPECT_EQ(mtype_from_json(reparsed(to_json(t))), t);
  LabelContext q{{Label("q"), WireType::Qubit}, {Label("x"), WireType::Bit}};
  EXPECT_EQ(to_json(q).dump(), R"({"q":"Qubit","x":"Bit"})");
  EXPECT_EQ(label_context_from_json(reparsed(to_json(q))), q);
}

TEST(Json, CircuitsAndSignatures) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    Circuit c = gen_circuit(rng);
    EXPECT_EQ(circuit_from_json(reparsed(to_json(c))), c) << print_crl(c);
    auto sig = check_signature(c);
    EXPECT_EQ(signature_from_json(reparsed(to_json(sig))), sig);
  }
}

TEST(Json, GateSet) {
  const GateSet& gates = GateSet::default_set();
  GateSet back = gate_set_from_json(reparsed(to_json(gates)));
  EXPECT_EQ(back.gates(), gates.gates());
  EXPECT_THROW(gate_set_from_json(Json::parse(R"({"gate":[]})")), Error);
}

TEST(Json, RunTrace) {
  Circuit c = parse_crl("input(q:Qubit, r:Qubit); H(q) -> q1; Meas(q1) -> b; lift(b) => u;").circuit;
  auto trace = simulate(c, QuantumState::product(c.input), 5);
  Json j = reparsed(to_json(trace));
  EXPECT_EQ(assignment_from_json(j.at("path")), trace.path);
  EXPECT_EQ(label_context_from_json(j.at("outputs")), trace.outputs);
  EXPECT_EQ(j.at("qubits"), Json::array({"r"}));
  EXPECT_EQ(j.at("amplitudes").size(), 2u);
  EXPECT_EQ(j.at("lifts").at(0).at("var"), "u");
}

}  // namespace
}  // namespace pqk
