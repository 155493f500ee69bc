#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "pqk/crl.hpp"
#include "pqk/lifting.hpp"
#include "pqk/simulator.hpp"
#include "pqk/syntax.hpp"

namespace pqk {

// Keys keep insertion order so printed documents are stable.
using Json = nlohmann::ordered_json;

// Lifted objects: {"leaf": X} | {"var": "u", "zero": ..., "one": ...}.
template <class X, class F>
Json lifted_to_json(const Lifted<X>& xi, F&& leaf_to_json) {
  if (xi.is_leaf()) return Json{{"leaf", leaf_to_json(xi.leaf())}};
  Json node;
  node["var"] = xi.tree().var().name();
  node["zero"] = lifted_to_json(xi.zero(), leaf_to_json);
  node["one"] = lifted_to_json(xi.one(), leaf_to_json);
  return node;
}

template <class X, class F>
Lifted<X> lifted_from_json(const Json& j, F&& leaf_from_json) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "lifted object must be a JSON object");
  if (j.contains("leaf")) return Lifted<X>(leaf_from_json(j.at("leaf")));
  if (!j.contains("var") || !j.contains("zero") || !j.contains("one")) {
    throw Error(ErrorKind::InvalidArgument, "lifted node needs var, zero and one");
  }
  return Lifted<X>::node(LiftedVar(j.at("var").get<std::string>()), lifted_from_json<X>(j.at("zero"), leaf_from_json),
                         lifted_from_json<X>(j.at("one"), leaf_from_json));
}

Json to_json(const LiftingTree& tree);
LiftingTree tree_from_json(const Json& j);

// {"u": 0, "s": 1}
Json to_json(const Assignment& a);
Assignment assignment_from_json(const Json& j);

// null | "label" | [left, right]
Json to_json(const MValue& v);
MValue mvalue_from_json(const Json& j);

// Surface syntax string, e.g. "Qubit * Bit".
Json to_json(const MType& t);
MType mtype_from_json(const Json& j);

// {"q": "Qubit", "x": "Bit"}
Json to_json(const LabelContext& q);
LabelContext label_context_from_json(const Json& j);

// {"cond": {...}, "gate": "H", "in": ..., "out": ...} | {"cond": {...}, "lift": "x", "var": "u"}
Json to_json(const Instruction& instr);
Instruction instruction_from_json(const Json& j);

// {"input": {...}, "instructions": [...]}
Json to_json(const Circuit& c);
Circuit circuit_from_json(const Json& j);

// {"tree": ..., "input": {...}, "outputs": lifted context}
Json to_json(const CircuitSignature& s);
CircuitSignature signature_from_json(const Json& j);

// {"gates": [{"name": "H", "in": "Qubit", "out": "Qubit"}, ...]}
Json to_json(const GateSet& gates);
GateSet gate_set_from_json(const Json& j);

// Types and values in surface syntax.
Json to_json(const Type& t);
Json to_json(const Value& v);

// {"path": {...}, "lifts": [{"var": "u", "bit": 1}], "outputs": {...},
//  "qubits": [...], "amplitudes": [[re, im], ...], "classical": {...}}
Json to_json(const RunTrace& trace);

}  // namespace pqk
