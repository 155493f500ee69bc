#include "pqk/json.hpp"

#include "pqk/crl_text.hpp"
#include "pqk/parser.hpp"

namespace pqk {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::InvalidArgument, "malformed JSON: " + what); }

WireType wire_from_string(const std::string& text) {
  if (text == "Qubit") return WireType::Qubit;
  if (text == "Bit") return WireType::Bit;
  malformed("wire type " + text);
}

}  // namespace

Json to_json(const LiftingTree& tree) {
  if (tree.is_leaf()) return Json{{"leaf", nullptr}};
  Json node;
  node["var"] = tree.var().name();
  node["zero"] = to_json(tree.zero());
  node["one"] = to_json(tree.one());
  return node;
}

LiftingTree tree_from_json(const Json& j) {
  return lifted_from_json<bool>(j, [](const Json&) { return true; }).tree();
}

Json to_json(const Assignment& a) {
  Json out = Json::object();
  for (const auto& [var, bit] : a.bindings()) out[var.name()] = bit ? 1 : 0;
  return out;
}

Assignment assignment_from_json(const Json& j) {
  if (!j.is_object()) malformed("assignment must be an object");
  std::vector<Assignment::Binding> bindings;
  for (const auto& [name, bit] : j.items()) {
    if (!bit.is_number_integer() || (bit.get<int>() != 0 && bit.get<int>() != 1)) malformed("bit of " + name);
    bindings.emplace_back(LiftedVar(name), bit.get<int>() == 1);
  }
  return Assignment(std::move(bindings));
}

Json to_json(const MValue& v) {
  switch (v.kind()) {
    case MValue::Kind::Unit: return nullptr;
    case MValue::Kind::Label: return v.label_value().name();
    case MValue::Kind::Pair: return Json::array({to_json(v.left()), to_json(v.right())});
  }
  return nullptr;
}

MValue mvalue_from_json(const Json& j) {
  if (j.is_null()) return MValue::unit();
  if (j.is_string()) return MValue::label(j.get<std::string>());
  if (j.is_array() && j.size() == 2) return MValue::pair(mvalue_from_json(j[0]), mvalue_from_json(j[1]));
  malformed("M-value " + j.dump());
}

Json to_json(const MType& t) { return t.to_string(); }

MType mtype_from_json(const Json& j) {
  if (!j.is_string()) malformed("M-type must be a string");
  return parse_mtype(j.get<std::string>());
}

Json to_json(const LabelContext& q) {
  Json out = Json::object();
  for (const auto& [label, type] : q.entries()) out[label.name()] = std::string(to_string(type));
  return out;
}

LabelContext label_context_from_json(const Json& j) {
  if (!j.is_object()) malformed("label context must be an object");
  LabelContext q;
  for (const auto& [name, type] : j.items()) q.add(Label(name), wire_from_string(type.get<std::string>()));
  return q;
}

Json to_json(const Instruction& instr) {
  Json out;
  out["cond"] = to_json(condition(instr));
  if (const auto* g = std::get_if<GateApp>(&instr)) {
    out["gate"] = g->gate;
    out["in"] = to_json(g->in);
    out["out"] = to_json(g->out);
  } else {
    const auto& lift = std::get<LiftInstr>(instr);
    out["lift"] = lift.wire.name();
    out["var"] = lift.var.name();
  }
  return out;
}

Instruction instruction_from_json(const Json& j) {
  if (!j.is_object()) malformed("instruction must be an object");
  Assignment cond = j.contains("cond") ? assignment_from_json(j.at("cond")) : Assignment{};
  if (j.contains("gate")) {
    return GateApp{cond, j.at("gate").get<std::string>(), mvalue_from_json(j.at("in")), mvalue_from_json(j.at("out"))};
  }
  if (j.contains("lift")) {
    return LiftInstr{cond, Label(j.at("lift").get<std::string>()), LiftedVar(j.at("var").get<std::string>())};
  }
  malformed("instruction needs gate or lift");
}

Json to_json(const Circuit& c) {
  Json out;
  out["input"] = to_json(c.input);
  out["instructions"] = Json::array();
  for (const auto& instr : c.instructions) out["instructions"].push_back(to_json(instr));
  return out;
}

Circuit circuit_from_json(const Json& j) {
  Circuit c;
  c.input = label_context_from_json(j.at("input"));
  for (const auto& instr : j.at("instructions")) c.instructions.push_back(instruction_from_json(instr));
  return c;
}

Json to_json(const CircuitSignature& s) {
  Json out;
  out["tree"] = to_json(s.tree);
  out["input"] = to_json(s.input);
  out["outputs"] = lifted_to_json(s.outputs, [](const LabelContext& q) { return to_json(q); });
  return out;
}

CircuitSignature signature_from_json(const Json& j) {
  CircuitSignature s;
  s.tree = tree_from_json(j.at("tree"));
  s.input = label_context_from_json(j.at("input"));
  s.outputs = lifted_from_json<LabelContext>(j.at("outputs"), label_context_from_json);
  if (!(s.outputs.tree() == s.tree)) malformed("signature outputs do not follow its tree");
  return s;
}

Json to_json(const GateSet& gates) {
  Json list = Json::array();
  for (const auto& [name, gate] : gates.gates()) {
    list.push_back(Json{{"name", name}, {"in", to_json(gate.in)}, {"out", to_json(gate.out)}});
  }
  return Json{{"gates", list}};
}

GateSet gate_set_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("gates") || !j.at("gates").is_array()) malformed("gate set needs a gates array");
  GateSet gates;
  for (const auto& g : j.at("gates")) {
    gates.add(Gate{g.at("name").get<std::string>(), mtype_from_json(g.at("in")), mtype_from_json(g.at("out"))});
  }
  return gates;
}

Json to_json(const Type& t) { return print_type(t); }

Json to_json(const Value& v) { return print_value(v); }

Json to_json(const RunTrace& trace) {
  Json out;
  out["path"] = to_json(trace.path);
  Json lifts = Json::array();
  for (const auto& [var, bit] : trace.lifts) lifts.push_back(Json{{"var", var.name()}, {"bit", bit ? 1 : 0}});
  out["lifts"] = lifts;
  out["outputs"] = to_json(trace.outputs);
  std::vector<Label> order;
  Json qubits = Json::array();
  for (const auto& [label, _] : trace.state.wire_index()) {
    order.push_back(label);
    qubits.push_back(label.name());
  }
  out["qubits"] = qubits;
  Json amplitudes = Json::array();
  for (const auto& amp : trace.state.amplitudes_in(order)) amplitudes.push_back(Json::array({amp.real(), amp.imag()}));
  out["amplitudes"] = amplitudes;
  Json classical = Json::object();
  for (const auto& [label, bit] : trace.state.classical()) classical[label.name()] = bit ? 1 : 0;
  out["classical"] = classical;
  return out;
}

}  // namespace pqk
