#include "pqk/crl_text.hpp"

#include <map>
#include <sstream>

namespace pqk {

namespace {

WireType parse_wire(TokenStream& tokens) {
  if (tokens.accept_ident("Bit")) return WireType::Bit;
  if (tokens.accept_ident("Qubit")) return WireType::Qubit;
  tokens.fail("expected Bit or Qubit");
}

MType parse_mtype_atom(TokenStream& tokens) {
  if (tokens.accept_ident("Unit")) return MType::unit();
  if (tokens.accept_ident("Bit")) return MType::bit();
  if (tokens.accept_ident("Qubit")) return MType::qubit();
  if (tokens.accept_symbol("(")) {
    MType inner = parse_mtype(tokens);
    tokens.expect_symbol(")");
    return inner;
  }
  tokens.fail("expected an M-type");
}

MValue tuple_of(std::vector<MValue> items) {
  if (items.empty()) return MValue::unit();
  MValue out = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;) out = MValue::pair(items[i], out);
  return out;
}

std::vector<MValue> parse_mvalue_list(TokenStream& tokens) {
  tokens.expect_symbol("(");
  std::vector<MValue> items;
  if (!tokens.accept_symbol(")")) {
    do {
      items.push_back(parse_mvalue(tokens));
    } while (tokens.accept_symbol(","));
    tokens.expect_symbol(")");
  }
  return items;
}

void expect_end(TokenStream& tokens) {
  if (!tokens.at_end()) tokens.fail("unexpected trailing input");
}

Instruction parse_instruction(TokenStream& tokens) {
  Assignment cond;
  if (tokens.peek().is_symbol("(")) {
    cond = parse_condition(tokens);
    tokens.expect_symbol("?");
  }
  if (tokens.peek().is_ident("lift") && tokens.peek(1).is_symbol("(")) {
    tokens.next();
    tokens.expect_symbol("(");
    Label wire(tokens.expect_identifier("a label").text);
    tokens.expect_symbol(")");
    tokens.expect_symbol("=>");
    LiftedVar var(tokens.expect_identifier("a lifted variable").text);
    return LiftInstr{cond, wire, var};
  }
  std::string gate = tokens.expect_identifier("a gate name").text;
  MValue in = tuple_of(parse_mvalue_list(tokens));
  tokens.expect_symbol("->");
  MValue out = parse_mvalue(tokens);
  return GateApp{cond, gate, in, out};
}

std::string print_args(const MValue& v) {
  switch (v.kind()) {
    case MValue::Kind::Unit: return "()";
    case MValue::Kind::Label: return "(" + v.to_string() + ")";
    case MValue::Kind::Pair: return v.to_string();
  }
  return "";
}

}  // namespace

MType parse_mtype(TokenStream& tokens) {
  MType out = parse_mtype_atom(tokens);
  while (tokens.accept_symbol("*")) out = MType::tensor(out, parse_mtype_atom(tokens));
  return out;
}

MType parse_mtype(std::string_view text) {
  TokenStream tokens(tokenize(text));
  MType out = parse_mtype(tokens);
  expect_end(tokens);
  return out;
}

MValue parse_mvalue(TokenStream& tokens) {
  if (tokens.accept_symbol("*")) return MValue::unit();
  if (tokens.peek().is_symbol("(")) return tuple_of(parse_mvalue_list(tokens));
  return MValue::label(tokens.expect_identifier("a label").text);
}

MValue parse_mvalue(std::string_view text) {
  TokenStream tokens(tokenize(text));
  MValue out = parse_mvalue(tokens);
  expect_end(tokens);
  return out;
}

Assignment parse_condition(TokenStream& tokens) {
  tokens.expect_symbol("(");
  std::vector<Assignment::Binding> bindings;
  if (!tokens.accept_symbol(")")) {
    do {
      Token var = tokens.expect_identifier("a lifted variable");
      tokens.expect_symbol("=");
      Token bit = tokens.expect_number();
      if (bit.text != "0" && bit.text != "1") throw SyntaxError(bit.span, "condition bits are 0 or 1");
      bindings.emplace_back(LiftedVar(var.text), bit.text == "1");
    } while (tokens.accept_symbol(",") || tokens.accept_symbol(";"));
    tokens.expect_symbol(")");
  }
  try {
    return Assignment(std::move(bindings));
  } catch (const Error& e) {
    tokens.fail(e.detail());
  }
}

ParsedCircuit parse_crl(TokenStream& tokens) {
  ParsedCircuit out;
  tokens.expect_ident("input");
  tokens.expect_symbol("(");
  if (!tokens.accept_symbol(")")) {
    do {
      Token name = tokens.expect_identifier("a label");
      tokens.expect_symbol(":");
      WireType w = parse_wire(tokens);
      Label label(name.text);
      if (out.circuit.input.contains(label)) throw SyntaxError(name.span, "label " + name.text + " declared twice");
      out.circuit.input.add(label, w);
      out.input_order.push_back(label);
    } while (tokens.accept_symbol(","));
    tokens.expect_symbol(")");
  }
  while (tokens.accept_symbol(";")) {
    if (tokens.at_end() || tokens.peek().is_symbol("}")) break;
    out.circuit.instructions.push_back(parse_instruction(tokens));
  }
  return out;
}

ParsedCircuit parse_crl(std::string_view text) {
  TokenStream tokens(tokenize(text));
  ParsedCircuit out = parse_crl(tokens);
  expect_end(tokens);
  return out;
}

std::string print_instruction(const Instruction& instr) {
  std::string out;
  const Assignment& cond = condition(instr);
  if (!cond.empty()) out += cond.to_string() + " ? ";
  if (const auto* g = std::get_if<GateApp>(&instr)) {
    out += g->gate + print_args(g->in) + " -> " + g->out.to_string();
  } else {
    const auto& l = std::get<LiftInstr>(instr);
    out += "lift(" + l.wire.name() + ") => " + l.var.name();
  }
  return out;
}

namespace {

std::string print_input(const LabelContext& q) {
  std::string out = "input(";
  bool first = true;
  for (const auto& [label, type] : q.entries()) {
    if (!first) out += ", ";
    first = false;
    out += label.name() + ":" + std::string(to_string(type));
  }
  return out + ")";
}

}  // namespace

std::string print_crl(const Circuit& c) {
  std::string out = print_input(c.input) + ";\n";
  for (const auto& instr : c.instructions) out += print_instruction(instr) + ";\n";
  return out;
}

std::string print_crl_inline(const Circuit& c) {
  std::string out = print_input(c.input) + ";";
  for (const auto& instr : c.instructions) out += " " + print_instruction(instr) + ";";
  return out;
}

std::string to_dot(const Circuit& c, const std::string& name) {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box, fontname=\"monospace\"];\n";
  out << "  edge [fontname=\"monospace\", fontsize=10];\n";

  std::map<Label, std::string> producer;
  std::map<Label, bool> consumed;
  for (const auto& [label, type] : c.input.entries()) {
    std::string node = "in_" + std::to_string(producer.size());
    out << "  " << node << " [shape=plaintext, label=\"" << label.name() << " : " << to_string(type) << "\"];\n";
    producer[label] = node;
  }

  std::map<Assignment, std::vector<std::string>> clusters;
  std::vector<std::string> edges;
  for (std::size_t i = 0; i < c.instructions.size(); ++i) {
    const Instruction& instr = c.instructions[i];
    std::string node = "op_" + std::to_string(i);
    std::vector<Label> inputs;
    std::vector<Label> outputs;
    std::string decl;
    if (const auto* g = std::get_if<GateApp>(&instr)) {
      inputs = labels_of(g->in);
      outputs = labels_of(g->out);
      decl = node + " [label=\"" + g->gate + "\"];";
    } else {
      const auto& l = std::get<LiftInstr>(instr);
      inputs = {l.wire};
      decl = node + " [shape=diamond, label=\"lift => " + l.var.name() + "\"];";
    }
    clusters[condition(instr)].push_back(decl);
    for (const auto& l : inputs) {
      auto from = producer.find(l);
      std::string source = from == producer.end() ? "\"?" + l.name() + "\"" : from->second;
      edges.push_back(source + " -> " + node + " [label=\"" + l.name() + "\"];");
      consumed[l] = true;
    }
    for (const auto& l : outputs) producer[l] = node;
  }

  std::size_t cluster_id = 0;
  for (const auto& [cond, nodes] : clusters) {
    if (cond.empty()) {
      for (const auto& n : nodes) out << "  " << n << "\n";
      continue;
    }
    out << "  subgraph cluster_" << cluster_id++ << " {\n";
    out << "    label=\"" << cond.to_string() << "\";\n";
    out << "    style=dashed;\n";
    for (const auto& n : nodes) out << "    " << n << "\n";
    out << "  }\n";
  }
  for (const auto& e : edges) out << "  " << e << "\n";

  std::size_t sink = 0;
  for (const auto& [label, node] : producer) {
    if (consumed[label]) continue;
    std::string out_node = "out_" + std::to_string(sink++);
    out << "  " << out_node << " [shape=plaintext, label=\"" << label.name() << "\"];\n";
    out << "  " << node << " -> " << out_node << " [label=\"" << label.name() << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace pqk
