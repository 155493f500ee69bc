#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pqk/crl.hpp"
#include "pqk/lexer.hpp"

namespace pqk {

struct ParsedCircuit {
  Circuit circuit;
  // Input labels in the order they were declared.
  std::vector<Label> input_order;
};

// `input(q:Qubit, ...); [cond ?] G(args) -> outs; [cond ?] lift(l) => u; ...`
ParsedCircuit parse_crl(std::string_view text);
// Stops before a closing `}` or at end of input.
ParsedCircuit parse_crl(TokenStream& tokens);

MType parse_mtype(std::string_view text);
MType parse_mtype(TokenStream& tokens);
MValue parse_mvalue(std::string_view text);
MValue parse_mvalue(TokenStream& tokens);
// `(u=0, s=1)`; either `,` or `;` separates bindings.
Assignment parse_condition(TokenStream& tokens);

std::string print_instruction(const Instruction& instr);
// One instruction per line, each terminated by `;`.
std::string print_crl(const Circuit& c);
std::string print_crl_inline(const Circuit& c);

// Graphviz rendering: one node per instruction, edges carry wire labels,
// conditional instructions clustered by their condition.
std::string to_dot(const Circuit& c, const std::string& name = "circuit");

}  // namespace pqk
