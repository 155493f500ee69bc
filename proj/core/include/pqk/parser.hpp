#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pqk/crl.hpp"
#include "pqk/syntax.hpp"

namespace pqk {

// A `.pqk` source: optional ambient `input(...)` header, named circuit
// constants, then a single term.
struct Program {
  LabelContext input;
  std::vector<Label> input_order;
  std::vector<std::pair<std::string, BoxedCircuit>> constants;
  Term body;
};

// Identifiers that are neither bound nor declared constants but name a gate
// of `gates` resolve to that gate's boxed constant.
Program parse_program(std::string_view source, const GateSet& gates = GateSet::default_set());
Term parse_term(std::string_view source, const GateSet& gates = GateSet::default_set());
Value parse_value(std::string_view source, const GateSet& gates = GateSet::default_set());
Type parse_type(std::string_view source);
Lifted<Type> parse_lifted_type(std::string_view source);
LiftingTree parse_tree(std::string_view source);

// Boxed circuit for a `crl { ... }` constant: inputs in declaration order,
// outputs per path as the live labels in order of first occurrence.
BoxedCircuit box_listing(const Circuit& c, const std::vector<Label>& input_order,
                         const GateSet& gates = GateSet::default_set());

std::string print_type(const Type& t);
std::string print_lifted_type(const Lifted<Type>& alpha);
std::string print_value(const Value& v);
std::string print_term(const Term& m);
std::string print_program(const Program& p);

}  // namespace pqk
