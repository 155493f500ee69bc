#include "pqk/crl_text.hpp"
#include "pqk/parser.hpp"

namespace pqk {

namespace {

enum class TypeContext { Top, TensorLeft, TensorRight, ArrowDomain, BangBody };

std::string print_type_in(const Type& t, TypeContext ctx);

std::string print_lifted_type_leaf(const Lifted<Type>& alpha, TypeContext leaf_ctx) {
  if (alpha.is_leaf()) return print_type_in(alpha.leaf(), leaf_ctx);
  return lifted_to_string(alpha, [](const Type& t) { return print_type_in(t, TypeContext::Top); });
}

std::string lifted_mtype(const Lifted<MType>& theta) {
  return lifted_to_string(theta, [](const MType& t) { return t.to_string(); });
}

std::string print_type_in(const Type& t, TypeContext ctx) {
  switch (t.kind()) {
    case Type::Kind::Unit: return "Unit";
    case Type::Kind::Wire: return std::string(to_string(t.wire_type()));
    case Type::Kind::Bang: return "!" + print_lifted_type_leaf(t.bang_body(), TypeContext::BangBody);
    case Type::Kind::Circ: {
      std::string out = "Circ";
      if (!t.tree().is_leaf()) out += "[" + t.tree().to_string() + "]";
      return out + "(" + t.circ_in().to_string() + ", " + lifted_mtype(t.circ_out()) + ")";
    }
    case Type::Kind::Tensor: {
      std::string out =
          print_type_in(t.left(), TypeContext::TensorLeft) + " * " + print_type_in(t.right(), TypeContext::TensorRight);
      bool wrap = ctx == TypeContext::TensorRight || ctx == TypeContext::BangBody;
      return wrap ? "(" + out + ")" : out;
    }
    case Type::Kind::Arrow: {
      std::string out = print_type_in(t.domain(), TypeContext::ArrowDomain) + " -o";
      if (!t.tree().is_leaf()) out += "[" + t.tree().to_string() + "]";
      out += " " + print_lifted_type_leaf(t.codomain(), TypeContext::Top);
      return ctx == TypeContext::Top ? out : "(" + out + ")";
    }
  }
  return "";
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent), ' '); }

class TermPrinter {
 public:
  std::string value(const Value& v, int indent) const {
    switch (v.kind()) {
      case Value::Kind::Unit: return "*";
      case Value::Kind::Var: return v.name();
      case Value::Kind::Label: return "@" + v.label_value().name();
      case Value::Kind::Lam:
        return "fun (" + v.name() + " : " + print_type(v.param_type()) + ") -> " + term(v.body(), indent + 2);
      case Value::Kind::Lift: return "lift " + term(v.body(), indent + 2);
      case Value::Kind::Boxed: {
        const BoxedCircuit& b = v.boxed_value();
        return "boxed(" + b.in.to_string() + ", crl { " + print_crl_inline(b.circuit) + " }, " +
               lifted_to_string(b.out, [](const MValue& m) { return m.to_string(); }) + ")";
      }
      case Value::Kind::Pair: {
        std::string out = "(" + operand(v.left(), indent);
        const Value* rest = &v.right();
        while (rest->kind() == Value::Kind::Pair) {
          out += ", " + operand(rest->left(), indent);
          rest = &rest->right();
        }
        return out + ", " + operand(*rest, indent) + ")";
      }
    }
    return "";
  }

  std::string term(const Term& m, int indent) const {
    switch (m.kind()) {
      case Term::Kind::App: return operand(m.first(), indent) + " " + operand(m.second(), indent);
      case Term::Kind::Return: return "return " + value(m.first(), indent);
      case Term::Kind::Force: return "force " + value(m.first(), indent);
      case Term::Kind::Box: {
        std::string out = "box[" + m.box_type().to_string() + "]";
        if (!m.vars().empty()) out += "^{" + var_list(m.vars()) + "}";
        return out + " " + value(m.first(), indent);
      }
      case Term::Kind::Apply: {
        std::string out = "apply";
        if (!m.vars().empty()) out += "[" + var_list(m.vars()) + "]";
        return out + "(" + operand(m.first(), indent) + ", " + operand(m.second(), indent) + ")";
      }
      case Term::Kind::LetPair:
        return "let (" + m.name() + ", " + m.second_name() + ") = " + value(m.first(), indent + 2) + " in\n" +
               pad(indent) + term(m.body(), indent);
      case Term::Kind::Let:
        return "let " + m.name() + " = " + term(m.bound(), indent + 2) + " in\n" + pad(indent) +
               lifted(m.continuation().tree(), m.continuation().leaves().begin(), indent);
    }
    return "";
  }

 private:
  // Abstractions and lifts extend to the right, so they are parenthesized
  // wherever a delimiter other than `)` could follow.
  std::string operand(const Value& v, int indent) const {
    if (v.kind() == Value::Kind::Lam || v.kind() == Value::Kind::Lift) return "(" + value(v, indent) + ")";
    return value(v, indent);
  }

  static std::string var_list(const std::vector<LiftedVar>& vars) {
    std::string out;
    for (const auto& v : vars) out += (out.empty() ? "" : ", ") + v.name();
    return out;
  }

  std::string lifted(const LiftingTree& tree, std::vector<Term>::const_iterator leaf, int indent) const {
    if (tree.is_leaf()) return term(*leaf, indent);
    auto one_leaf = leaf + static_cast<std::ptrdiff_t>(tree.zero().leaf_count());
    return "case " + tree.var().name() + " {\n" + pad(indent + 2) + "0 => " + lifted(tree.zero(), leaf, indent + 4) +
           "\n" + pad(indent + 2) + "| 1 => " + lifted(tree.one(), one_leaf, indent + 4) + "\n" + pad(indent) + "}";
  }
};

}  // namespace

std::string print_type(const Type& t) { return print_type_in(t, TypeContext::Top); }

std::string print_lifted_type(const Lifted<Type>& alpha) { return print_lifted_type_leaf(alpha, TypeContext::Top); }

std::string print_value(const Value& v) { return TermPrinter().value(v, 0); }

std::string print_term(const Term& m) { return TermPrinter().term(m, 0); }

std::string print_program(const Program& p) {
  std::string out;
  if (!p.input_order.empty()) {
    out += "input(";
    for (std::size_t i = 0; i < p.input_order.size(); ++i) {
      if (i > 0) out += ", ";
      out += p.input_order[i].name() + ":" + std::string(to_string(*p.input.get(p.input_order[i])));
    }
    out += ");\n";
  }
  for (const auto& [name, boxed] : p.constants) {
    out += "circuit " + name + " = " + print_value(Value::boxed(boxed)) + ";\n";
  }
  if (!out.empty()) out += "\n";
  return out + print_term(p.body) + "\n";
}

}  // namespace pqk
