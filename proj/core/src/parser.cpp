#include "pqk/parser.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pqk/crl_text.hpp"
#include "pqk/lexer.hpp"

namespace pqk {

namespace {

const std::set<std::string, std::less<>> kKeywords = {
    "let", "in", "fun", "lift", "force", "box", "apply", "return", "case",
    "when", "do", "boxed", "crl", "circuit", "input",
};

bool is_keyword(std::string_view word) { return kKeywords.contains(word); }

template <class X>
Lifted<X> leaf_of(X value) {
  return Lifted<X>(std::move(value));
}

MValue tuple_of(const std::vector<MValue>& items) {
  if (items.empty()) return MValue::unit();
  MValue out = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;) out = MValue::pair(items[i], out);
  return out;
}

Value value_tuple(const std::vector<Value>& items, SourceSpan span) {
  if (items.empty()) return Value::unit(span);
  Value out = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;) out = Value::pair(items[i], out, span);
  return out;
}

class Parser {
 public:
  Parser(std::string_view source, const GateSet& gates) : tokens_(tokenize(source)), gates_(gates) {}

  Program program() {
    Program out;
    while (true) {
      if (tokens_.peek().is_ident("input") && tokens_.peek(1).is_symbol("(")) {
        if (!out.input_order.empty() || !out.input.empty()) tokens_.fail("input declared twice");
        tokens_.next();
        tokens_.expect_symbol("(");
        if (!tokens_.accept_symbol(")")) {
          do {
            Token name = tokens_.expect_identifier("a label");
            tokens_.expect_symbol(":");
            WireType w = wire();
            Label label(name.text);
            if (out.input.contains(label)) throw SyntaxError(name.span, "label " + name.text + " declared twice");
            out.input.add(label, w);
            out.input_order.push_back(label);
          } while (tokens_.accept_symbol(","));
          tokens_.expect_symbol(")");
        }
        tokens_.expect_symbol(";");
      } else if (tokens_.peek().is_ident("circuit")) {
        tokens_.next();
        Token name = tokens_.expect_identifier("a circuit name");
        if (is_keyword(name.text)) throw SyntaxError(name.span, "'" + name.text + "' is a keyword");
        if (constants_.contains(name.text)) throw SyntaxError(name.span, "circuit " + name.text + " defined twice");
        tokens_.expect_symbol("=");
        BoxedCircuit boxed;
        if (tokens_.peek().is_ident("crl")) {
          ParsedCircuit parsed = crl_block();
          try {
            boxed = box_listing(parsed.circuit, parsed.input_order, gates_);
          } catch (const Error& e) {
            throw Error(e.kind(), "circuit " + name.text + " at " + name.span.to_string() + ": " + e.detail());
          }
        } else {
          Token start = tokens_.peek();
          Value v = value();
          if (v.kind() != Value::Kind::Boxed) throw SyntaxError(start.span, "expected crl { ... } or boxed(...)");
          boxed = v.boxed_value();
        }
        tokens_.expect_symbol(";");
        constants_[name.text] = boxed;
        out.constants.emplace_back(name.text, boxed);
      } else {
        break;
      }
    }
    out.body = term();
    expect_end();
    return out;
  }

  Term whole_term() {
    Term m = term();
    expect_end();
    return m;
  }

  Value whole_value() {
    Value v = value();
    expect_end();
    return v;
  }

  Type whole_type() {
    Type t = type();
    expect_end();
    return t;
  }

  Lifted<Type> whole_lifted_type() {
    Lifted<Type> t = lifted_type();
    expect_end();
    return t;
  }

  LiftingTree whole_tree() {
    LiftingTree t = tree();
    expect_end();
    return t;
  }

 private:
  void expect_end() {
    if (!tokens_.at_end()) tokens_.fail("unexpected trailing input");
  }

  std::string binder_name() {
    Token name = tokens_.expect_identifier("a variable");
    if (is_keyword(name.text)) throw SyntaxError(name.span, "'" + name.text + "' is a keyword");
    return name.text;
  }

  LiftedVar lifted_var() {
    Token name = tokens_.expect_identifier("a lifted variable");
    if (is_keyword(name.text)) throw SyntaxError(name.span, "'" + name.text + "' is a keyword");
    return LiftedVar(name.text);
  }

  std::vector<LiftedVar> lifted_var_list(std::string_view close) {
    std::vector<LiftedVar> out;
    if (tokens_.accept_symbol(close)) return out;
    do {
      out.push_back(lifted_var());
    } while (tokens_.accept_symbol(","));
    tokens_.expect_symbol(close);
    return out;
  }

  bool branch_bit() {
    Token bit = tokens_.expect_number();
    if (bit.text != "0" && bit.text != "1") throw SyntaxError(bit.span, "branch bits are 0 or 1");
    return bit.text == "1";
  }

  // Generic `<u ? X | Y>` with a leaf parser.
  template <class X, class F>
  Lifted<X> lifted(F&& leaf) {
    if (!tokens_.peek().is_symbol("<")) return Lifted<X>(leaf());
    Token open = tokens_.next();
    LiftedVar var = lifted_var();
    tokens_.expect_symbol("?");
    Lifted<X> zero = lifted<X>(leaf);
    tokens_.expect_symbol("|");
    Lifted<X> one = lifted<X>(leaf);
    tokens_.expect_symbol(">");
    try {
      return Lifted<X>::node(var, zero, one);
    } catch (const Error& e) {
      throw SyntaxError(open.span, e.detail());
    }
  }

  LiftingTree tree() {
    if (tokens_.accept_ident("_")) return LiftingTree::leaf();
    Token open = tokens_.expect_symbol("<");
    LiftedVar var = lifted_var();
    tokens_.expect_symbol("?");
    LiftingTree zero = tree();
    tokens_.expect_symbol("|");
    LiftingTree one = tree();
    tokens_.expect_symbol(">");
    try {
      return LiftingTree::node(var, zero, one);
    } catch (const Error& e) {
      throw SyntaxError(open.span, e.detail());
    }
  }

  WireType wire() {
    if (tokens_.accept_ident("Bit")) return WireType::Bit;
    if (tokens_.accept_ident("Qubit")) return WireType::Qubit;
    tokens_.fail("expected Bit or Qubit");
  }

  // Types

  Type type() {
    Type domain = tensor_type();
    if (!tokens_.peek().is_symbol("-o")) return domain;
    Token arrow = tokens_.next();
    std::optional<LiftingTree> annotated;
    if (tokens_.accept_symbol("[")) {
      annotated = tree();
      tokens_.expect_symbol("]");
    }
    Lifted<Type> codomain = lifted_type();
    if (annotated && !(*annotated == codomain.tree())) {
      throw SyntaxError(arrow.span, "arrow annotation " + annotated->to_string() + " does not match codomain tree " +
                                        codomain.tree().to_string());
    }
    return Type::arrow(domain, codomain);
  }

  Lifted<Type> lifted_type() {
    return lifted<Type>([this] { return type(); });
  }

  Type tensor_type() {
    Type out = type_atom();
    while (tokens_.accept_symbol("*")) out = Type::tensor(out, type_atom());
    return out;
  }

  Type type_atom() {
    if (tokens_.accept_ident("Unit")) return Type::unit();
    if (tokens_.accept_ident("Bit")) return Type::bit();
    if (tokens_.accept_ident("Qubit")) return Type::qubit();
    if (tokens_.accept_symbol("!")) {
      if (tokens_.peek().is_symbol("<")) return Type::bang(lifted_type());
      return Type::bang(Lifted<Type>(type_atom()));
    }
    if (tokens_.peek().is_ident("Circ")) {
      Token circ = tokens_.next();
      std::optional<LiftingTree> annotated;
      if (tokens_.accept_symbol("[")) {
        annotated = tree();
        tokens_.expect_symbol("]");
      }
      tokens_.expect_symbol("(");
      MType in = parse_mtype(tokens_);
      tokens_.expect_symbol(",");
      Lifted<MType> out = lifted<MType>([this] { return parse_mtype(tokens_); });
      tokens_.expect_symbol(")");
      if (annotated && !(*annotated == out.tree())) {
        throw SyntaxError(circ.span, "circuit annotation " + annotated->to_string() + " does not match output tree " +
                                         out.tree().to_string());
      }
      return Type::circ(in, out);
    }
    if (tokens_.accept_symbol("(")) {
      Type inner = type();
      tokens_.expect_symbol(")");
      return inner;
    }
    tokens_.fail("expected a type");
  }

  // Values

  bool starts_value(const Token& t) const {
    if (t.is_symbol("*") || t.is_symbol("@") || t.is_symbol("(")) return true;
    if (t.kind != Token::Kind::Ident) return false;
    return t.text == "fun" || t.text == "lift" || t.text == "boxed" || !is_keyword(t.text);
  }

  bool bound(const std::string& name) const { return std::find(scope_.begin(), scope_.end(), name) != scope_.end(); }

  ParsedCircuit crl_block() {
    tokens_.expect_ident("crl");
    tokens_.expect_symbol("{");
    ParsedCircuit parsed = parse_crl(tokens_);
    tokens_.expect_symbol("}");
    return parsed;
  }

  Value value() {
    const Token start = tokens_.peek();
    const SourceSpan span = start.span;
    if (tokens_.accept_symbol("*")) return Value::unit(span);
    if (tokens_.accept_symbol("@")) return Value::label(Label(tokens_.expect_identifier("a label").text), span);
    if (tokens_.accept_symbol("(")) {
      std::vector<Value> items;
      if (!tokens_.accept_symbol(")")) {
        do {
          items.push_back(value());
        } while (tokens_.accept_symbol(","));
        tokens_.expect_symbol(")");
      }
      return value_tuple(items, span);
    }
    if (tokens_.accept_ident("fun")) {
      tokens_.expect_symbol("(");
      std::string param = binder_name();
      tokens_.expect_symbol(":");
      Type type_annotation = type();
      tokens_.expect_symbol(")");
      tokens_.expect_symbol("->");
      scope_.push_back(param);
      Term body = term();
      scope_.pop_back();
      return Value::lam(param, type_annotation, body, span);
    }
    if (tokens_.accept_ident("lift")) return Value::lift(term(), span);
    if (tokens_.accept_ident("boxed")) {
      tokens_.expect_symbol("(");
      MValue in = parse_mvalue(tokens_);
      tokens_.expect_symbol(",");
      Circuit circuit = crl_block().circuit;
      tokens_.expect_symbol(",");
      Lifted<MValue> out = lifted<MValue>([this] { return parse_mvalue(tokens_); });
      tokens_.expect_symbol(")");
      return Value::boxed(BoxedCircuit{in, circuit, out}, span);
    }
    if (start.kind == Token::Kind::Ident && !is_keyword(start.text)) {
      tokens_.next();
      if (!bound(start.text)) {
        if (auto it = constants_.find(start.text); it != constants_.end()) return Value::boxed(it->second, span);
        if (const Gate* gate = gates_.find(start.text)) return Value::boxed(gate_constant(*gate), span);
      }
      return Value::var(start.text, span);
    }
    tokens_.fail("expected a value");
  }

  // Terms

  Term term() {
    const Token start = tokens_.peek();
    const SourceSpan span = start.span;
    if (start.is_ident("let")) {
      tokens_.next();
      if (tokens_.accept_symbol("(")) {
        std::string first = binder_name();
        tokens_.expect_symbol(",");
        std::string second = binder_name();
        tokens_.expect_symbol(")");
        tokens_.expect_symbol("=");
        Value pair = value();
        tokens_.expect_ident("in");
        scope_.push_back(first);
        scope_.push_back(second);
        Term body = term();
        scope_.pop_back();
        scope_.pop_back();
        return Term::let_pair(first, second, pair, body, span);
      }
      std::string name = binder_name();
      tokens_.expect_symbol("=");
      Term bound_term = term();
      tokens_.expect_ident("in");
      scope_.push_back(name);
      Lifted<Term> cont = lifted_term(name);
      scope_.pop_back();
      return Term::let(name, bound_term, cont, span);
    }
    if (tokens_.accept_ident("force")) return Term::force(value(), span);
    if (tokens_.accept_ident("return")) return Term::ret(value(), span);
    if (tokens_.accept_ident("box")) {
      tokens_.expect_symbol("[");
      MType in = parse_mtype(tokens_);
      tokens_.expect_symbol("]");
      std::vector<LiftedVar> annotation;
      if (tokens_.accept_symbol("^")) {
        tokens_.expect_symbol("{");
        annotation = lifted_var_list("}");
      }
      return Term::box(in, value(), annotation, span);
    }
    if (tokens_.accept_ident("apply")) {
      std::vector<LiftedVar> vars;
      if (tokens_.accept_symbol("[")) vars = lifted_var_list("]");
      tokens_.expect_symbol("(");
      Value circuit = value();
      tokens_.expect_symbol(",");
      Value arg = value();
      tokens_.expect_symbol(")");
      return Term::apply(vars, circuit, arg, span);
    }
    if (starts_value(start)) {
      Value fun = value();
      if (!starts_value(tokens_.peek())) tokens_.fail("expected an argument (a bare value is not a term; use return)");
      Value arg = value();
      return Term::app(fun, arg, span);
    }
    tokens_.fail("expected a term");
  }

  // Continuation of `let name = M in ...`.
  Lifted<Term> lifted_term(const std::string& binder) {
    if (tokens_.accept_ident("case")) {
      Token var_token = tokens_.peek();
      LiftedVar var = lifted_var();
      tokens_.expect_symbol("{");
      tokens_.accept_symbol("|");
      bool first_bit = branch_bit();
      tokens_.expect_symbol("=>");
      Lifted<Term> first = lifted_term(binder);
      tokens_.expect_symbol("|");
      bool second_bit = branch_bit();
      if (second_bit == first_bit) throw SyntaxError(var_token.span, "case needs one 0 branch and one 1 branch");
      tokens_.expect_symbol("=>");
      Lifted<Term> second = lifted_term(binder);
      tokens_.expect_symbol("}");
      try {
        return first_bit ? Lifted<Term>::node(var, second, first) : Lifted<Term>::node(var, first, second);
      } catch (const Error& e) {
        throw SyntaxError(var_token.span, e.detail());
      }
    }
    if (tokens_.peek().is_ident("when")) {
      Token when = tokens_.next();
      LiftedVar var = lifted_var();
      tokens_.expect_symbol("=");
      bool bit = branch_bit();
      tokens_.expect_ident("do");
      Term body = term();
      std::vector<Value> passed;
      for (const auto& operand : free_operands(body)) {
        if (operand.kind() == Value::Kind::Var && operand.name() == binder) continue;
        passed.push_back(operand);
      }
      Term other = Term::ret(value_tuple(passed, when.span), when.span);
      return bit ? Lifted<Term>::node(var, leaf_of(other), leaf_of(body))
                 : Lifted<Term>::node(var, leaf_of(body), leaf_of(other));
    }
    return Lifted<Term>(term());
  }

  TokenStream tokens_;
  const GateSet& gates_;
  std::map<std::string, BoxedCircuit> constants_;
  std::vector<std::string> scope_;
};

}  // namespace

Program parse_program(std::string_view source, const GateSet& gates) { return Parser(source, gates).program(); }
Term parse_term(std::string_view source, const GateSet& gates) { return Parser(source, gates).whole_term(); }
Value parse_value(std::string_view source, const GateSet& gates) { return Parser(source, gates).whole_value(); }
Type parse_type(std::string_view source) { return Parser(source, GateSet::default_set()).whole_type(); }

Lifted<Type> parse_lifted_type(std::string_view source) {
  return Parser(source, GateSet::default_set()).whole_lifted_type();
}

LiftingTree parse_tree(std::string_view source) { return Parser(source, GateSet::default_set()).whole_tree(); }

BoxedCircuit box_listing(const Circuit& c, const std::vector<Label>& input_order, const GateSet& gates) {
  CircuitSignature sig = check_signature(c, gates);
  std::vector<MValue> in;
  for (const auto& l : input_order) in.push_back(MValue::label(l));
  auto order = labels_in_order(c);
  std::vector<MValue> outs;
  for (const auto& ctx : sig.outputs.leaves()) {
    std::vector<MValue> live;
    for (const auto& l : order) {
      if (ctx.contains(l)) live.push_back(MValue::label(l));
    }
    outs.push_back(tuple_of(live));
  }
  return BoxedCircuit{tuple_of(in), c, Lifted<MValue>(sig.tree, std::move(outs))};
}

}  // namespace pqk
