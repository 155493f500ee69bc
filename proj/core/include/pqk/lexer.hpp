#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pqk/error.hpp"

namespace pqk {

struct Token {
  enum class Kind { Ident, Number, Symbol, End };

  Kind kind = Kind::End;
  std::string text;
  SourceSpan span;

  bool is(Kind k, std::string_view t) const { return kind == k && text == t; }
  bool is_symbol(std::string_view t) const { return is(Kind::Symbol, t); }
  bool is_ident(std::string_view t) const { return is(Kind::Ident, t); }
};

// Shared tokenizer for CRL listings and .pqk sources. Identifiers may start
// with `%` followed by digits (generated labels); `//` starts a line comment.
std::vector<Token> tokenize(std::string_view source);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens);

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool accept_symbol(std::string_view text);
  bool accept_ident(std::string_view text);
  Token expect_symbol(std::string_view text);
  Token expect_ident(std::string_view text);
  Token expect_identifier(std::string_view what);
  Token expect_number();

  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace pqk
