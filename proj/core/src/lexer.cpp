#include "pqk/lexer.hpp"

#include <cctype>

namespace pqk {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (source[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };
  while (i < source.size()) {
    char c = source[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
      while (i < source.size() && source[i] != '\n') advance(1);
      continue;
    }
    SourceSpan span{line, column};
    std::size_t start = i;
    if (ident_start(c)) {
      while (i < source.size() && ident_char(source[i])) advance(1);
      out.push_back({Token::Kind::Ident, std::string(source.substr(start, i - start)), span});
      continue;
    }
    if (c == '%' && i + 1 < source.size() && digit(source[i + 1])) {
      advance(1);
      while (i < source.size() && digit(source[i])) advance(1);
      out.push_back({Token::Kind::Ident, std::string(source.substr(start, i - start)), span});
      continue;
    }
    if (digit(c)) {
      while (i < source.size() && digit(source[i])) advance(1);
      out.push_back({Token::Kind::Number, std::string(source.substr(start, i - start)), span});
      continue;
    }
    auto two = source.substr(i, 2);
    if (two == "->" || two == "=>" || two == "-o") {
      advance(2);
      out.push_back({Token::Kind::Symbol, std::string(two), span});
      continue;
    }
    static constexpr std::string_view singles = "()[]{}<>,;:=?|*!@^";
    if (singles.find(c) != std::string_view::npos) {
      advance(1);
      out.push_back({Token::Kind::Symbol, std::string(1, c), span});
      continue;
    }
    throw SyntaxError(span, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Token::Kind::End, "", SourceSpan{line, column}});
  return out;
}

TokenStream::TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != Token::Kind::End) tokens_.push_back({});
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t at = pos_ + ahead;
  return at < tokens_.size() ? tokens_[at] : tokens_.back();
}

Token TokenStream::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::accept_symbol(std::string_view text) {
  if (!peek().is_symbol(text)) return false;
  next();
  return true;
}

bool TokenStream::accept_ident(std::string_view text) {
  if (!peek().is_ident(text)) return false;
  next();
  return true;
}

Token TokenStream::expect_symbol(std::string_view text) {
  if (!peek().is_symbol(text)) fail("expected '" + std::string(text) + "'");
  return next();
}

Token TokenStream::expect_ident(std::string_view text) {
  if (!peek().is_ident(text)) fail("expected '" + std::string(text) + "'");
  return next();
}

Token TokenStream::expect_identifier(std::string_view what) {
  if (peek().kind != Token::Kind::Ident) fail("expected " + std::string(what));
  return next();
}

Token TokenStream::expect_number() {
  if (peek().kind != Token::Kind::Number) fail("expected a number");
  return next();
}

void TokenStream::fail(const std::string& message) const {
  const Token& t = peek();
  std::string found = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
  throw SyntaxError(t.span, message + ", found " + found);
}

}  // namespace pqk
