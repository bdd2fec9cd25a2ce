#ifndef STARINV_SRC_SCANNER_HPP
#define STARINV_SRC_SCANNER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "starinv/errors.hpp"

namespace starinv::detail {

enum class TokenKind { Identifier, Number, BadNumber, Punct, Newline, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  int line = 1;
  int column = 1;

  bool is(TokenKind k) const { return kind == k; }
  bool is_punct(std::string_view p) const { return kind == TokenKind::Punct && text == p; }
  bool is_ident(std::string_view s) const { return kind == TokenKind::Identifier && text == s; }
};

/// Splits source text into tokens. `#` starts a comment running to end of line.
/// Numbers are `digits`, `digits/digits` or `digits.digits`; exponent notation
/// is lexed as BadNumber so parsers can reject it. Multi-character punctuation:
/// `||`, `<=`, `>=`.
std::vector<Token> tokenize(std::string_view source);

/// Cursor over a token vector with error helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().is(TokenKind::End); }

  bool accept_punct(std::string_view p);
  void expect_punct(std::string_view p);
  void skip_newlines();

  [[noreturn]] void fail(const Token& at, const std::string& message) const;
  [[noreturn]] void fail(const std::string& message) const { fail(peek(), message); }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Strips comments, collapses runs of blanks to one space and trims lines;
/// drops empty lines. Used for content hashing and golden comparisons.
std::string normalize_source(std::string_view source);

}  // namespace starinv::detail

#endif
