#include "scanner.hpp"

#include <cctype>

namespace starinv::detail {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '\n') {
      out.push_back({TokenKind::Newline, "\n", line, col});
      advance(1);
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    Token tok{TokenKind::Punct, "", line, col};
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      tok.kind = TokenKind::Identifier;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (is_digit(c)) {
      std::size_t j = i;
      while (j < src.size() && is_digit(src[j])) ++j;
      if (j + 1 < src.size() && (src[j] == '/' || src[j] == '.') && is_digit(src[j + 1])) {
        ++j;
        while (j < src.size() && is_digit(src[j])) ++j;
      }
      tok.kind = TokenKind::Number;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E') && j + 1 < src.size() &&
          (is_digit(src[j + 1]) || src[j + 1] == '-' || src[j + 1] == '+')) {
        ++j;
        if (src[j] == '-' || src[j] == '+') ++j;
        while (j < src.size() && is_digit(src[j])) ++j;
        tok.kind = TokenKind::BadNumber;
      } else if (j < src.size() && src[j] == '.') {
        ++j;
        tok.kind = TokenKind::BadNumber;
      }
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      std::string_view two = src.substr(i, 2);
      if (two == "||" || two == "<=" || two == ">=") {
        tok.text = std::string(two);
        advance(2);
      } else {
        tok.text = std::string(1, c);
        advance(1);
      }
    }
    out.push_back(std::move(tok));
  }
  out.push_back({TokenKind::End, "", line, col});
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t p = pos_ + ahead;
  if (p >= tokens_.size()) return tokens_.back();
  return tokens_[p];
}

Token TokenStream::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::accept_punct(std::string_view p) {
  if (peek().is_punct(p)) {
    next();
    return true;
  }
  return false;
}

void TokenStream::expect_punct(std::string_view p) {
  if (!accept_punct(p)) {
    const Token& t = peek();
    fail(t, "expected '" + std::string(p) + "' but found " +
                (t.is(TokenKind::End) ? std::string("end of input")
                 : t.is(TokenKind::Newline) ? std::string("end of line")
                                            : "'" + t.text + "'"));
  }
}

void TokenStream::skip_newlines() {
  while (peek().is(TokenKind::Newline)) next();
}

void TokenStream::fail(const Token& at, const std::string& message) const {
  throw ParseError(at.line, at.column, message);
}

std::string normalize_source(std::string_view source) {
  std::string out;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::string collapsed;
    bool pending_space = false;
    for (char c : line) {
      if (c == ' ' || c == '\t' || c == '\r') {
        pending_space = !collapsed.empty();
      } else {
        if (pending_space) collapsed += ' ';
        pending_space = false;
        collapsed += c;
      }
    }
    if (!collapsed.empty()) {
      out += collapsed;
      out += '\n';
    }
    start = end + 1;
  }
  return out;
}

}  // namespace starinv::detail
