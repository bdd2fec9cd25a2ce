#include <cctype>

#include "scanner.hpp"
#include "starinv/formula.hpp"

namespace starinv {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

namespace {

// Newlines inside brackets never end a statement.
std::vector<Token> drop_nested_newlines(std::vector<Token> tokens) {
  std::vector<Token> out;
  int depth = 0;
  for (auto& t : tokens) {
    if (t.is_punct("(") || t.is_punct("{")) ++depth;
    if ((t.is_punct(")") || t.is_punct("}")) && depth > 0) --depth;
    if (t.is(TokenKind::Newline) && depth > 0) continue;
    out.push_back(std::move(t));
  }
  return out;
}

std::optional<int> variable_index(const Token& t) {
  if (!t.is(TokenKind::Identifier) || t.text.size() < 2 || t.text[0] != 'x') return std::nullopt;
  for (std::size_t i = 1; i < t.text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) return std::nullopt;
  try {
    return std::stoi(t.text.substr(1));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

bool is_scalar(const Term& t) { return t.kind() == TermKind::Unit; }

class Parser {
 public:
  Parser(TokenStream& ts, const FormulaParseOptions& opts) : ts_(ts), opts_(opts) {}

  Formula formula() {
    Formula f = product();
    for (;;) {
      if (ts_.accept_punct("+"))
        f = f + product();
      else if (ts_.accept_punct("-"))
        f = f - product();
      else
        return f;
    }
  }

 private:
  Formula product() {
    Formula f = unary();
    while (ts_.accept_punct("*")) f = f * unary();
    return f;
  }

  Formula unary() {
    if (ts_.accept_punct("-")) return -unary();
    return primary();
  }

  Formula primary() {
    Token t = ts_.peek();
    if (t.is(TokenKind::BadNumber)) ts_.fail(t, "non-rational literal '" + t.text + "'");
    if (t.is(TokenKind::Number)) {
      ts_.next();
      return Formula::constant(literal(t));
    }
    if (ts_.accept_punct("(")) {
      Formula f = formula();
      ts_.expect_punct(")");
      return f;
    }
    if (!t.is(TokenKind::Identifier)) ts_.fail(t, t.is(TokenKind::End) ? "unexpected end of input" : "unexpected '" + t.text + "'");
    ts_.next();
    if (t.text == "norm") {
      ts_.expect_punct("(");
      Term term = term_sum();
      ts_.expect_punct(")");
      return Formula::norm(std::move(term));
    }
    if (t.text == "max" || t.text == "min" || t.text == "monus") {
      if (opts_.polynomial_only) ts_.fail(t, "'" + t.text + "' is outside the polynomial fragment");
      ts_.expect_punct("(");
      Formula f = formula();
      ts_.expect_punct(",");
      Formula g = formula();
      if (t.text == "monus") {
        ts_.expect_punct(")");
        return monus(f, g);
      }
      f = t.text == "max" ? max(f, g) : min(f, g);
      while (ts_.accept_punct(",")) {
        Formula h = formula();
        f = t.text == "max" ? max(f, h) : min(f, h);
      }
      ts_.expect_punct(")");
      return f;
    }
    if (t.text == "sup" || t.text == "inf") {
      ts_.expect_punct("{");
      ts_.expect_punct("||");
      Token v = ts_.next();
      auto idx = variable_index(v);
      if (!idx) ts_.fail(v, "expected a variable x<k>");
      ts_.expect_punct("||");
      ts_.expect_punct("<=");
      Token k = ts_.next();
      long bound = 0;
      if (k.is(TokenKind::Number) && k.text.find_first_of("/.") == std::string::npos) {
        try {
          bound = std::stol(k.text);
        } catch (const std::exception&) {
          bound = 0;
        }
      }
      if (bound < 1) ts_.fail(k, "quantifier bound must be a natural number >= 1");
      ts_.expect_punct("}");
      Formula body = formula();
      return t.text == "sup" ? Formula::sup(*idx, bound, body) : Formula::inf(*idx, bound, body);
    }
    if (variable_index(t)) ts_.fail(t, "variable " + t.text + " outside norm(...)");
    ts_.fail(t, "unknown name '" + t.text + "'");
  }

  Rational literal(const Token& t) {
    try {
      return parse_rational(t.text);
    } catch (const std::exception&) {
      ts_.fail(t, "bad number '" + t.text + "'");
    }
  }

  // Terms: sums of products; `*` directly followed by something that cannot
  // start an operand is the postfix adjoint.
  Term term_sum() {
    Term t = term_product();
    for (;;) {
      if (ts_.accept_punct("+")) {
        Term r = term_product();
        t = (is_scalar(t) && is_scalar(r)) ? Term::unit(t.scalar() + r.scalar()) : t + r;
      } else if (ts_.accept_punct("-")) {
        Term r = term_product();
        if (is_scalar(t) && is_scalar(r))
          t = Term::unit(t.scalar() - r.scalar());
        else
          t = is_scalar(r) ? t + Term::unit(QComplex(-1) * r.scalar()) : t - r;
      } else {
        return t;
      }
    }
  }

  bool starts_operand(const Token& t) const {
    return t.is(TokenKind::Number) || t.is(TokenKind::BadNumber) || t.is(TokenKind::Identifier) || t.is_punct("(");
  }

  Term term_product() {
    Term t = term_unary();
    for (;;) {
      if (!ts_.peek().is_punct("*") || !starts_operand(ts_.peek(1))) return t;
      ts_.next();
      Term r = term_unary();
      if (is_scalar(t) && is_scalar(r))
        t = Term::unit(t.scalar() * r.scalar());
      else if (is_scalar(t))
        t = t.scalar() * r;
      else if (is_scalar(r))
        t = r.scalar() * t;
      else
        t = t * r;
    }
  }

  Term term_unary() {
    if (ts_.accept_punct("-")) {
      Term t = term_unary();
      return is_scalar(t) ? Term::unit(QComplex(-1) * t.scalar()) : QComplex(-1) * t;
    }
    Term t = term_atom();
    while (ts_.peek().is_punct("*") && !starts_operand(ts_.peek(1))) {
      ts_.next();
      t = is_scalar(t) ? Term::unit(t.scalar().conj()) : adjoint(t);
    }
    return t;
  }

  Term term_atom() {
    Token t = ts_.next();
    if (t.is(TokenKind::BadNumber)) ts_.fail(t, "non-rational literal '" + t.text + "'");
    if (t.is(TokenKind::Number)) {
      // `3i` and `1/2 i` are imaginary literals.
      if (ts_.peek().is_ident("i")) {
        ts_.next();
        return Term::unit(QComplex(Rational(0), literal(t)));
      }
      return Term::unit(QComplex(literal(t)));
    }
    if (t.is_punct("(")) {
      Term inner = term_sum();
      ts_.expect_punct(")");
      return inner;
    }
    if (t.is_ident("i")) return Term::unit(QComplex(Rational(0), Rational(1)));
    if (t.is_ident("adj")) {
      ts_.expect_punct("(");
      Term inner = term_sum();
      ts_.expect_punct(")");
      return is_scalar(inner) ? Term::unit(inner.scalar().conj()) : adjoint(inner);
    }
    if (auto idx = variable_index(t)) return Term::variable(*idx);
    if (t.is(TokenKind::End)) ts_.fail(t, "unexpected end of input");
    ts_.fail(t, "unexpected '" + t.text + "' in term");
  }

  TokenStream& ts_;
  const FormulaParseOptions& opts_;
};

}  // namespace

Formula parse_formula(std::string_view text, const FormulaParseOptions& opts) {
  std::vector<Token> tokens;
  for (auto& t : detail::tokenize(text))
    if (!t.is(TokenKind::Newline)) tokens.push_back(std::move(t));
  TokenStream ts(std::move(tokens));
  if (ts.at_end()) ts.fail("empty formula");
  Parser p(ts, opts);
  Formula f = p.formula();
  if (!ts.at_end()) ts.fail("unexpected '" + ts.peek().text + "'");
  return f;
}

std::vector<NamedFormula> parse_formula_file(std::string_view text, const FormulaParseOptions& opts) {
  TokenStream ts(drop_nested_newlines(detail::tokenize(text)));
  Parser p(ts, opts);
  std::vector<NamedFormula> out;
  for (;;) {
    while (ts.peek().is(TokenKind::Newline) || ts.peek().is_punct(";")) ts.next();
    if (ts.at_end()) break;
    std::string id = "s" + std::to_string(out.size());
    if (ts.peek().is(TokenKind::Identifier) && ts.peek(1).is_punct(":")) {
      id = ts.next().text;
      ts.next();
    }
    for (const auto& nf : out)
      if (nf.id == id) ts.fail("duplicate formula name '" + id + "'");
    Formula f = p.formula();
    if (!ts.at_end() && !ts.peek().is(TokenKind::Newline) && !ts.peek().is_punct(";"))
      ts.fail("unexpected '" + ts.peek().text + "'");
    out.push_back({std::move(id), std::move(f)});
  }
  return out;
}

}  // namespace starinv
