#include <algorithm>
#include <map>
#include <sstream>

#include "scanner.hpp"
#include "starinv/cuntz.hpp"

namespace starinv {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

namespace {

long read_int(TokenStream& ts) {
  Token t = ts.next();
  if (!t.is(TokenKind::Number) || t.text.find_first_of("/.") != std::string::npos)
    ts.fail(t, "expected an integer, found '" + t.text + "'");
  try {
    return std::stol(t.text);
  } catch (const std::exception&) {
    ts.fail(t, "integer out of range: " + t.text);
  }
}

// True at the start of the next `key:` statement or at the end of input.
bool at_statement_end(const TokenStream& ts) {
  return ts.at_end() || (ts.peek().is(TokenKind::Identifier) && ts.peek(1).is_punct(":"));
}

void skip_blank(TokenStream& ts) {
  while (ts.peek().is(TokenKind::Newline)) ts.next();
}

std::vector<std::pair<long, long>> read_pairs(TokenStream& ts) {
  std::vector<std::pair<long, long>> out;
  for (;;) {
    skip_blank(ts);
    if (at_statement_end(ts)) break;
    if (ts.accept_punct(",")) continue;
    ts.expect_punct("(");
    long a = read_int(ts);
    ts.expect_punct(",");
    long b = read_int(ts);
    ts.expect_punct(")");
    out.emplace_back(a, b);
  }
  return out;
}

}  // namespace

CuPresentation parse_cup(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  std::map<std::string, Token> seen;
  std::optional<long> elements, nbar;
  std::optional<Token> unit_tok;
  std::vector<long> unit_values;  // kInf for inf
  std::vector<long> plus;
  std::vector<std::pair<long, long>> leq, ll;
  bool ll_is_leq = false;

  for (;;) {
    skip_blank(ts);
    if (ts.at_end()) break;
    Token key = ts.next();
    if (!key.is(TokenKind::Identifier)) ts.fail(key, "expected a key");
    ts.expect_punct(":");
    if (seen.count(key.text)) ts.fail(key, "duplicate '" + key.text + "'");
    seen.emplace(key.text, key);
    if (key.text == "elements") {
      elements = read_int(ts);
    } else if (key.text == "nbar") {
      nbar = read_int(ts);
    } else if (key.text == "unit") {
      unit_tok = key;
      while (!ts.peek().is(TokenKind::Newline) && !ts.at_end()) {
        Token v = ts.peek();
        if (v.is_ident("inf")) {
          ts.next();
          unit_values.push_back(kInf);
        } else {
          unit_values.push_back(read_int(ts));
        }
        ts.accept_punct(",");
      }
      if (unit_values.empty()) ts.fail(key, "empty unit");
    } else if (key.text == "plus") {
      for (;;) {
        skip_blank(ts);
        if (at_statement_end(ts)) break;
        plus.push_back(read_int(ts));
      }
    } else if (key.text == "leq") {
      leq = read_pairs(ts);
    } else if (key.text == "ll") {
      if (ts.peek().is_ident("leq")) {
        ts.next();
        ll_is_leq = true;
      } else {
        ll = read_pairs(ts);
      }
    } else {
      ts.fail(key, "unknown key '" + key.text + "'");
    }
    if (!ts.peek().is(TokenKind::Newline) && !at_statement_end(ts))
      ts.fail("unexpected '" + ts.peek().text + "'");
  }

  if (nbar && elements) throw ParseError(seen["nbar"].line, seen["nbar"].column, "'nbar' and 'elements' both given");
  if (nbar) {
    for (const char* k : {"plus", "leq", "ll"})
      if (seen.count(k)) throw ParseError(seen[k].line, seen[k].column, std::string("'") + k + "' is not allowed with 'nbar'");
    if (*nbar < 1) throw ValidationError("nbar exponent must be positive");
    std::optional<CuElement> unit;
    if (unit_tok) {
      if (unit_values.size() != static_cast<std::size_t>(*nbar))
        throw ValidationError("unit has " + std::to_string(unit_values.size()) + " coordinates, expected " +
                              std::to_string(*nbar));
      unit = unit_values;
    }
    return CuPresentation::nbar(static_cast<std::size_t>(*nbar), unit);
  }
  if (!elements) throw ParseError(1, 1, "missing 'elements:' or 'nbar:'");
  if (!seen.count("plus")) throw ParseError(1, 1, "missing 'plus:'");
  if (!seen.count("ll")) throw ParseError(1, 1, "missing 'll:'");
  if (*elements < 1) throw ValidationError("a finite table needs at least one element");
  const auto n = static_cast<std::size_t>(*elements);
  if (plus.size() != n * n)
    throw ValidationError("plus table has " + std::to_string(plus.size()) + " entries, expected " +
                          std::to_string(n * n));

  FiniteTable t;
  t.n = n;
  for (long v : plus) {
    if (v < 0 || static_cast<std::size_t>(v) >= n) throw ValidationError("plus table entry " + std::to_string(v) + " out of range");
    t.plus.push_back(static_cast<std::size_t>(v));
  }
  auto fill = [&](std::vector<char>& rel, const std::vector<std::pair<long, long>>& pairs, const char* name) {
    rel.assign(n * n, 0);
    for (auto [a, b] : pairs) {
      if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n)
        throw ValidationError(std::string(name) + " pair (" + std::to_string(a) + "," + std::to_string(b) +
                              ") out of range");
      rel[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = 1;
    }
  };
  fill(t.leq, leq, "leq");
  for (std::size_t i = 0; i < n; ++i) t.leq[i * n + i] = 1;
  if (ll_is_leq)
    t.ll = t.leq;
  else
    fill(t.ll, ll, "ll");
  if (unit_tok) {
    if (unit_values.size() != 1 || unit_values[0] == kInf || unit_values[0] < 0 ||
        static_cast<std::size_t>(unit_values[0]) >= n)
      throw ValidationError("unit must be a single element index");
    t.unit = static_cast<std::size_t>(unit_values[0]);
  }
  CuPresentation D = CuPresentation::finite(std::move(t));
  auto report = validate_cu_presentation(D);
  if (!report.ok()) throw ValidationError(report.failure());
  return D;
}

std::string emit_cup(const CuPresentation& D) {
  std::ostringstream out;
  if (!D.is_finite()) {
    out << "nbar: " << D.nbar_rank() << "\n";
    if (D.unit()) {
      out << "unit:";
      for (long v : *D.unit()) out << ' ' << (v == kInf ? std::string("inf") : std::to_string(v));
      out << "\n";
    }
    return out.str();
  }
  const auto& t = D.table();
  auto pairs = [&](const std::vector<char>& rel, bool skip_diagonal) {
    std::string s;
    for (std::size_t a = 0; a < t.n; ++a)
      for (std::size_t b = 0; b < t.n; ++b)
        if (rel[a * t.n + b] && !(skip_diagonal && a == b))
          s += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
    return s;
  };
  out << "elements: " << t.n << "\n";
  out << "leq:" << pairs(t.leq, true) << "\n";
  out << "ll:" << (t.ll == t.leq ? std::string(" leq") : pairs(t.ll, false)) << "\n";
  out << "plus:";
  for (std::size_t v : t.plus) out << ' ' << v;
  out << "\n";
  if (t.unit) out << "unit: " << *t.unit << "\n";
  return out.str();
}

}  // namespace starinv
