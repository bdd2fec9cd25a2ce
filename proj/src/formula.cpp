#include "starinv/formula.hpp"

namespace starinv {

struct Formula::Node {
  FormulaKind kind;
  std::optional<Term> term;
  Rational value;
  int var = -1;
  long bound = 0;
  std::unique_ptr<Formula> lhs;
  std::unique_ptr<Formula> rhs;
};

Formula Formula::binary(FormulaKind k, const Formula& a, const Formula& b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::make_unique<Formula>(a);
  n->rhs = std::make_unique<Formula>(b);
  return Formula(std::move(n));
}

Formula Formula::norm(Term t) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Norm;
  n->term = std::move(t);
  return Formula(std::move(n));
}

Formula Formula::constant(Rational c) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Const;
  n->value = std::move(c);
  return Formula(std::move(n));
}

namespace {

void check_quantifier(int var, long bound) {
  if (var < 0) throw std::invalid_argument("variable index must be nonnegative");
  if (bound < 1) throw std::invalid_argument("quantifier bound must be a natural number >= 1");
}

}  // namespace

Formula Formula::sup(int var, long bound, Formula body) {
  check_quantifier(var, bound);
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Sup;
  n->var = var;
  n->bound = bound;
  n->lhs = std::make_unique<Formula>(std::move(body));
  return Formula(std::move(n));
}

Formula Formula::inf(int var, long bound, Formula body) {
  check_quantifier(var, bound);
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Inf;
  n->var = var;
  n->bound = bound;
  n->lhs = std::make_unique<Formula>(std::move(body));
  return Formula(std::move(n));
}

Formula operator+(const Formula& a, const Formula& b) {
  return Formula::binary(FormulaKind::Add, a, b);
}
Formula operator-(const Formula& a, const Formula& b) {
  return Formula::binary(FormulaKind::Sub, a, b);
}
Formula operator*(const Formula& a, const Formula& b) {
  return Formula::binary(FormulaKind::Mul, a, b);
}
Formula max(const Formula& a, const Formula& b) {
  return Formula::binary(FormulaKind::Max, a, b);
}
Formula min(const Formula& a, const Formula& b) {
  return Formula::binary(FormulaKind::Min, a, b);
}
Formula monus(const Formula& a, const Formula& b) {
  return Formula::binary(FormulaKind::Monus, a, b);
}

Formula operator-(const Formula& a) {
  if (a.kind() == FormulaKind::Const) return Formula::constant(-a.value());
  auto n = std::make_shared<Formula::Node>();
  n->kind = FormulaKind::Neg;
  n->lhs = std::make_unique<Formula>(a);
  return Formula(std::move(n));
}

FormulaKind Formula::kind() const { return node_->kind; }
const Term& Formula::term() const { return *node_->term; }
const Rational& Formula::value() const { return node_->value; }
const Formula& Formula::lhs() const { return *node_->lhs; }
const Formula& Formula::rhs() const { return *node_->rhs; }
int Formula::bound_var() const { return node_->var; }
long Formula::bound() const { return node_->bound; }

std::set<int> Formula::free_variables() const {
  switch (kind()) {
    case FormulaKind::Norm:
      return term().free_variables();
    case FormulaKind::Const:
      return {};
    case FormulaKind::Neg:
      return lhs().free_variables();
    case FormulaKind::Sup:
    case FormulaKind::Inf: {
      auto s = lhs().free_variables();
      s.erase(bound_var());
      return s;
    }
    default: {
      auto s = lhs().free_variables();
      auto r = rhs().free_variables();
      s.insert(r.begin(), r.end());
      return s;
    }
  }
}

bool Formula::in_polynomial_fragment() const {
  switch (kind()) {
    case FormulaKind::Norm:
    case FormulaKind::Const:
      return true;
    case FormulaKind::Max:
    case FormulaKind::Min:
    case FormulaKind::Monus:
      return false;
    case FormulaKind::Neg:
    case FormulaKind::Sup:
    case FormulaKind::Inf:
      return lhs().in_polynomial_fragment();
    default:
      return lhs().in_polynomial_fragment() && rhs().in_polynomial_fragment();
  }
}

bool Formula::is_quantifier_free() const {
  switch (kind()) {
    case FormulaKind::Norm:
    case FormulaKind::Const:
      return true;
    case FormulaKind::Sup:
    case FormulaKind::Inf:
      return false;
    case FormulaKind::Neg:
      return lhs().is_quantifier_free();
    default:
      return lhs().is_quantifier_free() && rhs().is_quantifier_free();
  }
}

std::string to_string(const Formula& f) {
  auto bin = [&](const char* op) { return "(" + to_string(f.lhs()) + " " + op + " " + to_string(f.rhs()) + ")"; };
  auto call = [&](const char* name) { return std::string(name) + "(" + to_string(f.lhs()) + ", " + to_string(f.rhs()) + ")"; };
  switch (f.kind()) {
    case FormulaKind::Norm: return "norm(" + to_string(f.term()) + ")";
    case FormulaKind::Const: return f.value() < 0 ? "(" + to_string(f.value()) + ")" : to_string(f.value());
    case FormulaKind::Add: return bin("+");
    case FormulaKind::Sub: return bin("-");
    case FormulaKind::Mul: return bin("*");
    case FormulaKind::Neg: return "-(" + to_string(f.lhs()) + ")";
    case FormulaKind::Max: return call("max");
    case FormulaKind::Min: return call("min");
    case FormulaKind::Monus: return call("monus");
    case FormulaKind::Sup:
    case FormulaKind::Inf:
      return std::string(f.kind() == FormulaKind::Sup ? "sup" : "inf") + "{||x" + std::to_string(f.bound_var()) +
             "|| <= " + std::to_string(f.bound()) + "} (" + to_string(f.lhs()) + ")";
  }
  return {};
}

std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::Exact: return "exact";
    case Certificate::Lower: return "lower";
    case Certificate::Upper: return "upper";
    case Certificate::Estimate: return "estimate";
  }
  return "estimate";
}

std::string to_string(RankVerdict v) {
  switch (v) {
    case RankVerdict::TrueExact: return "TRUE(exact)";
    case RankVerdict::TrueNumeric: return "TRUE(numeric)";
    case RankVerdict::NotDetected: return "NOT_DETECTED";
  }
  return "NOT_DETECTED";
}

Formula sigma3() {
  std::vector<Term> p;
  for (int j = 0; j < 3; ++j) p.push_back(adjoint(Term::variable(j)) * Term::variable(j));
  Formula body = Formula::norm(p[0] * p[1]);
  body = max(body, Formula::norm(p[0] * p[2]));
  body = max(body, Formula::norm(p[1] * p[2]));
  const Formula one = Formula::constant(1);
  for (int j = 0; j < 3; ++j) {
    Formula n = Formula::norm(p[static_cast<std::size_t>(j)]);
    body = max(body, max(one - n, n - one));
  }
  return Formula::inf(0, 1, Formula::inf(1, 1, Formula::inf(2, 1, body)));
}

}  // namespace starinv
