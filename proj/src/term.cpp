#include "starinv/term.hpp"

namespace starinv {

struct Term::Node {
  TermKind kind;
  int var = -1;
  QComplex scalar;
  std::unique_ptr<Term> lhs_term;
  std::unique_ptr<Term> rhs_term;
};

Term Term::variable(int index) {
  if (index < 0) throw std::invalid_argument("variable index must be nonnegative");
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Variable;
  n->var = index;
  return Term(std::move(n));
}

Term Term::unit(QComplex c) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Unit;
  n->scalar = std::move(c);
  return Term(std::move(n));
}

Term operator+(const Term& a, const Term& b) {
  auto n = std::make_shared<Term::Node>();
  n->kind = TermKind::Sum;
  n->lhs_term = std::make_unique<Term>(a);
  n->rhs_term = std::make_unique<Term>(b);
  return Term(std::move(n));
}

Term operator-(const Term& a, const Term& b) { return a + QComplex(-1) * b; }

Term operator*(const Term& a, const Term& b) {
  auto n = std::make_shared<Term::Node>();
  n->kind = TermKind::Product;
  n->lhs_term = std::make_unique<Term>(a);
  n->rhs_term = std::make_unique<Term>(b);
  return Term(std::move(n));
}

Term operator*(const QComplex& s, const Term& a) {
  auto n = std::make_shared<Term::Node>();
  n->kind = TermKind::ScalarMul;
  n->scalar = s;
  n->lhs_term = std::make_unique<Term>(a);
  return Term(std::move(n));
}

Term adjoint(const Term& a) {
  auto n = std::make_shared<Term::Node>();
  n->kind = TermKind::Adjoint;
  n->lhs_term = std::make_unique<Term>(a);
  return Term(std::move(n));
}

TermKind Term::kind() const { return node_->kind; }
int Term::var_index() const { return node_->var; }
const QComplex& Term::scalar() const { return node_->scalar; }
const Term& Term::lhs() const { return *node_->lhs_term; }
const Term& Term::rhs() const { return *node_->rhs_term; }

std::set<int> Term::free_variables() const {
  std::set<int> out;
  switch (kind()) {
    case TermKind::Variable:
      out.insert(var_index());
      break;
    case TermKind::Unit:
      break;
    case TermKind::Sum:
    case TermKind::Product: {
      out = lhs().free_variables();
      auto r = rhs().free_variables();
      out.insert(r.begin(), r.end());
      break;
    }
    case TermKind::ScalarMul:
    case TermKind::Adjoint:
      out = lhs().free_variables();
      break;
  }
  return out;
}

bool Term::uses_unit() const {
  switch (kind()) {
    case TermKind::Variable:
      return false;
    case TermKind::Unit:
      return true;
    case TermKind::Sum:
    case TermKind::Product:
      return lhs().uses_unit() || rhs().uses_unit();
    case TermKind::ScalarMul:
    case TermKind::Adjoint:
      return lhs().uses_unit();
  }
  return false;
}

namespace {

std::string scalar_text(const QComplex& c) {
  if (c.is_real()) return to_string(c.re);
  if (c.re == 0) {
    if (c.im == 1) return "i";
    return to_string(c.im) + "*i";
  }
  return "(" + to_string(c.re) + "+" + to_string(c.im) + "*i)";
}

}  // namespace

std::string to_string(const Term& t) {
  switch (t.kind()) {
    case TermKind::Variable:
      return "x" + std::to_string(t.var_index());
    case TermKind::Unit:
      return t.scalar() == QComplex(1) ? "1" : "(" + scalar_text(t.scalar()) + ")";
    case TermKind::Sum:
      return "(" + to_string(t.lhs()) + " + " + to_string(t.rhs()) + ")";
    case TermKind::Product:
      return "(" + to_string(t.lhs()) + " * " + to_string(t.rhs()) + ")";
    case TermKind::ScalarMul:
      return "(" + scalar_text(t.scalar()) + " * " + to_string(t.lhs()) + ")";
    case TermKind::Adjoint:
      return "adj(" + to_string(t.lhs()) + ")";
  }
  return {};
}

namespace {

template <class Elem, class Env, class Scalar, class MakeScalar>
Elem eval_generic(const Term& t, const FDAlgebra& A, const Env& env, Scalar convert,
                  MakeScalar make_scalar) {
  switch (t.kind()) {
    case TermKind::Variable: {
      auto it = env.find(t.var_index());
      if (it == env.end())
        throw SemanticError("unbound variable x" + std::to_string(t.var_index()));
      return it->second;
    }
    case TermKind::Unit:
      return make_scalar(A, convert(t.scalar()));
    case TermKind::Sum:
      return eval_generic<Elem>(t.lhs(), A, env, convert, make_scalar) +
             eval_generic<Elem>(t.rhs(), A, env, convert, make_scalar);
    case TermKind::Product:
      return eval_generic<Elem>(t.lhs(), A, env, convert, make_scalar) *
             eval_generic<Elem>(t.rhs(), A, env, convert, make_scalar);
    case TermKind::ScalarMul:
      return convert(t.scalar()) * eval_generic<Elem>(t.lhs(), A, env, convert, make_scalar);
    case TermKind::Adjoint:
      return adjoint(eval_generic<Elem>(t.lhs(), A, env, convert, make_scalar));
  }
  throw std::logic_error("bad term kind");
}

}  // namespace

BlockElement eval_term(const Term& t, const FDAlgebra& A, const ExactAssignment& env) {
  for (const auto& [k, v] : env) v.check_shape(A);
  return eval_generic<BlockElement>(
      t, A, env, [](const QComplex& c) { return c; },
      [](const FDAlgebra& B, const QComplex& c) { return BlockElement::scalar(B, c); });
}

NumericElement eval_term(const Term& t, const FDAlgebra& A, const NumericAssignment& env) {
  return eval_generic<NumericElement>(
      t, A, env, [](const QComplex& c) { return c.to_complex(); },
      [](const FDAlgebra& B, std::complex<double> c) { return NumericElement::scalar(B, c); });
}

}  // namespace starinv
