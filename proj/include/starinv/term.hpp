#ifndef STARINV_TERM_HPP
#define STARINV_TERM_HPP

#include <map>
#include <memory>
#include <set>
#include <string>

#include "starinv/presentations.hpp"

namespace starinv {

enum class TermKind { Variable, Unit, Sum, Product, ScalarMul, Adjoint };

/// Non-commutative *-polynomial over Q(i) in variables x0, x1, ...
/// Immutable; copies share structure.
class Term {
 public:
  static Term variable(int index);
  /// The scalar c times the unit. Only meaningful in unital algebras.
  static Term unit(QComplex c = QComplex(1));

  friend Term operator+(const Term& a, const Term& b);
  friend Term operator-(const Term& a, const Term& b);
  friend Term operator*(const Term& a, const Term& b);
  friend Term operator*(const QComplex& s, const Term& a);
  friend Term adjoint(const Term& a);

  TermKind kind() const;
  int var_index() const;
  const QComplex& scalar() const;  // Unit and ScalarMul
  const Term& lhs() const;         // Sum, Product, ScalarMul (operand), Adjoint (operand)
  const Term& rhs() const;         // Sum, Product

  std::set<int> free_variables() const;
  bool uses_unit() const;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Fully parenthesized text that the formula parser reads back.
std::string to_string(const Term& t);

using ExactAssignment = std::map<int, BlockElement>;
using NumericAssignment = std::map<int, NumericElement>;

/// Exact evaluation; throws SemanticError for an unbound variable.
BlockElement eval_term(const Term& t, const FDAlgebra& A, const ExactAssignment& env);
NumericElement eval_term(const Term& t, const FDAlgebra& A, const NumericAssignment& env);

}  // namespace starinv

#endif
