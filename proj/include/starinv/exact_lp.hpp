#ifndef STARINV_EXACT_LP_HPP
#define STARINV_EXACT_LP_HPP

#include <vector>

#include "starinv/rational.hpp"

namespace starinv {

/// maximize objective·x subject to equality rows, `<=` rows, and x_j >= 0
/// unless free[j]. Solved by two-phase simplex over Q with Bland's rule.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<bool> free;  // empty means all variables nonnegative
  std::vector<RVector> eq_rows;
  RVector eq_rhs;
  std::vector<RVector> le_rows;
  RVector le_rhs;
  RVector objective;  // empty means pure feasibility
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  Rational value;
  RVector x;
};

LPSolution solve(const LinearProgram& lp);

/// Is target a nonnegative rational combination of the generators?
bool in_rational_cone(const std::vector<RVector>& generators, const RVector& target);

}  // namespace starinv

#endif
