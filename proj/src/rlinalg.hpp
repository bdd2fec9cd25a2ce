#ifndef STARINV_SRC_RLINALG_HPP
#define STARINV_SRC_RLINALG_HPP

#include <vector>

#include "starinv/rational.hpp"

namespace starinv::detail {

using RMatrix = std::vector<RVector>;

Rational determinant(RMatrix m);
std::size_t rational_rank(RMatrix m);
/// Throws std::domain_error when singular.
RMatrix rational_inverse(RMatrix m);
RMatrix multiply(const RMatrix& a, const RMatrix& b);
Rational dot(const RVector& a, const RVector& b);

}  // namespace starinv::detail

#endif
