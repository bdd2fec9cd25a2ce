#ifndef STARINV_SRC_SAMPLING_HPP
#define STARINV_SRC_SAMPLING_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include "starinv/presentations.hpp"

namespace starinv::detail {

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

/// Gaussian entries, blocks filled in canonical order so that permuting the
/// blocks of A permutes the sample the same way.
NumericElement gaussian_element(const FDAlgebra& A, std::mt19937_64& rng);

/// Random element with norm uniform in [0, radius].
NumericElement random_element(const FDAlgebra& A, double radius, std::mt19937_64& rng);

/// Self-adjoint random element with norm uniform in [0, radius].
NumericElement random_self_adjoint(const FDAlgebra& A, double radius, std::mt19937_64& rng);

/// Diagonal matrix units, enumerated over the blocks in canonical order.
std::vector<NumericElement> diagonal_units(const FDAlgebra& A);

}  // namespace starinv::detail

#endif
