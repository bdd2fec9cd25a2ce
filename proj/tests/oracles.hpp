// Independent brute-force oracles and instance generators shared by the unit
// tests and the acceptance runner. Nothing here calls the algorithms it checks.
#ifndef STARINV_TESTS_ORACLES_HPP
#define STARINV_TESTS_ORACLES_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "starinv/cuntz.hpp"
#include "starinv/ktheory.hpp"
#include "starinv/presentations.hpp"
#include "starinv/states.hpp"

namespace oracle {

using starinv::AbelianSemigroupTable;
using starinv::FDAlgebra;
using starinv::FiniteTable;

/// Every FDAlgebra with at most max_k blocks of size at most max_n (ordered lists).
std::vector<FDAlgebra> fd_family(int max_k = 3, int max_n = 4);

/// All commutative associative tables of size <= 3, then a seeded sample of
/// size-4 tables, `count` tables in total.
std::vector<AbelianSemigroupTable> semigroup_pool(std::size_t count, std::uint64_t seed);

/// Formal differences (i, j) modulo "i + l + m = k + j + m for some m",
/// closed transitively. classes[i * n + j] is a dense class label.
struct DifferenceQuotient {
  std::vector<std::size_t> classes;
  std::size_t count = 0;
};
DifferenceQuotient difference_quotient(const AbelianSemigroupTable& S);

/// Does `labels` induce the same partition as `reference`?
bool same_partition(const std::vector<std::size_t>& reference, const std::vector<std::size_t>& labels);

/// Random validated all-compact finite table with at most max_size elements
/// (a saturating or cyclic monoid, or a product of two, with a random
/// compatible preorder and ll = leq), randomly relabelled.
FiniteTable random_cu_table(std::mt19937_64& rng, std::size_t max_size);

/// Brute-force search over all bijections for an isomorphism of (plus, leq).
bool ordered_monoid_isomorphic(const FiniteTable& a, const FiniteTable& b);

/// Exhaustive check of (n+1)x + m e <= n y  =>  x <= y over all pairs.
bool comparison_exhaustive(const FiniteTable& t, long m, long n);

/// min m/n over comparison_exhaustive hits with n <= max_n and m/n < bound.
/// Returns nullopt when nothing below the bound qualifies.
std::optional<std::pair<long, long>> radius_exhaustive(const FiniteTable& t, long max_n, long bound);

/// max over a polar grid of the unit disc of |z^2 - z|.
double disc_grid_idempotent_defect(int radial, int angular);

/// Grid upper estimate of the three-orthogonal-contractions quantity on M_2,
/// over a_j = (1-d) P_j + e (1 - P_j) with real rank-one P_j at angles on a
/// 0.05 grid.
double sigma3_m2_grid(double step = 0.05);

/// Nearest point of conv(vertices) in the weighted metric, by enumerating
/// every affinely independent vertex subset and projecting onto its hull.
std::vector<double> nearest_point_by_faces(const std::vector<std::vector<double>>& vertices,
                                           const std::vector<double>& scales, const std::vector<double>& x);

double weighted_distance(const std::vector<double>& scales, const std::vector<double>& a, const std::vector<double>& b);

}  // namespace oracle

#endif
