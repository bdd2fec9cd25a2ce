// Property checks shared by the unit tests and the acceptance runner. Each
// returns a list of human-readable violations (empty on success).
#ifndef STARINV_TESTS_CHECKS_HPP
#define STARINV_TESTS_CHECKS_HPP

#include <random>
#include <string>
#include <vector>

#include "starinv/cuntz.hpp"
#include "starinv/presentations.hpp"

namespace checks {

using Violations = std::vector<std::string>;

/// Lemmas wayless, less, waylessembed, lessembed and embedD on one
/// presentation, against its depth-`depth` completion. Sequence pairs are
/// drawn at random (`samples` of them) on top of every element pair.
Violations cu_lemmas(const starinv::CuPresentation& D, int depth, int samples, std::mt19937_64& rng);

/// Random <<-increasing sequence over a finite table: a chain with repeats,
/// constant tail.
starinv::CuSeq random_chain(const starinv::FiniteTable& t, std::size_t max_len, std::mt19937_64& rng);

/// Exact rational element with small numerators and denominators.
starinv::BlockElement random_exact(const starinv::FDAlgebra& A, std::mt19937_64& rng, int spread = 3);

/// Haar-ish random unitary (QR of a Gaussian matrix), blockwise.
starinv::NumericElement random_unitary(const starinv::FDAlgebra& A, std::mt19937_64& rng);

}  // namespace checks

#endif
