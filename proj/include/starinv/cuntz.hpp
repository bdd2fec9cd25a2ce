#ifndef STARINV_CUNTZ_HPP
#define STARINV_CUNTZ_HPP

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "starinv/presentations.hpp"

namespace starinv {

/// Coordinate value standing for infinity in N-bar.
constexpr long kInf = std::numeric_limits<long>::max();

/// An element of a presentation: a single index for finite tables, a
/// coordinate vector (entries may be kInf) for N-bar^k.
using CuElement = std::vector<long>;

/// Finite ordered semigroup: operation table plus the relations <~ and <<.
struct FiniteTable {
  std::size_t n = 0;
  std::vector<std::size_t> plus;  // n x n
  std::vector<char> leq;          // n x n, leq[a*n+b] means a <~ b
  std::vector<char> ll;           // n x n, ll[a*n+b] means a << b
  std::optional<std::size_t> unit;

  std::size_t add(std::size_t a, std::size_t b) const { return plus[a * n + b]; }
  bool le(std::size_t a, std::size_t b) const { return leq[a * n + b] != 0; }
  bool way_below(std::size_t a, std::size_t b) const { return ll[a * n + b] != 0; }
  /// Index of the additive identity, if there is one.
  std::optional<std::size_t> identity() const;
};

/// A countable ordered semigroup (D, +, <~, <<) realized either as a finite
/// table or symbolically as N-bar^k with coordinatewise order and
/// x << y iff x <= y and x is finite.
class CuPresentation {
 public:
  static CuPresentation finite(FiniteTable t);
  static CuPresentation nbar(std::size_t k, std::optional<CuElement> unit = std::nullopt);

  bool is_finite() const { return finite_; }
  const FiniteTable& table() const { return table_; }
  /// Exponent k for N-bar^k; 0 for finite tables.
  std::size_t nbar_rank() const { return k_; }
  const std::optional<CuElement>& unit() const { return unit_; }

  CuElement zero() const;
  CuElement plus(const CuElement& a, const CuElement& b) const;
  bool leq(const CuElement& a, const CuElement& b) const;
  bool ll(const CuElement& a, const CuElement& b) const;
  bool is_compact(const CuElement& a) const { return ll(a, a); }
  /// k copies of a summed; k = 0 gives zero().
  CuElement multiple(const CuElement& a, long k) const;
  bool contains(const CuElement& a) const;

  /// Finite tables: every element. N-bar^k: {0..limit, inf}^k ordered by
  /// diagonal level (largest coordinate, inf counting as limit+1), then lexicographically.
  std::vector<CuElement> enumerate(long limit) const;

  std::string element_to_string(const CuElement& a) const;

  friend bool operator==(const CuPresentation& a, const CuPresentation& b);

 private:
  bool finite_ = true;
  FiniteTable table_;
  std::size_t k_ = 0;
  std::optional<CuElement> unit_;
};

struct AxiomCheck {
  int axiom = 0;  // 1..4; 0 for structural checks
  bool pass = true;
  std::string detail;  // counterexample on failure
};

struct CuValidationReport {
  std::vector<AxiomCheck> checks;
  bool all_compact = true;

  bool ok() const;
  /// First failing check, formatted; empty when ok.
  std::string failure() const;
};

/// Checks the four axioms (finite tables exhaustively, N-bar^k on an
/// enumeration prefix) and, for finite tables, that every element is compact.
CuValidationReport validate_cu_presentation(const CuPresentation& D);

/// `.cup` reader; throws ParseError, or ValidationError when the axioms fail.
CuPresentation parse_cup(std::string_view text);
std::string emit_cup(const CuPresentation& D);

CuPresentation cu_of_fd_algebra(const FDAlgebra& A);

// ---------------------------------------------------------------------------
// Sequences

enum class TailRule { Constant, Ramp };

/// <<-increasing sequence: an explicit prefix, then either the last prefix
/// term repeated or the last term plus j*step for j = 1, 2, ...
struct CuSeq {
  std::vector<CuElement> prefix;
  TailRule tail = TailRule::Constant;
  std::vector<long> step;  // Ramp only; nonnegative

  CuElement term(std::size_t i) const;
  const CuElement& last() const { return prefix.back(); }

  friend bool operator==(const CuSeq&, const CuSeq&) = default;
};

std::string to_string(const CuPresentation& D, const CuSeq& s);

/// Throws ValidationError unless s is a <<-increasing sequence in D.
void check_seq(const CuPresentation& D, const CuSeq& s);

CuSeq eta(const CuPresentation& D, const CuElement& a);
CuSeq seq_add(const CuPresentation& D, const CuSeq& s, const CuSeq& t);
CuSeq seq_multiple(const CuPresentation& D, const CuSeq& s, long k);
/// Supremum in the ambient Cu-semigroup: the last term for finite tables,
/// the coordinatewise limit for N-bar^k.
CuElement seq_sup(const CuPresentation& D, const CuSeq& s);

bool seq_le(const CuPresentation& D, const CuSeq& s, const CuSeq& t);
bool seq_ll(const CuPresentation& D, const CuSeq& s, const CuSeq& t);
bool seq_approx(const CuPresentation& D, const CuSeq& s, const CuSeq& t);

/// Classes of sequences modulo approx, with the induced operation and relations.
struct WCompletion {
  CuPresentation base;
  int depth = 0;
  std::vector<CuSeq> reps;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> plus;  // npos when the sum's class was not generated
  std::vector<char> leq;
  std::vector<char> ll;

  std::size_t size() const { return reps.size(); }
  std::size_t class_of(const CuSeq& s) const;
  std::size_t add(std::size_t a, std::size_t b) const { return plus[a * size() + b]; }
  bool le(std::size_t a, std::size_t b) const { return leq[a * size() + b] != 0; }
  bool way_below(std::size_t a, std::size_t b) const { return ll[a * size() + b] != 0; }
};

/// Finite tables: all <<-chains of at most `depth` distinct terms.
/// N-bar^k: eta of {0..depth, inf}^k together with step-2 ramps.
WCompletion w_completion(const CuPresentation& D, int depth);

// ---------------------------------------------------------------------------
// Morphism codes and the relation E

struct MorphismCode {
  std::string name;
  std::function<CuSeq(const CuElement&)> map;
};

struct CodeCheck {
  bool pass[3] = {true, true, true};
  std::string witness[3];
  bool ok() const { return pass[0] && pass[1] && pass[2]; }
};

/// Conditions (1) order, (2) way-below and (3) additivity up to approx, over
/// all pairs from the enumeration prefix of D1 (limit = prefix).
/// Throws ValidationError when a code value is not a <<-increasing sequence in D2.
CodeCheck check_morphism_code(const CuPresentation& D1, const CuPresentation& D2, const MorphismCode& alpha,
                              long prefix = 3);

/// The Galois-type condition tying a pair of codes together.
bool check_pair_condition(const CuPresentation& D1, const CuPresentation& D2, const MorphismCode& a1,
                          const MorphismCode& a2, long prefix, std::string* witness = nullptr);

enum class CuVerdict { Equivalent, Inequivalent, Unknown };
std::string to_string(CuVerdict v);

struct CuEquivalenceOptions {
  long budget = 10000;  // search nodes
  bool pointed = false;
  long prefix = 3;      // enumeration prefix used to check N-bar codes
};

struct CuEquivalence {
  CuVerdict verdict = CuVerdict::Unknown;
  std::optional<MorphismCode> alpha1;
  std::optional<MorphismCode> alpha2;
  std::string witness;    // readable description of alpha1
  std::string invariant;  // distinguishing invariant, or why the search gave up
};

CuEquivalence cu_equivalent(const CuPresentation& D1, const CuPresentation& D2,
                            const CuEquivalenceOptions& opts = {});

// ---------------------------------------------------------------------------
// Radius of comparison

/// (n+1)x + m e <= n y implies x <= y, for all x, y.
bool comparison_holds(const CuPresentation& D, long m, long n);
bool comparison_holds(const WCompletion& W, long m, long n);

struct RadiusResult {
  bool infinite = false;  // no qualifying (m, n) in the searched range
  Rational value;
  /// The infimum lies in [lower, value]; lower == value when exact.
  Rational lower;
  bool exact = false;
  long witness_m = -1;
  long witness_n = -1;
};

std::string to_string(const RadiusResult& r);

constexpr long kDefaultMaxN = 64;

RadiusResult radius_of_comparison(const CuPresentation& D, long max_n = kDefaultMaxN);
RadiusResult radius_of_comparison(const WCompletion& W, long max_n = kDefaultMaxN);

}  // namespace starinv

#endif
