#ifndef STARINV_FORMULA_HPP
#define STARINV_FORMULA_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "starinv/term.hpp"

namespace starinv {

enum class FormulaKind { Norm, Const, Add, Sub, Mul, Neg, Max, Min, Monus, Sup, Inf };

/// Continuous-logic formula over finite-dimensional algebras. Immutable;
/// copies share structure.
class Formula {
 public:
  static Formula norm(Term t);
  static Formula constant(Rational c);
  /// Quantifier over the ball ||x_var|| <= bound, bound a natural number >= 1.
  static Formula sup(int var, long bound, Formula body);
  static Formula inf(int var, long bound, Formula body);

  friend Formula operator+(const Formula& a, const Formula& b);
  friend Formula operator-(const Formula& a, const Formula& b);
  friend Formula operator*(const Formula& a, const Formula& b);
  friend Formula operator-(const Formula& a);
  friend Formula max(const Formula& a, const Formula& b);
  friend Formula min(const Formula& a, const Formula& b);
  /// max(a - b, 0)
  friend Formula monus(const Formula& a, const Formula& b);

  FormulaKind kind() const;
  const Term& term() const;        // Norm
  const Rational& value() const;   // Const
  const Formula& lhs() const;      // binary connectives, Neg operand, quantifier body
  const Formula& rhs() const;      // binary connectives
  int bound_var() const;           // Sup, Inf
  long bound() const;              // Sup, Inf

  std::set<int> free_variables() const;
  bool is_sentence() const { return free_variables().empty(); }
  /// Only rational-polynomial connectives (no max, min, monus).
  bool in_polynomial_fragment() const;
  bool is_quantifier_free() const;

 private:
  struct Node;
  static Formula binary(FormulaKind k, const Formula& a, const Formula& b);
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Text that parse_formula reads back to an equal tree.
std::string to_string(const Formula& f);

struct FormulaParseOptions {
  /// Reject max, min and monus.
  bool polynomial_only = false;
};

/// One formula. Throws ParseError with line and column.
Formula parse_formula(std::string_view text, const FormulaParseOptions& opts = {});

struct NamedFormula {
  std::string id;
  Formula formula;
};

/// `.clf` file: formulas separated by newlines or `;` (newlines inside
/// parentheses are ignored), each optionally prefixed by `<name>:`.
/// Unnamed formulas get ids s0, s1, ... by position.
std::vector<NamedFormula> parse_formula_file(std::string_view text, const FormulaParseOptions& opts = {});

// ---------------------------------------------------------------------------
// Evaluation

struct EvalConfig {
  std::uint64_t seed = 0;
  int restarts = 64;
  int steps = 200;  // local refinement iterations per restart
  int pool = 16;    // random witness pool size per quantifier block
  double tol = 1e-6;
  double margin = 1e-2;
  /// Extra starting witnesses for quantified variables: the k-th start
  /// takes hints[v][k] for every v that has one.
  std::map<int, std::vector<NumericElement>> hints;
};

/// Exact for quantifier-free formulas; Lower/Upper when the value is a
/// one-sided bound; Estimate when quantified parts pull in both directions.
enum class Certificate { Exact, Lower, Upper, Estimate };
std::string to_string(Certificate c);

struct EvalResult {
  double value = 0;
  Certificate certificate = Certificate::Exact;
  /// Best witnesses for the outermost quantifier block, by variable.
  NumericAssignment witness;
};

/// t_K: y itself when ||y|| <= K, otherwise (K / ||y||) y.
NumericElement rescale_into_ball(const NumericElement& y, long K, double tol = kDefaultNormTolerance);

/// Quantifier-free formulas are evaluated directly (certificate Exact, up to
/// the norm tolerance). Sup gives a lower bound, Inf an upper bound, from the
/// best witness found; nested quantifiers are approximated with a reduced
/// budget and the result carries the outermost direction. An upper bound of
/// 0 on a syntactically nonnegative formula is reported Exact. Throws
/// SemanticError when a free variable is unassigned.
EvalResult evaluate(const Formula& f, const FDAlgebra& A, const NumericAssignment& env = {},
                    const EvalConfig& cfg = {});
EvalResult evaluate(const Formula& f, const FDAlgebra& A, const ExactAssignment& env, const EvalConfig& cfg = {});

struct FingerprintEntry {
  std::string id;
  double value = 0;
  Certificate certificate = Certificate::Exact;

  bool operator==(const FingerprintEntry&) const = default;
};

using TheoryFingerprint = std::vector<FingerprintEntry>;

/// Throws SemanticError if some formula has free variables.
TheoryFingerprint theory_fingerprint(const FDAlgebra& A, const std::vector<NamedFormula>& sentences,
                                     const EvalConfig& cfg = {});

/// inf over three positive contractions y_j* y_j of the largest pairwise
/// product norm and the defects |1 - ||y_j* y_j|||.
Formula sigma3();

// ---------------------------------------------------------------------------
// Rank tests

enum class RankVerdict { TrueExact, TrueNumeric, NotDetected };
std::string to_string(RankVerdict v);

struct RankOptions {
  bool numeric = false;  // use the sentence-evaluation path instead of the certificate
  double epsilon = 1e-1;
  int samples = 24;
};

struct RankResult {
  RankVerdict verdict = RankVerdict::NotDetected;
  int samples = 0;
  double max_perturbation = 0;  // largest ||a - a'|| over the samples
  double min_gap = 0;           // smallest singular value (or |eigenvalue|) of a perturbed a'
  double estimate = 0;          // numeric path: worst sentence value
};

/// Throws std::invalid_argument for n < 1.
RankResult stable_rank_leq(const FDAlgebra& A, int n, const EvalConfig& cfg = {}, const RankOptions& opts = {});
/// Throws std::invalid_argument for n < 0.
RankResult real_rank_leq(const FDAlgebra& A, int n, const EvalConfig& cfg = {}, const RankOptions& opts = {});

}  // namespace starinv

#endif
