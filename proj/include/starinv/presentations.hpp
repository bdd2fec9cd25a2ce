#ifndef STARINV_PRESENTATIONS_HPP
#define STARINV_PRESENTATIONS_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "starinv/errors.hpp"
#include "starinv/rational.hpp"

namespace starinv {

/// A finite-dimensional C*-algebra M_{n_1} + ... + M_{n_k}, described by its block sizes.
class FDAlgebra {
 public:
  /// Throws ValidationError on an empty list or a block size < 1.
  explicit FDAlgebra(std::vector<int> blocks);

  const std::vector<int>& blocks() const { return blocks_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  int block(std::size_t i) const { return blocks_[i]; }
  /// Sum of n_i^2.
  long dimension() const;

  /// Block indices stably sorted by size. Used wherever iteration order must
  /// not depend on how the blocks happen to be listed.
  std::vector<std::size_t> canonical_order() const;

  friend bool operator==(const FDAlgebra&, const FDAlgebra&) = default;

 private:
  std::vector<int> blocks_;
};

/// Row-major dense matrix over an arbitrary field-like scalar.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using QMatrix = DenseMatrix<QComplex>;

QMatrix operator+(const QMatrix& a, const QMatrix& b);
QMatrix operator-(const QMatrix& a, const QMatrix& b);
QMatrix operator*(const QMatrix& a, const QMatrix& b);
QMatrix operator*(const QComplex& s, const QMatrix& a);
QMatrix adjoint(const QMatrix& a);
/// Exact rank by Gaussian elimination over Q(i).
std::size_t rank(const QMatrix& a);
/// Exact inverse; throws std::domain_error when singular.
QMatrix inverse(const QMatrix& a);
Eigen::MatrixXcd to_numeric(const QMatrix& a);

/// Element of an FDAlgebra with exact Q(i) entries: one square matrix per block.
struct BlockElement {
  std::vector<QMatrix> blocks;

  static BlockElement zero(const FDAlgebra& A);
  static BlockElement unit(const FDAlgebra& A);
  /// Block-diagonal element with the given scalar on every diagonal entry.
  static BlockElement scalar(const FDAlgebra& A, const QComplex& c);

  /// Throws ValidationError unless block i is n_i x n_i.
  void check_shape(const FDAlgebra& A) const;

  friend bool operator==(const BlockElement&, const BlockElement&) = default;
};

BlockElement operator+(const BlockElement& a, const BlockElement& b);
BlockElement operator-(const BlockElement& a, const BlockElement& b);
BlockElement operator*(const BlockElement& a, const BlockElement& b);
BlockElement operator*(const QComplex& s, const BlockElement& a);
BlockElement adjoint(const BlockElement& a);

/// Floating-point counterpart used by the sentence optimizer.
struct NumericElement {
  std::vector<Eigen::MatrixXcd> blocks;

  static NumericElement zero(const FDAlgebra& A);
  static NumericElement unit(const FDAlgebra& A);
  static NumericElement scalar(const FDAlgebra& A, std::complex<double> c);
  static NumericElement from_exact(const BlockElement& e);
};

NumericElement operator+(const NumericElement& a, const NumericElement& b);
NumericElement operator-(const NumericElement& a, const NumericElement& b);
NumericElement operator*(const NumericElement& a, const NumericElement& b);
NumericElement operator*(std::complex<double> s, const NumericElement& a);
NumericElement adjoint(const NumericElement& a);

constexpr double kDefaultNormTolerance = 1e-9;

/// Largest singular value over all blocks. The result is within `tol` of the
/// true operator norm; throws std::invalid_argument when tol <= 0.
double operator_norm(const BlockElement& a, double tol = kDefaultNormTolerance);
double operator_norm(const NumericElement& a, double tol = kDefaultNormTolerance);
double operator_norm(const Eigen::MatrixXcd& m);

/// `.fda` reader: one `blocks: <int>+` line, `#` comments allowed.
FDAlgebra parse_fd_algebra(std::string_view text);
/// Canonical `.fda` text: `blocks: n1 n2 ...\n`.
std::string emit_fd_algebra(const FDAlgebra& A);

using IntMatrix = std::vector<std::vector<long>>;

/// Finite stage of an AF inductive system: block sizes per level and
/// nonnegative multiplicity matrices between consecutive levels.
struct BratteliDiagram {
  std::vector<std::vector<long>> levels;
  /// maps[t] has |levels[t+1]| rows and |levels[t]| columns.
  std::vector<IntMatrix> maps;
  /// Every embedding is unital: levels[t+1] == maps[t] * levels[t].
  bool unital = true;
  /// Source carried `unital: no`, which permits levels[t+1] >= maps[t] * levels[t].
  bool declared_nonunital = false;

  friend bool operator==(const BratteliDiagram&, const BratteliDiagram&) = default;
};

/// Checks shapes, nonnegativity and the multiplicity inequalities; sets `unital`.
void validate(BratteliDiagram& d);

/// `.bd` reader. Statements `levels:`, `maps:` and optional `unital: yes|no`
/// separated by newlines or `;`. Levels are parenthesized integer groups;
/// each map is a bracketed matrix, either nested rows `[[1 1][1 0]]` or a
/// flat row-major list `[2]`; consecutive maps are separated by `,` or `;`.
BratteliDiagram parse_bratteli(std::string_view text);
std::string emit_bratteli(const BratteliDiagram& d);

}  // namespace starinv

#endif
