#include "starinv/presentations.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "scanner.hpp"

namespace starinv {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

FDAlgebra::FDAlgebra(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ValidationError("an FD algebra needs at least one block");
  for (int n : blocks_)
    if (n < 1) throw ValidationError("block size must be positive, got " + std::to_string(n));
}

long FDAlgebra::dimension() const {
  long d = 0;
  for (int n : blocks_) d += static_cast<long>(n) * n;
  return d;
}

std::vector<std::size_t> FDAlgebra::canonical_order() const {
  std::vector<std::size_t> order(blocks_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return blocks_[a] < blocks_[b]; });
  return order;
}

// ---------------------------------------------------------------------------
// Exact matrices

namespace {

void require_same_shape(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("matrix shape mismatch");
}

}  // namespace

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  require_same_shape(a, b);
  QMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  require_same_shape(a, b);
  QMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("matrix product shape mismatch");
  QMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

QMatrix operator*(const QComplex& s, const QMatrix& a) {
  QMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

QMatrix adjoint(const QMatrix& a) {
  QMatrix c(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(j, i) = a(i, j).conj();
  return c;
}

std::size_t rank(const QMatrix& a) {
  QMatrix m = a;
  std::size_t r = 0;
  for (std::size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
    std::size_t pivot = r;
    while (pivot < m.rows() && m(pivot, col).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(pivot, j));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, col).is_zero()) continue;
      QComplex f = m(i, col) / m(r, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

QMatrix inverse(const QMatrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("inverse of a non-square matrix");
  std::size_t n = a.rows();
  QMatrix m = a;
  QMatrix inv = QMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m(pivot, col).is_zero()) ++pivot;
    if (pivot == n) throw std::domain_error("singular matrix");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(m(col, j), m(pivot, j));
      std::swap(inv(col, j), inv(pivot, j));
    }
    QComplex p = m(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      m(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || m(i, col).is_zero()) continue;
      QComplex f = m(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

Eigen::MatrixXcd to_numeric(const QMatrix& a) {
  Eigen::MatrixXcd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j).to_complex();
  return m;
}

// ---------------------------------------------------------------------------
// Block elements

BlockElement BlockElement::zero(const FDAlgebra& A) {
  BlockElement e;
  for (int n : A.blocks()) e.blocks.emplace_back(n, n);
  return e;
}

BlockElement BlockElement::unit(const FDAlgebra& A) { return scalar(A, QComplex(1)); }

BlockElement BlockElement::scalar(const FDAlgebra& A, const QComplex& c) {
  BlockElement e = zero(A);
  for (auto& b : e.blocks)
    for (std::size_t i = 0; i < b.rows(); ++i) b(i, i) = c;
  return e;
}

void BlockElement::check_shape(const FDAlgebra& A) const {
  if (blocks.size() != A.num_blocks())
    throw ValidationError("element has " + std::to_string(blocks.size()) + " blocks, algebra has " +
                          std::to_string(A.num_blocks()));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto n = static_cast<std::size_t>(A.block(i));
    if (blocks[i].rows() != n || blocks[i].cols() != n)
      throw ValidationError("block " + std::to_string(i) + " is not " + std::to_string(n) + "x" +
                            std::to_string(n));
  }
}

namespace {

template <class E, class F>
E blockwise(const E& a, const E& b, F f) {
  if (a.blocks.size() != b.blocks.size()) throw ValidationError("block count mismatch");
  E c;
  c.blocks.reserve(a.blocks.size());
  for (std::size_t i = 0; i < a.blocks.size(); ++i) c.blocks.push_back(f(a.blocks[i], b.blocks[i]));
  return c;
}

}  // namespace

BlockElement operator+(const BlockElement& a, const BlockElement& b) {
  return blockwise(a, b, [](const QMatrix& x, const QMatrix& y) { return x + y; });
}
BlockElement operator-(const BlockElement& a, const BlockElement& b) {
  return blockwise(a, b, [](const QMatrix& x, const QMatrix& y) { return x - y; });
}
BlockElement operator*(const BlockElement& a, const BlockElement& b) {
  return blockwise(a, b, [](const QMatrix& x, const QMatrix& y) { return x * y; });
}
BlockElement operator*(const QComplex& s, const BlockElement& a) {
  BlockElement c;
  for (const auto& b : a.blocks) c.blocks.push_back(s * b);
  return c;
}
BlockElement adjoint(const BlockElement& a) {
  BlockElement c;
  for (const auto& b : a.blocks) c.blocks.push_back(adjoint(b));
  return c;
}

NumericElement NumericElement::zero(const FDAlgebra& A) {
  NumericElement e;
  for (int n : A.blocks()) e.blocks.push_back(Eigen::MatrixXcd::Zero(n, n));
  return e;
}
NumericElement NumericElement::unit(const FDAlgebra& A) { return scalar(A, 1.0); }
NumericElement NumericElement::scalar(const FDAlgebra& A, std::complex<double> c) {
  NumericElement e;
  for (int n : A.blocks()) e.blocks.push_back(c * Eigen::MatrixXcd::Identity(n, n));
  return e;
}
NumericElement NumericElement::from_exact(const BlockElement& x) {
  NumericElement e;
  for (const auto& b : x.blocks) e.blocks.push_back(to_numeric(b));
  return e;
}

NumericElement operator+(const NumericElement& a, const NumericElement& b) {
  return blockwise(a, b, [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    return Eigen::MatrixXcd(x + y);
  });
}
NumericElement operator-(const NumericElement& a, const NumericElement& b) {
  return blockwise(a, b, [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    return Eigen::MatrixXcd(x - y);
  });
}
NumericElement operator*(const NumericElement& a, const NumericElement& b) {
  return blockwise(a, b, [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    return Eigen::MatrixXcd(x * y);
  });
}
NumericElement operator*(std::complex<double> s, const NumericElement& a) {
  NumericElement c;
  for (const auto& b : a.blocks) c.blocks.push_back(s * b);
  return c;
}
NumericElement adjoint(const NumericElement& a) {
  NumericElement c;
  for (const auto& b : a.blocks) c.blocks.push_back(b.adjoint());
  return c;
}

// ---------------------------------------------------------------------------
// Norms

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  // Two-sided Jacobi sweeps converge to working precision, well inside any
  // tolerance a caller can ask for.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

double operator_norm(const NumericElement& a, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("operator_norm tolerance must be positive");
  double best = 0.0;
  for (const auto& b : a.blocks) best = std::max(best, operator_norm(b));
  return best;
}

double operator_norm(const BlockElement& a, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("operator_norm tolerance must be positive");
  double best = 0.0;
  for (const auto& b : a.blocks) best = std::max(best, operator_norm(to_numeric(b)));
  return best;
}

// ---------------------------------------------------------------------------
// .fda

namespace {

long parse_int_token(TokenStream& ts, const Token& t) {
  if (!t.is(TokenKind::Number) || t.text.find_first_of("/.") != std::string::npos)
    ts.fail(t, "expected an integer, found '" + t.text + "'");
  try {
    return std::stol(t.text);
  } catch (const std::exception&) {
    ts.fail(t, "integer out of range: " + t.text);
  }
}

void expect_key(TokenStream& ts, std::string_view key) {
  Token t = ts.next();
  if (!t.is_ident(key)) ts.fail(t, "expected '" + std::string(key) + ":'");
  ts.expect_punct(":");
}

}  // namespace

FDAlgebra parse_fd_algebra(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  ts.skip_newlines();
  Token start = ts.peek();
  expect_key(ts, "blocks");
  std::vector<int> blocks;
  std::vector<Token> where;
  while (ts.peek().is(TokenKind::Number) || ts.peek().is(TokenKind::BadNumber)) {
    Token t = ts.next();
    where.push_back(t);
    blocks.push_back(static_cast<int>(parse_int_token(ts, t)));
  }
  if (blocks.empty()) ts.fail("expected at least one block size");
  ts.skip_newlines();
  if (!ts.at_end()) ts.fail("unexpected trailing input '" + ts.peek().text + "'");
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i] < 1)
      throw ValidationError(std::to_string(where[i].line) + ":" + std::to_string(where[i].column) +
                            ": block size must be positive, got " + std::to_string(blocks[i]));
  return FDAlgebra(std::move(blocks));
}

std::string emit_fd_algebra(const FDAlgebra& A) {
  std::string s = "blocks:";
  for (int n : A.blocks()) s += " " + std::to_string(n);
  return s + "\n";
}

// ---------------------------------------------------------------------------
// .bd

void validate(BratteliDiagram& d) {
  if (d.levels.empty()) throw ValidationError("a Bratteli diagram needs at least one level");
  if (d.maps.size() + 1 != d.levels.size())
    throw ValidationError("expected " + std::to_string(d.levels.size() - 1) + " maps, found " +
                          std::to_string(d.maps.size()));
  for (std::size_t t = 0; t < d.levels.size(); ++t) {
    if (d.levels[t].empty()) throw ValidationError("level " + std::to_string(t) + " is empty");
    for (long n : d.levels[t])
      if (n < 1) throw ValidationError("level " + std::to_string(t) + " has a non-positive block size");
  }
  bool unital = true;
  for (std::size_t t = 0; t < d.maps.size(); ++t) {
    const IntMatrix& m = d.maps[t];
    const auto& src = d.levels[t];
    const auto& dst = d.levels[t + 1];
    if (m.size() != dst.size())
      throw ValidationError("map " + std::to_string(t) + " has " + std::to_string(m.size()) +
                            " rows, level " + std::to_string(t + 1) + " has " +
                            std::to_string(dst.size()) + " blocks");
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m[j].size() != src.size())
        throw ValidationError("map " + std::to_string(t) + " row " + std::to_string(j) + " has " +
                              std::to_string(m[j].size()) + " entries, expected " +
                              std::to_string(src.size()));
      long image = 0;
      for (std::size_t i = 0; i < src.size(); ++i) {
        if (m[j][i] < 0) throw ValidationError("negative multiplicity in map " + std::to_string(t));
        image += m[j][i] * src[i];
      }
      if (image == 0)
        throw ValidationError("block " + std::to_string(j) + " of level " + std::to_string(t + 1) +
                              " receives nothing from level " + std::to_string(t));
      if (image > dst[j])
        throw ValidationError("level " + std::to_string(t + 1) + " block " + std::to_string(j) +
                              ": multiplicities need size " + std::to_string(image) + " > " +
                              std::to_string(dst[j]));
      if (image != dst[j]) {
        if (!d.declared_nonunital)
          throw ValidationError("level " + std::to_string(t + 1) + " block " + std::to_string(j) +
                                ": size " + std::to_string(dst[j]) + " != " + std::to_string(image) +
                                " (declare 'unital: no' for a non-unital embedding)");
        unital = false;
      }
    }
  }
  d.unital = unital;
}

namespace {

IntMatrix parse_map(TokenStream& ts) {
  ts.expect_punct("[");
  IntMatrix rows;
  if (ts.peek().is_punct("[")) {
    while (ts.accept_punct("[")) {
      std::vector<long> row;
      while (!ts.peek().is_punct("]")) row.push_back(parse_int_token(ts, ts.next()));
      ts.expect_punct("]");
      rows.push_back(std::move(row));
    }
  } else {
    // Rows separated by newlines, or one flat row-major run that is reshaped
    // once the level sizes are known.
    std::vector<long> row;
    while (!ts.peek().is_punct("]")) {
      if (ts.peek().is(TokenKind::Newline)) {
        ts.next();
        if (!row.empty()) rows.push_back(std::move(row));
        row.clear();
        continue;
      }
      row.push_back(parse_int_token(ts, ts.next()));
    }
    if (!row.empty()) rows.push_back(std::move(row));
    if (rows.size() <= 1) {
      if (rows.empty()) rows.emplace_back();
      rows.push_back({});  // marker: flat
    }
  }
  ts.expect_punct("]");
  return rows;
}

}  // namespace

BratteliDiagram parse_bratteli(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  BratteliDiagram d;
  bool seen_levels = false;
  bool seen_maps = false;
  bool seen_unital = false;
  std::vector<IntMatrix> raw_maps;
  for (;;) {
    while (ts.peek().is(TokenKind::Newline) || ts.peek().is_punct(";")) ts.next();
    if (ts.at_end()) break;
    Token key = ts.next();
    if (!key.is(TokenKind::Identifier)) ts.fail(key, "expected a key ('levels', 'maps' or 'unital')");
    ts.expect_punct(":");
    if (key.text == "levels") {
      if (seen_levels) ts.fail(key, "duplicate 'levels'");
      seen_levels = true;
      while (ts.accept_punct("(")) {
        std::vector<long> level;
        while (!ts.peek().is_punct(")")) level.push_back(parse_int_token(ts, ts.next()));
        ts.expect_punct(")");
        if (level.empty()) ts.fail("empty level");
        d.levels.push_back(std::move(level));
      }
      if (d.levels.empty()) ts.fail("expected '(' to start a level");
    } else if (key.text == "maps") {
      if (seen_maps) ts.fail(key, "duplicate 'maps'");
      seen_maps = true;
      while (ts.peek().is_punct("[")) {
        raw_maps.push_back(parse_map(ts));
        if ((ts.peek().is_punct(",") || ts.peek().is_punct(";")) && ts.peek(1).is_punct("[")) ts.next();
      }
    } else if (key.text == "unital") {
      if (seen_unital) ts.fail(key, "duplicate 'unital'");
      seen_unital = true;
      Token v = ts.next();
      if (v.is_ident("yes"))
        d.declared_nonunital = false;
      else if (v.is_ident("no"))
        d.declared_nonunital = true;
      else
        ts.fail(v, "expected 'yes' or 'no'");
    } else {
      ts.fail(key, "unknown key '" + key.text + "'");
    }
    if (!ts.peek().is(TokenKind::Newline) && !ts.peek().is_punct(";") && !ts.at_end())
      ts.fail("unexpected '" + ts.peek().text + "'");
  }
  if (!seen_levels) throw ParseError(1, 1, "missing 'levels:'");
  for (std::size_t t = 0; t < raw_maps.size(); ++t) {
    IntMatrix m = std::move(raw_maps[t]);
    if (m.size() == 2 && m[1].empty()) {
      std::vector<long> flat = std::move(m[0]);
      m.clear();
      std::size_t cols = t < d.levels.size() ? d.levels[t].size() : 0;
      std::size_t rows = t + 1 < d.levels.size() ? d.levels[t + 1].size() : 0;
      if (cols == 0 || rows == 0 || flat.size() != rows * cols)
        throw ValidationError("map " + std::to_string(t) + " has " + std::to_string(flat.size()) +
                              " entries, expected " + std::to_string(rows * cols));
      for (std::size_t r = 0; r < rows; ++r)
        m.emplace_back(flat.begin() + static_cast<long>(r * cols),
                       flat.begin() + static_cast<long>((r + 1) * cols));
    }
    d.maps.push_back(std::move(m));
  }
  validate(d);
  return d;
}

std::string emit_bratteli(const BratteliDiagram& d) {
  std::ostringstream os;
  os << "levels: ";
  for (const auto& level : d.levels) {
    os << '(';
    for (std::size_t i = 0; i < level.size(); ++i) os << (i ? " " : "") << level[i];
    os << ')';
  }
  os << '\n';
  if (!d.maps.empty()) {
    os << "maps: ";
    for (std::size_t t = 0; t < d.maps.size(); ++t) {
      if (t) os << ';';
      os << '[';
      for (const auto& row : d.maps[t]) {
        os << '[';
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << row[i];
        os << ']';
      }
      os << ']';
    }
    os << '\n';
  }
  if (d.declared_nonunital) os << "unital: no\n";
  return os.str();
}

}  // namespace starinv
