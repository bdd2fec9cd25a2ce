#include "starinv/ktheory.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "starinv/exact_lp.hpp"
#include "rlinalg.hpp"

namespace starinv {

using detail::determinant;
using detail::rational_inverse;
using detail::rational_rank;

// ---------------------------------------------------------------------------
// Finite semigroups

bool AbelianSemigroupTable::is_associative() const {
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      for (std::size_t k = 0; k < size; ++k)
        if ((*this)(i, (*this)(j, k)) != (*this)((*this)(i, j), k)) return false;
  return true;
}

bool AbelianSemigroupTable::is_commutative() const {
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

void AbelianSemigroupTable::validate() const {
  if (size == 0) throw ValidationError("semigroup must be nonempty");
  if (op.size() != size * size) throw ValidationError("operation table has the wrong size");
  for (std::size_t v : op)
    if (v >= size) throw ValidationError("operation table entry out of range");
  if (!is_commutative()) throw ValidationError("operation is not commutative");
  if (!is_associative()) throw ValidationError("operation is not associative");
}

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

std::size_t GrothendieckGroup::inverse(std::size_t g) const {
  for (std::size_t h = 0; h < group.size; ++h)
    if (group(g, h) == zero) return h;
  throw std::logic_error("group element without inverse");
}

GrothendieckGroup grothendieck(const AbelianSemigroupTable& S) {
  S.validate();
  const std::size_t n = S.size;
  // x ~ y iff x + m = y + m for some m. The quotient is a finite cancellative
  // semigroup, hence already a group, and it is the Grothendieck group.
  UnionFind uf(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (std::size_t m = 0; m < n; ++m)
        if (S(x, m) == S(y, m)) {
          uf.unite(x, y);
          break;
        }
  std::vector<std::size_t> cls(n);
  std::map<std::size_t, std::size_t> root_to_class;
  for (std::size_t x = 0; x < n; ++x) {
    auto [it, fresh] = root_to_class.emplace(uf.find(x), root_to_class.size());
    cls[x] = it->second;
  }
  const std::size_t g = root_to_class.size();
  std::vector<std::size_t> rep(g, SIZE_MAX);
  for (std::size_t x = 0; x < n; ++x)
    if (rep[cls[x]] == SIZE_MAX) rep[cls[x]] = x;

  GrothendieckGroup G;
  G.group.size = g;
  G.group.op.resize(g * g);
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < g; ++b) G.group.op[a * g + b] = cls[S(rep[a], rep[b])];
  G.zero = SIZE_MAX;
  for (std::size_t a = 0; a < g; ++a)
    if (G.group(a, a) == a) {
      G.zero = a;
      break;
    }
  if (G.zero == SIZE_MAX) throw std::logic_error("cancellative quotient has no idempotent");

  G.canonical = cls;
  G.canonical_injective = g == n;
  G.class_of_pair.resize(n * n);
  std::vector<std::size_t> inv(g);
  for (std::size_t a = 0; a < g; ++a) inv[a] = G.inverse(a);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) G.class_of_pair[i * n + j] = G.group(cls[i], inv[cls[j]]);
  return G;
}

// ---------------------------------------------------------------------------
// Murray-von Neumann semigroup

MvSemigroup::MvSemigroup(const FDAlgebra& A, long bound) : algebra_(A), bound_(bound) {
  long largest = *std::max_element(A.blocks().begin(), A.blocks().end());
  if (bound < largest)
    throw ValidationError("truncation bound " + std::to_string(bound) +
                          " is below the largest block size " + std::to_string(largest));
  const std::size_t k = A.num_blocks();
  std::vector<long> v(k, 0);
  for (;;) {
    labels_.push_back(v);
    std::size_t i = k;
    while (i > 0 && v[i - 1] == bound) v[--i] = 0;
    if (i == 0) break;
    ++v[i - 1];
  }
  std::vector<long> u(A.blocks().begin(), A.blocks().end());
  unit_ = index_of(u);
}

std::size_t MvSemigroup::index_of(const std::vector<long>& ranks) const {
  if (ranks.size() != algebra_.num_blocks()) throw std::invalid_argument("rank vector length");
  std::size_t idx = 0;
  for (long r : ranks) {
    if (r < 0 || r > bound_) throw std::out_of_range("rank outside the truncation window");
    idx = idx * static_cast<std::size_t>(bound_ + 1) + static_cast<std::size_t>(r);
  }
  return idx;
}

std::size_t MvSemigroup::add(std::size_t i, std::size_t j) const {
  std::vector<long> s(labels_[i].size());
  for (std::size_t c = 0; c < s.size(); ++c) s[c] = std::min(labels_[i][c] + labels_[j][c], bound_);
  return index_of(s);
}

bool MvSemigroup::saturates(std::size_t i, std::size_t j) const {
  for (std::size_t c = 0; c < labels_[i].size(); ++c)
    if (labels_[i][c] + labels_[j][c] > bound_) return true;
  return false;
}

AbelianSemigroupTable MvSemigroup::table() const {
  AbelianSemigroupTable t;
  t.size = size();
  t.op.resize(t.size * t.size);
  for (std::size_t i = 0; i < t.size; ++i)
    for (std::size_t j = 0; j < t.size; ++j) t.op[i * t.size + j] = add(i, j);
  return t;
}

MvSemigroup mv_semigroup(const FDAlgebra& A, long bound) { return MvSemigroup(A, bound); }

// ---------------------------------------------------------------------------
// Ordered groups

namespace {

RVector to_rvector(const IntVector& v) { return RVector(v.begin(), v.end()); }

std::vector<RVector> generators(const OrderedGroupWithUnit& G) {
  std::vector<RVector> g;
  for (const auto& v : G.cone) g.push_back(to_rvector(v));
  return g;
}

// Columns are the generators.
std::vector<RVector> generator_matrix(const OrderedGroupWithUnit& G) {
  std::vector<RVector> m(static_cast<std::size_t>(G.rank), RVector(G.cone.size()));
  for (std::size_t j = 0; j < G.cone.size(); ++j)
    for (std::size_t i = 0; i < m.size(); ++i) m[i][j] = G.cone[j][i];
  return m;
}

}  // namespace

bool in_cone(const OrderedGroupWithUnit& G, const IntVector& x) {
  if (x.size() != static_cast<std::size_t>(G.rank)) throw std::invalid_argument("vector has wrong rank");
  return in_rational_cone(generators(G), to_rvector(x));
}

bool is_simplicial(const OrderedGroupWithUnit& G) {
  if (G.cone.size() != static_cast<std::size_t>(G.rank)) return false;
  Rational d = determinant(generator_matrix(G));
  return d == 1 || d == -1;
}

bool is_order_unit(const OrderedGroupWithUnit& G) {
  const std::size_t r = static_cast<std::size_t>(G.rank);
  const std::size_t m = G.cone.size();
  if (!in_cone(G, G.unit)) return false;
  for (std::size_t i = 0; i < r; ++i)
    for (int sign : {1, -1}) {
      // sum lambda_j g_j - k u = sign * e_i with lambda, k >= 0.
      LinearProgram lp;
      lp.num_vars = m + 1;
      for (std::size_t row = 0; row < r; ++row) {
        RVector coeffs(m + 1);
        for (std::size_t j = 0; j < m; ++j) coeffs[j] = G.cone[j][row];
        coeffs[m] = -G.unit[row];
        lp.eq_rows.push_back(std::move(coeffs));
        lp.eq_rhs.push_back(row == i ? Rational(sign) : Rational(0));
      }
      if (solve(lp).status != LPStatus::Optimal) return false;
    }
  return true;
}

void validate(const OrderedGroupWithUnit& G) {
  if (G.rank < 1) throw ValidationError("group rank must be positive");
  const std::size_t r = static_cast<std::size_t>(G.rank);
  if (G.unit.size() != r) throw ValidationError("unit has length " + std::to_string(G.unit.size()) +
                                                ", expected " + std::to_string(r));
  if (G.cone.empty()) throw ValidationError("cone needs at least one generator");
  for (const auto& g : G.cone) {
    if (g.size() != r) throw ValidationError("cone generator has the wrong length");
    if (std::all_of(g.begin(), g.end(), [](long v) { return v == 0; }))
      throw ValidationError("zero cone generator");
  }
  // X - X = Z^r needs a full-dimensional cone.
  if (rational_rank(generator_matrix(G)) != r) throw ValidationError("cone is not full-dimensional");
  // X n -X = {0}: no nonzero nonnegative combination of generators vanishes.
  LinearProgram lp;
  lp.num_vars = G.cone.size();
  for (std::size_t i = 0; i < r; ++i) {
    RVector row(G.cone.size());
    for (std::size_t j = 0; j < G.cone.size(); ++j) row[j] = G.cone[j][i];
    lp.eq_rows.push_back(std::move(row));
    lp.eq_rhs.push_back(0);
  }
  lp.le_rows.push_back(RVector(G.cone.size(), Rational(1)));
  lp.le_rhs.push_back(1);
  lp.objective = RVector(G.cone.size(), Rational(1));
  if (solve(lp).value > 0) throw ValidationError("cone contains a line");
  if (!in_cone(G, G.unit)) throw ValidationError("unit is not positive");
  if (!is_order_unit(G)) throw ValidationError("unit is not an order unit");
}

OrderedGroupWithUnit grothendieck_ordered(const MvSemigroup& S) {
  const std::size_t n = S.size();
  const std::size_t k = S.algebra().num_blocks();
  // Pairs (s, t) are glued along (s, t) ~ (s + e_i, t + e_i) inside the
  // window. Every pair reaches (s - m, t - m), m = min(s, t), by such steps,
  // and the steps preserve s - t, so pairs with disjoint supports form a
  // transversal of the classes and each class is labelled by s - t.
  auto class_label = [&](std::size_t s, std::size_t t) {
    IntVector d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = S.label(s)[i] - S.label(t)[i];
    return d;
  };
  const std::size_t zero = 0;
  OrderedGroupWithUnit G;
  G.rank = static_cast<int>(k);
  // Positive cone generators: atoms, the nonzero elements that are not a sum
  // of two nonzero elements. In a window of N^k that means coordinate sum 1.
  for (std::size_t s = 1; s < n; ++s) {
    long total = 0;
    for (long v : S.label(s)) total += v;
    if (total == 1) G.cone.push_back(class_label(s, zero));
  }
  std::sort(G.cone.begin(), G.cone.end(), std::greater<>());
  G.unit = class_label(S.unit_index(), zero);
  return G;
}

OrderedGroupWithUnit ordered_k0(const FDAlgebra& A) {
  OrderedGroupWithUnit G;
  G.rank = static_cast<int>(A.num_blocks());
  for (std::size_t i = 0; i < A.num_blocks(); ++i) {
    IntVector e(A.num_blocks(), 0);
    e[i] = 1;
    G.cone.push_back(std::move(e));
  }
  G.unit.assign(A.blocks().begin(), A.blocks().end());
  return G;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

std::string join(const IntVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

IntVector split_ints(const std::string& s, int line, int col) {
  IntVector v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      long x = std::stol(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      v.push_back(x);
    } catch (const std::exception&) {
      throw ParseError(line, col, "malformed integer '" + item + "'");
    }
  }
  if (v.empty()) throw ParseError(line, col, "empty vector");
  return v;
}

}  // namespace

std::string emit_group(const OrderedGroupWithUnit& G) {
  std::string s = "rank=" + std::to_string(G.rank) + " cone=";
  for (std::size_t i = 0; i < G.cone.size(); ++i) s += (i ? ";" : "") + join(G.cone[i]);
  return s + " unit=" + join(G.unit);
}

OrderedGroupWithUnit parse_group(std::string_view text) {
  std::string src;
  for (char c : text) {
    if (c == '#') break;
    src += c;
  }
  OrderedGroupWithUnit G;
  bool have_rank = false, have_cone = false, have_unit = false;
  std::size_t pos = 0;
  int line = 1;
  std::size_t line_start = 0;
  while (pos < src.size()) {
    if (std::isspace(static_cast<unsigned char>(src[pos]))) {
      if (src[pos] == '\n') {
        ++line;
        line_start = pos + 1;
      }
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < src.size() && !std::isspace(static_cast<unsigned char>(src[end]))) ++end;
    std::string field = src.substr(pos, end - pos);
    int col = static_cast<int>(pos - line_start) + 1;
    pos = end;
    auto eq = field.find('=');
    if (eq == std::string::npos) throw ParseError(line, col, "expected key=value, found '" + field + "'");
    std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    if (key == "rank") {
      IntVector r = split_ints(value, line, col);
      if (r.size() != 1) throw ParseError(line, col, "rank must be a single integer");
      G.rank = static_cast<int>(r[0]);
      have_rank = true;
    } else if (key == "cone") {
      std::stringstream ss(value);
      std::string gen;
      while (std::getline(ss, gen, ';')) G.cone.push_back(split_ints(gen, line, col));
      have_cone = true;
    } else if (key == "unit") {
      G.unit = split_ints(value, line, col);
      have_unit = true;
    } else {
      throw ParseError(line, col, "unknown key '" + key + "'");
    }
  }
  if (!have_rank || !have_cone || !have_unit) throw ParseError(1, 1, "expected rank=, cone= and unit=");
  validate(G);
  return G;
}

// ---------------------------------------------------------------------------
// Connecting maps

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  std::size_t inner = b.size();
  IntMatrix c(a.size(), std::vector<long>(b.empty() ? 0 : b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw std::invalid_argument("matrix shape mismatch");
    for (std::size_t k = 0; k < inner; ++k)
      for (std::size_t j = 0; j < c[i].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  }
  return c;
}

IntVector apply_matrix(const IntMatrix& m, const IntVector& v) {
  IntVector out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != v.size()) throw std::invalid_argument("matrix/vector shape mismatch");
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  }
  return out;
}

GroupHom k0_connecting_map(const BratteliDiagram& D, std::size_t t) {
  if (t + 1 >= D.levels.size())
    throw std::out_of_range("level " + std::to_string(t) + " has no successor");
  return k0_connecting_map(D, t, t + 1);
}

GroupHom k0_connecting_map(const BratteliDiagram& D, std::size_t from, std::size_t to) {
  if (from > to || to >= D.levels.size())
    throw std::out_of_range("levels " + std::to_string(from) + " -> " + std::to_string(to) +
                            " out of range");
  GroupHom h;
  const std::size_t k = D.levels[from].size();
  h.matrix.assign(k, std::vector<long>(k, 0));
  for (std::size_t i = 0; i < k; ++i) h.matrix[i][i] = 1;
  for (std::size_t t = from; t < to; ++t) h.matrix = multiply(D.maps[t], h.matrix);
  for (const auto& row : h.matrix)
    for (long v : row)
      if (v < 0) h.positive = false;
  h.unit_preserving = apply_matrix(h.matrix, D.levels[from]) == D.levels[to];
  return h;
}

// ---------------------------------------------------------------------------
// Isomorphism

std::string to_string(IsoVerdict v) {
  switch (v) {
    case IsoVerdict::Iso:
      return "ISO";
    case IsoVerdict::NotIso:
      return "NOT_ISO";
    case IsoVerdict::Unknown:
      return "UNKNOWN";
  }
  return "UNKNOWN";
}

namespace {

IntMatrix to_int_matrix(const std::vector<RVector>& m) {
  IntMatrix out(m.size(), std::vector<long>(m.empty() ? 0 : m[0].size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (denominator(m[i][j]) != 1) throw std::logic_error("non-integral witness");
      out[i][j] = numerator(m[i][j]).convert_to<long>();
    }
  return out;
}

std::vector<RVector> to_rmatrix(const IntMatrix& m) {
  std::vector<RVector> out;
  for (const auto& row : m) out.emplace_back(row.begin(), row.end());
  return out;
}

IntVector unit_coordinates(const OrderedGroupWithUnit& G) {
  auto inv = rational_inverse(generator_matrix(G));
  IntVector c;
  for (const auto& row : inv) {
    Rational s = 0;
    for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * G.unit[j];
    if (denominator(s) != 1) throw std::logic_error("unimodular basis gave a fractional coordinate");
    c.push_back(numerator(s).convert_to<long>());
  }
  return c;
}

bool maps_cone_into(const IntMatrix& W, const OrderedGroupWithUnit& from, const OrderedGroupWithUnit& to) {
  for (const auto& g : from.cone)
    if (!in_cone(to, apply_matrix(W, g))) return false;
  return true;
}

}  // namespace

GroupIsoResult ordered_group_isomorphic(const OrderedGroupWithUnit& G, const OrderedGroupWithUnit& H,
                                        const GroupIsoOptions& opts) {
  GroupIsoResult res;
  if (G.rank != H.rank) {
    res.verdict = IsoVerdict::NotIso;
    res.reason = "ranks differ (" + std::to_string(G.rank) + " vs " + std::to_string(H.rank) + ")";
    return res;
  }
  const std::size_t r = static_cast<std::size_t>(G.rank);
  if (is_simplicial(G) && is_simplicial(H)) {
    // Order isomorphisms between copies of N^r permute the basis, so the
    // unit coordinates must agree as multisets.
    IntVector cg = unit_coordinates(G), ch = unit_coordinates(H);
    std::vector<std::size_t> perm(r);
    std::vector<bool> used(r, false);
    for (std::size_t j = 0; j < r; ++j) {
      std::size_t pick = r;
      for (std::size_t l = 0; l < r; ++l)
        if (!used[l] && ch[l] == cg[j]) {
          pick = l;
          break;
        }
      if (pick == r) {
        res.verdict = IsoVerdict::NotIso;
        res.reason = "unit coordinates differ as multisets";
        return res;
      }
      used[pick] = true;
      perm[j] = pick;
    }
    // W = H_basis * P * G_basis^{-1}
    std::vector<RVector> P(r, RVector(r));
    for (std::size_t j = 0; j < r; ++j) P[perm[j]][j] = 1;
    auto W = detail::multiply(detail::multiply(generator_matrix(H), P), rational_inverse(generator_matrix(G)));
    res.verdict = IsoVerdict::Iso;
    res.witness = to_int_matrix(W);
    return res;
  }

  const long b = opts.entry_bound;
  std::vector<long> entries(r * r, -b);
  long examined = 0;
  for (;;) {
    if (examined++ >= opts.budget) {
      res.reason = "search budget exhausted";
      return res;
    }
    IntMatrix W(r, std::vector<long>(r));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) W[i][j] = entries[i * r + j];
    auto RW = to_rmatrix(W);
    Rational d = determinant(RW);
    if ((d == 1 || d == -1) && apply_matrix(W, G.unit) == H.unit && maps_cone_into(W, G, H)) {
      IntMatrix Winv = to_int_matrix(rational_inverse(RW));
      if (maps_cone_into(Winv, H, G)) {
        res.verdict = IsoVerdict::Iso;
        res.witness = W;
        return res;
      }
    }
    std::size_t pos = entries.size();
    while (pos > 0 && entries[pos - 1] == b) entries[--pos] = -b;
    if (pos == 0) break;
    ++entries[pos - 1];
  }
  res.reason = "no witness with entries in [-" + std::to_string(b) + "," + std::to_string(b) + "]";
  return res;
}

K1Group k1_finite_dimensional(const FDAlgebra&) { return {}; }

}  // namespace starinv
