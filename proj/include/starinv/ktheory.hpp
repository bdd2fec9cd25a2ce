#ifndef STARINV_KTHEORY_HPP
#define STARINV_KTHEORY_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "starinv/presentations.hpp"

namespace starinv {

/// Finite semigroup given by its operation table.
struct AbelianSemigroupTable {
  std::size_t size = 0;
  std::vector<std::size_t> op;  // row-major size x size

  std::size_t operator()(std::size_t i, std::size_t j) const { return op[i * size + j]; }

  bool is_associative() const;
  bool is_commutative() const;
  /// Throws ValidationError unless the table is a well-formed abelian semigroup.
  void validate() const;
};

/// Grothendieck group of a finite abelian semigroup, as a finite group table.
struct GrothendieckGroup {
  AbelianSemigroupTable group;
  std::size_t zero = 0;
  /// class_of_pair[i * n + j] is the class of the formal difference (i, j).
  std::vector<std::size_t> class_of_pair;
  /// s -> [s + s, s], which is [s, 0] whenever S has a zero.
  std::vector<std::size_t> canonical;
  bool canonical_injective = false;

  std::size_t inverse(std::size_t g) const;
};

GrothendieckGroup grothendieck(const AbelianSemigroupTable& S);

/// Murray-von Neumann semigroup of projections in A (x) K, labeled by rank
/// vectors in {0..bound}^k. Addition saturates at the bound.
class MvSemigroup {
 public:
  MvSemigroup(const FDAlgebra& A, long bound);

  const FDAlgebra& algebra() const { return algebra_; }
  long bound() const { return bound_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<long>& label(std::size_t i) const { return labels_[i]; }
  std::size_t index_of(const std::vector<long>& ranks) const;
  std::size_t unit_index() const { return unit_; }

  std::size_t add(std::size_t i, std::size_t j) const;
  /// True when i + j left the window and was clamped.
  bool saturates(std::size_t i, std::size_t j) const;
  /// Full table; only sensible for small windows.
  AbelianSemigroupTable table() const;

 private:
  FDAlgebra algebra_;
  long bound_;
  std::vector<std::vector<long>> labels_;
  std::size_t unit_;
};

/// Default truncation bound per coordinate.
constexpr long kDefaultMvBound = 16;

/// Throws ValidationError if bound < max block size.
MvSemigroup mv_semigroup(const FDAlgebra& A, long bound = kDefaultMvBound);

using IntVector = std::vector<long>;

/// (Z^r, X, u) with X the integer points of the rational cone spanned by `cone`.
struct OrderedGroupWithUnit {
  int rank = 0;
  std::vector<IntVector> cone;
  IntVector unit;

  friend bool operator==(const OrderedGroupWithUnit&, const OrderedGroupWithUnit&) = default;
};

bool in_cone(const OrderedGroupWithUnit& G, const IntVector& x);
/// Generators form a Z-basis, so X is a copy of N^r.
bool is_simplicial(const OrderedGroupWithUnit& G);
/// -ku <= e_i <= ku for some k, for every basis vector.
bool is_order_unit(const OrderedGroupWithUnit& G);
/// Throws ValidationError on shape errors, a non-pointed or degenerate cone,
/// or a unit that is not an order unit.
void validate(const OrderedGroupWithUnit& G);

/// Group of the untruncated part of the MvN semigroup, read off combinatorially
/// from pairs of rank vectors in the window.
OrderedGroupWithUnit grothendieck_ordered(const MvSemigroup& S);

OrderedGroupWithUnit ordered_k0(const FDAlgebra& A);

/// `rank=<r> cone=<g;g;...> unit=<v>` with vectors as comma-separated integers.
std::string emit_group(const OrderedGroupWithUnit& G);
OrderedGroupWithUnit parse_group(std::string_view text);

struct GroupHom {
  IntMatrix matrix;  // rows = target rank
  bool positive = true;
  bool unit_preserving = true;
};

GroupHom k0_connecting_map(const BratteliDiagram& D, std::size_t t);
/// Composite of the connecting maps from level `from` to level `to`.
GroupHom k0_connecting_map(const BratteliDiagram& D, std::size_t from, std::size_t to);

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntVector apply_matrix(const IntMatrix& m, const IntVector& v);

enum class IsoVerdict { Iso, NotIso, Unknown };
std::string to_string(IsoVerdict v);

struct GroupIsoResult {
  IsoVerdict verdict = IsoVerdict::Unknown;
  IntMatrix witness;   // maps G to H
  std::string reason;  // human-readable explanation for NotIso/Unknown
};

struct GroupIsoOptions {
  long entry_bound = 2;
  long budget = 10000;  // candidate matrices examined in the general path
};

GroupIsoResult ordered_group_isomorphic(const OrderedGroupWithUnit& G, const OrderedGroupWithUnit& H,
                                        const GroupIsoOptions& opts = {});

/// K_1 of a finite-dimensional algebra; the rank and torsion of a finitely
/// generated abelian group, here always zero.
struct K1Group {
  int rank = 0;
  std::vector<long> torsion;
  bool is_trivial() const { return rank == 0 && torsion.empty(); }
};

K1Group k1_finite_dimensional(const FDAlgebra& A);

}  // namespace starinv

#endif
