#ifndef STARINV_STATES_HPP
#define STARINV_STATES_HPP

#include <optional>
#include <string>
#include <vector>

#include "starinv/ktheory.hpp"
#include "starinv/presentations.hpp"

namespace starinv {

/// Convex hull of finitely many rational points. Distances are measured in
/// the weighted metric d(x, y)^2 = sum_i (s_i (x_i - y_i))^2 with scales s
/// (all ones when empty).
struct Polytope {
  std::size_t dimension = 0;
  std::vector<RVector> vertices;
  std::vector<double> scales;
  bool simplex = false;
};

bool affinely_independent(const std::vector<RVector>& points);

/// Scales 1/1, 1/2, ..., 1/d: the Hilbert-cube identification.
std::vector<double> hilbert_cube_scales(std::size_t d);

/// Exact test: is x a convex combination of the vertices?
bool contains(const Polytope& K, const RVector& x);

/// Normalized block traces as the standard simplex in R^k.
Polytope trace_simplex(const FDAlgebra& A);

using GroupState = RVector;

bool is_group_state(const OrderedGroupWithUnit& G, const GroupState& phi);

/// Vertices of {phi : phi.g >= 0 for every generator g, phi.u = 1}, by exact
/// double description, sorted lexicographically. Throws SemanticError when
/// the polyhedron is unbounded or empty.
Polytope state_space(const OrderedGroupWithUnit& G);

/// Trace with barycentric coordinates tau, paired with K_0: phi_i = tau_i / n_i.
/// Throws ValidationError when tau is not in the simplex.
GroupState pairing(const FDAlgebra& A, const RVector& tau);

/// Weighted-l2 nearest point of K to x (min-norm-point active set method).
std::vector<double> nearest_point(const Polytope& K, const std::vector<double>& x);

struct NearestPoint {
  std::vector<double> point;
  /// Set when x already lies in K; then point is x itself.
  std::optional<RVector> exact;
};

NearestPoint nearest_point(const Polytope& K, const RVector& x);

struct ElliottInvariant {
  OrderedGroupWithUnit k0;
  K1Group k1;
  Polytope traces;
  /// pairing[j] is the state paired with extreme trace j.
  std::vector<GroupState> pairing;
};

ElliottInvariant elliott_invariant(const FDAlgebra& A);

/// `ell: k0=(<group>) k1=0 traces=<v;v;...> pairing=<phi;phi;...>`
std::string emit_elliott(const ElliottInvariant& E);

struct ElliottIsoResult {
  IsoVerdict verdict = IsoVerdict::Unknown;
  IntMatrix k0_witness;
  std::vector<std::size_t> trace_map;  // extreme trace j of E1 -> trace_map[j] of E2
  std::string reason;
};

ElliottIsoResult elliott_isomorphic(const ElliottInvariant& E1, const ElliottInvariant& E2);

}  // namespace starinv

#endif
