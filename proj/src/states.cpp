#include "starinv/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "starinv/exact_lp.hpp"
#include "rlinalg.hpp"

namespace starinv {

using detail::dot;
using detail::RMatrix;

bool affinely_independent(const std::vector<RVector>& points) {
  if (points.size() <= 1) return true;
  RMatrix diffs;
  for (std::size_t i = 1; i < points.size(); ++i) {
    RVector d(points[i].size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = points[i][j] - points[0][j];
    diffs.push_back(std::move(d));
  }
  return detail::rational_rank(diffs) == diffs.size();
}

std::vector<double> hilbert_cube_scales(std::size_t d) {
  std::vector<double> s(d);
  for (std::size_t i = 0; i < d; ++i) s[i] = 1.0 / static_cast<double>(i + 1);
  return s;
}

bool contains(const Polytope& K, const RVector& x) {
  if (x.size() != K.dimension) throw std::invalid_argument("point has the wrong dimension");
  if (K.vertices.empty()) return false;
  LinearProgram lp;
  lp.num_vars = K.vertices.size();
  for (std::size_t i = 0; i < K.dimension; ++i) {
    RVector row(K.vertices.size());
    for (std::size_t j = 0; j < K.vertices.size(); ++j) row[j] = K.vertices[j][i];
    lp.eq_rows.push_back(std::move(row));
    lp.eq_rhs.push_back(x[i]);
  }
  lp.eq_rows.push_back(RVector(K.vertices.size(), Rational(1)));
  lp.eq_rhs.push_back(1);
  return solve(lp).status == LPStatus::Optimal;
}

Polytope trace_simplex(const FDAlgebra& A) {
  Polytope P;
  P.dimension = A.num_blocks();
  for (std::size_t i = 0; i < P.dimension; ++i) {
    RVector e(P.dimension);
    e[i] = 1;
    P.vertices.push_back(std::move(e));
  }
  P.simplex = true;
  return P;
}

bool is_group_state(const OrderedGroupWithUnit& G, const GroupState& phi) {
  if (phi.size() != static_cast<std::size_t>(G.rank)) return false;
  for (const auto& g : G.cone) {
    Rational s = 0;
    for (std::size_t i = 0; i < g.size(); ++i) s += phi[i] * g[i];
    if (s < 0) return false;
  }
  Rational s = 0;
  for (std::size_t i = 0; i < G.unit.size(); ++i) s += phi[i] * G.unit[i];
  return s == 1;
}

// ---------------------------------------------------------------------------
// Double description

namespace {

// Scale a nonzero ray so its first nonzero entry has absolute value 1.
RVector normalize_ray(RVector r) {
  for (const auto& v : r)
    if (v != 0) {
      Rational s = abs(v);
      for (auto& w : r) w /= s;
      break;
    }
  return r;
}

struct Ray {
  RVector x;
  std::vector<bool> zero;  // zero[i]: constraint i is tight
};

// Extreme rays of the pointed cone {x : B x >= 0}; B has full column rank.
std::vector<RVector> extreme_rays(const RMatrix& B) {
  const std::size_t d = B[0].size();
  const std::size_t m = B.size();
  // Pick d linearly independent rows to seed the iteration.
  std::vector<std::size_t> seed;
  RMatrix chosen;
  for (std::size_t i = 0; i < m && seed.size() < d; ++i) {
    chosen.push_back(B[i]);
    if (detail::rational_rank(chosen) == chosen.size())
      seed.push_back(i);
    else
      chosen.pop_back();
  }
  RMatrix inv = detail::rational_inverse(chosen);
  std::vector<Ray> rays;
  std::vector<bool> processed(m, false);
  for (std::size_t i : seed) processed[i] = true;
  for (std::size_t c = 0; c < d; ++c) {
    Ray r;
    r.x.resize(d);
    for (std::size_t i = 0; i < d; ++i) r.x[i] = inv[i][c];
    r.x = normalize_ray(r.x);
    r.zero.assign(m, false);
    for (std::size_t i = 0; i < m; ++i) r.zero[i] = processed[i] && dot(B[i], r.x) == 0;
    rays.push_back(std::move(r));
  }

  for (std::size_t k = 0; k < m; ++k) {
    if (processed[k]) continue;
    std::vector<std::size_t> pos, neg;
    std::vector<Rational> val(rays.size());
    std::vector<Ray> keep;
    for (std::size_t q = 0; q < rays.size(); ++q) {
      val[q] = dot(B[k], rays[q].x);
      if (val[q] > 0) {
        pos.push_back(q);
        keep.push_back(rays[q]);
      } else if (val[q] < 0) {
        neg.push_back(q);
      } else {
        Ray r = rays[q];
        r.zero[k] = true;
        keep.push_back(std::move(r));
      }
    }
    for (std::size_t a : pos)
      for (std::size_t b : neg) {
        // Combinatorial adjacency: no third ray is tight on every constraint
        // where both are tight.
        std::vector<bool> common(m, false);
        std::size_t count = 0;
        for (std::size_t i = 0; i < m; ++i)
          if (rays[a].zero[i] && rays[b].zero[i]) {
            common[i] = true;
            ++count;
          }
        if (count + 2 < d) continue;
        bool adjacent = true;
        for (std::size_t q = 0; q < rays.size() && adjacent; ++q) {
          if (q == a || q == b) continue;
          bool covers = true;
          for (std::size_t i = 0; i < m && covers; ++i)
            if (common[i] && !rays[q].zero[i]) covers = false;
          if (covers) adjacent = false;
        }
        if (!adjacent) continue;
        Ray r;
        r.x.resize(d);
        for (std::size_t i = 0; i < d; ++i) r.x[i] = val[a] * rays[b].x[i] - val[b] * rays[a].x[i];
        r.x = normalize_ray(r.x);
        r.zero = common;
        r.zero[k] = true;
        keep.push_back(std::move(r));
      }
    processed[k] = true;
    rays = std::move(keep);
  }
  std::vector<RVector> out;
  for (auto& r : rays) out.push_back(std::move(r.x));
  return out;
}

}  // namespace

Polytope state_space(const OrderedGroupWithUnit& G) {
  const std::size_t r = static_cast<std::size_t>(G.rank);
  if (G.unit.size() != r) throw ValidationError("unit has the wrong length");
  // Homogenize: phi with phi.g >= 0 and phi.u >= 0; vertices come from rays
  // with phi.u > 0, rays with phi.u = 0 are recession directions.
  RMatrix B;
  for (const auto& g : G.cone) B.emplace_back(g.begin(), g.end());
  RVector u(G.unit.begin(), G.unit.end());
  B.push_back(u);
  if (detail::rational_rank(B) < r)
    throw SemanticError("state space is unbounded: the cone constraints leave a line free");
  Polytope P;
  P.dimension = r;
  for (auto& ray : extreme_rays(B)) {
    Rational s = dot(ray, u);
    if (s == 0) throw SemanticError("state space is unbounded: the unit is not an order unit");
    for (auto& v : ray) v /= s;
    P.vertices.push_back(std::move(ray));
  }
  if (P.vertices.empty()) throw SemanticError("state space is empty");
  std::sort(P.vertices.begin(), P.vertices.end());
  P.vertices.erase(std::unique(P.vertices.begin(), P.vertices.end()), P.vertices.end());
  P.simplex = affinely_independent(P.vertices);
  return P;
}

GroupState pairing(const FDAlgebra& A, const RVector& tau) {
  if (tau.size() != A.num_blocks())
    throw ValidationError("trace has " + std::to_string(tau.size()) + " coordinates, expected " +
                          std::to_string(A.num_blocks()));
  Rational total = 0;
  for (const auto& w : tau) {
    if (w < 0) throw ValidationError("trace outside the simplex: negative coordinate");
    total += w;
  }
  if (total != 1) throw ValidationError("trace outside the simplex: coordinates sum to " + to_string(total));
  GroupState phi(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) phi[i] = tau[i] / A.block(i);
  return phi;
}

// ---------------------------------------------------------------------------
// Nearest point

namespace {

// Minimum-norm point of conv(P) (Wolfe). Columns of P are the points.
Eigen::VectorXd min_norm_point(const Eigen::MatrixXd& P) {
  const double scale = std::max(1.0, P.colwise().squaredNorm().maxCoeff());
  const double eps = 1e-15 * scale;
  long start = 0;
  P.colwise().squaredNorm().minCoeff(&start);
  std::vector<long> S{start};
  std::vector<double> lambda{1.0};
  auto current = [&] {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(P.rows());
    for (std::size_t i = 0; i < S.size(); ++i) x += lambda[i] * P.col(S[i]);
    return x;
  };
  for (int major = 0; major < 1000; ++major) {
    Eigen::VectorXd x = current();
    Eigen::VectorXd dots = P.transpose() * x;
    long j = 0;
    dots.minCoeff(&j);
    if (x.squaredNorm() - dots(j) <= 1e-13 * scale) break;
    if (std::find(S.begin(), S.end(), j) != S.end()) break;
    S.push_back(j);
    lambda.push_back(0.0);
    for (int minor = 0; minor < 1000; ++minor) {
      // Affine minimizer over the points in S.
      const long s = static_cast<long>(S.size());
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(s + 1, s + 1);
      for (long a = 0; a < s; ++a) {
        for (long b = 0; b < s; ++b) K(a, b) = P.col(S[a]).dot(P.col(S[b]));
        K(a, s) = 1.0;
        K(s, a) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
      rhs(s) = 1.0;
      Eigen::VectorXd mu = K.completeOrthogonalDecomposition().solve(rhs).head(s);
      if ((mu.array() > eps).all()) {
        for (long a = 0; a < s; ++a) lambda[a] = mu(a);
        break;
      }
      double theta = 1.0;
      for (long a = 0; a < s; ++a)
        if (mu(a) <= eps) {
          double denom = lambda[a] - mu(a);
          if (denom > 0) theta = std::min(theta, lambda[a] / denom);
        }
      for (long a = 0; a < s; ++a) lambda[a] = (1 - theta) * lambda[a] + theta * mu(a);
      std::vector<long> S2;
      std::vector<double> l2;
      for (long a = 0; a < s; ++a)
        if (lambda[a] > eps) {
          S2.push_back(S[a]);
          l2.push_back(lambda[a]);
        }
      if (S2.empty()) {
        S2.push_back(S[0]);
        l2.push_back(1.0);
      }
      double total = std::accumulate(l2.begin(), l2.end(), 0.0);
      for (auto& v : l2) v /= total;
      S = std::move(S2);
      lambda = std::move(l2);
    }
  }
  return current();
}

}  // namespace

std::vector<double> nearest_point(const Polytope& K, const std::vector<double>& x) {
  if (K.vertices.empty()) throw ValidationError("nearest point in an empty polytope");
  const std::size_t d = K.dimension;
  if (x.size() != d) throw std::invalid_argument("point has the wrong dimension");
  std::vector<double> s = K.scales.empty() ? std::vector<double>(d, 1.0) : K.scales;
  if (s.size() != d) throw ValidationError("scale vector has the wrong length");
  for (double v : s)
    if (!(v > 0)) throw ValidationError("scales must be positive");
  Eigen::MatrixXd P(d, K.vertices.size());
  for (std::size_t j = 0; j < K.vertices.size(); ++j)
    for (std::size_t i = 0; i < d; ++i) P(i, j) = s[i] * (to_double(K.vertices[j][i]) - x[i]);
  Eigen::VectorXd y = min_norm_point(P);
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = y(i) / s[i] + x[i];
  return out;
}

NearestPoint nearest_point(const Polytope& K, const RVector& x) {
  if (K.vertices.empty()) throw ValidationError("nearest point in an empty polytope");
  NearestPoint np;
  std::vector<double> xd(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xd[i] = to_double(x[i]);
  if (contains(K, x)) {
    np.exact = x;
    np.point = xd;
    return np;
  }
  np.point = nearest_point(K, xd);
  return np;
}

// ---------------------------------------------------------------------------
// Elliott invariant

ElliottInvariant elliott_invariant(const FDAlgebra& A) {
  ElliottInvariant E;
  E.k0 = ordered_k0(A);
  E.k1 = k1_finite_dimensional(A);
  E.traces = trace_simplex(A);
  for (const auto& v : E.traces.vertices) E.pairing.push_back(pairing(A, v));
  return E;
}

namespace {

std::string join_rvec(const RVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s;
}

std::string join_rows(const std::vector<RVector>& rows) {
  std::string s;
  for (std::size_t i = 0; i < rows.size(); ++i) s += (i ? ";" : "") + join_rvec(rows[i]);
  return s;
}

}  // namespace

std::string emit_elliott(const ElliottInvariant& E) {
  std::string k1 = E.k1.is_trivial() ? "0" : "rank" + std::to_string(E.k1.rank);
  return "ell: k0=(" + emit_group(E.k0) + ") k1=" + k1 + " traces=" + join_rows(E.traces.vertices) +
         " pairing=" + join_rows(E.pairing);
}

ElliottIsoResult elliott_isomorphic(const ElliottInvariant& E1, const ElliottInvariant& E2) {
  ElliottIsoResult res;
  const auto& G = E1.k0;
  const auto& H = E2.k0;
  if (G.rank != H.rank) {
    res.verdict = IsoVerdict::NotIso;
    res.reason = "K0 ranks differ (" + std::to_string(G.rank) + " vs " + std::to_string(H.rank) + ")";
    return res;
  }
  if (E1.k1.rank != E2.k1.rank || E1.k1.torsion != E2.k1.torsion) {
    res.verdict = IsoVerdict::NotIso;
    res.reason = "K1 groups differ";
    return res;
  }
  if (E1.traces.vertices.size() != E2.traces.vertices.size() || !E1.traces.simplex || !E2.traces.simplex) {
    if (E1.traces.simplex && E2.traces.simplex) {
      res.verdict = IsoVerdict::NotIso;
      res.reason = "trace simplexes have different dimensions";
    } else {
      res.reason = "trace spaces are not simplexes";
    }
    return res;
  }
  if (!is_simplicial(G) || !is_simplicial(H)) {
    res.reason = "K0 cone is not simplicial";
    return res;
  }
  const std::size_t r = static_cast<std::size_t>(G.rank);
  const std::size_t t = E1.traces.vertices.size();

  // Coordinates of each group in its own generator basis: order isomorphisms
  // are exactly the basis permutations that carry unit to unit.
  RMatrix Bg(r, RVector(r)), Bh(r, RVector(r));
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i) {
      Bg[i][j] = G.cone[j][i];
      Bh[i][j] = H.cone[j][i];
    }
  RMatrix Bg_inv = detail::rational_inverse(Bg);

  std::vector<std::size_t> sigma(r);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    RMatrix Psig(r, RVector(r));
    for (std::size_t j = 0; j < r; ++j) Psig[sigma[j]][j] = 1;
    RMatrix W = detail::multiply(detail::multiply(Bh, Psig), Bg_inv);
    RVector u(G.unit.begin(), G.unit.end());
    bool unit_ok = true;
    for (std::size_t i = 0; i < r && unit_ok; ++i)
      if (dot(W[i], u) != H.unit[i]) unit_ok = false;
    if (!unit_ok) continue;
    // Square: r'(alpha(tau_j)) = r(tau_j) o W^{-1}, i.e. phi'_{pi(j)} W = phi_j.
    std::vector<std::size_t> pi(t);
    std::iota(pi.begin(), pi.end(), 0);
    do {
      bool ok = true;
      for (std::size_t j = 0; j < t && ok; ++j) {
        const auto& phi2 = E2.pairing[pi[j]];
        for (std::size_t c = 0; c < r && ok; ++c) {
          Rational s = 0;
          for (std::size_t i = 0; i < r; ++i) s += phi2[i] * W[i][c];
          if (s != E1.pairing[j][c]) ok = false;
        }
      }
      if (ok) {
        res.verdict = IsoVerdict::Iso;
        res.k0_witness.assign(r, std::vector<long>(r));
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t c = 0; c < r; ++c) res.k0_witness[i][c] = numerator(W[i][c]).convert_to<long>();
        res.trace_map = pi;
        return res;
      }
    } while (std::next_permutation(pi.begin(), pi.end()));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  res.verdict = IsoVerdict::NotIso;
  res.reason = "no order-unit isomorphism of K0 is compatible with the pairing";
  return res;
}

}  // namespace starinv
