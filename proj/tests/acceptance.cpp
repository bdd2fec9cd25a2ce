// Acceptance runner: one PASS/FAIL line per criterion, each under its time limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "checks.hpp"
#include "oracles.hpp"
#include "starinv/cuntz.hpp"
#include "starinv/formula.hpp"
#include "starinv/ktheory.hpp"
#include "starinv/states.hpp"

using namespace starinv;

namespace {

// Regression-locked sentence values (default EvalConfig, seed 0).
constexpr double kSigma3M2 = 0.29545998867254525;
constexpr double kSigma3M3 = 0.0;
constexpr double kLockTolerance = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome k_theory_exactness() {
  Outcome o;
  std::size_t count = 0;
  for (const auto& A : oracle::fd_family(3, 4)) {
    ++count;
    const auto G = ordered_k0(A);
    OrderedGroupWithUnit expected{static_cast<int>(A.num_blocks()), {}, {}};
    for (std::size_t i = 0; i < A.num_blocks(); ++i) {
      IntVector e(A.num_blocks(), 0);
      e[i] = 1;
      expected.cone.push_back(e);
      expected.unit.push_back(A.block(i));
    }
    if (!(G == expected)) o.fail("ordered_k0 differs from (Z^k, N^k, sizes) at " + emit_group(G));
    if (!(G == grothendieck_ordered(mv_semigroup(A)))) o.fail("ordered_k0 differs from grothendieck o mv_semigroup");
  }
  o.detail = o.pass ? std::to_string(count) + " algebras" : o.detail;
  return o;
}

Outcome grothendieck_oracle() {
  Outcome o;
  const auto pool = oracle::semigroup_pool(600, 2024);
  for (const auto& S : pool) {
    const auto G = grothendieck(S);
    const auto Q = oracle::difference_quotient(S);
    const std::size_t n = S.size;
    if (G.group.size != Q.count || !oracle::same_partition(Q.classes, G.class_of_pair)) {
      o.fail("class partition differs on a table of size " + std::to_string(n));
      continue;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l)
            if (G.group(G.class_of_pair[i * n + j], G.class_of_pair[k * n + l]) != G.class_of_pair[S(i, k) * n + S(j, l)])
              o.fail("group operation differs from the pair quotient");
    for (std::size_t s = 0; s < n; ++s)
      if (G.canonical[s] != G.class_of_pair[S(s, s) * n + s]) o.fail("canonical map differs");
  }
  if (o.pass) o.detail = std::to_string(pool.size()) + " tables";
  return o;
}

Outcome lemma_suite() {
  Outcome o;
  std::mt19937_64 rng(404);
  int tables = 0;
  for (; tables < 120; ++tables) {
    const auto D = CuPresentation::finite(oracle::random_cu_table(rng, 6));
    const auto report = validate_cu_presentation(D);
    if (!report.ok()) {
      o.fail("generated table fails validation: " + report.failure());
      continue;
    }
    const auto v = checks::cu_lemmas(D, 4, 24, rng);
    if (!v.empty()) o.fail(v.front());
  }
  for (std::size_t k : {1, 2}) {
    const auto v = checks::cu_lemmas(CuPresentation::nbar(k), 4, 40, rng);
    if (!v.empty()) o.fail(v.front());
  }
  if (o.pass) o.detail = std::to_string(tables) + " tables + N-bar^1, N-bar^2, zero violations";
  return o;
}

Outcome e_versus_isomorphism() {
  Outcome o;
  std::mt19937_64 rng(505);
  std::vector<FiniteTable> pool;
  for (int i = 0; i < 60; ++i) pool.push_back(oracle::random_cu_table(rng, 5));
  std::size_t pairs = 0, equivalent = 0;
  for (std::size_t a = 0; a < pool.size(); ++a)
    for (std::size_t b = a; b < pool.size(); ++b) {
      ++pairs;
      const auto v = cu_equivalent(CuPresentation::finite(pool[a]), CuPresentation::finite(pool[b])).verdict;
      if (v == CuVerdict::Unknown) o.fail("UNKNOWN verdict");
      const bool iso = oracle::ordered_monoid_isomorphic(pool[a], pool[b]);
      equivalent += iso;
      if ((v == CuVerdict::Equivalent) != iso) o.fail("verdict " + to_string(v) + " disagrees with brute force");
    }
  if (o.pass)
    o.detail = std::to_string(pool.size()) + " tables, " + std::to_string(pairs) + " pairs (" +
               std::to_string(equivalent) + " isomorphic)";
  return o;
}

Outcome radius_countable() {
  Outcome o;
  std::size_t fixtures = 0;
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(STARINV_FIXTURES))
    if (entry.path().extension() == ".cup") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    const auto D = parse_cup(slurp(p));
    if (!D.unit()) continue;
    ++fixtures;
    const auto base = radius_of_comparison(D, kDefaultMaxN);
    for (int depth : {4, 8}) {
      const auto w = radius_of_comparison(w_completion(D, depth), kDefaultMaxN);
      if (w.infinite != base.infinite || w.value != base.value)
        o.fail(p.filename().string() + ": depth " + std::to_string(depth) + " gives " + to_string(w) + " vs " +
               to_string(base));
    }
    if (p.filename() == "rc_perf.cup") {
      const auto star = oracle::radius_exhaustive(D.table(), 20, 8);
      const auto r20 = radius_of_comparison(D, 20);
      if (!star || r20.value != Rational(star->first, star->second) || r20.value != 2)
        o.fail("rc_perf.cup radius differs from the exhaustive oracle / locked value 2");
    }
  }
  for (const auto& A : oracle::fd_family(3, 4)) {
    const auto r = radius_of_comparison(cu_of_fd_algebra(A), 64);
    if (r.infinite || r.value != 0) o.fail("N-bar^k radius is " + to_string(r));
  }
  if (o.pass) o.detail = std::to_string(fixtures) + " fixtures at depths 4 and 8, 84 N-bar^k units";
  return o;
}

Outcome elliott_decision() {
  Outcome o;
  const auto family = oracle::fd_family(3, 4);
  std::vector<ElliottInvariant> invariants;
  for (const auto& A : family) {
    invariants.push_back(elliott_invariant(A));
    const auto& E = invariants.back();
    for (const auto& phi : E.pairing) {
      Rational at_unit = 0;
      for (std::size_t i = 0; i < phi.size(); ++i) at_unit += phi[i] * E.k0.unit[i];
      if (at_unit != 1) o.fail("pairing state misses the unit");
    }
  }
  for (std::size_t a = 0; a < family.size(); ++a)
    for (std::size_t b = 0; b < family.size(); ++b) {
      auto x = family[a].blocks(), y = family[b].blocks();
      std::sort(x.begin(), x.end());
      std::sort(y.begin(), y.end());
      const auto v = elliott_isomorphic(invariants[a], invariants[b]).verdict;
      if ((v == IsoVerdict::Iso) != (x == y) || v == IsoVerdict::Unknown) o.fail("verdict disagrees with block multisets");
    }
  if (o.pass) o.detail = std::to_string(family.size() * family.size()) + " pairs";
  return o;
}

Outcome logic_evaluator() {
  Outcome o;
  char buf[256];
  const auto idem = evaluate(parse_formula("sup{||x0||<=1} norm(x0*x0 - x0)"), FDAlgebra({1}));
  if (std::abs(idem.value - 2.0) > 0.01 || idem.certificate != Certificate::Lower)
    o.fail("idempotent defect on C is " + std::to_string(idem.value));

  const auto s2 = evaluate(sigma3(), FDAlgebra({2})), s3 = evaluate(sigma3(), FDAlgebra({3}));
  if (std::abs(s2.value - kSigma3M2) > kLockTolerance || std::abs(s3.value - kSigma3M3) > kLockTolerance) {
    std::snprintf(buf, sizeof buf, "sigma3 drifted from the locked values: M2 %.17g, M3 %.17g", s2.value, s3.value);
    o.fail(buf);
  }
  if (s2.value - s3.value < 0.15) o.fail("sigma3 gap below 0.15");

  std::mt19937_64 rng(77);
  const std::vector<Formula> fs = {parse_formula("norm(x0*x1 - x1*x0)"),
                                   parse_formula("max(norm(adj(x0)*x0 + x1), monus(norm(x0*x1*x0), 1/2))"),
                                   parse_formula("norm(x0 - 1) * norm(x1*x1) - norm(x0 + i*x1)")};
  const double tol = EvalConfig{}.tol;
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    FDAlgebra A(std::vector<std::vector<int>>{{1}, {2}, {3}, {1, 2}, {2, 2}}[trial % 5]);
    NumericElement x0 = NumericElement::from_exact(checks::random_exact(A, rng));
    NumericElement x1 = NumericElement::from_exact(checks::random_exact(A, rng));
    NumericElement u = checks::random_unitary(A, rng);
    const Formula& f = fs[static_cast<std::size_t>(trial) % fs.size()];
    const double a = evaluate(f, A, NumericAssignment{{0, x0}, {1, x1}}).value;
    const double b = evaluate(f, A, NumericAssignment{{0, u * x0 * adjoint(u)}, {1, u * x1 * adjoint(u)}}).value;
    worst = std::max(worst, std::abs(a - b));
  }
  if (worst > 2 * tol) o.fail("unitary invariance off by " + std::to_string(worst));

  EvalConfig seeded;
  seeded.seed = 7;
  const auto r1 = evaluate(sigma3(), FDAlgebra({2}), NumericAssignment{}, seeded), r2 = evaluate(sigma3(), FDAlgebra({2}), NumericAssignment{}, seeded);
  if (std::memcmp(&r1.value, &r2.value, sizeof(double)) != 0) o.fail("seeded runs differ");

  if (o.pass) {
    std::snprintf(buf, sizeof buf, "idem %.4f lower; sigma3 M2 %.4f, M3 %.4f; unitary drift %.1e", idem.value,
                  s2.value, s3.value, worst);
    o.detail = buf;
  }
  return o;
}

Outcome ranks() {
  Outcome o;
  const double eps = RankOptions{}.epsilon, tol = EvalConfig{}.tol;
  std::size_t count = 0;
  for (const auto& A : oracle::fd_family(3, 4)) {
    ++count;
    for (const auto& r : {stable_rank_leq(A, 1), real_rank_leq(A, 0)}) {
      if (r.verdict != RankVerdict::TrueExact) o.fail("verdict " + to_string(r.verdict));
      if (r.max_perturbation > eps + tol) o.fail("perturbation exceeds epsilon");
      if (!(r.min_gap > 0)) o.fail("perturbed element not invertible");
    }
  }
  if (o.pass) o.detail = std::to_string(count) + " algebras, both ranks";
  return o;
}

Outcome nearest_point_retraction() {
  Outcome o;
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> coord(-2, 2);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(trial) % 6, m = 1 + rng() % 7;
    Polytope K;
    K.dimension = d;
    std::vector<std::vector<double>> verts;
    for (std::size_t j = 0; j < m; ++j) {
      RVector v(d);
      std::vector<double> vd(d);
      for (std::size_t i = 0; i < d; ++i) {
        v[i] = Rational(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3));
        vd[i] = to_double(v[i]);
      }
      K.vertices.push_back(v);
      verts.push_back(vd);
    }
    if (trial % 2) K.scales = hilbert_cube_scales(d);
    std::vector<double> x(d), y(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = coord(rng), y[i] = coord(rng);
    const auto px = nearest_point(K, x), py = nearest_point(K, y);
    const double idem = oracle::weighted_distance(K.scales, nearest_point(K, px), px);
    const double expand =
        oracle::weighted_distance(K.scales, px, py) - oracle::weighted_distance(K.scales, x, y);
    const double face = oracle::weighted_distance(K.scales, px, oracle::nearest_point_by_faces(verts, K.scales, x));
    worst = std::max({worst, idem, expand, face});
    if (idem > 1e-7) o.fail("not idempotent");
    if (expand > 1e-7) o.fail("expands distances");
    if (face > 1e-7) o.fail("differs from the face-enumeration oracle");
  }
  if (o.pass) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "1000 pairs, worst deviation %.1e", worst);
    o.detail = buf;
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "K-theory exactness", 5, k_theory_exactness},
      {2, "Grothendieck oracle", 30, grothendieck_oracle},
      {3, "Cu lemma suite", 60, lemma_suite},
      {4, "E versus ordered-monoid isomorphism", 120, e_versus_isomorphism},
      {5, "radius under completion", 10, radius_countable},
      {6, "Elliott decision", 10, elliott_decision},
      {7, "logic evaluator", 60, logic_evaluator},
      {8, "stable and real rank", 30, ranks},
      {9, "nearest-point retraction", 30, nearest_point_retraction},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= c.limit_s) out.fail("time limit exceeded");
    failures += !out.pass;
    std::printf("criterion %d %s: %s (%s; %.2fs of %.0fs)\n", c.id, c.name, out.pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
