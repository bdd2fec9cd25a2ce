#include <doctest.h>

#include <cstring>
#include <random>

#include "checks.hpp"
#include "oracles.hpp"
#include "starinv/errors.hpp"
#include "starinv/formula.hpp"

using namespace starinv;

namespace {

EvalConfig quick(std::uint64_t seed = 0) {
  EvalConfig cfg;
  cfg.seed = seed;
  cfg.restarts = 8;
  cfg.steps = 40;
  return cfg;
}

NumericElement conjugate(const NumericElement& u, const NumericElement& x) { return u * x * adjoint(u); }

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("formula parsing") {
  const Formula f = parse_formula("sup{||x0||<=1} norm(x0*x0 - x0)");
  CHECK(f.kind() == FormulaKind::Sup);
  CHECK(f.bound_var() == 0);
  CHECK(f.bound() == 1);
  CHECK(f.lhs().kind() == FormulaKind::Norm);
  CHECK(f.is_sentence());

  const Formula g = parse_formula("norm(x0) - 2*norm(x1)");
  CHECK(g.free_variables() == std::set<int>{0, 1});
  CHECK_FALSE(g.is_sentence());
  CHECK(g.in_polynomial_fragment());
  CHECK(g.is_quantifier_free());

  CHECK_THROWS_AS(parse_formula("sup{||x0||<=1} ("), ParseError);
  CHECK_THROWS_AS(parse_formula("x0 + 1"), ParseError);
  CHECK_THROWS_AS(parse_formula("sup{||x0|| <= 0} norm(x0)"), ParseError);
  try {
    parse_formula("norm(x0) + 1e5");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("non-rational") != std::string::npos);
  }
  CHECK(to_string(parse_formula("norm(x0*)")) == to_string(parse_formula("norm(adj(x0))")));
  CHECK(to_string(parse_formula("norm(x0* x1)")) == to_string(parse_formula("norm(x0*x1)")));
  CHECK(to_string(parse_formula("norm(x0* * x1)")) == to_string(parse_formula("norm(adj(x0)*x1)")));
  CHECK(to_string(parse_formula("norm(x0*x1)")) != to_string(parse_formula("norm(adj(x0)*x1)")));
  CHECK(to_string(parse_formula("norm((1/2 + 3i)*x0 - i*x1)")) ==
        to_string(parse_formula("norm((1/2+3i) * x0 - (i) * x1)")));

  FormulaParseOptions strict;
  strict.polynomial_only = true;
  CHECK_THROWS_AS(parse_formula("max(norm(x0), 1)", strict), ParseError);
  CHECK_NOTHROW(parse_formula("norm(x0)*norm(x0) - 1/3", strict));
}

TEST_CASE("formula printing round-trips") {
  for (const char* src : {"sup{||x0||<=1} norm(x0*x0 - x0)", "norm(x0) - 2*norm(x1)",
                          "inf{||x1||<=3} max(norm(x1*x0 - 1), monus(norm(x1), 2), min(norm(x0), -1/2))",
                          "-(norm(x0) * norm(adj(x0) + 2i*x0))"}) {
    const std::string once = to_string(parse_formula(src));
    CHECK(to_string(parse_formula(once)) == once);
  }
  CHECK(to_string(sigma3()) == to_string(parse_formula(to_string(sigma3()))));
}

TEST_CASE("formula files") {
  auto fs = parse_formula_file("# comment\nidem: sup{||x0|| <= 1} norm(x0*x0 - x0)\nnorm(1); max(\n norm(1),\n 2)\n");
  REQUIRE(fs.size() == 3);
  CHECK(fs[0].id == "idem");
  CHECK(fs[1].id == "s1");
  CHECK(fs[2].id == "s2");
  CHECK_THROWS_AS(parse_formula_file("a: norm(1)\na: norm(1)\n"), ParseError);
}

TEST_CASE("evaluation examples") {
  auto one = evaluate(parse_formula("norm(1)"), FDAlgebra({2}));
  CHECK(one.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(one.certificate == Certificate::Exact);

  auto idem = evaluate(parse_formula("sup{||x0||<=1} norm(x0*x0 - x0)"), FDAlgebra({1}));
  CHECK(idem.certificate == Certificate::Lower);
  CHECK(std::abs(idem.value - 2.0) <= 0.01);
  CHECK(idem.value <= 2.0 + 1e-6);
  const double grid = oracle::disc_grid_idempotent_defect(200, 720);
  CHECK(std::abs(grid - 2.0) <= 1e-9);
  CHECK(std::abs(idem.value - grid) <= 0.01);

  for (const auto& A : {FDAlgebra({1}), FDAlgebra({2, 3})}) {
    auto zero = evaluate(parse_formula("inf{||x0||<=1} norm(x0 - x0)"), A);
    CHECK(zero.value == 0.0);
    CHECK(zero.certificate == Certificate::Exact);
  }
  auto mixed = evaluate(parse_formula("sup{||x0||<=1} norm(x0) - inf{||x1||<=1} norm(x1 - 1)"), FDAlgebra({2}), NumericAssignment{},
                        quick());
  CHECK(mixed.certificate == Certificate::Lower);
  CHECK(to_string(Certificate::Estimate) == "estimate");
  CHECK_THROWS_AS(evaluate(parse_formula("norm(x0)"), FDAlgebra({2})), SemanticError);
  EvalConfig bad;
  bad.tol = 0;
  CHECK_THROWS_AS(evaluate(parse_formula("norm(1)"), FDAlgebra({2}), NumericAssignment{}, bad), std::invalid_argument);
}

TEST_CASE("exact assignments") {
  FDAlgebra M2({2});
  BlockElement nil = BlockElement::zero(M2);
  nil.blocks[0](0, 1) = 1;
  auto r = evaluate(parse_formula("norm(x0*x0) + norm(x0)"), M2, ExactAssignment{{0, nil}});
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.certificate == Certificate::Exact);
}

TEST_CASE("t_K rescaling") {
  std::mt19937_64 rng(3);
  FDAlgebra A({1, 3});
  for (int trial = 0; trial < 40; ++trial) {
    NumericElement y = NumericElement::from_exact(checks::random_exact(A, rng, 5));
    const long K = 1 + trial % 3;
    NumericElement z = rescale_into_ball(y, K);
    CHECK(operator_norm(z) <= K + 1e-6);
    if (operator_norm(y) <= K) CHECK(operator_norm(z - y) == 0.0);
  }
}

TEST_CASE("sup is at least the value at any supplied witness") {
  std::mt19937_64 rng(12);
  FDAlgebra A({2});
  const Formula body = parse_formula("norm(x0*x0*x0 - x0*adj(x0))");
  const Formula sup = Formula::sup(0, 1, body);
  for (int trial = 0; trial < 10; ++trial) {
    NumericElement w = rescale_into_ball(NumericElement::from_exact(checks::random_exact(A, rng)), 1);
    const double at_w = evaluate(body, A, NumericAssignment{{0, w}}).value;
    EvalConfig cfg = quick(static_cast<std::uint64_t>(trial));
    cfg.hints[0] = {w};
    CHECK(evaluate(sup, A, NumericAssignment{}, cfg).value >= at_w);
  }
}

TEST_CASE("unitary invariance of open formulas") {
  std::mt19937_64 rng(8);
  const std::vector<Formula> fs = {parse_formula("norm(x0*x1 - x1*x0)"),
                                   parse_formula("max(norm(adj(x0)*x0 + x1), monus(norm(x0*x1*x0), 1/2))"),
                                   parse_formula("norm(x0 - 1) * norm(x1*x1) - norm(x0 + i*x1)")};
  const double tol = EvalConfig{}.tol;
  for (int trial = 0; trial < 30; ++trial) {
    FDAlgebra A(trial % 2 ? std::vector<int>{3} : std::vector<int>{1, 2});
    NumericElement x0 = NumericElement::from_exact(checks::random_exact(A, rng));
    NumericElement x1 = NumericElement::from_exact(checks::random_exact(A, rng));
    NumericElement u = checks::random_unitary(A, rng);
    for (const auto& f : fs) {
      const double a = evaluate(f, A, NumericAssignment{{0, x0}, {1, x1}}).value;
      const double b = evaluate(f, A, NumericAssignment{{0, conjugate(u, x0)}, {1, conjugate(u, x1)}}).value;
      CHECK(std::abs(a - b) <= 2 * tol);
    }
  }
}

TEST_CASE("sentence values do not depend on block order") {
  const std::vector<Formula> fs = {parse_formula("sup{||x0||<=1} norm(x0*x0 - x0)"),
                                   parse_formula("inf{||x0||<=1} max(norm(x0*x0 - x0), monus(1, norm(x0)))"),
                                   parse_formula("norm(1)")};
  const double tol = EvalConfig{}.tol;
  for (const auto& f : fs) {
    const double a = evaluate(f, FDAlgebra({1, 2}), NumericAssignment{}, quick()).value;
    const double b = evaluate(f, FDAlgebra({2, 1}), NumericAssignment{}, quick()).value;
    CHECK(std::abs(a - b) <= 2 * tol);
  }
}

TEST_CASE("seeded evaluation is reproducible") {
  const Formula f = parse_formula("inf{||x0||<=1} inf{||x1||<=1} max(norm(x0*x1), monus(1, norm(x0)), monus(1, norm(x1)))");
  for (std::uint64_t seed : {0u, 7u}) {
    auto a = evaluate(f, FDAlgebra({2}), NumericAssignment{}, quick(seed));
    auto b = evaluate(f, FDAlgebra({2}), NumericAssignment{}, quick(seed));
    CHECK(bitwise_equal(a.value, b.value));
    REQUIRE(a.witness.size() == b.witness.size());
    for (const auto& [v, w] : a.witness) CHECK((w.blocks[0] - b.witness.at(v).blocks[0]).norm() == 0.0);
  }
}

TEST_CASE("theory fingerprints") {
  CHECK(theory_fingerprint(FDAlgebra({2}), {}).empty());
  std::vector<NamedFormula> s = {{"sigma3", sigma3()}};
  const auto m3 = theory_fingerprint(FDAlgebra({3}), s);
  const auto m2 = theory_fingerprint(FDAlgebra({2}), s);
  REQUIRE(m3.size() == 1);
  // The infimum of a nonnegative quantity reaching 0 is exact.
  CHECK(m3[0].certificate == Certificate::Exact);
  CHECK(std::abs(m3[0].value) <= 0.02);
  CHECK(m2[0].value >= 0.2);
  // Regression lock for the default configuration.
  CHECK(m2[0].value == doctest::Approx(0.29545998867254525).epsilon(1e-9));
  CHECK(m3[0].value == 0.0);
  CHECK(m2[0].value - m3[0].value >= 0.15);
  // Grid floor on M_2: the best configuration on a 0.05 grid stays above 0.2.
  const double grid = oracle::sigma3_m2_grid(0.05);
  CHECK(grid >= 0.2);
  CHECK(grid <= 0.3);
  CHECK(theory_fingerprint(FDAlgebra({2}), s) == m2);
  CHECK_THROWS_AS(theory_fingerprint(FDAlgebra({2}), {{"open", parse_formula("norm(x0)")}}), SemanticError);
}

TEST_CASE("rank tests") {
  for (const auto& A : {FDAlgebra({5}), FDAlgebra({2, 3}), FDAlgebra({1})}) {
    auto sr = stable_rank_leq(A, 1);
    CHECK(sr.verdict == RankVerdict::TrueExact);
    CHECK(sr.max_perturbation <= RankOptions{}.epsilon + 1e-6);
    CHECK(sr.min_gap > 0);
    auto rr = real_rank_leq(A, 0);
    CHECK(rr.verdict == RankVerdict::TrueExact);
    CHECK(rr.max_perturbation <= RankOptions{}.epsilon + 1e-6);
  }
  CHECK(real_rank_leq(FDAlgebra({3}), 0).verdict == RankVerdict::TrueExact);
  CHECK_THROWS_AS(stable_rank_leq(FDAlgebra({2}), 0), std::invalid_argument);
  CHECK_THROWS_AS(real_rank_leq(FDAlgebra({2}), -1), std::invalid_argument);
  CHECK(to_string(RankVerdict::TrueExact) == "TRUE(exact)");

  RankOptions numeric;
  numeric.numeric = true;
  numeric.samples = 2;
  auto nr = stable_rank_leq(FDAlgebra({1}), 1, quick(), numeric);
  CHECK(nr.verdict != RankVerdict::TrueExact);
  CHECK(nr.samples == 2);
}
