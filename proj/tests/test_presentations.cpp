#include <doctest.h>

#include <random>

#include "checks.hpp"
#include "starinv/errors.hpp"
#include "starinv/presentations.hpp"
#include "starinv/term.hpp"

using namespace starinv;

namespace {

QMatrix qmatrix(std::initializer_list<std::initializer_list<QComplex>> rows) {
  QMatrix m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (const auto& v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

BlockElement single(QMatrix m) {
  BlockElement e;
  e.blocks.push_back(std::move(m));
  return e;
}

}  // namespace

TEST_CASE("fda parsing and emission") {
  CHECK(parse_fd_algebra("blocks: 2 3").blocks() == std::vector<int>{2, 3});
  CHECK(parse_fd_algebra("blocks: 1").blocks() == std::vector<int>{1});
  CHECK(emit_fd_algebra(parse_fd_algebra("  blocks:   2\t 3   # two blocks\n")) == "blocks: 2 3\n");
  for (const char* src : {"blocks: 4", "blocks: 1 1 1", "blocks: 2 3"}) {
    const std::string normal = emit_fd_algebra(parse_fd_algebra(src));
    CHECK(emit_fd_algebra(parse_fd_algebra(normal)) == normal);
  }
  CHECK_THROWS_AS(parse_fd_algebra("blocks: 0 2"), ValidationError);
  CHECK_THROWS_AS(parse_fd_algebra("blocks:"), ParseError);
  try {
    parse_fd_algebra("# header\nblocks: 2 x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 11);
  }
  CHECK(FDAlgebra({2, 3}).dimension() == 13);
}

TEST_CASE("bratteli diagrams") {
  BratteliDiagram car = parse_bratteli("levels: (1)(2)(4)\nmaps: [2];[2]\n");
  CHECK(car.unital);
  CHECK(car.maps.size() == 2);
  CHECK_THROWS_AS(parse_bratteli("levels: (1)(3)\nmaps: [2]\n"), ValidationError);
  BratteliDiagram fib = parse_bratteli("levels: (1 1)(2 1)\nmaps: [1 1\n1 0]\n");
  CHECK(fib.maps[0] == IntMatrix{{1, 1}, {1, 0}});
  CHECK(parse_bratteli(emit_bratteli(fib)) == fib);
  BratteliDiagram loose = parse_bratteli("levels: (1)(3)\nmaps: [2]\nunital: no\n");
  CHECK_FALSE(loose.unital);
  CHECK(parse_bratteli(emit_bratteli(loose)) == loose);
}

TEST_CASE("operator norm examples") {
  FDAlgebra A({2, 3});
  CHECK(operator_norm(BlockElement::unit(A)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(operator_norm(single(qmatrix({{2, 0}, {0, -3}}))) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(operator_norm(single(qmatrix({{1, 1}, {1, 1}}))) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(operator_norm(BlockElement::zero(A)) == 0.0);
}

TEST_CASE("operator norm: C*-identity and submultiplicativity") {
  std::mt19937_64 rng(11);
  const double tol = 1e-9;
  for (const auto& blocks : std::vector<std::vector<int>>{{1}, {2}, {3}, {2, 3}, {1, 1, 4}}) {
    FDAlgebra A(blocks);
    for (int trial = 0; trial < 10; ++trial) {
      BlockElement a = checks::random_exact(A, rng), b = checks::random_exact(A, rng);
      const double na = operator_norm(a, tol), nb = operator_norm(b, tol);
      CHECK(operator_norm(adjoint(a) * a, tol) == doctest::Approx(na * na).epsilon(2 * tol));
      CHECK(operator_norm(a * b, tol) <= na * nb + 2 * tol * (1 + na * nb));
      CHECK(operator_norm(a + b, tol) <= na + nb + 2 * tol);
    }
  }
}

TEST_CASE("term evaluation examples") {
  FDAlgebra M2({2});
  const Term x0 = Term::variable(0), x1 = Term::variable(1);
  ExactAssignment env{{0, BlockElement::unit(M2)}};
  CHECK(eval_term(x0 * x0 - x0, M2, env) == BlockElement::zero(M2));

  env[0] = single(qmatrix({{0, 1}, {0, 0}}));
  CHECK(eval_term(adjoint(x0), M2, env) == single(qmatrix({{0, 0}, {1, 0}})));

  env[0] = single(qmatrix({{1, 2}, {3, 4}}));
  env[1] = single(qmatrix({{0, QComplex(0, 1)}, {Rational(1, 3), 1}}));
  const QComplex half(Rational(1, 2));
  CHECK(eval_term(half * x0 + half * x1, M2, env) ==
        single(qmatrix({{half, QComplex(1, Rational(1, 2))}, {Rational(5, 3), Rational(5, 2)}})));
  CHECK_THROWS_AS(eval_term(Term::variable(7), M2, env), SemanticError);
}

TEST_CASE("term evaluation is a *-homomorphism") {
  std::mt19937_64 rng(5);
  FDAlgebra A({1, 2});
  std::vector<Term> pool = {Term::variable(0), Term::variable(1), Term::unit(QComplex(2, -1))};
  for (int i = 0; i < 6; ++i) {
    const Term& a = pool[rng() % pool.size()];
    const Term& b = pool[rng() % pool.size()];
    switch (rng() % 4) {
      case 0: pool.push_back(a + b); break;
      case 1: pool.push_back(a * b); break;
      case 2: pool.push_back(adjoint(a)); break;
      default: pool.push_back(QComplex(Rational(1, 2), 1) * a); break;
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    ExactAssignment env{{0, checks::random_exact(A, rng)}, {1, checks::random_exact(A, rng)}};
    const Term& s = pool[rng() % pool.size()];
    const Term& t = pool[rng() % pool.size()];
    CHECK(eval_term(s + t, A, env) == eval_term(s, A, env) + eval_term(t, A, env));
    CHECK(eval_term(s * t, A, env) == eval_term(s, A, env) * eval_term(t, A, env));
    CHECK(eval_term(adjoint(s), A, env) == adjoint(eval_term(s, A, env)));
  }
}

TEST_CASE("exact linear algebra helpers") {
  QMatrix m = qmatrix({{1, 2}, {3, 4}});
  CHECK(m * inverse(m) == QMatrix::identity(2));
  CHECK(rank(qmatrix({{1, 2}, {2, 4}})) == 1);
  CHECK(rank(QMatrix::identity(3)) == 3);
}
