#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "sampling.hpp"
#include "starinv/formula.hpp"

namespace starinv {

namespace {

using detail::mix_seed;

struct Perturbed {
  NumericElement element;
  double gap = 0;  // smallest singular value, or smallest |eigenvalue|
};

// Raise every singular value below eps/2 to eps/2: the result is invertible
// and within eps/2 of a.
Perturbed lift_singular_values(const NumericElement& a, double eps) {
  Perturbed out{a, std::numeric_limits<double>::infinity()};
  for (std::size_t b = 0; b < a.blocks.size(); ++b) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.blocks[b], Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::max(s(i), eps / 2);
    out.element.blocks[b] = svd.matrixU() * s.cast<std::complex<double>>().asDiagonal() * svd.matrixV().adjoint();
    out.gap = std::min(out.gap, s.minCoeff());
  }
  return out;
}

// Push eigenvalues of a self-adjoint a away from 0 to +-eps/2 (0 goes up).
Perturbed lift_eigenvalues(const NumericElement& a, double eps) {
  Perturbed out{a, std::numeric_limits<double>::infinity()};
  for (std::size_t b = 0; b < a.blocks.size(); ++b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.blocks[b]);
    Eigen::VectorXd l = es.eigenvalues();
    for (Eigen::Index i = 0; i < l.size(); ++i)
      if (std::abs(l(i)) < eps / 2) l(i) = l(i) < 0 ? -eps / 2 : eps / 2;
    out.element.blocks[b] = es.eigenvectors() * l.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
    out.gap = std::min(out.gap, l.cwiseAbs().minCoeff());
  }
  return out;
}

// Kill the smallest singular value of each block, so samples include
// non-invertible elements.
NumericElement make_singular(const NumericElement& a) {
  NumericElement out = a;
  for (auto& m : out.blocks) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd s = svd.singularValues();
    s(s.size() - 1) = 0;
    m = svd.matrixU() * s.cast<std::complex<double>>().asDiagonal() * svd.matrixV().adjoint();
  }
  return out;
}

NumericElement make_singular_self_adjoint(const NumericElement& a) {
  NumericElement out = a;
  for (auto& m : out.blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    Eigen::VectorXd l = es.eigenvalues();
    Eigen::Index k;
    l.cwiseAbs().minCoeff(&k);
    l(k) = 0;
    m = es.eigenvectors() * l.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
  }
  return out;
}

// ||b a' - 1|| for b the numeric inverse; below 1 certifies left invertibility.
double inverse_residual(const NumericElement& a) {
  double worst = 0;
  for (const auto& m : a.blocks) {
    Eigen::MatrixXcd inv = m.inverse();
    worst = std::max(worst, operator_norm(Eigen::MatrixXcd(inv * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols()))));
  }
  return worst;
}

// inf over b_0..b_{n-1} in the K-ball of ||sum b_i x_i - 1||, x_i free.
Formula left_invertibility(int n, long K) {
  Term sum = Term::variable(n) * Term::variable(0);
  for (int i = 1; i < n; ++i) sum = sum + Term::variable(n + i) * Term::variable(i);
  Formula body = Formula::norm(sum - Term::unit());
  for (int i = n - 1; i >= 0; --i) body = Formula::inf(n + i, K, body);
  return body;
}

RankResult run(const FDAlgebra& A, int tuple, bool self_adjoint, const EvalConfig& cfg, const RankOptions& opts) {
  if (!(opts.epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  if (opts.samples < 1) throw std::invalid_argument("need at least one sample");
  RankResult res;
  res.min_gap = std::numeric_limits<double>::infinity();
  bool all_ok = true;
  double worst_estimate = 0;
  const long K = static_cast<long>(std::ceil(4.0 / opts.epsilon));
  const Formula lg = left_invertibility(tuple, K);
  for (int s = 0; s < opts.samples; ++s) {
    std::mt19937_64 rng(mix_seed({cfg.seed, 0x72616e6bULL, static_cast<std::uint64_t>(s)}));
    std::vector<NumericElement> a;
    for (int i = 0; i < tuple; ++i)
      a.push_back(self_adjoint ? detail::random_self_adjoint(A, 1.0, rng) : detail::random_element(A, 1.0, rng));
    if (s % 2 == 0) a[0] = self_adjoint ? make_singular_self_adjoint(a[0]) : make_singular(a[0]);
    ++res.samples;
    if (!opts.numeric) {
      Perturbed p = self_adjoint ? lift_eigenvalues(a[0], opts.epsilon) : lift_singular_values(a[0], opts.epsilon);
      const double dist = operator_norm(a[0] - p.element);
      res.max_perturbation = std::max(res.max_perturbation, dist);
      res.min_gap = std::min(res.min_gap, p.gap);
      bool ok = dist <= opts.epsilon + cfg.tol && p.gap > 0 && inverse_residual(p.element) < 1;
      if (self_adjoint) ok = ok && operator_norm(p.element - adjoint(p.element)) <= cfg.tol;
      all_ok = all_ok && ok;
      continue;
    }
    // Numeric path: a generic perturbation, then the sentence value.
    NumericElement d = self_adjoint ? detail::random_self_adjoint(A, opts.epsilon, rng)
                                    : detail::random_element(A, opts.epsilon, rng);
    NumericAssignment env;
    for (int i = 0; i < tuple; ++i) env[i] = a[static_cast<std::size_t>(i)];
    env[0] = a[0] + d;
    res.max_perturbation = std::max(res.max_perturbation, operator_norm(d));
    EvalConfig inner = cfg;
    inner.seed = mix_seed({cfg.seed, static_cast<std::uint64_t>(s)});
    worst_estimate = std::max(worst_estimate, evaluate(lg, A, env, inner).value);
  }
  if (!opts.numeric) {
    res.verdict = all_ok ? RankVerdict::TrueExact : RankVerdict::NotDetected;
    return res;
  }
  res.min_gap = 0;
  res.estimate = worst_estimate;
  res.verdict = worst_estimate <= 1 - cfg.margin ? RankVerdict::TrueNumeric : RankVerdict::NotDetected;
  return res;
}

}  // namespace

RankResult stable_rank_leq(const FDAlgebra& A, int n, const EvalConfig& cfg, const RankOptions& opts) {
  if (n < 1) throw std::invalid_argument("stable rank is at least 1");
  return run(A, n, false, cfg, opts);
}

RankResult real_rank_leq(const FDAlgebra& A, int n, const EvalConfig& cfg, const RankOptions& opts) {
  if (n < 0) throw std::invalid_argument("real rank is at least 0");
  return run(A, n + 1, true, cfg, opts);
}

}  // namespace starinv
