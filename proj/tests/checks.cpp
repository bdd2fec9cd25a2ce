#include "checks.hpp"

#include <Eigen/QR>

namespace checks {

using namespace starinv;

namespace {

// Supremum of a sequence, computed from its shape alone.
CuElement sup_of(const CuPresentation& D, const CuSeq& s) {
  CuElement out = s.last();
  if (!D.is_finite() && s.tail == TailRule::Ramp)
    for (std::size_t i = 0; i < out.size(); ++i)
      if (s.step[i] > 0) out[i] = kInf;
  return out;
}

bool sup_le(const CuPresentation& D, const CuElement& x, const CuElement& y) {
  if (D.is_finite()) return D.table().le(x[0], y[0]);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (y[i] != kInf && (x[i] == kInf || x[i] > y[i])) return false;
  return true;
}

bool sup_ll(const CuPresentation& D, const CuElement& x, const CuElement& y) {
  if (D.is_finite()) return D.table().way_below(x[0], y[0]);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] == kInf) return false;
  return sup_le(D, x, y);
}

CuSeq random_ramp(std::size_t k, std::mt19937_64& rng) {
  CuSeq s;
  CuElement start(k);
  std::vector<long> step(k);
  bool moving = false;
  for (std::size_t i = 0; i < k; ++i) {
    start[i] = std::uniform_int_distribution<long>(0, 2)(rng);
    step[i] = std::uniform_int_distribution<long>(0, 3)(rng);
    moving = moving || step[i] > 0;
  }
  s.prefix = {start};
  if (moving) {
    s.tail = TailRule::Ramp;
    s.step = step;
  }
  return s;
}

}  // namespace

CuSeq random_chain(const FiniteTable& t, std::size_t max_len, std::mt19937_64& rng) {
  CuSeq s;
  std::size_t cur = std::uniform_int_distribution<std::size_t>(0, t.n - 1)(rng);
  s.prefix.push_back({static_cast<long>(cur)});
  const std::size_t len = std::uniform_int_distribution<std::size_t>(1, max_len)(rng);
  while (s.prefix.size() < len) {
    std::vector<std::size_t> up;
    for (std::size_t b = 0; b < t.n; ++b)
      if (t.way_below(cur, b)) up.push_back(b);
    cur = up[std::uniform_int_distribution<std::size_t>(0, up.size() - 1)(rng)];
    s.prefix.push_back({static_cast<long>(cur)});
  }
  return s;
}

Violations cu_lemmas(const CuPresentation& D, int depth, int samples, std::mt19937_64& rng) {
  Violations out;
  const WCompletion W = w_completion(D, depth);
  const std::vector<CuElement> elems = D.enumerate(depth / 2);
  auto name = [&](const CuElement& a) { return D.element_to_string(a); };
  auto cls = [&](const CuSeq& s) {
    const std::size_t c = W.class_of(s);
    if (c == WCompletion::npos) out.push_back("no class for " + to_string(D, s));
    return c;
  };

  std::vector<std::size_t> eta_class;
  for (const auto& a : elems) eta_class.push_back(cls(eta(D, a)));
  if (!out.empty()) return out;

  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j) {
      const auto &a = elems[i], &b = elems[j];
      const std::size_t ca = eta_class[i], cb = eta_class[j];
      if (D.ll(a, b) != W.way_below(ca, cb)) out.push_back("waylessembed fails at " + name(a) + ", " + name(b));
      if (D.leq(a, b) != W.le(ca, cb)) out.push_back("lessembed fails at " + name(a) + ", " + name(b));
      const CuElement sum = D.plus(a, b);
      const std::size_t cs = W.add(ca, cb);
      if (cs == WCompletion::npos || cs != cls(eta(D, sum)))
        out.push_back("embedD: [eta " + name(a) + "] + [eta " + name(b) + "] != [eta " + name(sum) + "]");
      for (std::size_t k = 0; k < elems.size(); ++k)
        if (cs == eta_class[k] && !(D.leq(sum, elems[k]) && D.leq(elems[k], sum)))
          out.push_back("embedD: class sum matches " + name(elems[k]) + " but " + name(sum) + " differs");
    }

  std::vector<CuSeq> seqs;
  for (const auto& a : elems) seqs.push_back(eta(D, a));
  for (int s = 0; s < samples; ++s)
    seqs.push_back(D.is_finite() ? random_chain(D.table(), 6, rng) : random_ramp(D.nbar_rank(), rng));
  std::vector<std::size_t> seq_class;
  for (const auto& s : seqs) {
    check_seq(D, s);
    seq_class.push_back(cls(s));
  }
  if (!out.empty()) return out;

  for (std::size_t i = 0; i < seqs.size(); ++i)
    for (std::size_t j = 0; j < seqs.size(); ++j) {
      const auto &s = seqs[i], &t = seqs[j];
      const CuElement xs = sup_of(D, s), xt = sup_of(D, t);
      const bool le = seq_le(D, s, t), ll = seq_ll(D, s, t);
      const std::string pair = to_string(D, s) + " vs " + to_string(D, t);
      if (le != W.le(seq_class[i], seq_class[j]) || le != sup_le(D, xs, xt)) out.push_back("less fails: " + pair);
      if (ll != W.way_below(seq_class[i], seq_class[j]) || ll != sup_ll(D, xs, xt))
        out.push_back("wayless fails: " + pair);
      if (seq_approx(D, s, t) != (seq_class[i] == seq_class[j])) out.push_back("approx/class mismatch: " + pair);
    }
  return out;
}

BlockElement random_exact(const FDAlgebra& A, std::mt19937_64& rng, int spread) {
  std::uniform_int_distribution<int> num(-spread, spread), den(1, 3);
  BlockElement e = BlockElement::zero(A);
  for (auto& m : e.blocks)
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) {
        const int a = num(rng), b = den(rng), x = num(rng), y = den(rng);
        m(r, c) = QComplex(Rational(a, b), Rational(x, y));
      }
  return e;
}

NumericElement random_unitary(const FDAlgebra& A, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  NumericElement u = NumericElement::zero(A);
  for (auto& m : u.blocks) {
    Eigen::MatrixXcd z(m.rows(), m.cols());
    for (Eigen::Index r = 0; r < z.rows(); ++r)
      for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = {g(rng), g(rng)};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    m = qr.householderQ();
  }
  return u;
}

}  // namespace checks
