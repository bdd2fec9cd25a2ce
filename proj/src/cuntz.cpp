#include "starinv/cuntz.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace starinv {

namespace {

long nbar_add(long a, long b) { return (a == kInf || b == kInf) ? kInf : a + b; }

bool all_finite(const CuElement& a) {
  return std::none_of(a.begin(), a.end(), [](long v) { return v == kInf; });
}

std::string coord_text(long v) { return v == kInf ? "inf" : std::to_string(v); }

}  // namespace

std::optional<std::size_t> FiniteTable::identity() const {
  for (std::size_t z = 0; z < n; ++z) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = add(z, a) == a && add(a, z) == a;
    if (ok) return z;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Presentations

CuPresentation CuPresentation::finite(FiniteTable t) {
  if (t.n == 0) throw ValidationError("a finite table needs at least one element");
  if (t.plus.size() != t.n * t.n || t.leq.size() != t.n * t.n || t.ll.size() != t.n * t.n)
    throw ValidationError("table sizes do not match the element count");
  for (std::size_t v : t.plus)
    if (v >= t.n) throw ValidationError("plus table entry " + std::to_string(v) + " out of range");
  if (t.unit && *t.unit >= t.n) throw ValidationError("unit index out of range");
  CuPresentation D;
  D.finite_ = true;
  if (t.unit) D.unit_ = CuElement{static_cast<long>(*t.unit)};
  D.table_ = std::move(t);
  return D;
}

CuPresentation CuPresentation::nbar(std::size_t k, std::optional<CuElement> unit) {
  if (k == 0) throw ValidationError("nbar exponent must be positive");
  if (unit) {
    if (unit->size() != k) throw ValidationError("unit has " + std::to_string(unit->size()) +
                                                 " coordinates, expected " + std::to_string(k));
    for (long v : *unit)
      if (v < 0) throw ValidationError("unit coordinates must be nonnegative");
  }
  CuPresentation D;
  D.finite_ = false;
  D.k_ = k;
  D.unit_ = std::move(unit);
  return D;
}

CuElement CuPresentation::zero() const {
  if (!finite_) return CuElement(k_, 0);
  auto z = table_.identity();
  if (!z) throw SemanticError("finite table has no additive identity");
  return {static_cast<long>(*z)};
}

bool CuPresentation::contains(const CuElement& a) const {
  if (finite_) return a.size() == 1 && a[0] >= 0 && static_cast<std::size_t>(a[0]) < table_.n;
  if (a.size() != k_) return false;
  return std::all_of(a.begin(), a.end(), [](long v) { return v >= 0; });
}

CuElement CuPresentation::plus(const CuElement& a, const CuElement& b) const {
  if (finite_)
    return {static_cast<long>(table_.add(static_cast<std::size_t>(a[0]), static_cast<std::size_t>(b[0])))};
  CuElement c(k_);
  for (std::size_t i = 0; i < k_; ++i) c[i] = nbar_add(a[i], b[i]);
  return c;
}

bool CuPresentation::leq(const CuElement& a, const CuElement& b) const {
  if (finite_) return table_.le(static_cast<std::size_t>(a[0]), static_cast<std::size_t>(b[0]));
  for (std::size_t i = 0; i < k_; ++i)
    if (a[i] > b[i]) return false;
  return true;
}

bool CuPresentation::ll(const CuElement& a, const CuElement& b) const {
  if (finite_) return table_.way_below(static_cast<std::size_t>(a[0]), static_cast<std::size_t>(b[0]));
  return all_finite(a) && leq(a, b);
}

CuElement CuPresentation::multiple(const CuElement& a, long k) const {
  if (k < 0) throw std::invalid_argument("negative multiple");
  CuElement acc = zero();
  CuElement base = a;
  // Binary powering keeps N-bar multiples cheap; finite tables are associative.
  while (k > 0) {
    if (k & 1) acc = plus(acc, base);
    k >>= 1;
    if (k) base = plus(base, base);
  }
  return acc;
}

std::vector<CuElement> CuPresentation::enumerate(long limit) const {
  std::vector<CuElement> out;
  if (finite_) {
    for (std::size_t i = 0; i < table_.n; ++i) out.push_back({static_cast<long>(i)});
    return out;
  }
  std::vector<long> values;
  for (long v = 0; v <= limit; ++v) values.push_back(v);
  values.push_back(kInf);
  std::vector<std::size_t> idx(k_, 0);
  for (;;) {
    CuElement e(k_);
    for (std::size_t i = 0; i < k_; ++i) e[i] = values[idx[i]];
    out.push_back(std::move(e));
    std::size_t i = k_;
    while (i > 0 && idx[i - 1] + 1 == values.size()) idx[--i] = 0;
    if (i == 0) break;
    ++idx[i - 1];
  }
  auto level = [&](const CuElement& e) {
    long l = 0;
    for (long v : e) l = std::max(l, v == kInf ? limit + 1 : v);
    return l;
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const CuElement& a, const CuElement& b) { return level(a) < level(b); });
  return out;
}

std::string CuPresentation::element_to_string(const CuElement& a) const {
  if (finite_) return std::to_string(a[0]);
  if (k_ == 1) return coord_text(a[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + coord_text(a[i]);
  return s + ")";
}

bool operator==(const CuPresentation& a, const CuPresentation& b) {
  if (a.finite_ != b.finite_ || a.unit_ != b.unit_) return false;
  if (!a.finite_) return a.k_ == b.k_;
  return a.table_.n == b.table_.n && a.table_.plus == b.table_.plus && a.table_.leq == b.table_.leq &&
         a.table_.ll == b.table_.ll;
}

CuPresentation cu_of_fd_algebra(const FDAlgebra& A) {
  return CuPresentation::nbar(A.num_blocks(), CuElement(A.blocks().begin(), A.blocks().end()));
}

// ---------------------------------------------------------------------------
// Axioms

bool CuValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.pass; });
}

std::string CuValidationReport::failure() const {
  for (const auto& c : checks)
    if (!c.pass) return (c.axiom ? "axiom (" + std::to_string(c.axiom) + ")" : std::string("structure")) + ": " + c.detail;
  return {};
}

CuValidationReport validate_cu_presentation(const CuPresentation& D) {
  CuValidationReport rep;
  const long limit = D.nbar_rank() <= 2 ? 3 : 2;
  const auto E = D.enumerate(limit);
  auto s = [&](const CuElement& a) { return D.element_to_string(a); };
  auto fail = [&](int axiom, std::string detail) {
    rep.checks.push_back({axiom, false, std::move(detail)});
  };
  auto pass = [&](int axiom) { rep.checks.push_back({axiom, true, {}}); };

  // Structure: abelian monoid.
  {
    std::string bad;
    std::optional<CuElement> z;
    if (D.is_finite()) {
      if (auto id = D.table().identity()) z = CuElement{static_cast<long>(*id)};
    } else {
      z = D.zero();
    }
    if (!z) bad = "no additive identity";
    for (std::size_t i = 0; i < E.size() && bad.empty(); ++i)
      for (std::size_t j = 0; j < E.size() && bad.empty(); ++j) {
        if (D.plus(E[i], E[j]) != D.plus(E[j], E[i]))
          bad = "not commutative at (" + s(E[i]) + "," + s(E[j]) + ")";
        for (std::size_t k = 0; k < E.size() && bad.empty(); ++k)
          if (D.plus(E[i], D.plus(E[j], E[k])) != D.plus(D.plus(E[i], E[j]), E[k]))
            bad = "not associative at (" + s(E[i]) + "," + s(E[j]) + "," + s(E[k]) + ")";
      }
    if (bad.empty()) pass(0); else fail(0, bad);
  }

  // (1) ordered semigroup.
  {
    std::string bad;
    for (const auto& a : E)
      if (!D.leq(a, a)) {
        bad = "<~ not reflexive at " + s(a);
        break;
      }
    for (std::size_t i = 0; i < E.size() && bad.empty(); ++i)
      for (std::size_t j = 0; j < E.size() && bad.empty(); ++j) {
        const auto &a = E[i], &b = E[j];
        if (i != j && D.leq(a, b) && D.leq(b, a)) bad = "<~ not antisymmetric at (" + s(a) + "," + s(b) + ")";
        for (std::size_t k = 0; k < E.size() && bad.empty(); ++k) {
          const auto& c = E[k];
          if (D.leq(a, b) && D.leq(b, c) && !D.leq(a, c))
            bad = "<~ not transitive at (" + s(a) + "," + s(b) + "," + s(c) + ")";
          else if (D.leq(a, b) && !D.leq(D.plus(a, c), D.plus(b, c)))
            bad = "<~ not compatible with + at (" + s(a) + "," + s(b) + "," + s(c) + ")";
        }
      }
    if (bad.empty()) pass(1); else fail(1, bad);
  }

  // (2) << transitive, antisymmetric, additive.
  {
    std::string bad;
    for (std::size_t i = 0; i < E.size() && bad.empty(); ++i)
      for (std::size_t j = 0; j < E.size() && bad.empty(); ++j) {
        const auto &a = E[i], &b = E[j];
        if (i != j && D.ll(a, b) && D.ll(b, a)) bad = "<< not antisymmetric at (" + s(a) + "," + s(b) + ")";
        if (!D.ll(a, b)) continue;
        for (std::size_t k = 0; k < E.size() && bad.empty(); ++k) {
          const auto& c = E[k];
          if (D.ll(b, c) && !D.ll(a, c))
            bad = "<< not transitive at (" + s(a) + "," + s(b) + "," + s(c) + ")";
          for (std::size_t l = 0; l < E.size() && bad.empty(); ++l) {
            const auto& d = E[l];
            if (D.ll(c, d) && !D.ll(D.plus(a, c), D.plus(b, d)))
              bad = "<< not compatible with + at (" + s(a) + "," + s(b) + "," + s(c) + "," + s(d) + ")";
          }
        }
      }
    if (bad.empty()) pass(2); else fail(2, bad);
  }

  // (3) << implies <~.
  {
    std::string bad;
    for (const auto& a : E)
      for (const auto& b : E)
        if (bad.empty() && D.ll(a, b) && !D.leq(a, b)) bad = s(a) + " << " + s(b) + " but not <~";
    if (bad.empty()) pass(3); else fail(3, bad);
  }

  // (4) something way below each element; non-compact lower sets directed
  // without a maximum.
  {
    std::string bad;
    for (const auto& a : E) {
      if (!bad.empty()) break;
      bool any = false;
      for (const auto& b : E) any = any || D.ll(b, a);
      if (!any) {
        bad = "nothing is way below " + s(a);
        break;
      }
      if (D.is_compact(a)) continue;
      if (D.is_finite()) {
        rep.all_compact = false;
        bad = s(a) + " is not compact, and its finite lower set has a maximal element";
        break;
      }
      rep.all_compact = false;
      // In N-bar^k the lower set of a is the finite part below a: bump an
      // infinite coordinate to exceed any member; join coordinatewise.
      std::size_t inf_coord = 0;
      while (a[inf_coord] != kInf) ++inf_coord;
      for (const auto& b : E) {
        if (!D.ll(b, a)) continue;
        CuElement up = b;
        ++up[inf_coord];
        if (!D.ll(up, a) || up == b) {
          bad = "lower set of " + s(a) + " has maximal element " + s(b);
          break;
        }
        for (const auto& c : E) {
          if (!D.ll(c, a)) continue;
          CuElement join(b.size());
          for (std::size_t i = 0; i < b.size(); ++i) join[i] = std::max(b[i], c[i]);
          if (!D.ll(join, a)) {
            bad = "lower set of " + s(a) + " is not directed at (" + s(b) + "," + s(c) + ")";
            break;
          }
        }
        if (!bad.empty()) break;
      }
    }
    if (bad.empty()) pass(4); else fail(4, bad);
  }
  if (D.is_finite())
    for (const auto& a : E)
      if (!D.is_compact(a)) rep.all_compact = false;
  return rep;
}

// ---------------------------------------------------------------------------
// Sequences

CuElement CuSeq::term(std::size_t i) const {
  if (i < prefix.size()) return prefix[i];
  if (tail == TailRule::Constant) return last();
  CuElement t = last();
  long j = static_cast<long>(i - prefix.size() + 1);
  for (std::size_t c = 0; c < t.size(); ++c)
    if (step[c] != 0) t[c] = nbar_add(t[c], j * step[c]);
  return t;
}

std::string to_string(const CuPresentation& D, const CuSeq& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.prefix.size(); ++i) out += (i ? "," : "") + D.element_to_string(s.prefix[i]);
  if (s.tail == TailRule::Constant) return out + ",...)";
  out += " ramp +";
  std::string st;
  for (std::size_t i = 0; i < s.step.size(); ++i) st += (i ? "," : "") + std::to_string(s.step[i]);
  return out + (s.step.size() == 1 ? st : "(" + st + ")") + ")";
}

void check_seq(const CuPresentation& D, const CuSeq& s) {
  if (s.prefix.empty()) throw ValidationError("sequence has an empty prefix");
  for (const auto& e : s.prefix)
    if (!D.contains(e)) throw ValidationError("sequence term " + D.element_to_string(e) + " is not an element");
  for (std::size_t i = 0; i + 1 < s.prefix.size(); ++i)
    if (!D.ll(s.prefix[i], s.prefix[i + 1]))
      throw ValidationError("sequence is not <<-increasing at position " + std::to_string(i));
  if (s.tail == TailRule::Constant) {
    if (!D.ll(s.last(), s.last()))
      throw ValidationError("constant tail on a non-compact element " + D.element_to_string(s.last()));
    return;
  }
  if (D.is_finite()) throw ValidationError("ramp tails need an N-bar presentation");
  if (s.step.size() != D.nbar_rank()) throw ValidationError("ramp step has the wrong length");
  bool moving = false;
  for (long v : s.step) {
    if (v < 0) throw ValidationError("ramp step must be nonnegative");
    moving = moving || v > 0;
  }
  if (!moving) throw ValidationError("ramp step is zero");
  if (!D.ll(s.last(), s.term(s.prefix.size())))
    throw ValidationError("ramp starts from a non-compact element");
}

CuSeq eta(const CuPresentation& D, const CuElement& a) {
  if (!D.contains(a)) throw ValidationError("eta of a non-element");
  CuSeq s;
  if (D.is_finite()) {
    if (!D.is_compact(a)) throw ValidationError("eta of a non-compact table element");
    s.prefix = {a};
    return s;
  }
  CuElement start = a;
  std::vector<long> step(a.size(), 0);
  bool ramp = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] == kInf) {
      start[i] = 0;
      step[i] = 1;
      ramp = true;
    }
  s.prefix = {start};
  if (ramp) {
    s.tail = TailRule::Ramp;
    s.step = std::move(step);
  }
  return s;
}

CuSeq seq_add(const CuPresentation& D, const CuSeq& s, const CuSeq& t) {
  CuSeq r;
  const std::size_t len = std::max(s.prefix.size(), t.prefix.size());
  for (std::size_t i = 0; i < len; ++i) r.prefix.push_back(D.plus(s.term(i), t.term(i)));
  if (s.tail == TailRule::Ramp || t.tail == TailRule::Ramp) {
    r.tail = TailRule::Ramp;
    r.step.assign(D.nbar_rank(), 0);
    for (std::size_t c = 0; c < r.step.size(); ++c) {
      if (s.tail == TailRule::Ramp) r.step[c] += s.step[c];
      if (t.tail == TailRule::Ramp) r.step[c] += t.step[c];
    }
  }
  return r;
}

CuSeq seq_multiple(const CuPresentation& D, const CuSeq& s, long k) {
  if (k < 0) throw std::invalid_argument("negative multiple");
  if (k == 0) return eta(D, D.zero());
  CuSeq acc = s;
  for (long i = 1; i < k; ++i) acc = seq_add(D, acc, s);
  return acc;
}

CuElement seq_sup(const CuPresentation& D, const CuSeq& s) {
  CuElement sup = s.last();
  if (!D.is_finite() && s.tail == TailRule::Ramp)
    for (std::size_t c = 0; c < sup.size(); ++c)
      if (s.step[c] > 0) sup[c] = kInf;
  return sup;
}

namespace {

void require_same(const CuPresentation& D, const CuSeq& s, const CuSeq& t) {
  if (s.prefix.empty() || t.prefix.empty()) throw ValidationError("empty sequence");
  if (!D.contains(s.prefix[0]) || !D.contains(t.prefix[0]))
    throw ValidationError("sequences belong to a different presentation");
}

}  // namespace

// Finite tables: the tail is constant, so the terms form a finite set and the
// quantifiers range over it. N-bar^k: sequences are coordinatewise
// nondecreasing with finite terms, so every quantifier reduces to a
// comparison of coordinatewise limits.

bool seq_le(const CuPresentation& D, const CuSeq& s, const CuSeq& t) {
  require_same(D, s, t);
  if (!D.is_finite()) return D.leq(seq_sup(D, s), seq_sup(D, t));
  for (const auto& x : s.prefix) {
    bool found = false;
    for (const auto& y : t.prefix) found = found || D.leq(x, y);
    if (!found) return false;
  }
  return true;
}

bool seq_ll(const CuPresentation& D, const CuSeq& s, const CuSeq& t) {
  require_same(D, s, t);
  if (!D.is_finite()) {
    CuElement a = seq_sup(D, s);
    return all_finite(a) && D.leq(a, seq_sup(D, t));
  }
  for (const auto& y : t.prefix) {
    bool all = true;
    for (const auto& x : s.prefix) all = all && D.leq(x, y);
    if (all) return true;
  }
  return false;
}

bool seq_approx(const CuPresentation& D, const CuSeq& s, const CuSeq& t) {
  require_same(D, s, t);
  if (!D.is_finite()) return seq_sup(D, s) == seq_sup(D, t);
  auto cofinal = [&](const CuSeq& a, const CuSeq& b) {
    for (const auto& x : a.prefix) {
      bool found = false;
      for (const auto& y : b.prefix) found = found || D.ll(x, y);
      if (!found) return false;
    }
    return true;
  };
  return cofinal(s, t) && cofinal(t, s);
}

// ---------------------------------------------------------------------------
// Completion

std::size_t WCompletion::class_of(const CuSeq& s) const {
  for (std::size_t i = 0; i < reps.size(); ++i)
    if (seq_approx(base, s, reps[i])) return i;
  return npos;
}

WCompletion w_completion(const CuPresentation& D, int depth) {
  if (depth < 1) throw std::invalid_argument("completion depth must be positive");
  WCompletion W{D, depth, {}, {}, {}, {}};
  std::vector<CuSeq> candidates;
  if (D.is_finite()) {
    const std::size_t n = D.table().n;
    // Chains a_1 << a_2 << ... with distinct consecutive terms, by length.
    std::vector<std::vector<long>> layer;
    for (std::size_t i = 0; i < n; ++i) layer.push_back({static_cast<long>(i)});
    for (int len = 1; len <= depth && !layer.empty(); ++len) {
      std::vector<std::vector<long>> next;
      for (const auto& chain : layer) {
        CuSeq s;
        for (long v : chain) s.prefix.push_back({v});
        if (D.is_compact(s.last())) candidates.push_back(s);
        for (std::size_t b = 0; b < n; ++b)
          if (static_cast<long>(b) != chain.back() && D.ll({chain.back()}, {static_cast<long>(b)})) {
            auto c = chain;
            c.push_back(static_cast<long>(b));
            next.push_back(std::move(c));
          }
      }
      layer = std::move(next);
    }
  } else {
    for (const auto& e : D.enumerate(depth)) candidates.push_back(eta(D, e));
    const std::size_t k = D.nbar_rank();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      CuSeq s;
      s.prefix = {CuElement(k, 0)};
      s.tail = TailRule::Ramp;
      s.step.assign(k, 0);
      for (std::size_t c = 0; c < k; ++c)
        if (mask & (std::size_t{1} << c)) s.step[c] = 2;
      candidates.push_back(std::move(s));
    }
  }

  std::map<CuElement, std::size_t> by_sup;  // N-bar: approx is equality of limits
  auto lookup = [&](const CuSeq& s) -> std::size_t {
    if (!D.is_finite()) {
      auto it = by_sup.find(seq_sup(D, s));
      return it == by_sup.end() ? WCompletion::npos : it->second;
    }
    return W.class_of(s);
  };
  for (auto& s : candidates) {
    if (lookup(s) != WCompletion::npos) continue;
    if (!D.is_finite()) by_sup.emplace(seq_sup(D, s), W.reps.size());
    W.reps.push_back(std::move(s));
  }

  const std::size_t m = W.reps.size();
  W.plus.assign(m * m, WCompletion::npos);
  W.leq.assign(m * m, 0);
  W.ll.assign(m * m, 0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      W.plus[a * m + b] = lookup(seq_add(D, W.reps[a], W.reps[b]));
      W.leq[a * m + b] = seq_le(D, W.reps[a], W.reps[b]);
      W.ll[a * m + b] = seq_ll(D, W.reps[a], W.reps[b]);
    }
  return W;
}

// ---------------------------------------------------------------------------
// Morphism codes

CodeCheck check_morphism_code(const CuPresentation& D1, const CuPresentation& D2, const MorphismCode& alpha,
                              long prefix) {
  const auto E = D1.enumerate(prefix);
  std::vector<CuSeq> img;
  for (const auto& a : E) {
    CuSeq s = alpha.map(a);
    try {
      check_seq(D2, s);
    } catch (const ValidationError& e) {
      throw ValidationError("code value at " + D1.element_to_string(a) + " is invalid: " + e.what());
    }
    img.push_back(std::move(s));
  }
  CodeCheck out;
  auto pair = [&](std::size_t i, std::size_t j) {
    return "(" + D1.element_to_string(E[i]) + "," + D1.element_to_string(E[j]) + ")";
  };
  for (std::size_t i = 0; i < E.size(); ++i)
    for (std::size_t j = 0; j < E.size(); ++j) {
      if (out.pass[0] && D1.leq(E[i], E[j]) && !seq_le(D2, img[i], img[j])) {
        out.pass[0] = false;
        out.witness[0] = pair(i, j);
      }
      if (out.pass[1] && D1.ll(E[i], E[j]) && !seq_ll(D2, img[i], img[j])) {
        out.pass[1] = false;
        out.witness[1] = pair(i, j);
      }
      if (out.pass[2]) {
        CuSeq sum_img = alpha.map(D1.plus(E[i], E[j]));
        check_seq(D2, sum_img);
        if (!seq_approx(D2, seq_add(D2, img[i], img[j]), sum_img)) {
          out.pass[2] = false;
          out.witness[2] = pair(i, j);
        }
      }
    }
  return out;
}

bool check_pair_condition(const CuPresentation& D1, const CuPresentation& D2, const MorphismCode& a1,
                          const MorphismCode& a2, long prefix, std::string* witness) {
  const auto E1 = D1.enumerate(prefix);
  const auto E2 = D2.enumerate(prefix);
  std::vector<CuSeq> img1, eta1, img2, eta2;
  for (const auto& a : E1) {
    img1.push_back(a1.map(a));
    eta1.push_back(eta(D1, a));
  }
  for (const auto& b : E2) {
    img2.push_back(a2.map(b));
    eta2.push_back(eta(D2, b));
  }
  for (std::size_t i = 0; i < E1.size(); ++i)
    for (std::size_t j = 0; j < E2.size(); ++j) {
      bool first = seq_ll(D2, img1[i], eta2[j]) == seq_ll(D1, eta1[i], img2[j]);
      bool second = seq_ll(D2, eta2[j], img1[i]) == seq_ll(D1, img2[j], eta1[i]);
      if (!first || !second) {
        if (witness) *witness = "(" + D1.element_to_string(E1[i]) + "," + D2.element_to_string(E2[j]) + ")";
        return false;
      }
    }
  return true;
}

}  // namespace starinv
