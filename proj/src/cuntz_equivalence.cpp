#include <algorithm>
#include <numeric>
#include <sstream>

#include "starinv/cuntz.hpp"

namespace starinv {

std::string to_string(CuVerdict v) {
  switch (v) {
    case CuVerdict::Equivalent: return "EQUIVALENT";
    case CuVerdict::Inequivalent: return "INEQUIVALENT";
    case CuVerdict::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

namespace {

// Order-isomorphism invariants of the compact part. A value of -1 means infinite.
struct Invariants {
  long cardinality = -1;
  bool total = false;
  long atoms = 0;
  long idempotents = 0;
  std::vector<long> divisible;  // |k D| for k = 2, 3
  long unit_interval = -1;
  std::vector<std::vector<long>> profile;  // sorted element signatures, finite tables only
};

std::vector<long> signature(const FiniteTable& t, std::size_t x) {
  long below = 0, above = 0;
  for (std::size_t y = 0; y < t.n; ++y) {
    below += t.le(y, x);
    above += t.le(x, y);
  }
  // Preperiod and period of the multiples of x.
  std::vector<long> first_seen(t.n, -1);
  std::size_t cur = *t.identity();
  long k = 0;
  while (first_seen[cur] < 0) {
    first_seen[cur] = k++;
    cur = t.add(cur, x);
  }
  long pre = first_seen[cur];
  return {below, above, t.add(x, x) == x, pre, k - pre};
}

Invariants invariants(const CuPresentation& D, bool pointed) {
  Invariants inv;
  if (!D.is_finite()) {
    const long k = static_cast<long>(D.nbar_rank());
    inv.total = k == 1;
    inv.atoms = k;
    inv.idempotents = 1L << k;
    inv.divisible = {-1, -1};
    if (pointed && D.unit()) {
      long card = 1;
      for (long v : *D.unit()) {
        if (v == kInf) {
          card = -1;
          break;
        }
        card *= v + 1;
      }
      inv.unit_interval = card;
    }
    return inv;
  }
  const auto& t = D.table();
  const std::size_t z = *t.identity();
  inv.cardinality = static_cast<long>(t.n);
  inv.total = true;
  for (std::size_t a = 0; a < t.n; ++a)
    for (std::size_t b = 0; b < t.n; ++b)
      if (!t.le(a, b) && !t.le(b, a)) inv.total = false;
  for (std::size_t x = 0; x < t.n; ++x) {
    if (t.add(x, x) == x) ++inv.idempotents;
    if (x == z || !t.le(z, x)) continue;
    bool atom = true;
    for (std::size_t y = 0; y < t.n && atom; ++y)
      if (y != z && y != x && t.le(z, y) && t.le(y, x)) atom = false;
    inv.atoms += atom;
  }
  for (long k : {2L, 3L}) {
    std::vector<char> hit(t.n, 0);
    for (std::size_t y = 0; y < t.n; ++y) hit[static_cast<std::size_t>(D.multiple({static_cast<long>(y)}, k)[0])] = 1;
    inv.divisible.push_back(std::accumulate(hit.begin(), hit.end(), 0L));
  }
  if (pointed && t.unit) {
    inv.unit_interval = 0;
    for (std::size_t x = 0; x < t.n; ++x) inv.unit_interval += t.le(x, *t.unit);
  }
  for (std::size_t x = 0; x < t.n; ++x) inv.profile.push_back(signature(t, x));
  std::sort(inv.profile.begin(), inv.profile.end());
  return inv;
}

std::string card_text(long c) { return c < 0 ? "infinite" : std::to_string(c); }

// First invariant on which the two presentations differ, or empty.
std::string distinguishing(const Invariants& a, const Invariants& b, bool pointed) {
  if (a.cardinality != b.cardinality)
    return "cardinality " + card_text(a.cardinality) + " vs " + card_text(b.cardinality);
  if (a.total != b.total)
    return std::string("compact part ") + (a.total ? "totally ordered" : "not totally ordered") + " vs " +
           (b.total ? "totally ordered" : "not totally ordered");
  if (a.atoms != b.atoms) return "atom count " + std::to_string(a.atoms) + " vs " + std::to_string(b.atoms);
  if (a.idempotents != b.idempotents)
    return "idempotent count " + std::to_string(a.idempotents) + " vs " + std::to_string(b.idempotents);
  if (a.divisible != b.divisible) return "divisibility pattern differs";
  if (pointed && a.unit_interval != b.unit_interval)
    return "unit-interval cardinality " + card_text(a.unit_interval) + " vs " + card_text(b.unit_interval);
  if (a.profile != b.profile) return "element order profiles differ";
  return {};
}

MorphismCode element_code(const CuPresentation& target, std::vector<long> phi, std::string name) {
  return {std::move(name), [target, phi = std::move(phi)](const CuElement& a) {
            return eta(target, CuElement{phi[static_cast<std::size_t>(a[0])]});
          }};
}

MorphismCode permutation_code(const CuPresentation& target, std::vector<std::size_t> sigma, std::string name) {
  return {std::move(name), [target, sigma = std::move(sigma)](const CuElement& a) {
            CuElement b(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) b[sigma[i]] = a[i];
            return eta(target, b);
          }};
}

bool certify(const CuPresentation& D1, const CuPresentation& D2, const MorphismCode& a1, const MorphismCode& a2,
             long prefix) {
  return check_morphism_code(D1, D2, a1, prefix).ok() && check_morphism_code(D2, D1, a2, prefix).ok() &&
         check_pair_condition(D1, D2, a1, a2, prefix);
}

// Any pair satisfying the pair condition has a2 o a1 = id and a1 o a2 = id on
// eta-images, so the search may restrict to bijections preserving <~ both ways.
struct TableSearch {
  const FiniteTable& s;
  const FiniteTable& t;
  bool pointed;
  long budget;
  long nodes = 0;
  bool exhausted_budget = false;
  std::vector<std::vector<long>> sig_s, sig_t;
  std::vector<long> phi;
  std::vector<char> used;

  TableSearch(const FiniteTable& s_, const FiniteTable& t_, bool pointed_, long budget_)
      : s(s_), t(t_), pointed(pointed_), budget(budget_) {}

  bool consistent(std::size_t a) const {
    const long fa = phi[a];
    for (std::size_t b = 0; b <= a; ++b) {
      const long fb = phi[b];
      if (s.le(a, b) != t.le(static_cast<std::size_t>(fa), static_cast<std::size_t>(fb))) return false;
      if (s.le(b, a) != t.le(static_cast<std::size_t>(fb), static_cast<std::size_t>(fa))) return false;
      std::size_t c = s.add(a, b);
      if (c <= a && phi[c] >= 0 &&
          static_cast<std::size_t>(phi[c]) != t.add(static_cast<std::size_t>(fa), static_cast<std::size_t>(fb)))
        return false;
    }
    // Sums of earlier pairs landing on a.
    for (std::size_t b = 0; b <= a; ++b)
      for (std::size_t c = 0; c <= a; ++c)
        if (s.add(b, c) == a &&
            static_cast<std::size_t>(fa) != t.add(static_cast<std::size_t>(phi[b]), static_cast<std::size_t>(phi[c])))
          return false;
    return true;
  }

  bool extend(std::size_t a) {
    if (a == s.n) return true;
    for (std::size_t y = 0; y < t.n; ++y) {
      if (used[y] || sig_s[a] != sig_t[y]) continue;
      if (pointed && (a == *s.unit) != (y == *t.unit)) continue;
      if (++nodes > budget) {
        exhausted_budget = true;
        return false;
      }
      phi[a] = static_cast<long>(y);
      used[y] = 1;
      if (consistent(a) && extend(a + 1)) return true;
      used[y] = 0;
      phi[a] = -1;
      if (exhausted_budget) return false;
    }
    return false;
  }
};

std::string map_text(const std::vector<long>& phi) {
  std::string s;
  for (std::size_t i = 0; i < phi.size(); ++i) s += (i ? " " : "") + std::to_string(i) + "->" + std::to_string(phi[i]);
  return s;
}

}  // namespace

CuEquivalence cu_equivalent(const CuPresentation& D1, const CuPresentation& D2, const CuEquivalenceOptions& opts) {
  if (opts.pointed && (!D1.unit() || !D2.unit())) throw SemanticError("pointed comparison needs a unit on both sides");
  CuEquivalence out;
  const Invariants i1 = invariants(D1, opts.pointed);
  const Invariants i2 = invariants(D2, opts.pointed);
  if (auto diff = distinguishing(i1, i2, opts.pointed); !diff.empty()) {
    out.verdict = CuVerdict::Inequivalent;
    out.invariant = diff;
    return out;
  }

  if (!D1.is_finite()) {
    const std::size_t k = D1.nbar_rank();
    std::vector<std::size_t> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 0);
    bool found = !opts.pointed;
    if (opts.pointed) {
      do {
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) ok = (*D2.unit())[sigma[i]] == (*D1.unit())[i];
        if (ok) {
          found = true;
          break;
        }
      } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
    if (!found) {
      out.verdict = CuVerdict::Inequivalent;
      out.invariant = "unit coordinates differ up to permutation";
      return out;
    }
    std::vector<std::size_t> inverse(k);
    for (std::size_t i = 0; i < k; ++i) inverse[sigma[i]] = i;
    std::string name = "eta o (";
    for (std::size_t i = 0; i < k; ++i) name += (i ? "," : "") + std::to_string(sigma[i]);
    name += ")";
    auto a1 = permutation_code(D2, sigma, name);
    auto a2 = permutation_code(D1, inverse, "inverse");
    if (!certify(D1, D2, a1, a2, opts.prefix)) {
      out.verdict = CuVerdict::Unknown;
      out.invariant = "coordinate code failed verification";
      return out;
    }
    out.verdict = CuVerdict::Equivalent;
    out.witness = a1.name;
    out.alpha1 = std::move(a1);
    out.alpha2 = std::move(a2);
    return out;
  }

  TableSearch search(D1.table(), D2.table(), opts.pointed, opts.budget);
  for (std::size_t x = 0; x < D1.table().n; ++x) search.sig_s.push_back(signature(D1.table(), x));
  for (std::size_t x = 0; x < D2.table().n; ++x) search.sig_t.push_back(signature(D2.table(), x));
  search.phi.assign(D1.table().n, -1);
  search.used.assign(D2.table().n, 0);
  if (!search.extend(0)) {
    if (search.exhausted_budget) {
      out.verdict = CuVerdict::Unknown;
      out.invariant = "search budget of " + std::to_string(opts.budget) + " nodes exhausted";
    } else {
      out.verdict = CuVerdict::Inequivalent;
      out.invariant = "exhaustive search: no order isomorphism of the compact parts";
    }
    return out;
  }
  std::vector<long> inv(search.phi.size());
  for (std::size_t a = 0; a < search.phi.size(); ++a) inv[static_cast<std::size_t>(search.phi[a])] = static_cast<long>(a);
  auto a1 = element_code(D2, search.phi, "eta o phi");
  auto a2 = element_code(D1, inv, "eta o phi^-1");
  if (!certify(D1, D2, a1, a2, opts.prefix)) {
    out.verdict = CuVerdict::Unknown;
    out.invariant = "candidate code failed verification";
    return out;
  }
  out.verdict = CuVerdict::Equivalent;
  out.witness = map_text(search.phi);
  out.alpha1 = std::move(a1);
  out.alpha2 = std::move(a2);
  return out;
}

}  // namespace starinv
