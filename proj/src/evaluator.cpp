#include <algorithm>
#include <cmath>

#include "sampling.hpp"
#include "starinv/formula.hpp"

namespace starinv {

NumericElement rescale_into_ball(const NumericElement& y, long K, double tol) {
  const double n = operator_norm(y, tol);
  if (n <= static_cast<double>(K)) return y;
  return std::complex<double>(static_cast<double>(K) / n) * y;
}

namespace {

using detail::mix_seed;

// Direction of the bound contributed by the outermost quantifiers, tracked
// through the monotone connectives. polarity 0 means unknown.
void collect_directions(const Formula& f, int polarity, std::set<Certificate>& out) {
  auto flip = [](int p) { return -p; };
  switch (f.kind()) {
    case FormulaKind::Norm:
    case FormulaKind::Const:
      return;
    case FormulaKind::Sup:
    case FormulaKind::Inf: {
      const bool sup = f.kind() == FormulaKind::Sup;
      if (polarity == 0)
        out.insert(Certificate::Estimate);
      else
        out.insert((polarity > 0) == sup ? Certificate::Lower : Certificate::Upper);
      return;
    }
    case FormulaKind::Neg:
      collect_directions(f.lhs(), flip(polarity), out);
      return;
    case FormulaKind::Add:
    case FormulaKind::Max:
    case FormulaKind::Min:
      collect_directions(f.lhs(), polarity, out);
      collect_directions(f.rhs(), polarity, out);
      return;
    case FormulaKind::Sub:
    case FormulaKind::Monus:
      collect_directions(f.lhs(), polarity, out);
      collect_directions(f.rhs(), flip(polarity), out);
      return;
    case FormulaKind::Mul: {
      auto sign_of = [](const Formula& c) { return c.value() > 0 ? 1 : (c.value() < 0 ? -1 : 0); };
      const int ls = f.lhs().kind() == FormulaKind::Const ? sign_of(f.lhs()) : 0;
      const int rs = f.rhs().kind() == FormulaKind::Const ? sign_of(f.rhs()) : 0;
      collect_directions(f.lhs(), polarity * rs, out);
      collect_directions(f.rhs(), polarity * ls, out);
      return;
    }
  }
}

Certificate certificate_of(const Formula& f) {
  std::set<Certificate> dirs;
  collect_directions(f, 1, dirs);
  if (dirs.empty()) return Certificate::Exact;
  if (dirs.size() == 1) return *dirs.begin();
  return Certificate::Estimate;
}

// Syntactic lower bound 0: norms, nonnegative constants and the connectives
// that preserve nonnegativity.
bool nonnegative(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Norm:
    case FormulaKind::Monus:
      return true;
    case FormulaKind::Const:
      return f.value() >= 0;
    case FormulaKind::Add:
    case FormulaKind::Mul:
    case FormulaKind::Min:
      return nonnegative(f.lhs()) && nonnegative(f.rhs());
    case FormulaKind::Max:
      return nonnegative(f.lhs()) || nonnegative(f.rhs());
    case FormulaKind::Sup:
    case FormulaKind::Inf:
      return nonnegative(f.lhs());
    case FormulaKind::Sub:
    case FormulaKind::Neg:
      return false;
  }
  return false;
}

void check_element(const FDAlgebra& A, const NumericElement& e, int var) {
  bool ok = e.blocks.size() == A.num_blocks();
  for (std::size_t b = 0; ok && b < A.num_blocks(); ++b)
    ok = e.blocks[b].rows() == A.block(b) && e.blocks[b].cols() == A.block(b);
  if (!ok) throw ValidationError("value of x" + std::to_string(var) + " does not match the block structure");
}

class Evaluator {
 public:
  Evaluator(const FDAlgebra& A, const EvalConfig& cfg) : A_(A), cfg_(cfg), units_(detail::diagonal_units(A)) {}

  double value(const Formula& f, NumericAssignment& env, int depth) {
    switch (f.kind()) {
      case FormulaKind::Norm: return operator_norm(eval_term(f.term(), A_, env), cfg_.tol);
      case FormulaKind::Const: return to_double(f.value());
      case FormulaKind::Add: return value(f.lhs(), env, depth) + value(f.rhs(), env, depth);
      case FormulaKind::Sub: return value(f.lhs(), env, depth) - value(f.rhs(), env, depth);
      case FormulaKind::Mul: return value(f.lhs(), env, depth) * value(f.rhs(), env, depth);
      case FormulaKind::Neg: return -value(f.lhs(), env, depth);
      case FormulaKind::Max: return std::max(value(f.lhs(), env, depth), value(f.rhs(), env, depth));
      case FormulaKind::Min: return std::min(value(f.lhs(), env, depth), value(f.rhs(), env, depth));
      case FormulaKind::Monus: return std::max(value(f.lhs(), env, depth) - value(f.rhs(), env, depth), 0.0);
      case FormulaKind::Sup:
      case FormulaKind::Inf: return optimize(f, env, depth).value;
    }
    throw std::logic_error("bad formula kind");
  }

  struct Best {
    double value = 0;
    std::vector<int> vars;
    std::vector<NumericElement> witness;
  };

  // Consecutive quantifiers of one kind are optimized jointly.
  Best optimize(const Formula& q, NumericAssignment& env, int depth) {
    const FormulaKind kind = q.kind();
    const double sign = kind == FormulaKind::Sup ? 1.0 : -1.0;
    std::vector<int> vars;
    std::vector<long> bounds;
    const Formula* body = &q;
    while (body->kind() == kind &&
           std::find(vars.begin(), vars.end(), body->bound_var()) == vars.end()) {
      vars.push_back(body->bound_var());
      bounds.push_back(body->bound());
      body = &body->lhs();
    }
    const std::size_t nv = vars.size();

    const bool outer = depth == 0;
    const int restarts = outer ? cfg_.restarts : std::max(2, cfg_.restarts / 8);
    const int steps = outer ? cfg_.steps : std::max(10, cfg_.steps / 8);
    const int pool_size = outer ? cfg_.pool : std::max(2, cfg_.pool / 4);

    // Saved outer values of the bound variables, restored on exit.
    std::vector<std::optional<NumericElement>> saved(nv);
    for (std::size_t v = 0; v < nv; ++v)
      if (auto it = env.find(vars[v]); it != env.end()) saved[v] = it->second;

    auto objective = [&](const std::vector<NumericElement>& ys, std::vector<NumericElement>* xs) {
      std::vector<NumericElement> x(nv);
      for (std::size_t v = 0; v < nv; ++v) {
        x[v] = rescale_into_ball(ys[v], bounds[v], cfg_.tol);
        env[vars[v]] = x[v];
      }
      double val = value(*body, env, depth + 1);
      if (xs) *xs = std::move(x);
      return val;
    };

    // Witness pool: seeded random elements, structured elements, and the
    // values already in scope together with their adjoints.
    std::mt19937_64 pool_rng(mix_seed({cfg_.seed, static_cast<std::uint64_t>(depth), 0x706f6f6cULL}));
    std::vector<NumericElement> pool;
    const double Kmax = static_cast<double>(*std::max_element(bounds.begin(), bounds.end()));
    for (int i = 0; i < pool_size; ++i) pool.push_back(detail::random_element(A_, Kmax, pool_rng));
    pool.push_back(NumericElement::unit(A_));
    pool.push_back(NumericElement::scalar(A_, -1.0));
    for (const auto& u : units_) pool.push_back(u);
    for (const auto& [var, w] : env) {
      if (std::find(vars.begin(), vars.end(), var) != vars.end()) continue;
      const double n = operator_norm(w);
      NumericElement wa = adjoint(w);
      pool.push_back(w);
      pool.push_back(wa);
      if (n > 0) {
        pool.push_back(std::complex<double>(1.0 / (n * n)) * wa);
        pool.push_back(std::complex<double>(1.0 / n) * wa);
      }
    }

    std::vector<std::vector<NumericElement>> starts;
    std::size_t hint_count = 0;
    for (int v : vars)
      if (auto it = cfg_.hints.find(v); it != cfg_.hints.end()) hint_count = std::max(hint_count, it->second.size());
    for (std::size_t k = 0; k < hint_count; ++k) {
      std::vector<NumericElement> s(nv, NumericElement::zero(A_));
      for (std::size_t v = 0; v < nv; ++v)
        if (auto it = cfg_.hints.find(vars[v]); it != cfg_.hints.end() && k < it->second.size()) {
          check_element(A_, it->second[k], vars[v]);
          s[v] = it->second[k];
        }
      starts.push_back(std::move(s));
    }

    Best best;
    best.vars = vars;
    bool have_best = false;
    double best_score = 0;
    const std::size_t total = hint_count + static_cast<std::size_t>(std::max(restarts, 0));
    for (std::size_t r = 0; r < total; ++r) {
      std::mt19937_64 rng(mix_seed({cfg_.seed, static_cast<std::uint64_t>(depth), r}));
      std::vector<NumericElement> y;
      if (r < hint_count) {
        y = starts[r];
      } else {
        y = initial_tuple(r - hint_count, nv, bounds, pool, have_best ? &best.witness : nullptr, rng);
      }
      double score = sign * objective(y, nullptr);
      double step = 0.25 * Kmax;
      std::uniform_int_distribution<std::size_t> pick_var(0, nv - 1);
      std::uniform_int_distribution<std::size_t> pick_block(0, A_.num_blocks() - 1);
      for (int s = 0; s < steps; ++s) {
        const std::size_t v = pick_var(rng);
        const std::size_t b = pick_block(rng);
        const auto n = static_cast<Eigen::Index>(A_.block(b));
        std::uniform_int_distribution<Eigen::Index> pick_entry(0, n - 1);
        const Eigen::Index i = pick_entry(rng), j = pick_entry(rng);
        const std::complex<double> dir = (rng() & 1) ? std::complex<double>(1, 0) : std::complex<double>(0, 1);
        bool improved = false;
        for (double sgn : {1.0, -1.0}) {
          auto trial = y;
          trial[v].blocks[b](i, j) += sgn * step * dir;
          const double sc = sign * objective(trial, nullptr);
          if (sc > score) {
            score = sc;
            y = std::move(trial);
            improved = true;
            break;
          }
        }
        if (!improved) step = std::max(step * 0.93, 1e-6 * Kmax);
      }
      if (!have_best || score > best_score) {
        have_best = true;
        best_score = score;
        objective(y, &best.witness);
      }
    }
    best.value = sign * best_score;
    for (std::size_t v = 0; v < nv; ++v) {
      if (saved[v])
        env[vars[v]] = *saved[v];
      else
        env.erase(vars[v]);
    }
    return best;
  }

 private:
  // Structured starts first (zero, orthogonal diagonal units, +-1, i, scaled
  // units), then random tuples mixing pool elements, fresh samples and
  // *-polynomial combinations of the best witnesses so far.
  std::vector<NumericElement> initial_tuple(std::size_t r, std::size_t nv, const std::vector<long>& bounds,
                                            const std::vector<NumericElement>& pool,
                                            const std::vector<NumericElement>* best, std::mt19937_64& rng) {
    std::vector<NumericElement> y(nv, NumericElement::zero(A_));
    const std::size_t du = units_.size();
    switch (r) {
      case 0:
        return y;
      case 1:
        for (std::size_t v = 0; v < nv; ++v) y[v] = units_[v % du];
        return y;
      case 2:
        for (auto& e : y) e = NumericElement::unit(A_);
        return y;
      case 3:
        for (auto& e : y) e = NumericElement::scalar(A_, -1.0);
        return y;
      case 4:
        for (auto& e : y) e = NumericElement::scalar(A_, {0.0, 1.0});
        return y;
      case 5:
        for (std::size_t v = 0; v < nv; ++v)
          y[v] = std::complex<double>(static_cast<double>(bounds[v])) * units_[(v + 1) % du];
        return y;
      default:
        break;
    }
    std::uniform_int_distribution<int> choice(0, 2);
    std::uniform_int_distribution<std::size_t> pick_pool(0, pool.size() - 1);
    for (std::size_t v = 0; v < nv; ++v) {
      const double K = static_cast<double>(bounds[v]);
      int c = choice(rng);
      if (c == 2 && !best) c = 1;
      if (c == 0) {
        y[v] = pool[pick_pool(rng)];
      } else if (c == 1) {
        y[v] = detail::random_element(A_, K, rng);
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, best->size() - 1);
        const auto& a = (*best)[pick(rng)];
        const auto& b = (*best)[pick(rng)];
        switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
          case 0: y[v] = a; break;
          case 1: y[v] = adjoint(a); break;
          case 2: y[v] = a * b; break;
          case 3: y[v] = std::complex<double>(0.5) * (a + b); break;
          default: y[v] = a * adjoint(a); break;
        }
        y[v] = y[v] + detail::random_element(A_, 0.05 * K, rng);
      }
    }
    return y;
  }

  const FDAlgebra& A_;
  const EvalConfig& cfg_;
  std::vector<NumericElement> units_;
};

}  // namespace

EvalResult evaluate(const Formula& f, const FDAlgebra& A, const NumericAssignment& env, const EvalConfig& cfg) {
  if (!(cfg.tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (cfg.restarts < 1 || cfg.steps < 0 || cfg.pool < 0) throw std::invalid_argument("bad evaluation budget");
  std::string missing;
  for (int v : f.free_variables())
    if (!env.count(v)) missing += (missing.empty() ? "x" : ", x") + std::to_string(v);
  if (!missing.empty()) throw SemanticError("unassigned free variable(s): " + missing);
  for (const auto& [v, e] : env) check_element(A, e, v);

  Evaluator ev(A, cfg);
  NumericAssignment scope = env;
  EvalResult out;
  out.certificate = certificate_of(f);
  if (f.kind() == FormulaKind::Sup || f.kind() == FormulaKind::Inf) {
    auto best = ev.optimize(f, scope, 0);
    out.value = best.value;
    for (std::size_t v = 0; v < best.vars.size(); ++v) out.witness[best.vars[v]] = best.witness[v];
  } else {
    out.value = ev.value(f, scope, 0);
  }
  // An upper bound of 0 on a nonnegative quantity is attained.
  if (out.certificate == Certificate::Upper && out.value == 0 && nonnegative(f)) out.certificate = Certificate::Exact;
  return out;
}

EvalResult evaluate(const Formula& f, const FDAlgebra& A, const ExactAssignment& env, const EvalConfig& cfg) {
  NumericAssignment num;
  for (const auto& [v, e] : env) {
    e.check_shape(A);
    num[v] = NumericElement::from_exact(e);
  }
  return evaluate(f, A, num, cfg);
}

TheoryFingerprint theory_fingerprint(const FDAlgebra& A, const std::vector<NamedFormula>& sentences,
                                     const EvalConfig& cfg) {
  for (const auto& s : sentences)
    if (!s.formula.is_sentence()) throw SemanticError("formula '" + s.id + "' has free variables");
  TheoryFingerprint fp;
  for (const auto& s : sentences) {
    auto r = evaluate(s.formula, A, NumericAssignment{}, cfg);
    fp.push_back({s.id, r.value, r.certificate});
  }
  return fp;
}

}  // namespace starinv
