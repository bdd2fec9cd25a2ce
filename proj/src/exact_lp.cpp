#include "starinv/exact_lp.hpp"

#include <stdexcept>

namespace starinv {

namespace {

class Tableau {
 public:
  Tableau(std::vector<RVector> rows, std::vector<std::size_t> basis)
      : t_(std::move(rows)), basis_(std::move(basis)) {}

  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return t_.empty() ? 0 : t_[0].size() - 1; }
  Rational& at(std::size_t i, std::size_t j) { return t_[i][j]; }
  const Rational& rhs(std::size_t i) const { return t_[i].back(); }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t s, RVector& obj) {
    Rational p = t_[r][s];
    for (auto& v : t_[r]) v /= p;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r || t_[i][s] == 0) continue;
      Rational f = t_[i][s];
      for (std::size_t j = 0; j < t_[i].size(); ++j) t_[i][j] -= f * t_[r][j];
    }
    if (obj[s] != 0) {
      Rational f = obj[s];
      for (std::size_t j = 0; j < obj.size(); ++j) obj[j] -= f * t_[r][j];
    }
    basis_[r] = s;
  }

  // obj holds reduced costs (z_j - c_j) and the current value in the last slot.
  // Returns false when unbounded.
  bool optimize(RVector& obj, const std::vector<bool>& banned) {
    for (;;) {
      std::size_t enter = cols();
      for (std::size_t j = 0; j < cols(); ++j)
        if (!banned[j] && obj[j] < 0) {
          enter = j;
          break;
        }
      if (enter == cols()) return true;
      std::size_t leave = rows();
      Rational best;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (t_[i][enter] <= 0) continue;
        Rational ratio = rhs(i) / t_[i][enter];
        if (leave == rows() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows()) return false;
      pivot(leave, enter, obj);
    }
  }

  void drop_row(std::size_t i) {
    t_.erase(t_.begin() + static_cast<long>(i));
    basis_.erase(basis_.begin() + static_cast<long>(i));
  }

 private:
  std::vector<RVector> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LPSolution solve(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars;
  if (lp.eq_rows.size() != lp.eq_rhs.size() || lp.le_rows.size() != lp.le_rhs.size())
    throw std::invalid_argument("LP row/rhs count mismatch");
  auto is_free = [&](std::size_t j) { return !lp.free.empty() && lp.free[j]; };

  // Standard-form columns: one per nonnegative variable, two per free one,
  // then a slack per `<=` row.
  std::vector<std::size_t> pos_col(n), neg_col(n, SIZE_MAX);
  std::size_t ncols = 0;
  for (std::size_t j = 0; j < n; ++j) {
    pos_col[j] = ncols++;
    if (is_free(j)) neg_col[j] = ncols++;
  }
  const std::size_t first_slack = ncols;
  ncols += lp.le_rows.size();
  const std::size_t m = lp.eq_rows.size() + lp.le_rows.size();
  const std::size_t first_art = ncols;
  const std::size_t total = ncols + m;

  std::vector<RVector> rows(m, RVector(total + 1));
  auto fill = [&](std::size_t i, const RVector& coeffs, const Rational& b, long slack) {
    if (coeffs.size() != n) throw std::invalid_argument("LP row has wrong length");
    RVector& row = rows[i];
    for (std::size_t j = 0; j < n; ++j) {
      row[pos_col[j]] = coeffs[j];
      if (neg_col[j] != SIZE_MAX) row[neg_col[j]] = -coeffs[j];
    }
    if (slack >= 0) row[first_slack + static_cast<std::size_t>(slack)] = 1;
    row[total] = b;
    if (b < 0)
      for (auto& v : row) v = -v;
    row[first_art + i] = 1;
  };
  for (std::size_t i = 0; i < lp.eq_rows.size(); ++i) fill(i, lp.eq_rows[i], lp.eq_rhs[i], -1);
  for (std::size_t i = 0; i < lp.le_rows.size(); ++i)
    fill(lp.eq_rows.size() + i, lp.le_rows[i], lp.le_rhs[i], static_cast<long>(i));

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = first_art + i;
  Tableau tab(std::move(rows), std::move(basis));

  // Phase 1: maximize -sum(artificials).
  RVector obj(total + 1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < first_art; ++j) obj[j] -= tab.at(i, j);
  for (std::size_t i = 0; i < m; ++i) obj[total] -= tab.rhs(i);
  std::vector<bool> banned(total, false);
  tab.optimize(obj, banned);
  LPSolution out;
  if (obj[total] != 0) return out;

  // Drive remaining artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab.rows();) {
    if (tab.basis()[i] < first_art) {
      ++i;
      continue;
    }
    std::size_t s = first_art;
    for (std::size_t j = 0; j < first_art; ++j)
      if (tab.at(i, j) != 0) {
        s = j;
        break;
      }
    if (s == first_art) {
      tab.drop_row(i);
    } else {
      tab.pivot(i, s, obj);
      ++i;
    }
  }
  for (std::size_t j = first_art; j < total; ++j) banned[j] = true;

  // Phase 2.
  RVector c(total);
  if (!lp.objective.empty()) {
    if (lp.objective.size() != n) throw std::invalid_argument("LP objective has wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      c[pos_col[j]] = lp.objective[j];
      if (neg_col[j] != SIZE_MAX) c[neg_col[j]] = -lp.objective[j];
    }
  }
  RVector obj2(total + 1);
  for (std::size_t j = 0; j < total; ++j) obj2[j] = -c[j];
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    const Rational& cb = c[tab.basis()[i]];
    if (cb == 0) continue;
    for (std::size_t j = 0; j < total; ++j) obj2[j] += cb * tab.at(i, j);
    obj2[total] += cb * tab.rhs(i);
  }
  if (!tab.optimize(obj2, banned)) {
    out.status = LPStatus::Unbounded;
    return out;
  }
  RVector std_x(total);
  for (std::size_t i = 0; i < tab.rows(); ++i) std_x[tab.basis()[i]] = tab.rhs(i);
  out.status = LPStatus::Optimal;
  out.value = obj2[total];
  out.x.assign(n, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    out.x[j] = std_x[pos_col[j]];
    if (neg_col[j] != SIZE_MAX) out.x[j] -= std_x[neg_col[j]];
  }
  return out;
}

bool in_rational_cone(const std::vector<RVector>& generators, const RVector& target) {
  LinearProgram lp;
  lp.num_vars = generators.size();
  for (std::size_t i = 0; i < target.size(); ++i) {
    RVector row(generators.size());
    for (std::size_t j = 0; j < generators.size(); ++j) row[j] = generators[j].at(i);
    lp.eq_rows.push_back(std::move(row));
    lp.eq_rhs.push_back(target[i]);
  }
  return solve(lp).status == LPStatus::Optimal;
}

}  // namespace starinv
