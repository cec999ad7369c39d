#include "invforge/lp.hpp"

#include "invforge/error.hpp"

namespace invforge {
namespace {

using Row = std::vector<Rational>;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : a_(rows, Row(cols + 1)), z_(cols + 1), basis_(rows), cols_(cols) {}

  Rational& at(std::size_t r, std::size_t c) { return a_[r][c]; }
  Rational& rhs(std::size_t r) { return a_[r][cols_]; }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t rows() const { return a_.size(); }
  std::uint64_t pivots() const { return pivots_; }

  /// Reduced costs for cost vector c (length cols) under the current basis.
  void set_costs(const Row& c) {
    for (std::size_t j = 0; j <= cols_; ++j) z_[j] = j < cols_ ? c[j] : Rational(0);
    for (std::size_t i = 0; i < a_.size(); ++i) {
      const Rational& cb = c[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (a_[i][j] != 0) z_[j] -= cb * a_[i][j];
      }
    }
  }

  Rational objective() const { return -z_[cols_]; }

  /// Bland's rule on columns below `limit`. False when unbounded.
  bool optimize(std::size_t limit) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (z_[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = a_.size();
      Rational best;
      for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i][enter] <= 0) continue;
        Rational ratio = a_[i][cols_] / a_[i][enter];
        if (leave == a_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (leave == a_.size()) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    ++pivots_;
    Row& pr = a_[r];
    const Rational inv = Rational(1) / pr[c];
    for (auto& v : pr) {
      if (v != 0) v *= inv;
    }
    auto eliminate = [&](Row& row) {
      if (row[c] == 0) return;
      const Rational f = row[c];
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (pr[j] != 0) row[j] -= f * pr[j];
      }
    };
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i != r) eliminate(a_[i]);
    }
    eliminate(z_);
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  std::vector<Row> a_;
  Row z_;
  std::vector<std::size_t> basis_;
  std::size_t cols_;
  std::uint64_t pivots_ = 0;
};

}  // namespace

void LinearProgram::validate() const {
  if (num_vars < 0) throw InputError("LP with negative variable count");
  for (const auto& c : constraints) {
    if (c.coeffs.size() != num_vars) throw InputError("LP constraint has the wrong length");
  }
  if (objective && objective->size() != num_vars) throw InputError("LP objective has the wrong length");
}

bool LinearProgram::satisfied_by(const RationalVector& x) const {
  if (x.size() != num_vars) return false;
  for (const auto& c : constraints) {
    const Rational lhs = c.coeffs.dot(x);
    switch (c.rel) {
      case Relation::kLessEq:
        if (lhs > c.rhs) return false;
        break;
      case Relation::kGreaterEq:
        if (lhs < c.rhs) return false;
        break;
      case Relation::kEqual:
        if (lhs != c.rhs) return false;
        break;
    }
  }
  return true;
}

LpSolution lp_minimize(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = static_cast<std::size_t>(lp.num_vars);
  const std::size_t m = lp.constraints.size();

  // Normalize to rhs >= 0, then count slack and artificial columns.
  std::vector<Relation> rel(m);
  std::vector<int> sign(m);
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = lp.constraints[i];
    sign[i] = c.rhs < 0 ? -1 : 1;
    rel[i] = c.rel;
    if (sign[i] < 0 && c.rel != Relation::kEqual) {
      rel[i] = c.rel == Relation::kLessEq ? Relation::kGreaterEq : Relation::kLessEq;
    }
    if (rel[i] != Relation::kEqual) ++slacks;
    if (rel[i] != Relation::kLessEq) ++artificials;
  }
  const std::size_t art_start = 2 * n + slacks;
  const std::size_t cols = art_start + artificials;

  Tableau t(m, cols);
  std::size_t next_slack = 2 * n;
  std::size_t next_art = art_start;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = lp.constraints[i];
    const Rational s(sign[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& v = c.coeffs(static_cast<Index>(j));
      if (v == 0) continue;
      t.at(i, j) = s * v;
      t.at(i, n + j) = -s * v;
    }
    t.rhs(i) = s * c.rhs;
    if (rel[i] == Relation::kLessEq) {
      t.at(i, next_slack) = Rational(1);
      t.basis(i) = next_slack++;
    } else {
      if (rel[i] == Relation::kGreaterEq) t.at(i, next_slack++) = Rational(-1);
      t.at(i, next_art) = Rational(1);
      t.basis(i) = next_art++;
    }
  }

  LpSolution out;
  if (artificials > 0) {
    Row phase1(cols);
    for (std::size_t j = art_start; j < cols; ++j) phase1[j] = Rational(1);
    t.set_costs(phase1);
    t.optimize(cols);
    if (t.objective() > 0) {
      out.status = LpStatus::kInfeasible;
      out.pivots = t.pivots();
      return out;
    }
    // Drive remaining (zero-valued) artificials out of the basis.
    for (std::size_t i = 0; i < t.rows();) {
      if (t.basis(i) < art_start) {
        ++i;
        continue;
      }
      std::size_t j = 0;
      while (j < art_start && t.at(i, j) == 0) ++j;
      if (j < art_start) {
        t.pivot(i, j);
        ++i;
      } else {
        t.drop_row(i);
      }
    }
  }

  if (lp.objective) {
    Row phase2(cols);
    for (std::size_t j = 0; j < n; ++j) {
      phase2[j] = (*lp.objective)(static_cast<Index>(j));
      phase2[n + j] = -phase2[j];
    }
    t.set_costs(phase2);
    if (!t.optimize(art_start)) {
      out.status = LpStatus::kUnbounded;
      out.pivots = t.pivots();
      return out;
    }
  }

  RationalVector x = RationalVector::Zero(lp.num_vars);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const std::size_t b = t.basis(i);
    if (b < n) x(static_cast<Index>(b)) += t.rhs(i);
    else if (b < 2 * n) x(static_cast<Index>(b - n)) -= t.rhs(i);
  }
  out.status = LpStatus::kOptimal;
  out.value = lp.objective ? Rational(lp.objective->dot(x)) : Rational(0);
  out.point = std::move(x);
  out.pivots = t.pivots();
  return out;
}

std::optional<RationalVector> lp_feasible(const LinearProgram& lp, std::uint64_t* pivots) {
  LinearProgram plain = lp;
  plain.objective.reset();
  LpSolution s = lp_minimize(plain);
  if (pivots) *pivots += s.pivots;
  if (s.status != LpStatus::kOptimal) return std::nullopt;
  return std::move(s.point);
}

}  // namespace invforge
