#include "hiergap/lp.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace hiergap {

namespace {

// How each original variable maps into the nonnegative standard form.
struct VarMap {
  enum Kind { Shifted, NegShifted, Split } kind = Shifted;
  size_t col = 0;       // y column (or positive part)
  size_t neg_col = 0;   // negative part, Split only
  Rational offset = 0;  // lo for Shifted, hi for NegShifted
};

struct RowTag {
  enum Kind { Constraint, UpperBound } kind = Constraint;
  size_t index = 0;  // constraint index or variable index
};

class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) { build(); }

  LpResult run(bool optimize) {
    LpResult res;
    if (!phase1()) {
      res.status = LpStatus::Infeasible;
      res.farkas = extract_farkas();
      if (!verify_farkas(lp_, res.farkas))
        throw std::logic_error("internal error: Farkas certificate failed verification");
      return res;
    }
    if (optimize && !phase2()) {
      res.status = LpStatus::Unbounded;
      return res;
    }
    res.status = LpStatus::Optimal;
    res.assignment = recover();
    res.value = 0;
    for (size_t j = 0; j < lp_.vars.size(); ++j)
      res.value += obj_of(j) * res.assignment[j];
    if (!satisfies(lp_, res.assignment))
      throw std::logic_error("internal error: simplex solution fails substitution check");
    if (optimize) {
      Rational direct = 0;
      for (size_t j = 0; j < lp_.vars.size(); ++j) direct += obj_of(j) * res.assignment[j];
      assert(direct == res.value);
    }
    return res;
  }

 private:
  const LinearProgram& lp_;
  size_t nstruct_ = 0;  // structural columns (before artificials)
  size_t nart_ = 0;
  std::vector<VarMap> vmap_;
  std::vector<RowTag> tags_;
  std::vector<bool> row_negated_;
  std::vector<std::vector<Rational>> A_;  // m x (nstruct + nart)
  std::vector<Rational> b_;
  std::vector<size_t> basis_;
  std::vector<Rational> cost_;  // current phase cost per column
  std::vector<Rational> red_;   // reduced-cost row
  Rational objval_ = 0;
  std::vector<Rational> struct_cost_;  // phase-2 cost per structural column

  Rational obj_of(size_t j) const {
    return j < lp_.objective.size() ? lp_.objective[j] : Rational(0);
  }

  void build() {
    size_t n = lp_.vars.size();
    vmap_.resize(n);
    std::vector<std::pair<size_t, Rational>> ub_rows;  // (var, hi - lo) pending

    for (size_t j = 0; j < n; ++j) {
      LpBound bd = j < lp_.bounds.size() ? lp_.bounds[j] : LpBound{};
      VarMap& vm = vmap_[j];
      if (bd.lo) {
        vm.kind = VarMap::Shifted;
        vm.offset = *bd.lo;
        vm.col = nstruct_++;
        if (bd.hi) {
          if (*bd.hi < *bd.lo) throw std::invalid_argument("empty bound interval");
          ub_rows.emplace_back(j, *bd.hi - *bd.lo);
        }
      } else if (bd.hi) {
        vm.kind = VarMap::NegShifted;
        vm.offset = *bd.hi;
        vm.col = nstruct_++;
      } else {
        vm.kind = VarMap::Split;
        vm.col = nstruct_++;
        vm.neg_col = nstruct_++;
      }
    }

    // slack / surplus columns
    size_t slack_base = nstruct_;
    for (const auto& c : lp_.constraints)
      if (c.rel != Relation::EQ) ++nstruct_;
    nstruct_ += ub_rows.size();

    size_t m = lp_.constraints.size() + ub_rows.size();
    A_.assign(m, std::vector<Rational>(nstruct_, Rational(0)));
    b_.assign(m, Rational(0));
    tags_.resize(m);
    row_negated_.assign(m, false);

    size_t next_slack = slack_base;
    for (size_t i = 0; i < lp_.constraints.size(); ++i) {
      const auto& c = lp_.constraints[i];
      if (c.coeffs.size() != lp_.vars.size())
        throw std::invalid_argument("constraint width mismatch");
      Rational rhs = c.rhs;
      for (size_t j = 0; j < n; ++j) {
        const Rational& a = c.coeffs[j];
        if (a == 0) continue;
        const VarMap& vm = vmap_[j];
        switch (vm.kind) {
          case VarMap::Shifted:
            A_[i][vm.col] += a;
            rhs -= a * vm.offset;
            break;
          case VarMap::NegShifted:
            A_[i][vm.col] -= a;
            rhs -= a * vm.offset;
            break;
          case VarMap::Split:
            A_[i][vm.col] += a;
            A_[i][vm.neg_col] -= a;
            break;
        }
      }
      if (c.rel == Relation::LE)
        A_[i][next_slack++] = 1;
      else if (c.rel == Relation::GE)
        A_[i][next_slack++] = -1;
      b_[i] = rhs;
      tags_[i] = {RowTag::Constraint, i};
    }
    for (size_t u = 0; u < ub_rows.size(); ++u) {
      size_t row = lp_.constraints.size() + u;
      A_[row][vmap_[ub_rows[u].first].col] = 1;
      A_[row][next_slack++] = 1;
      b_[row] = ub_rows[u].second;
      tags_[row] = {RowTag::UpperBound, ub_rows[u].first};
    }
    assert(next_slack == nstruct_);

    for (size_t i = 0; i < m; ++i) {
      if (b_[i] < 0) {
        for (auto& a : A_[i]) a = -a;
        b_[i] = -b_[i];
        row_negated_[i] = true;
      }
    }

    // phase-2 cost over structural columns
    struct_cost_.assign(nstruct_, Rational(0));
    for (size_t j = 0; j < n; ++j) {
      const VarMap& vm = vmap_[j];
      Rational c = obj_of(j);
      switch (vm.kind) {
        case VarMap::Shifted:
          struct_cost_[vm.col] += c;
          break;
        case VarMap::NegShifted:
          struct_cost_[vm.col] -= c;
          break;
        case VarMap::Split:
          struct_cost_[vm.col] += c;
          struct_cost_[vm.neg_col] -= c;
          break;
      }
    }

    // artificial basis
    nart_ = m;
    for (size_t i = 0; i < m; ++i) {
      for (auto& row : A_) row.emplace_back(0);
      A_[i][nstruct_ + i] = 1;
    }
    basis_.resize(m);
    for (size_t i = 0; i < m; ++i) basis_[i] = nstruct_ + i;
  }

  size_t ncols() const { return nstruct_ + nart_; }

  void recompute_reduced() {
    red_.assign(ncols(), Rational(0));
    objval_ = 0;
    for (size_t j = 0; j < ncols(); ++j) red_[j] = cost_[j];
    for (size_t i = 0; i < A_.size(); ++i) {
      const Rational& cb = cost_[basis_[i]];
      if (cb == 0) continue;
      objval_ += cb * b_[i];
      for (size_t j = 0; j < ncols(); ++j) red_[j] -= cb * A_[i][j];
    }
  }

  void pivot(size_t row, size_t col) {
    Rational piv = A_[row][col];
    for (auto& a : A_[row]) a /= piv;
    b_[row] /= piv;
    for (size_t i = 0; i < A_.size(); ++i) {
      if (i == row) continue;
      Rational f = A_[i][col];
      if (f == 0) continue;
      for (size_t j = 0; j < ncols(); ++j) A_[i][j] -= f * A_[row][j];
      b_[i] -= f * b_[row];
    }
    Rational f = red_[col];
    if (f != 0) {
      for (size_t j = 0; j < ncols(); ++j) red_[j] -= f * A_[row][j];
      objval_ += f * b_[row];
    }
    basis_[row] = col;
  }

  // Bland: entering = lowest-index eligible column with negative reduced
  // cost; leaving = min ratio, ties by lowest basis variable index.
  bool iterate(bool allow_artificial_entering) {
    for (;;) {
      size_t enter = ncols();
      size_t limit = allow_artificial_entering ? ncols() : nstruct_;
      for (size_t j = 0; j < limit; ++j) {
        if (red_[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == ncols()) return true;  // optimal for this phase
      size_t leave = A_.size();
      Rational best_ratio = 0;
      for (size_t i = 0; i < A_.size(); ++i) {
        if (A_[i][enter] <= 0) continue;
        Rational ratio = b_[i] / A_[i][enter];
        if (leave == A_.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == A_.size()) return false;  // unbounded direction
      pivot(leave, enter);
    }
  }

  bool phase1() {
    cost_.assign(ncols(), Rational(0));
    for (size_t j = nstruct_; j < ncols(); ++j) cost_[j] = 1;
    recompute_reduced();
    bool ok = iterate(false);
    assert(ok);  // phase-1 objective is bounded below by 0
    (void)ok;
    if (objval_ != 0) return false;
    // drive leftover artificials out of the basis
    for (size_t i = 0; i < A_.size(); ++i) {
      if (basis_[i] < nstruct_) continue;
      size_t col = nstruct_;
      for (size_t j = 0; j < nstruct_; ++j)
        if (A_[i][j] != 0) {
          col = j;
          break;
        }
      if (col < nstruct_) pivot(i, col);
      // else: redundant row, artificial stays basic at value 0 (harmless)
    }
    return true;
  }

  bool phase2() {
    cost_.assign(ncols(), Rational(0));
    for (size_t j = 0; j < nstruct_; ++j) cost_[j] = struct_cost_[j];
    // artificials must not re-enter; give them prohibitive cost in the
    // reduced-cost scan by excluding them from entering
    recompute_reduced();
    return iterate(false);
  }

  std::vector<Rational> recover() const {
    std::vector<Rational> y(ncols(), Rational(0));
    for (size_t i = 0; i < A_.size(); ++i) y[basis_[i]] = b_[i];
    std::vector<Rational> x(lp_.vars.size(), Rational(0));
    for (size_t j = 0; j < lp_.vars.size(); ++j) {
      const VarMap& vm = vmap_[j];
      switch (vm.kind) {
        case VarMap::Shifted:
          x[j] = vm.offset + y[vm.col];
          break;
        case VarMap::NegShifted:
          x[j] = vm.offset - y[vm.col];
          break;
        case VarMap::Split:
          x[j] = y[vm.col] - y[vm.neg_col];
          break;
      }
    }
    return x;
  }

  // Simplex multipliers from the artificial columns: pi_i = 1 - redcost_i.
  FarkasCertificate extract_farkas() const {
    size_t m = A_.size();
    std::vector<Rational> pi(m);
    for (size_t i = 0; i < m; ++i) {
      pi[i] = Rational(1) - red_[nstruct_ + i];
      if (row_negated_[i]) pi[i] = -pi[i];
    }
    FarkasCertificate cert;
    cert.constraint_mult.assign(lp_.constraints.size(), Rational(0));
    cert.lower_mult.assign(lp_.vars.size(), Rational(0));
    cert.upper_mult.assign(lp_.vars.size(), Rational(0));
    std::vector<Rational> pi_ub(lp_.vars.size(), Rational(0));
    for (size_t i = 0; i < m; ++i) {
      if (tags_[i].kind == RowTag::Constraint) {
        size_t ci = tags_[i].index;
        switch (lp_.constraints[ci].rel) {
          case Relation::GE:
            cert.constraint_mult[ci] = pi[i];
            break;
          case Relation::LE:
            cert.constraint_mult[ci] = -pi[i];
            break;
          case Relation::EQ:
            cert.constraint_mult[ci] = pi[i];
            break;
        }
      } else {
        pi_ub[tags_[i].index] = pi[i];
      }
    }
    for (size_t j = 0; j < lp_.vars.size(); ++j) {
      const VarMap& vm = vmap_[j];
      Rational dot = 0;  // sum_i pi_i * a_ij over constraint rows
      for (size_t i = 0; i < lp_.constraints.size(); ++i)
        dot += pi[i] * lp_.constraints[i].coeffs[j];
      switch (vm.kind) {
        case VarMap::Shifted:
          cert.lower_mult[j] = -(dot + pi_ub[j]);
          cert.upper_mult[j] = -pi_ub[j];
          break;
        case VarMap::NegShifted:
          cert.upper_mult[j] = dot;
          break;
        case VarMap::Split:
          break;  // dot must vanish; verified below
      }
    }
    return cert;
  }
};

}  // namespace

bool satisfies(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.vars.size()) return false;
  for (const auto& c : lp.constraints) {
    Rational lhs = 0;
    for (size_t j = 0; j < x.size(); ++j) lhs += c.coeffs[j] * x[j];
    if (c.rel == Relation::LE && lhs > c.rhs) return false;
    if (c.rel == Relation::GE && lhs < c.rhs) return false;
    if (c.rel == Relation::EQ && lhs != c.rhs) return false;
  }
  for (size_t j = 0; j < x.size() && j < lp.bounds.size(); ++j) {
    if (lp.bounds[j].lo && x[j] < *lp.bounds[j].lo) return false;
    if (lp.bounds[j].hi && x[j] > *lp.bounds[j].hi) return false;
  }
  return true;
}

bool verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert) {
  size_t n = lp.vars.size();
  if (cert.constraint_mult.size() != lp.constraints.size()) return false;
  if (cert.lower_mult.size() != n || cert.upper_mult.size() != n) return false;

  for (size_t i = 0; i < lp.constraints.size(); ++i)
    if (lp.constraints[i].rel != Relation::EQ && cert.constraint_mult[i] < 0) return false;
  for (size_t j = 0; j < n; ++j) {
    LpBound bd = j < lp.bounds.size() ? lp.bounds[j] : LpBound{};
    if (cert.lower_mult[j] < 0 || cert.upper_mult[j] < 0) return false;
    if (!bd.lo && cert.lower_mult[j] != 0) return false;
    if (!bd.hi && cert.upper_mult[j] != 0) return false;
  }

  // combination sum_i lambda_i (±row_i) + sum_j mu_j (x_j >= lo) - nu_j (x_j <= hi)
  std::vector<Rational> combo(n, Rational(0));
  Rational rhs = 0;
  for (size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    Rational lam = cert.constraint_mult[i];
    if (lam == 0) continue;
    Rational sign = c.rel == Relation::LE ? Rational(-1) : Rational(1);
    for (size_t j = 0; j < n; ++j) combo[j] += lam * sign * c.coeffs[j];
    rhs += lam * sign * c.rhs;
  }
  for (size_t j = 0; j < n; ++j) {
    LpBound bd = j < lp.bounds.size() ? lp.bounds[j] : LpBound{};
    if (cert.lower_mult[j] != 0) {
      combo[j] += cert.lower_mult[j];
      rhs += cert.lower_mult[j] * *bd.lo;
    }
    if (cert.upper_mult[j] != 0) {
      combo[j] -= cert.upper_mult[j];
      rhs -= cert.upper_mult[j] * *bd.hi;
    }
  }
  for (const auto& c : combo)
    if (c != 0) return false;
  return rhs > 0;
}

LpResult lp_solve(const LinearProgram& lp) { return Simplex(lp).run(true); }

LpResult lp_feasible(const LinearProgram& lp) { return Simplex(lp).run(false); }

}  // namespace hiergap
