#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hiergap/rational.hpp"

namespace hiergap {

enum class Relation { LE, EQ, GE };

struct LpConstraint {
  std::vector<Rational> coeffs;  // one per variable
  Relation rel = Relation::EQ;
  Rational rhs = 0;
};

struct LpBound {
  std::optional<Rational> lo, hi;  // absent = unbounded on that side
};

// Exact-rational linear program, minimization. Bounds default to free.
struct LinearProgram {
  std::vector<std::string> vars;
  std::vector<Rational> objective;
  std::vector<LpConstraint> constraints;
  std::vector<LpBound> bounds;

  size_t add_var(std::string name, std::optional<Rational> lo = std::nullopt,
                 std::optional<Rational> hi = std::nullopt) {
    vars.push_back(std::move(name));
    objective.emplace_back(0);
    bounds.push_back({std::move(lo), std::move(hi)});
    return vars.size() - 1;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

// Infeasibility witness over the >=-canonicalized rows of the original
// program: GE rows taken as-is, LE rows negated, EQ rows with a signed
// multiplier, plus one multiplier per finite bound. verify_farkas checks
// that the combination is identically zero with a positive constant, which
// no feasible point can satisfy.
struct FarkasCertificate {
  std::vector<Rational> constraint_mult;  // >= 0 for LE/GE, signed for EQ
  std::vector<Rational> lower_mult;       // >= 0, per variable
  std::vector<Rational> upper_mult;       // >= 0, per variable
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value = 0;
  std::vector<Rational> assignment;  // per original variable, when Optimal
  FarkasCertificate farkas;          // when Infeasible
};

// Dense two-phase simplex with Bland's anti-cycling rule and exact pivots.
// Optimal results are re-checked by substitution into every constraint
// before return; infeasible results carry a verified Farkas certificate.
LpResult lp_solve(const LinearProgram& lp);

// Phase-1 only; objective ignored. Optimal status means feasible, with a
// feasible assignment.
LpResult lp_feasible(const LinearProgram& lp);

bool satisfies(const LinearProgram& lp, const std::vector<Rational>& x);
bool verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert);

}  // namespace hiergap
