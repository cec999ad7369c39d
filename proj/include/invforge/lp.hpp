#pragma once

#include "invforge/scalar.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace invforge {

enum class Relation { kLessEq, kGreaterEq, kEqual };

/// coeffs . x (rel) rhs
struct LinearConstraint {
  RationalVector coeffs;
  Relation rel;
  Rational rhs;
};

/// All variables are free (unbounded in both directions).
struct LinearProgram {
  Index num_vars = 0;
  std::vector<LinearConstraint> constraints;
  std::optional<RationalVector> objective;  // minimized; none = feasibility only

  explicit LinearProgram(Index n = 0) : num_vars(n) {}

  void add(RationalVector coeffs, Relation rel, Rational rhs) {
    constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
  }

  /// Throws InputError when a row or the objective has the wrong length.
  void validate() const;

  bool satisfied_by(const RationalVector& x) const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  RationalVector point;  // set when optimal
  Rational value;        // objective at point (0 without an objective)
  std::uint64_t pivots = 0;
};

/// Two-phase dense simplex over the rationals with Bland's rule.
LpSolution lp_minimize(const LinearProgram& lp);

/// A feasible point, or nullopt.
std::optional<RationalVector> lp_feasible(const LinearProgram& lp, std::uint64_t* pivots = nullptr);

}  // namespace invforge
