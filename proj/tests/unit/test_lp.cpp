#include "invforge/lp.hpp"

#include "../support/random_networks.hpp"

#include <gtest/gtest.h>

#include <random>

namespace invforge {
namespace {

RationalVector row(std::initializer_list<long> values) {
  RationalVector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (long x : values) v(i++) = Rational(x);
  return v;
}

TEST(Lp, Infeasible) {
  LinearProgram lp(1);
  lp.add(row({1}), Relation::kGreaterEq, Rational(1));
  lp.add(row({1}), Relation::kLessEq, Rational(0));
  EXPECT_FALSE(lp_feasible(lp).has_value());
  EXPECT_EQ(lp_minimize(lp).status, LpStatus::kInfeasible);
}

TEST(Lp, MinimizeOnInterval) {
  LinearProgram lp(1);
  lp.add(row({1}), Relation::kGreaterEq, Rational(1));
  lp.add(row({1}), Relation::kLessEq, Rational(2));
  lp.objective = row({1});
  const LpSolution s = lp_minimize(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_EQ(s.point, row({1}));
  EXPECT_EQ(s.value, Rational(1));
}

TEST(Lp, Unbounded) {
  LinearProgram lp(2);
  lp.add(row({1, 1}), Relation::kLessEq, Rational(3));
  lp.objective = row({1, 0});
  EXPECT_EQ(lp_minimize(lp).status, LpStatus::kUnbounded);
}

TEST(Lp, FreeVariablesAndEqualities) {
  LinearProgram lp(2);
  lp.add(row({1, 1}), Relation::kEqual, Rational(-3));
  lp.add(row({1, -1}), Relation::kEqual, Rational(1));
  const auto x = lp_feasible(lp);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, row({-1, -2}));
}

TEST(Lp, RedundantEqualities) {
  LinearProgram lp(2);
  lp.add(row({1, 2}), Relation::kEqual, Rational(4));
  lp.add(row({2, 4}), Relation::kEqual, Rational(8));
  lp.add(row({1, 0}), Relation::kGreaterEq, Rational(1));
  lp.objective = row({-1, 0});
  lp.add(row({1, 0}), Relation::kLessEq, Rational(3));
  const LpSolution s = lp_minimize(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_EQ(s.point, (RationalVector(2) << Rational(3), make_rational(1, 2)).finished());
  EXPECT_TRUE(lp.satisfied_by(s.point));
}

TEST(Lp, RejectsMalformed) {
  LinearProgram lp(2);
  lp.add(row({1}), Relation::kEqual, Rational(0));
  EXPECT_THROW(lp_minimize(lp), InputError);
}

TEST(Lp, RandomFeasibleSystemsReverify) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const Index n = 1 + static_cast<Index>(rng() % 5);
    const RationalVector x0 = testing::random_vector(rng, n, 5, 4);
    LinearProgram lp(n);
    const int m = 1 + static_cast<int>(rng() % 8);
    for (int k = 0; k < m; ++k) {
      const RationalVector a = testing::random_vector(rng, n, 3, 3);
      const Rational at = a.dot(x0);
      switch (rng() % 3) {
        case 0: lp.add(a, Relation::kLessEq, at); break;
        case 1: lp.add(a, Relation::kGreaterEq, at - abs_value(testing::random_rational(rng, 2, 3))); break;
        default: lp.add(a, Relation::kEqual, at); break;
      }
    }
    if (rng() % 2) lp.objective = testing::random_vector(rng, n, 3, 2);
    const LpSolution s = lp_minimize(lp);
    ASSERT_NE(s.status, LpStatus::kInfeasible);
    if (s.status == LpStatus::kOptimal) {
      ASSERT_TRUE(lp.satisfied_by(s.point));
      if (lp.objective) ASSERT_LE(s.value, lp.objective->dot(x0));
    }
  }
}

}  // namespace
}  // namespace invforge
