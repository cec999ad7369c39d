#include "invforge/instances.hpp"
#include "invforge/oracles.hpp"

#include <gtest/gtest.h>

namespace invforge {
namespace {

TEST(Dimacs, ParsesTwoClauseExample) {
  const CnfFormula f = parse_dimacs("p cnf 2 2\n1 2 0\n-1 2 0\n");
  EXPECT_EQ(f.num_vars(), 2);
  EXPECT_EQ(f.num_clauses(), 2);
  EXPECT_EQ(f.width(), 2);
  EXPECT_EQ(f.clauses()[0], (Clause{{1, true}, {2, true}}));
  EXPECT_EQ(f.clauses()[1], (Clause{{1, false}, {2, true}}));
}

TEST(Dimacs, UnitClauseAndComments) {
  const CnfFormula f = parse_dimacs("c hello\np cnf 1 1\n1 0\n");
  EXPECT_EQ(f.num_vars(), 1);
  EXPECT_EQ(f.num_clauses(), 1);
  EXPECT_EQ(f.width(), 1);
}

TEST(Dimacs, RejectsMalformedInput) {
  EXPECT_THROW(parse_dimacs("p cnf 2 2\n1 2 0\n0\n"), InputError);  // empty clause
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 3 0\n"), InputError);     // out of range
  EXPECT_THROW(parse_dimacs("p cnf 3 2\n1 2 0\n3 0\n"), InputError);  // mixed widths
  EXPECT_THROW(parse_dimacs("p dnf 2 1\n1 2 0\n"), InputError);
  EXPECT_THROW(parse_dimacs("p cnf 2 2\n1 2 0\n"), InputError);  // count mismatch
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 1 0\n"), InputError);  // repeated variable
}

TEST(Dimacs, EmitRoundTrip) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const CnfFormula f = gen_random_ksat(6, 9, 3, seed);
    EXPECT_EQ(parse_dimacs(emit_dimacs(f)), f);
  }
}

TEST(Generators, KsatIsDeterministicAndUniform) {
  EXPECT_EQ(gen_random_ksat(5, 7, 3, 42), gen_random_ksat(5, 7, 3, 42));
  const CnfFormula f = gen_random_ksat(3, 2, 2, 9);
  for (const Clause& c : f.clauses()) {
    ASSERT_EQ(c.size(), 2U);
    EXPECT_NE(c[0].var, c[1].var);
  }
  EXPECT_THROW(gen_random_ksat(2, 1, 3, 0), InputError);
}

TEST(Graph, ParsesAndRejects) {
  const WeightedGraph g = parse_graph("graph 2\n1 2 1/1\n");
  ASSERT_EQ(g.num_edges(), 1);
  EXPECT_EQ(*g.find(0, 1), Rational(1));
  EXPECT_EQ(*g.find(1, 0), Rational(1));
  EXPECT_THROW(parse_graph("graph 3\n1 2\n2 1\n"), InputError);
  EXPECT_THROW(parse_graph("graph 3\n1 2 0\n"), InputError);
  EXPECT_THROW(parse_graph("graph 3\n1 1\n"), InputError);
  EXPECT_EQ(parse_graph(emit_graph(g)), g);
}

TEST(Graph, GeneratorIsDeterministic) {
  EXPECT_EQ(gen_random_graph(7, 0.4, 1, 3, 5), gen_random_graph(7, 0.4, 1, 3, 5));
}

TEST(Cvp, ParsesOneByOne) {
  const CvpInstance c = parse_cvp("cvp 1 1 1\n1\n2\n1/2\n");
  EXPECT_EQ(c.basis(0, 0), Rational(1));
  EXPECT_EQ(c.target(0), Rational(2));
  EXPECT_EQ(c.radius, make_rational(1, 2));
  EXPECT_FALSE(c.gap.has_value());
  EXPECT_EQ(parse_cvp(emit_cvp(c)), c);
  EXPECT_THROW(parse_cvp("cvp 2 1 1\n1\n2\n1/2\n"), InputError);
}

TEST(Cvp, GeneratorProducesBothAnswers) {
  int yes = 0;
  int no = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const CvpInstance c = gen_random_cvp(3, 2, 1 + 2 * static_cast<int>(seed % 2), 3, 8, seed);
    EXPECT_EQ(c, gen_random_cvp(3, 2, 1 + 2 * static_cast<int>(seed % 2), 3, 8, seed));
    (solve_cvp01_bruteforce(c).yes() ? yes : no)++;
  }
  EXPECT_GT(yes, 0);
  EXPECT_GT(no, 0);
}

}  // namespace
}  // namespace invforge
