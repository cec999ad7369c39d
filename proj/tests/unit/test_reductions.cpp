#include "invforge/oracles.hpp"
#include "invforge/reductions.hpp"

#include <gtest/gtest.h>

#include <random>

namespace invforge {
namespace {

RationalVector vec(std::initializer_list<long> values) {
  RationalVector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (long x : values) v(i++) = Rational(x);
  return v;
}

CnfFormula two_clause() { return parse_dimacs("p cnf 2 2\n1 2 0\n-1 2 0\n"); }

CvpInstance cvp1(long t, Rational r, int p = 1) {
  CvpInstance c;
  c.basis = RationalMatrix::Constant(1, 1, Rational(1));
  c.target = vec({t});
  c.radius = r;
  c.p = p;
  return c;
}

HalfCliqueQuery worked_halfclique() {
  const WeightedGraph g(4, {{0, 1, Rational(1)}, {2, 3, Rational(2)}});
  return make_halfclique_query(g, Rational(2));
}

WeightedGraph path3() { return WeightedGraph(3, {{0, 1, Rational(1)}, {1, 2, Rational(1)}}); }

TEST(SatExactBinary, TwoClauseMatrices) {
  const ReductionArtifact a = sat_to_exact_binary(two_clause());
  const ReluNetwork& net = a.query.network;
  ASSERT_EQ(net.depth(), 2);
  RationalMatrix w1(2, 2);
  w1 << Rational(-1), Rational(-1), Rational(1), Rational(-1);
  EXPECT_EQ(net.layer(0).weights, w1);
  EXPECT_EQ(net.layer(0).bias, vec({-1, -1}));
  EXPECT_EQ(net.layer(1).weights, RationalMatrix::Ones(1, 2));
  EXPECT_EQ(net.layer(1).bias, vec({0}));
  EXPECT_EQ(a.query.target, vec({0}));
  EXPECT_EQ(a.query.domain.kind, DomainKind::kBinaryPm1);
  EXPECT_EQ(net.width(), 2);
  EXPECT_TRUE(a.query.accepts_latent(vec({1, 1})));
  EXPECT_TRUE(a.query.accepts_latent(vec({-1, 1})));
  EXPECT_FALSE(a.query.accepts_latent(vec({1, -1})));
}

TEST(SatExactBinary, Contradiction) {
  const ReductionArtifact a = sat_to_exact_binary(parse_dimacs("p cnf 1 2\n1 0\n-1 0\n"));
  EXPECT_EQ(a.query.network.layer(0).bias, vec({0, 0}));
  EXPECT_EQ(forward(a.query.network, vec({1})), vec({1}));
  EXPECT_EQ(forward(a.query.network, vec({-1})), vec({1}));
}

TEST(SatExactReal, TargetClampAndUnitCount) {
  const ReductionArtifact a = sat_to_exact_real(two_clause());
  EXPECT_EQ(a.query.target, vec({0, 2}));
  EXPECT_EQ(a.query.network.depth(), 4);
  EXPECT_EQ(a.query.network.unit_count(), 4 * 2 + 2 + 2);
  // Layers 1-2 give bv with v = 1 - bv.
  const ReluNetwork clamp(2, {a.query.network.layer(0), a.query.network.layer(1)});
  EXPECT_EQ(forward(clamp, vec({5, -7})), vec({0, 2}));
}

TEST(SatExactReal, UnitClauseWitness) {
  const ReductionArtifact a = sat_to_exact_real(parse_dimacs("p cnf 1 1\n1 0\n"));
  EXPECT_TRUE(a.query.accepts_latent(vec({1})));
  EXPECT_TRUE(a.query.accepts_latent(vec({3})));  // clamps to 1
  EXPECT_FALSE(a.query.accepts_latent(vec({-1})));
  EXPECT_FALSE(a.query.accepts_latent(RationalVector::Constant(1, make_rational(1, 2))));
}

TEST(CvpApproxBinary, ShapeAndExamples) {
  const ReductionArtifact no = cvp_to_approx_binary(cvp1(2, make_rational(1, 2)));
  EXPECT_EQ(no.query.network.width(), 4);
  EXPECT_EQ(no.query.domain.dim, 2);
  EXPECT_FALSE(invert_binary_bruteforce(no.query).yes());
  EXPECT_EQ(*invert_binary_bruteforce(no.query).best_distance_pow, Rational(1));

  const ReductionArtifact yes = cvp_to_approx_binary(cvp1(1, Rational(0)));
  const Verdict v = invert_binary_bruteforce(yes.query);
  ASSERT_TRUE(v.yes());
  EXPECT_EQ(*v.witness, vec({1, 0}));
}

TEST(CvpApproxBinary, EvenPIsRejectedInStrictMode) {
  EXPECT_THROW(cvp_to_approx_binary(cvp1(1, Rational(1), 2)), UnsupportedError);
  const ReductionArtifact a = cvp_to_approx_binary(cvp1(1, Rational(1), 2), false);
  EXPECT_TRUE(constant_violations(a).empty());
}

TEST(Gadget, QuarterModeTarget) {
  CvpInstance c;
  c.basis = RationalMatrix::Identity(2, 2);
  c.target = vec({1, 0});
  c.radius = make_rational(1, 8);
  c.p = 1;
  const ReductionArtifact a = cvp_to_approx_real(c);
  ASSERT_TRUE(a.constants.gadget.has_value());
  EXPECT_EQ(a.constants.gadget->mode, GadgetMode::kQuarter);
  EXPECT_EQ(a.query.network.depth(), 5);
  EXPECT_EQ(a.query.target(a.query.target.size() - 1), Rational(2));
  EXPECT_TRUE(constant_violations(a).empty());
}

TEST(Gadget, GeneralModeConstant) {
  EXPECT_EQ(choose_c(make_rational(1, 2)), 5);
  const ReductionArtifact a = cvp_to_approx_real(cvp1(2, make_rational(1, 2)));
  ASSERT_TRUE(a.constants.gadget.has_value());
  EXPECT_EQ(a.constants.gadget->mode, GadgetMode::kGeneral);
  EXPECT_EQ(a.constants.gadget->c, 5);
  EXPECT_GE((Rational(*a.constants.gadget->c) - 2) * a.constants.gadget->delta, 1);
  EXPECT_THROW(binarization_gadget(cvp_to_approx_binary(cvp1(2, make_rational(1, 2))), make_rational(1, 2),
                                   GadgetMode::kQuarter),
               InputError);
}

TEST(Gadget, SumCoordinateOnBinaryLatents) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const CvpInstance c = gen_random_cvp(3, 2, 1, 3, 8, rng());
    const ReductionArtifact a = cvp_to_approx_real(c);
    const Rational u = a.constants.gadget->upper;
    const Index n = a.query.domain.dim;
    for (std::uint64_t mask = 0; mask < (1U << n); ++mask) {
      RationalVector z(n);
      for (Index i = 0; i < n; ++i) z(i) = ((mask >> i) & 1U) ? u : Rational(0);
      const RationalVector y = forward(a.query.network, z);
      ASSERT_EQ(y(y.size() - 1), Rational(n) * u / 2);
    }
  }
}

TEST(Gadget, CollapseIsBinaryNearCorners) {
  std::mt19937_64 rng(8);
  for (const Rational& r : {make_rational(1, 8), make_rational(1, 2), Rational(3)}) {
    const ReductionArtifact a = cvp_to_approx_real(cvp1(2, r));
    const GadgetParams& g = *a.constants.gadget;
    const Index n = a.query.domain.dim;
    for (int t = 0; t < 200; ++t) {
      RationalVector z(n);
      std::vector<bool> high(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) {
        const Rational frac = make_rational(static_cast<long>(rng() % 1001), 1000);
        high[static_cast<std::size_t>(i)] = rng() & 1U;
        // Clamped value in [0, delta] or [U - delta, U]; sometimes pushed outside the clamp.
        z(i) = high[static_cast<std::size_t>(i)] ? g.upper - frac * g.delta : frac * g.delta;
        if (rng() % 4 == 0) z(i) += high[static_cast<std::size_t>(i)] ? Rational(5) : Rational(-5);
      }
      const RationalVector t4 = gadget_collapse_outputs(a, z);
      for (Index i = 0; i < n; ++i) ASSERT_EQ(t4(i), Rational(high[static_cast<std::size_t>(i)] ? 1 : 0));
    }
  }
}

TEST(Gadget, AcceptedLatentsClampNearCorners) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const CvpInstance c = gen_random_cvp(2, 2, 1, 3, 8, seed);
    if (!solve_cvp01_bruteforce(c).yes()) continue;
    const ReductionArtifact a = cvp_to_approx_real(c);
    FalsifierOptions fo;
    fo.restarts = 300;
    fo.seed = seed;  // no corner levels: random starts only
    const Verdict v = falsify_real(a.query, fo);
    if (!v.yes()) continue;
    const GadgetParams& g = *a.constants.gadget;
    for (Index i = 0; i < v.witness->size(); ++i) {
      Rational clamped = (*v.witness)(i);
      if (clamped < 0) clamped = 0;
      if (clamped > g.upper) clamped = g.upper;
      EXPECT_TRUE(clamped <= g.delta || clamped >= g.upper - g.delta) << "seed " << seed;
    }
  }
}

TEST(HalfClique, WorkedExample) {
  const ReductionArtifact a = halfclique_to_approx(worked_halfclique(), 2);
  const ReductionConstants& k = a.constants;
  EXPECT_EQ(*k.alpha_pow, Rational(8));
  EXPECT_EQ(*k.total_weight, Rational(5));
  EXPECT_EQ(*k.non_edges, 4);
  EXPECT_EQ(a.query.threshold_pow, Rational(53));
  EXPECT_EQ(a.query.distance_of(vec({1, 1, 0, 0})).value, Rational(45));
  EXPECT_TRUE(a.query.accepts_latent(vec({1, 1, 0, 0})));
  EXPECT_TRUE(solve_halfclique_bruteforce(worked_halfclique(), 2).yes());
  const Verdict v = invert_binary_bruteforce(a.query);
  ASSERT_TRUE(v.yes());
  EXPECT_EQ(*v.witness, vec({1, 1, 0, 0}));
  EXPECT_EQ(*v.best_distance_pow, Rational(45));
  EXPECT_TRUE(constant_violations(a).empty());
}

TEST(HalfClique, BetaRowsCarryHalfBias) {
  const ReductionArtifact a = halfclique_to_approx(worked_halfclique(), 2);
  const Layer& layer = a.query.network.layer(0);
  const Index inner = layer.fan_out() / 2;
  const Index beta_rows = static_cast<Index>(a.constants.beta_terms.size());
  for (Index r = inner - beta_rows; r < inner; ++r) {
    EXPECT_EQ(layer.bias(r), -2 * layer.weights(r, 0));
    EXPECT_EQ(layer.weights.row(r), RationalMatrix::Constant(1, 4, layer.weights(r, 0)));
  }
}

TEST(HalfClique, WidthWhenConstantsArePowers) {
  // Complete graph on four vertices: Z = 0, sum w = 6, theta = 6 + 8M, beta^2 = 7 + 8M = 16.
  const WeightedGraph g(4, {{0, 1, Rational(1)}, {0, 2, Rational(1)}, {0, 3, Rational(1)}, {1, 2, Rational(1)},
                            {1, 3, Rational(1)}, {2, 3, Rational(1)}});
  const ReductionArtifact a = halfclique_to_approx(make_halfclique_query(g, make_rational(9, 8)), 2);
  EXPECT_EQ(a.constants.beta_terms.size(), 1U);
  EXPECT_EQ(a.query.network.width(), 2 * (6 + 1));
}

TEST(HalfClique, RejectsOddInputs) {
  EXPECT_THROW(halfclique_to_approx(worked_halfclique(), 3), UnsupportedError);
  EXPECT_THROW(make_halfclique_query(WeightedGraph(3, {}), Rational(1)), InputError);
}

TEST(HalfCliqueReal, ShapeAndForwarding) {
  const ReductionArtifact a = halfclique_to_approx_real(worked_halfclique(), 2);
  EXPECT_EQ(a.query.network.depth(), 5);
  const ReductionArtifact inner = halfclique_to_approx(worked_halfclique(), 2);
  EXPECT_EQ(a.query.network.width(), std::max(3 * Index{4}, inner.query.network.width() + 1));
  EXPECT_TRUE(constant_violations(a).empty());
  const RationalVector z = latent_from_source(a, {true, true, false, false});
  EXPECT_TRUE(a.query.accepts_latent(z));
}

TEST(VertexCover, PathExample) {
  const ReductionArtifact a = vertexcover_to_approx(make_vertexcover_query(path3(), 1), 2);
  EXPECT_EQ(a.query.threshold_pow, Rational(2));
  EXPECT_EQ(a.query.distance_of(vec({1, 0, 1})).value, Rational(2));
  EXPECT_TRUE(invert_binary_bruteforce(a.query).yes());
  EXPECT_EQ(source_from_latent(a, vec({1, 0, 1})), (std::vector<bool>{false, true, false}));
  const Layer& layer = a.query.network.layer(0);
  const Index inner = layer.fan_out() / 2;
  for (Index r = inner - static_cast<Index>(a.constants.beta_terms.size()); r < inner; ++r) {
    EXPECT_EQ(layer.bias(r), -2 * layer.weights(r, 0));
  }
}

TEST(VertexCover, TriangleHasNoSingleVertexCover) {
  const WeightedGraph tri(3, {{0, 1, Rational(1)}, {1, 2, Rational(1)}, {0, 2, Rational(1)}});
  const ReductionArtifact a = vertexcover_to_approx(make_vertexcover_query(tri, 1), 2);
  EXPECT_FALSE(invert_binary_bruteforce(a.query).yes());
  EXPECT_FALSE(solve_vertexcover_bruteforce(make_vertexcover_query(tri, 1)).yes());
}

TEST(Constants, Choosers) {
  EXPECT_EQ(choose_alpha_cvp(make_rational(1, 2)), make_rational(3, 2));
  const Rational a2 = choose_alpha_halfclique(2, Rational(5), Rational(2));
  EXPECT_EQ(a2, Rational(8));
  EXPECT_GT(a2 * 8, Rational(5) + Rational(8) * 2);
  EXPECT_EQ(choose_alpha_vc(), Rational(1));
  EXPECT_EQ(choose_beta(Rational(53), 2), Rational(54));
  EXPECT_THROW(choose_c(Rational(0)), InputError);
  EXPECT_THROW(choose_alpha_halfclique(2, Rational(5), Rational(0)), InputError);
}

TEST(Constants, PowerSplit) {
  EXPECT_EQ(split_power_sum(Rational(8), 2), (std::vector<Rational>{Rational(2), Rational(2)}));
  EXPECT_EQ(split_power_sum(make_rational(9, 4), 2), (std::vector<Rational>{make_rational(3, 2)}));
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    const int p = 2 + 2 * static_cast<int>(rng() % 2);
    const Rational w = make_rational(1 + static_cast<long>(rng() % 100000), 1 + static_cast<long>(rng() % 12));
    const auto terms = split_power_sum(w, p);
    Rational sum(0);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      ASSERT_GT(terms[i], 0);
      if (i > 0) ASSERT_LE(terms[i], terms[i - 1]);
      sum += power(terms[i], p);
    }
    ASSERT_EQ(sum, w);
  }
}

TEST(Constants, RootUpperBound) {
  for (long v : {1L, 2L, 53L, 1000L}) {
    for (int p : {2, 4}) {
      const Rational r = root_upper_bound(Rational(v), p);
      EXPECT_GE(power(r, p), Rational(v));
      EXPECT_LT(power(Rational(r - make_rational(1, 64)), p), Rational(v));
    }
  }
}

TEST(Constants, ViolationsAreReported) {
  ReductionArtifact a = cvp_to_approx_binary(cvp1(2, make_rational(1, 2)));
  EXPECT_TRUE(constant_violations(a).empty());
  a.constants.alpha = make_rational(1, 2);
  EXPECT_FALSE(constant_violations(a).empty());
  ReductionArtifact h = halfclique_to_approx(worked_halfclique(), 2);
  h.constants.beta_pow = Rational(53);
  EXPECT_FALSE(constant_violations(h).empty());
}

TEST(StackedIdentity, CvpResidualNorm) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const int p = t % 2 ? 3 : 1;
    const CvpInstance c = gen_random_cvp(3, 3, p, 3, 8, rng());
    const ReductionArtifact a = cvp_to_approx_binary(c);
    const Rational alpha = *a.constants.alpha;
    for (std::uint64_t mask = 0; mask < 64; ++mask) {
      RationalVector z(6);
      for (Index i = 0; i < 6; ++i) z(i) = Rational((mask >> i) & 1U);
      RationalVector y(3);
      for (Index i = 0; i < 3; ++i) y(i) = z(2 * i);
      Rational expected = distance_pow(RationalVector(c.basis * y), c.target, p).value;
      for (Index i = 0; i < 3; ++i) expected += power(abs_value(Rational(alpha * (z(2 * i) + z(2 * i + 1) - 1))), p);
      ASSERT_EQ(a.query.distance_of(z).value, expected);
    }
  }
}

TEST(Witness, RoundTripsForEveryKind) {
  std::vector<ReductionArtifact> artifacts = {
      sat_to_exact_binary(two_clause()),
      sat_to_exact_real(two_clause()),
      cvp_to_approx_binary(cvp1(2, make_rational(1, 2))),
      cvp_to_approx_real(cvp1(2, make_rational(1, 2))),
      halfclique_to_approx(worked_halfclique(), 2),
      halfclique_to_approx_real(worked_halfclique(), 2),
      vertexcover_to_approx(make_vertexcover_query(path3(), 1), 2),
  };
  for (const auto& a : artifacts) {
    const int n = a.witness_map.source_size;
    for (std::uint64_t mask = 0; mask < (1U << n); ++mask) {
      std::vector<bool> bits(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = (mask >> i) & 1U;
      ASSERT_EQ(source_from_latent(a, latent_from_source(a, bits)), bits) << to_string(a.kind);
    }
  }
}

TEST(Documents, ArtifactRoundTrip) {
  for (const auto& a : {cvp_to_approx_real(cvp1(2, make_rational(1, 2))), halfclique_to_approx(worked_halfclique(), 4),
                        sat_to_exact_real(two_clause())}) {
    const nlohmann::json doc = artifact_to_json(a);
    const ReductionArtifact b = artifact_from_json(nlohmann::json::parse(doc.dump()));
    EXPECT_EQ(b.kind, a.kind);
    EXPECT_EQ(b.query.network, a.query.network);
    EXPECT_EQ(b.query.target, a.query.target);
    EXPECT_EQ(b.query.threshold_pow, a.query.threshold_pow);
    EXPECT_EQ(b.query.comparison, a.query.comparison);
    EXPECT_EQ(b.witness_map.scale, a.witness_map.scale);
    EXPECT_EQ(artifact_to_json(b), doc);
  }
}

}  // namespace
}  // namespace invforge
