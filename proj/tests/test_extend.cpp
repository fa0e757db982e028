#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "linf/extend.hpp"
#include "linf/io.hpp"

namespace linf {
namespace {

SeparableSpace two_point_net() {
  return SeparableSpace::custom_net(1, 2.0, {{1.0}, {-1.0}}, {{1.0}, {-1.0}});
}

BoundedSeq alternating() { return BoundedSeq::periodic({-1.0, 1.0}); }

SubspaceD scaled_alternating_family() {
  return SubspaceD::countable([](std::size_t i) {
    return combine({1.0 + 1.0 / static_cast<double>(i)}, {alternating()});
  });
}

IndexScheme odds_scheme() { return bw_extract(SubspaceD::finite_basis({alternating()}), 1, 64); }

TEST(BwExtract, TieGoesToLowerCell) {
  const auto s = odds_scheme();
  ASSERT_EQ(s.prefix.size(), 32u);
  for (std::size_t j = 0; j < s.prefix.size(); ++j) EXPECT_EQ(s.prefix[j], 2 * j + 1);
  ASSERT_EQ(s.alpha.size(), 1u);
  EXPECT_NEAR(s.alpha[0], -1.0, 0.5);
  EXPECT_EQ(s.tol_schedule, std::vector<double>{0.5});
  EXPECT_EQ(s.delta_final(), 0.5);
}

TEST(BwExtract, ConstantSequenceKeepsEveryIndex) {
  for (std::size_t depth : {1u, 3u, 6u}) {
    const auto s = bw_extract(SubspaceD::finite_basis({BoundedSeq::constant(0.5)}), depth, 100);
    EXPECT_EQ(s.prefix.size(), 100u);
    EXPECT_LE(std::abs(s.alpha[0] - 0.5), s.delta_final());
  }
}

TEST(BwExtract, TwoMembers) {
  const auto s = bw_extract(
      SubspaceD::finite_basis({alternating(), BoundedSeq::periodic({1.0, -1.0})}), 2, 256);
  for (Index n : s.prefix) EXPECT_EQ(n % 2, 1u);
  EXPECT_EQ(s.prefix.size(), 128u);
  EXPECT_LE(std::abs(s.alpha[0] + 1.0), 2 * s.delta_final());
  EXPECT_LE(std::abs(s.alpha[1] - 1.0), 2 * s.delta_final());
}

TEST(BwExtract, MatchesExhaustiveBucketing) {
  // Flat bucketing of the first 4096 points into 16 x 16 cells, ties to the
  // smallest cell, selects [-1, -0.875) x [0, 0.125): the point (-1, 0) at n = 3 mod 6.
  const SubspaceD D =
      SubspaceD::finite_basis({alternating(), BoundedSeq::periodic({1.0, -1.0, 0.0})});
  const auto s = bw_extract(D, 4, 4096);
  ASSERT_GE(s.prefix.size(), 64u);
  EXPECT_EQ(s.prefix.size(), 683u);
  EXPECT_EQ(s.alpha, (std::vector<double>{-0.9375, 0.0625}));
  EXPECT_NEAR(s.delta_final(), 0.5 * std::sqrt(2.0) * 0.125, 1e-15);
  for (std::size_t j = s.prefix.size() / 2; j < s.prefix.size(); ++j)
    for (std::size_t i = 0; i < 2; ++i)
      EXPECT_LE(std::abs(D.member(i + 1)(s.prefix[j]) - s.alpha[i]), 2 * s.delta_final());
}

TEST(BwExtract, Errors) {
  EXPECT_THROW(bw_extract(SubspaceD::zero(), 2, 64), Error);
  EXPECT_THROW(bw_extract(SubspaceD::finite_basis({alternating()}), 0, 64), Error);
  try {
    bw_extract(SubspaceD::finite_basis({alternating()}), 4, 6);
    FAIL();
  } catch (const ExtractionBudgetExhausted& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExhausted);
    EXPECT_EQ(e.prefix_length(), 3u);
  }
}

TEST(ProbeRank, DetectsDependence) {
  EXPECT_EQ(probe_rank(SubspaceD::finite_basis({alternating(), BoundedSeq::periodic({1.0, -1.0})})),
            1u);
  EXPECT_EQ(probe_rank(SubspaceD::finite_basis(
                {alternating(), BoundedSeq::periodic({1.0, -1.0, 0.0})})),
            2u);
  EXPECT_EQ(probe_rank(SubspaceD::zero()), 0u);
}

TEST(DiagonalExtract, ConstantsNeedNoRefinement) {
  const auto D = SubspaceD::dense_sequence(
      [](std::size_t i) { return BoundedSeq::constant(1.0 / static_cast<double>(i)); });
  const std::vector<double> schedule{0.5, 0.25, 0.125};
  const auto s = diagonal_extract(D, 3, schedule, 200);
  ASSERT_EQ(s.prefix.size(), 200u);
  for (std::size_t j = 0; j < s.prefix.size(); ++j) EXPECT_EQ(s.prefix[j], j + 1);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_LE(std::abs(s.alpha[i] - 1.0 / static_cast<double>(i + 1)), schedule[i]);
}

TEST(DiagonalExtract, ScaledAlternatingFamily) {
  const std::vector<double> schedule{0.5, 0.25};
  const auto s = diagonal_extract(scaled_alternating_family(), 2, schedule, 512);
  for (Index n : s.prefix) EXPECT_EQ(n % 2, 1u);
  for (std::size_t i = 1; i <= 2; ++i)
    EXPECT_LE(std::abs(s.alpha[i - 1] + 1.0 + 1.0 / static_cast<double>(i)), schedule[i - 1]);
}

TEST(DiagonalExtract, SingleStageMatchesBolzanoWeierstrass) {
  const auto w = combine({2.0}, {alternating()});
  const std::vector<double> schedule{0.5};
  const auto diag = diagonal_extract(
      SubspaceD::countable([w](std::size_t) { return w; }), 1, schedule, 300);
  const auto bw = bw_extract(SubspaceD::finite_basis({w}), 3, 300);  // 4 -> 2 -> 1 -> 0.5
  EXPECT_EQ(diag.prefix, bw.prefix);
  EXPECT_EQ(diag.alpha, bw.alpha);
}

TEST(DiagonalExtract, ScheduleValidation) {
  const auto D = scaled_alternating_family();
  const std::vector<double> rising{0.25, 0.5};
  EXPECT_THROW(diagonal_extract(D, 2, rising, 100), Error);
  const std::vector<double> short_schedule{0.5};
  EXPECT_THROW(diagonal_extract(D, 2, short_schedule, 100), Error);
  EXPECT_THROW(diagonal_extract(SubspaceD::finite_basis({alternating()}), 1, short_schedule, 100),
               Error);
}

TEST(IndexScheme, SplitAndExhaustion) {
  const auto s = odds_scheme();
  EXPECT_EQ(s.eta_minus(1), 1u);
  EXPECT_EQ(s.eta_plus(1), 3u);
  EXPECT_EQ(s.eta_minus(2), 5u);
  EXPECT_EQ(s.eta_plus(2), 7u);
  EXPECT_THROW(s.at(0), Error);
  EXPECT_THROW(s.at(33), SchemeExhausted);
  EXPECT_THROW(s.position(65), SchemeExhausted);
  EXPECT_FALSE(s.position(64).has_value());
  EXPECT_EQ(*s.position(63), 32u);

  const auto t = trivial_scheme();
  EXPECT_EQ(t.eta_plus(5), 10u);
  EXPECT_EQ(t.eta_minus(5), 9u);
  EXPECT_EQ(*t.position(1000000), 1000000u);
}

TEST(IndexScheme, ExtendContinuesTheScan) {
  const SubspaceD D = SubspaceD::finite_basis({alternating()});
  const auto s = bw_extract(D, 2, 64);
  const auto longer = extend_scheme(D, s, 64);
  const auto direct = bw_extract(D, 2, 128);
  EXPECT_EQ(longer.prefix, direct.prefix);
  EXPECT_EQ(longer.scan_budget_used, 128u);
}

TEST(SchemeEmbed, WorkedExample) {
  const auto image = scheme_embed(two_point_net(), odds_scheme(), Element::dense({2.0}));
  EXPECT_EQ(image(1), -2.0);
  EXPECT_EQ(image(3), 2.0);
  EXPECT_EQ(image(2), 0.0);
  EXPECT_EQ(image(5), 2.0);  // -phi_2(x), u_2 = (-1)
  for (Index n = 2; n <= 64; n += 2) EXPECT_EQ(image(n), 0.0);
  EXPECT_THROW(image(65), SchemeExhausted);
}

TEST(SchemeEmbed, ZeroElement) {
  const auto image =
      scheme_embed(SeparableSpace::finite_dim_lp(2, 2.0), odds_scheme(), Element::dense({0.0, 0.0}));
  EXPECT_EQ(prefix_sup(image, 64), 0.0);
}

TEST(SchemeEmbed, TrivialSchemeRelabelsTheInterleavedEmbedding) {
  const auto space = SeparableSpace::finite_dim_lp(3, 1.5);
  const Element x = Element::dense({0.25, -1.0, 2.0});
  const auto direct = embed_interleaved(space, x);
  const auto relabeled = scheme_embed(space, trivial_scheme(), x);
  for (Index k = 1; k <= 500; ++k) {
    EXPECT_EQ(relabeled(2 * k), direct(2 * k - 1));
    EXPECT_EQ(relabeled(2 * k - 1), direct(2 * k));
  }
}

TEST(SchemeEmbed, PrefixSupBounded) {
  std::mt19937_64 rng(11);
  const auto space = SeparableSpace::seq_lp(1.0, 3);
  const auto s = bw_extract(SubspaceD::finite_basis({alternating()}), 3, 2000);
  for (int i = 0; i < 10; ++i) {
    const Element x = sample_element(space, rng);
    EXPECT_LE(prefix_sup(scheme_embed(space, s, x), 2000), norm(space, x) + 1e-9);
    const auto d = scheme_isometry_defect(space, s, x, 300);
    EXPECT_TRUE(d.contract_holds());
  }
}

TEST(LimitAlong, Examples) {
  const auto s = odds_scheme();
  const auto two_alt = combine({2.0}, {alternating()});
  const auto l = limit_along(two_alt, s, s.prefix.size());
  EXPECT_EQ(l.value, -2.0);
  EXPECT_LE(l.err, 2 * s.delta_final());

  const auto z = limit_along(BoundedSeq::zero(), s, s.prefix.size());
  EXPECT_EQ(z.value, 0.0);
  EXPECT_EQ(z.err, s.delta_final());

  EXPECT_THROW(limit_along(two_alt, s, 1), Error);
  EXPECT_THROW(limit_along(two_alt, s, 33), SchemeExhausted);
}

TEST(LimitAlong, LinearOverFiniteBasis) {
  const SubspaceD D =
      SubspaceD::finite_basis({alternating(), BoundedSeq::periodic({1.0, -1.0, 0.0})});
  const auto s = bw_extract(D, 4, 4096);
  const LimitFunctional L(s, s.prefix.size());
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    const double a = coef(rng), b = coef(rng);
    const auto est = L(combine({a, b}, {D.member(1), D.member(2)}));
    EXPECT_LE(std::abs(est.value - (a * s.alpha[0] + b * s.alpha[1])), est.err);
  }
}

TEST(SeparationWitness, ZeroShiftMatchesPlainEmbedding) {
  const auto space = two_point_net();
  const auto w = separation_witness(space, trivial_scheme(), Element::dense({2.0}),
                                    BoundedSeq::zero(), 0.2, 5, 1000);
  EXPECT_GE(w.gap, 2 * 2 * 0.8);
  EXPECT_TRUE(witness_reverifies(w, scheme_embed(space, trivial_scheme(), Element::dense({2.0}))));
}

TEST(SeparationWitness, ShiftedByAlternating) {
  const auto space = two_point_net();
  const auto s = odds_scheme();
  const Element x = Element::dense({2.0});
  const auto w = separation_witness(space, s, x, alternating(), 0.2, 5, 1000);
  for (double v : w.plus_values) EXPECT_EQ(v, 3.0);
  for (double v : w.minus_values) EXPECT_EQ(v, -1.0);
  EXPECT_EQ(w.gap, 4.0);
  EXPECT_TRUE(witness_reverifies(w, combine({1.0, -1.0}, {scheme_embed(space, s, x), alternating()})));

  const auto w2 = separation_witness(space, s, scaled(x, 2.0), alternating(), 0.2, 5, 1000);
  for (double v : w2.plus_values) EXPECT_EQ(v, 5.0);
  for (double v : w2.minus_values) EXPECT_EQ(v, -3.0);
}

TEST(SeparationWitness, BudgetExhausted) {
  const auto space = two_point_net();
  EXPECT_THROW(
      separation_witness(space, odds_scheme(), Element::dense({2.0}), alternating(), 0.2, 20, 1000),
      WitnessBudgetExhausted);
}

TEST(BuildExtension, ZeroSubspace) {
  const auto space = SeparableSpace::finite_dim_lp(2, 2.0);
  const std::vector<Element> samples{Element::dense({3.0, 4.0})};
  ExtensionConfig config;
  const auto rec = build_extension(space, SubspaceD::zero(), samples, {}, config);
  EXPECT_EQ(rec.scheme.mode, SchemeMode::Trivial);
  for (Index k = 1; k <= 200; ++k)
    EXPECT_EQ(rec.embeddings[0](2 * k), apply_functional(norming_functional(space, k), samples[0]));
  EXPECT_TRUE(rec.all_pass());
}

TEST(BuildExtension, FiniteBasis) {
  const auto space = SeparableSpace::finite_dim_lp(2, 2.0);
  const std::vector<Element> samples{Element::dense({3.0, 4.0}), Element::dense({-1.0, 2.0})};
  const std::vector<BoundedSeq> ds{alternating(), combine({-0.5}, {alternating()})};
  ExtensionConfig config;
  const auto rec =
      build_extension(space, SubspaceD::finite_basis({alternating()}), samples, ds, config);
  EXPECT_EQ(rec.separation.size(), 6u);
  EXPECT_EQ(rec.separation[0].d_id, 0u);
  for (const auto& e : rec.separation) EXPECT_TRUE(e.pass) << e.x_id << "/" << e.d_id << e.error;
  for (const auto& e : rec.isometry) EXPECT_TRUE(e.pass) << e.error;
}

TEST(BuildExtension, DenseConstantFamily) {
  const auto space = SeparableSpace::seq_lp(2.0, 3);
  const auto D = SubspaceD::dense_sequence(
      [](std::size_t j) { return BoundedSeq::constant(1.0 / static_cast<double>(j)); });
  const std::vector<Element> samples{Element::sparse({{1, 1.0}, {3, -0.5}})};
  const std::vector<BoundedSeq> ds{D.member(1), D.member(3)};
  ExtensionConfig config;
  config.tol_schedule = {0.5, 0.25, 0.125};
  const auto rec = build_extension(space, D, samples, ds, config);
  EXPECT_EQ(rec.scheme.mode, SchemeMode::DenseSequence);
  EXPECT_EQ(rec.separation[1].limit.value, 1.0);
  EXPECT_NEAR(rec.separation[2].limit.value, 1.0 / 3.0, 1e-12);
  EXPECT_TRUE(rec.all_pass());
}

TEST(SchemeJson, RoundTrip) {
  const auto s = bw_extract(
      SubspaceD::finite_basis({alternating(), BoundedSeq::periodic({1.0, -1.0, 0.0})}), 4, 4096);
  const json j = s;
  const auto back = json::parse(j.dump()).get<IndexScheme>();
  EXPECT_EQ(back.mode, s.mode);
  EXPECT_EQ(back.prefix, s.prefix);
  EXPECT_EQ(back.alpha, s.alpha);
  EXPECT_EQ(back.tol_schedule, s.tol_schedule);
  EXPECT_EQ(back.member_delta, s.member_delta);
  EXPECT_EQ(back.scan_budget_used, s.scan_budget_used);
  ASSERT_EQ(back.constraints.size(), s.constraints.size());
  EXPECT_EQ(back.constraints[1].hi, s.constraints[1].hi);
  EXPECT_EQ(back.constraints[1].closed_top, s.constraints[1].closed_top);

  const std::vector<double> schedule{0.3, 0.1};
  const auto d = diagonal_extract(scaled_alternating_family(), 2, schedule, 300);
  const auto dback = json::parse(json(d).dump()).get<IndexScheme>();
  EXPECT_EQ(dback.alpha, d.alpha);
  EXPECT_EQ(dback.tol_schedule, d.tol_schedule);
}

}  // namespace
}  // namespace linf
