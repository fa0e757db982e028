#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "linf/embed.hpp"

namespace linf {
namespace {

SeparableSpace two_point_net() {
  return SeparableSpace::custom_net(1, 2.0, {{1.0}, {-1.0}}, {{1.0}, {-1.0}});
}

TEST(Embedding, SignPairing) {
  EXPECT_EQ(Embedding::psi(1).net_index, 1u);
  EXPECT_EQ(Embedding::psi(1).sign, 1.0);
  EXPECT_EQ(Embedding::psi(2).net_index, 1u);
  EXPECT_EQ(Embedding::psi(2).sign, -1.0);
  EXPECT_EQ(Embedding::psi(7).net_index, 4u);
  EXPECT_THROW(Embedding::psi(0), Error);

  const auto space = SeparableSpace::finite_dim_lp(3, 1.5);
  const auto image = embed_interleaved(space, Element::dense({0.3, -2.0, 1.0}));
  for (Index k = 1; k <= 500; ++k) EXPECT_EQ(image(2 * k), -image(2 * k - 1));
}

TEST(Embedding, CustomNetImage) {
  const auto image = embed_interleaved(two_point_net(), Element::dense({3.0}));
  EXPECT_EQ(image(1), 3.0);
  EXPECT_EQ(image(2), -3.0);
  EXPECT_EQ(image(3), -3.0);
  EXPECT_EQ(image(4), 3.0);
  EXPECT_EQ(image.bound(), 3.0);
}

TEST(Embedding, ZeroElementGivesZeroSequence) {
  const auto space = SeparableSpace::finite_dim_lp(2, 2.0);
  const auto image = embed_interleaved(space, Element::dense({0.0, 0.0}));
  EXPECT_EQ(prefix_sup(image, 1000), 0.0);
  EXPECT_EQ(image.bound(), 0.0);
}

TEST(Embedding, Linearity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (const auto& space :
       {SeparableSpace::finite_dim_lp(2, 1.0), SeparableSpace::seq_lp(2.0, 3),
        SeparableSpace::continuous_pl()}) {
    const Element x = sample_element(space, rng);
    const Element y = sample_element(space, rng);
    const double a = coef(rng), b = coef(rng);
    const auto tx = embed_interleaved(space, x);
    const auto ty = embed_interleaved(space, y);
    const auto txy = embed_interleaved(space, linear_combination(a, x, b, y));
    for (Index n = 1; n <= 400; ++n)
      EXPECT_NEAR(txy(n), a * tx(n) + b * ty(n), 1e-9 * (1.0 + std::abs(a) + std::abs(b)));
  }
}

TEST(Embedding, UpperBoundOnPrefixes) {
  std::mt19937_64 rng(7);
  for (const auto& space :
       {SeparableSpace::finite_dim_lp(3, kInfinity), SeparableSpace::seq_lp(1.0, 3),
        SeparableSpace::continuous_pl()}) {
    for (int i = 0; i < 10; ++i) {
      const Element x = sample_element(space, rng);
      EXPECT_LE(prefix_sup(embed_interleaved(space, x), 4000), norm(space, x) + 1e-9);
    }
  }
}

TEST(IsometryDefect, CustomNetIsExact) {
  const auto d = isometry_defect(two_point_net(), Element::dense({3.0}), 1);
  EXPECT_EQ(d.lower, 3.0);
  EXPECT_EQ(d.achieved, 3.0);
  EXPECT_EQ(d.upper, 3.0);
  EXPECT_TRUE(d.contract_holds());
}

TEST(IsometryDefect, LevelOneEuclidean) {
  const auto d =
      isometry_defect(SeparableSpace::finite_dim_lp(2, 2.0), Element::dense({3.0, 4.0}), 8);
  EXPECT_NEAR(d.upper, 5.0, 1e-9);
  EXPECT_NEAR(d.achieved, 7.0 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(d.lower, 4.291109799093206, 1e-9);
  EXPECT_TRUE(d.contract_holds());
}

TEST(IsometryDefect, Errors) {
  const auto space = SeparableSpace::finite_dim_lp(2, 2.0);
  try {
    isometry_defect(space, Element::dense({0.0, 0.0}), 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroElement);
  }
  EXPECT_THROW(isometry_defect(space, Element::dense({1.0, 0.0}), 0), Error);
}

TEST(OscillationWitness, CustomNetExample) {
  const auto space = two_point_net();
  const auto w = oscillation_witness(space, Element::dense({2.0}), 0.1, 3, 100);
  EXPECT_EQ(w.plus_indices, (std::vector<Index>{1, 5, 9}));
  EXPECT_EQ(w.minus_indices, (std::vector<Index>{2, 6, 10}));
  EXPECT_EQ(w.plus_values, (std::vector<double>{2.0, 2.0, 2.0}));
  EXPECT_EQ(w.minus_values, (std::vector<double>{-2.0, -2.0, -2.0}));
  EXPECT_EQ(w.gap, 4.0);
  EXPECT_TRUE(witness_reverifies(w, embed_interleaved(space, Element::dense({2.0}))));
}

TEST(OscillationWitness, GapBoundFormula) {
  const auto w = oscillation_witness(two_point_net(), Element::dense({1.0}), 0.5, 1, 10);
  EXPECT_GE(w.gap, 1.0);
  EXPECT_GE(w.gap, w.certified_gap());
}

TEST(OscillationWitness, EuclideanPlane) {
  const auto space = SeparableSpace::finite_dim_lp(2, 2.0);
  const Element x = Element::dense({3.0, 4.0});
  const auto w = oscillation_witness(space, x, 0.2, 5, 100000);
  EXPECT_EQ(w.size(), 5u);
  EXPECT_GE(w.gap, 8.0 - 1e-9);
  EXPECT_TRUE(witness_reverifies(w, embed_interleaved(space, x)));
}

TEST(OscillationWitness, BudgetExhaustedCarriesPartial) {
  const auto space = SeparableSpace::finite_dim_lp(2, 2.0);
  try {
    oscillation_witness(space, Element::dense({3.0, 4.0}), 0.01, 10, 8);
    FAIL();
  } catch (const WitnessBudgetExhausted& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExhausted);
    EXPECT_EQ(e.requested(), 10u);
    EXPECT_LT(e.partial().size(), 10u);
  }
  EXPECT_THROW(oscillation_witness(space, Element::dense({0.0, 0.0}), 0.2, 1, 10), Error);
  EXPECT_THROW(oscillation_witness(space, Element::dense({1.0, 0.0}), 1.5, 1, 10), Error);
}

TEST(OscillationWitness, TamperedWitnessFailsReverification) {
  const auto space = two_point_net();
  const auto image = embed_interleaved(space, Element::dense({2.0}));
  auto w = oscillation_witness(space, Element::dense({2.0}), 0.1, 3, 100);
  auto bad_value = w;
  bad_value.plus_values[1] = 2.5;
  EXPECT_FALSE(witness_reverifies(bad_value, image));
  auto bad_order = w;
  std::swap(bad_order.plus_indices[0], bad_order.plus_indices[1]);
  EXPECT_FALSE(witness_reverifies(bad_order, image));
  auto bad_gap = w;
  bad_gap.gap = 5.0;
  EXPECT_FALSE(witness_reverifies(bad_gap, image));
}

TEST(OscillationWitness, ScalesWithElement) {
  const auto space = SeparableSpace::finite_dim_lp(2, 1.0);
  const Element x = Element::dense({0.5, -1.5});
  const auto w1 = oscillation_witness(space, x, 0.2, 5, 100000);
  const auto w2 = oscillation_witness(space, scaled(x, 2.0), 0.2, 5, 100000);
  EXPECT_EQ(w1.plus_indices, w2.plus_indices);
  EXPECT_NEAR(w2.gap, 2.0 * w1.gap, 1e-9);
}

}  // namespace
}  // namespace linf
