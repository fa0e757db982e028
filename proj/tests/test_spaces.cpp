#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "linf/spaces.hpp"

namespace linf {
namespace {

std::vector<SeparableSpace> builtin_spaces() {
  std::vector<SeparableSpace> out;
  for (std::size_t dim : {1u, 2u, 3u})
    for (double p : {1.0, 1.5, 2.0, kInfinity}) out.push_back(SeparableSpace::finite_dim_lp(dim, p));
  for (double p : {1.0, 2.0, 3.5}) out.push_back(SeparableSpace::seq_lp(p, 3));
  out.push_back(SeparableSpace::continuous_pl());
  return out;
}

SeparableSpace two_point_net() {
  return SeparableSpace::custom_net(1, 2.0, {{1.0}, {-1.0}}, {{1.0}, {-1.0}});
}

TEST(Norm, Examples) {
  EXPECT_EQ(norm(SeparableSpace::finite_dim_lp(2, 2.0), Element::dense({3.0, 4.0})), 5.0);
  EXPECT_EQ(norm(SeparableSpace::seq_lp(1.0, 8), Element::sparse({{1, 1.0}, {5, -2.0}})), 3.0);
  EXPECT_EQ(norm(SeparableSpace::continuous_pl(),
                 Element::piecewise({0.0, 0.5, 1.0}, {0.0, 2.0, -1.0})),
            2.0);
  EXPECT_EQ(norm(SeparableSpace::finite_dim_lp(3, kInfinity), Element::dense({1.0, -4.0, 2.0})),
            4.0);
}

TEST(Norm, ZeroOnlyAtZero) {
  const auto space = SeparableSpace::finite_dim_lp(3, 1.5);
  EXPECT_EQ(norm(space, Element::dense({0.0, 0.0, 0.0})), 0.0);
  EXPECT_GT(norm(space, Element::dense({0.0, 1e-300, 0.0})), 0.0);
  EXPECT_EQ(norm(SeparableSpace::seq_lp(2.0, 4), Element::sparse({{2, 0.0}})), 0.0);
}

TEST(Norm, KindMismatch) {
  try {
    norm(SeparableSpace::finite_dim_lp(2, 2.0), Element::dense({1.0, 2.0, 3.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::KindMismatch);
  }
  EXPECT_THROW(norm(SeparableSpace::continuous_pl(), Element::dense({1.0})), Error);
  EXPECT_THROW(norm(SeparableSpace::seq_lp(1.0, 2), Element::sparse({{3, 1.0}})), Error);
}

TEST(Norm, Homogeneity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(-10.0, 10.0);
  for (const auto& space : builtin_spaces()) {
    for (int i = 0; i < 50; ++i) {
      const Element x = sample_element(space, rng);
      const double a = c(rng);
      EXPECT_NEAR(norm(space, scaled(x, a)), std::abs(a) * norm(space, x), 1e-9)
          << space.spec();
    }
  }
}

TEST(Element, CanonicalRepresentations) {
  const auto s = Element::sparse({{1, 0.0}, {4, 2.0}});
  EXPECT_EQ(std::get<SparseVector>(s.rep()).size(), 1u);
  EXPECT_THROW(Element::piecewise({0.0, 0.5}, {1.0, 2.0}), Error);
  EXPECT_THROW(Element::piecewise({0.0, 0.5, 0.5, 1.0}, {1.0, 2.0, 3.0, 4.0}), Error);
  EXPECT_THROW(Element::piecewise({0.0, 1.0}, {1.0}), Error);
}

TEST(Element, PiecewiseCombinationMergesBreakpoints) {
  const auto f = Element::piecewise({0.0, 0.5, 1.0}, {0.0, 2.0, 0.0});
  const auto g = Element::piecewise({0.0, 0.25, 1.0}, {1.0, 1.0, 1.0});
  const auto h = linear_combination(1.0, f, -1.0, g);
  const auto& pl = std::get<PiecewiseLinear>(h.rep());
  EXPECT_EQ(pl.breakpoints, (std::vector<double>{0.0, 0.25, 0.5, 1.0}));
  EXPECT_EQ(pl.values, (std::vector<double>{-1.0, 0.0, 1.0, -1.0}));
}

TEST(NetPoint, CustomNetCycles) {
  const auto space = two_point_net();
  EXPECT_EQ(std::get<std::vector<double>>(net_point(space, 1).rep()), std::vector<double>{1.0});
  EXPECT_EQ(std::get<std::vector<double>>(net_point(space, 2).rep()), std::vector<double>{-1.0});
  EXPECT_EQ(std::get<std::vector<double>>(net_point(space, 3).rep()), std::vector<double>{1.0});
}

TEST(NetPoint, FirstGridDirections) {
  const auto space = SeparableSpace::finite_dim_lp(2, 2.0);
  const auto u1 = std::get<std::vector<double>>(net_point(space, 1).rep());
  EXPECT_NEAR(u1[0], -std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(u1[1], -std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(norm(space, net_point(space, 1)), 1.0, 1e-9);
  // level 1 lists (-1,-1) (-1,0) (-1,1) (0,-1) (0,1) (1,-1) (1,0) (1,1)
  const auto u5 = std::get<std::vector<double>>(net_point(space, 5).rep());
  EXPECT_EQ(u5, (std::vector<double>{0.0, 1.0}));
  const auto u9 = std::get<std::vector<double>>(net_point(space, 9).rep());
  EXPECT_NEAR(u9[0], -std::sqrt(0.5), 1e-15);  // level 2 starts at (-2,-2)

  const auto seq = SeparableSpace::seq_lp(1.0, 4);
  const auto v = std::get<SparseVector>(net_point(seq, 1).rep());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.begin()->first, 1u);
  EXPECT_EQ(std::abs(v.begin()->second), 1.0);
}

TEST(NetPoint, IndexZero) {
  const auto space = SeparableSpace::finite_dim_lp(2, 2.0);
  EXPECT_THROW(net_point(space, 0), Error);
  EXPECT_THROW(norming_functional(space, 0), Error);
}

TEST(NetPoint, CursorAgreesWithDirectDecoding) {
  auto spaces = builtin_spaces();
  spaces.push_back(two_point_net());
  for (const auto& space : spaces) {
    NetCursor cursor(space);
    for (Index k = 1; k <= 3000; ++k, cursor.advance()) {
      ASSERT_EQ(cursor.index(), k);
      ASSERT_EQ(distance(space, cursor.point(), net_point(space, k)), 0.0)
          << space.spec() << " k=" << k;
    }
  }
}

TEST(NetPoint, LevelSizes) {
  // (2t+1)^n - 1 integer directions per level
  const auto space = SeparableSpace::finite_dim_lp(2, 2.0);
  NetCursor cursor(space);
  for (Index k = 1; k <= 8 + 24; ++k, cursor.advance()) EXPECT_EQ(cursor.level(), k <= 8 ? 1u : 2u);
  EXPECT_EQ(cursor.level(), 3u);

  // C[0,1]: 8 + 24 + 48 points on {0, 1}, then (2t+1)^3 - 1 on {0, 1/2, 1}
  NetCursor pl(SeparableSpace::continuous_pl());
  for (Index k = 1; k <= 80; ++k) pl.advance();
  EXPECT_EQ(pl.level(), 4u);
  EXPECT_EQ(std::get<PiecewiseLinear>(pl.point().rep()).breakpoints.size(), 3u);
}

TEST(NormingFunctional, Examples) {
  const auto l2 = SeparableSpace::finite_dim_lp(3, 2.0);
  for (Index k = 1; k <= 40; ++k) {
    const auto u = std::get<std::vector<double>>(net_point(l2, k).rep());
    EXPECT_EQ(std::get<std::vector<double>>(norming_functional(l2, k).rep()), u);
  }
  for (double p : {1.0, 1.5, kInfinity}) {
    const auto line = SeparableSpace::finite_dim_lp(1, p);
    const auto phi = duality_map(line, Element::dense({-1.0}));
    EXPECT_EQ(std::get<std::vector<double>>(phi.rep()), std::vector<double>{-1.0});
  }
  const auto pl = SeparableSpace::continuous_pl();
  const auto phi = duality_map(pl, Element::piecewise({0.0, 0.5, 1.0}, {0.0, 1.0, 0.2}));
  const auto mass = std::get<PointMass>(phi.rep());
  EXPECT_EQ(mass.location, 0.5);
  EXPECT_EQ(mass.sign, 1.0);
}

TEST(NormingFunctional, TiesGoToTheFirstIndex) {
  const auto linf3 = SeparableSpace::finite_dim_lp(3, kInfinity);
  const auto phi = duality_map(linf3, Element::dense({0.5, -1.0, 1.0}));
  EXPECT_EQ(std::get<std::vector<double>>(phi.rep()), (std::vector<double>{0.0, -1.0, 0.0}));
  const auto pl = duality_map(SeparableSpace::continuous_pl(),
                              Element::piecewise({0.0, 0.5, 1.0}, {-1.0, 0.0, 1.0}));
  EXPECT_EQ(std::get<PointMass>(pl.rep()).location, 0.0);
  EXPECT_EQ(std::get<PointMass>(pl.rep()).sign, -1.0);
}

TEST(ApplyFunctional, Examples) {
  EXPECT_NEAR(apply_functional(Functional(std::vector<double>{0.6, 0.8}), Element::dense({3.0, 4.0})),
              5.0, 1e-12);
  const auto x = Element::piecewise({0.0, 0.5, 1.0}, {0.0, 2.0, 0.0});
  EXPECT_EQ(apply_functional(Functional(PointMass{0.5, 1.0}), x), 2.0);
  EXPECT_EQ(apply_functional(Functional(SparseVector{{1, 1.0}, {2, -1.0}}),
                             Element::sparse({{1, 1.0}, {2, -2.0}})),
            3.0);
  EXPECT_THROW(apply_functional(Functional(PointMass{0.5, 1.0}), Element::dense({1.0})), Error);
}

TEST(NetDistance, Examples) {
  const auto net = two_point_net();
  EXPECT_EQ(net_distance(net, Element::dense({1.0}), 1), 0.0);
  const auto l2 = SeparableSpace::finite_dim_lp(2, 2.0);
  // brute force over the 8 level-1 directions; nearest is (1,1)/sqrt(2)
  EXPECT_NEAR(net_distance(l2, Element::dense({0.6, 0.8}), 8), 0.14177804018135864, 1e-12);
  try {
    net_distance(l2, Element::dense({3.0, 4.0}), 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotUnitVector);
  }
  EXPECT_THROW(net_distance(l2, Element::dense({0.6, 0.8}), 0), Error);
}

TEST(NetDistance, NonincreasingAndDense) {
  std::mt19937_64 rng(17);
  for (std::size_t dim : {1u, 2u, 3u}) {
    for (double p : {1.0, 1.5, 2.0, kInfinity}) {
      const auto space = SeparableSpace::finite_dim_lp(dim, p);
      Index through5 = 0;
      for (Index t = 1; t <= 5; ++t) through5 += detail::level_count(space, t);
      for (int i = 0; i < 5; ++i) {
        const Element x = sample_element(space, rng);
        const Element v = scaled(x, 1.0 / norm(space, x));
        double prev = net_distance(space, v, 16);
        for (Index K = 32; K <= 1024; K *= 2) {
          const double cur = net_distance(space, v, K);
          EXPECT_LE(cur, prev);
          prev = cur;
        }
        EXPECT_LT(net_distance(space, v, through5), 0.2) << space.spec();
      }
    }
  }
}

TEST(Invariants, UnitNetPointsAndNormingValues) {
  for (const auto& space : builtin_spaces()) {
    NetCursor cursor(space);
    for (Index k = 1; k <= 10000; ++k, cursor.advance()) {
      const double n = norm(space, cursor.point());
      const double pairing = apply_functional(cursor.functional(), cursor.point());
      ASSERT_NEAR(n, 1.0, 1e-9) << space.spec() << " k=" << k;
      ASSERT_NEAR(pairing, 1.0, 1e-9) << space.spec() << " k=" << k;
    }
  }
}

TEST(Invariants, DualNormAtMostOne) {
  std::mt19937_64 rng(23);
  for (const auto& space : builtin_spaces()) {
    std::vector<Functional> phis;
    NetCursor cursor(space);
    for (Index k = 1; k <= 1000; ++k, cursor.advance()) phis.push_back(cursor.functional());
    for (int i = 0; i < 1000; ++i) {
      const Element x = sample_element(space, rng);
      const double bound = norm(space, x) * (1.0 + 1e-9);
      for (const auto& phi : phis) ASSERT_LE(std::abs(apply_functional(phi, x)), bound);
    }
  }
}

TEST(CustomNet, Validation) {
  EXPECT_THROW(SeparableSpace::custom_net(1, 2.0, {{2.0}}, {{0.5}}), Error);
  EXPECT_THROW(SeparableSpace::custom_net(1, 2.0, {{1.0}}, {{0.5}}), Error);
  EXPECT_THROW(SeparableSpace::custom_net(2, 2.0, {{1.0, 0.0}}, {{1.0, 1.0}}), Error);
  EXPECT_THROW(SeparableSpace::custom_net(1, 2.0, {}, {}), Error);
  EXPECT_NO_THROW(SeparableSpace::custom_net(2, 1.0, {{0.5, 0.5}}, {{1.0, 1.0}}));
}

TEST(SpaceSpec, Strings) {
  EXPECT_EQ(SeparableSpace::finite_dim_lp(2, kInfinity).spec(), "fdlp:dim=2,p=inf");
  EXPECT_EQ(SeparableSpace::finite_dim_lp(3, 1.5).spec(), "fdlp:dim=3,p=1.5");
  EXPECT_EQ(SeparableSpace::seq_lp(2.0, 4).spec(), "seqlp:p=2,support=4");
  EXPECT_EQ(SeparableSpace::continuous_pl().spec(), "c01");
  EXPECT_THROW(SeparableSpace::finite_dim_lp(0, 2.0), Error);
  EXPECT_THROW(SeparableSpace::seq_lp(kInfinity, 2), Error);
  EXPECT_THROW(SeparableSpace::finite_dim_lp(2, 0.5), Error);
}

}  // namespace
}  // namespace linf
