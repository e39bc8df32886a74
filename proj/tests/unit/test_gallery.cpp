#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "conestable/gallery.hpp"
#include "oracles.hpp"

using namespace conestable;

TEST(Registry, EightConesByName) {
  const auto names = cone_names();
  EXPECT_EQ(names.size(), 8u);
  for (const auto& n : names) EXPECT_EQ(make_cone(n)->name(), n);
  EXPECT_THROW(make_cone("half-line-times"), std::invalid_argument);
  EXPECT_THROW(make_cone("power", {.beta = -1.0}), std::invalid_argument);
  EXPECT_THROW(make_cone("coord-max", {.dim = 0}), std::invalid_argument);
  EXPECT_THROW(make_cone("convex-body-2d", {.grid = 3}), std::invalid_argument);
}

TEST(HalfLineMin, NeutralIsInfinity) {
  const HalfLineMin c;
  EXPECT_EQ(c.add({3.0}, c.neutral()), Element({3.0}));
  EXPECT_EQ(c.add({3.0}, {0.0}), Element({0.0}));
  EXPECT_EQ(c.scale(0.5, c.neutral()), c.neutral());
  EXPECT_TRUE(std::isinf(c.norm(c.neutral())));
  EXPECT_FALSE(c.flags().sub_invariant);
}

TEST(Harmonic, SumsAndLimits) {
  const HarmonicCone c;
  EXPECT_DOUBLE_EQ(c.add({2.0}, {2.0})[0], 1.0);
  EXPECT_EQ(c.add({5.0}, {0.0}), Element({0.0}));
  EXPECT_EQ(c.add({5.0}, {kInfinity}), Element({5.0}));
}

TEST(Harmonic, ReciprocalIsHomomorphismToHalfLinePlus) {
  const HarmonicCone h;
  const HalfLinePlus p;
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto x = h.random_element(rng);
    const auto y = h.random_element(rng);
    const double a = std::exp(4.0 * rng.uniform() - 2.0);
    const auto lhs = Element{1.0 / h.add(x, y)[0]};
    const auto rhs = p.add({1.0 / x[0]}, {1.0 / y[0]});
    EXPECT_TRUE(p.equal(lhs, rhs));
    // scaling by a on the harmonic side is scaling by 1/a after the map
    EXPECT_TRUE(p.equal(Element{1.0 / h.scale(a, x)[0]}, p.scale(1.0 / a, {1.0 / x[0]})));
  }
}

TEST(Power, MatchesDirectFormula) {
  const PowerCone c(2.0);
  EXPECT_DOUBLE_EQ(c.add({3.0}, {4.0})[0], 5.0);
  EXPECT_DOUBLE_EQ(c.add({1.0}, {1.0})[0], std::sqrt(2.0));
  EXPECT_EQ(c.add({0.0}, {0.0}), Element({0.0}));
  // large values stay finite
  EXPECT_NEAR(c.add({1e200}, {1e200})[0] / 1e200, std::sqrt(2.0), 1e-12);
}

TEST(Power, SubInvarianceIsProbed) {
  const PowerCone two(2.0);
  EXPECT_TRUE(two.sub_invariance_probed());
  EXPECT_TRUE(two.flags().sub_invariant);
  // beta < 1 makes x + h grow faster than h near zero
  EXPECT_FALSE(PowerCone(0.5).flags().sub_invariant);
  EXPECT_FALSE(PowerCone(1.5, false).sub_invariance_probed());
  EXPECT_FALSE(PowerCone(2.0).flags().second_distributive);
  EXPECT_TRUE(PowerCone(1.0).flags().second_distributive);
}

TEST(CoordMax, CoordinatewiseMaximum) {
  const CoordMax c(3);
  EXPECT_EQ(c.add({1.0, 5.0, 0.0}, {2.0, 1.0, 0.0}), Element({2.0, 5.0, 0.0}));
  EXPECT_DOUBLE_EQ(c.norm({1.0, 5.0, 0.5}), 5.0);
  EXPECT_EQ(c.id(), "coord-max(d=3)");
  EXPECT_THROW(c.validate({1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(c.validate({1.0, -2.0, 0.0}), std::invalid_argument);
}

TEST(ConvexBody, SupportVectorValidation) {
  const std::size_t m = 16;
  EXPECT_TRUE(validate_support_vector(std::vector<double>(m, 1.0)));

  const ConvexBody2D body(m);
  const auto point = oracle::point_support(0.3, -0.7, m);
  EXPECT_TRUE(validate_support_vector(point));

  std::vector<double> spike(m, 1.0);
  spike.back() = -10.0;
  EXPECT_FALSE(validate_support_vector(spike));
  // brute scan: the inequality fails at the spike's neighbours or the spike itself
  const double c = std::cos(2.0 * std::numbers::pi / m);
  bool found = false;
  for (std::size_t i = 0; i < m; ++i) {
    const double prev = spike[(i + m - 1) % m], next = spike[(i + 1) % m];
    if (prev + next < 2.0 * spike[i] * c) found = true;
  }
  EXPECT_TRUE(found);
  EXPECT_THROW(validate_support_vector(std::vector<double>(3, 1.0)), std::invalid_argument);
}

TEST(ConvexBody, HullsAreValid) {
  const ConvexBody2D body(64);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) EXPECT_NO_THROW(body.validate(body.random_element(rng)));
  EXPECT_NO_THROW(body.validate(body.segment({-1.0, 0.0}, {1.0, 0.0})));
  EXPECT_NO_THROW(body.validate(body.disk(0.5, {2.0, 1.0})));
}

TEST(Steiner, Examples) {
  const ConvexBody2D body(48);
  const auto disk = steiner_point(body.disk(3.0).values());
  EXPECT_NEAR(disk[0], 0.0, 1e-12);
  EXPECT_NEAR(disk[1], 0.0, 1e-12);

  const auto shifted = steiner_point(body.disk(2.0, {1.0, 0.0}).values());
  EXPECT_NEAR(shifted[0], 1.0, 1.0 / (48.0 * 48.0));
  EXPECT_NEAR(shifted[1], 0.0, 1.0 / (48.0 * 48.0));

  const auto zero = steiner_point(body.neutral().values());
  EXPECT_EQ(zero[0], 0.0);
  EXPECT_EQ(zero[1], 0.0);

  const auto pt = steiner_point(oracle::point_support(0.25, -1.5, 48));
  EXPECT_NEAR(pt[0], 0.25, 1e-12);
  EXPECT_NEAR(pt[1], -1.5, 1e-12);
}

TEST(Steiner, LinearUnderMinkowskiAddition) {
  const ConvexBody2D body(64);
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const auto k = body.random_element(rng);
    const auto l = body.random_element(rng);
    const double a = std::exp(6.0 * rng.uniform() - 3.0);
    const auto sk = steiner_point(k.values());
    const auto sl = steiner_point(l.values());
    const auto ssum = steiner_point(body.add(k, body.scale(a, l)).values());
    const double scale = std::max({1.0, std::abs(sk[0]), std::abs(sk[1]), a * std::abs(sl[0]), a * std::abs(sl[1])});
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(ssum[j], sk[j] + a * sl[j], kEqualityTolerance * scale);
  }
  EXPECT_THROW(steiner_point(std::vector<double>{1, 1, 1, 1, 1, -10}), std::invalid_argument);
}

TEST(ConvexBody, HausdorffDistanceIsTranslationInvariant) {
  const ConvexBody2D body(64);
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const auto k = body.random_element(rng);
    const auto m = body.random_element(rng);
    const auto l = body.random_element(rng);
    const double d = body.dist(k, m);
    EXPECT_NEAR(body.dist(body.add(k, l), body.add(m, l)), d,
                kEqualityTolerance * std::max({1.0, body.norm(k), body.norm(m), body.norm(l)}));
  }
}

TEST(DiscreteMeasure, TotalVariation) {
  EXPECT_EQ(kantorovich_tv({0.5, 1.0}, {0.5, 1.0}), 0.0);
  EXPECT_EQ(kantorovich_tv({1.0, 0.0}, {0.0, 1.0}), 2.0);
  EXPECT_THROW(kantorovich_tv({1.0}, {1.0, 0.0}), std::invalid_argument);

  const DiscreteMeasure c(5);
  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const auto m = c.random_element(rng);
    const auto h = c.random_element(rng);
    EXPECT_NEAR(c.dist(c.add(m, h), m), c.norm(h), 1e-12 * std::max(1.0, c.norm(m)));
  }
}

TEST(DiscreteMeasure, RejectsNegativeMass) {
  const DiscreteMeasure c(3);
  EXPECT_THROW(c.validate({1.0, -0.1, 0.0}), std::invalid_argument);
  EXPECT_NO_THROW(c.validate({1.0, 0.0, 0.0}));
}
