#include <gtest/gtest.h>

#include <cmath>

#include "conestable/cone.hpp"
#include "conestable/gallery.hpp"

using namespace conestable;

namespace {

// Scalar cone whose addition is lopsided: x + y = 2x + y.
class LopsidedCone final : public Cone {
 public:
  std::string name() const override { return "lopsided"; }
  std::size_t element_size() const override { return 1; }
  void add_assign(Element& acc, const Element& x) const override { acc[0] = 2.0 * acc[0] + x[0]; }
  void scale_assign(double a, Element& x) const override { x[0] *= a; }
  Element neutral() const override { return {0.0}; }
  std::optional<Element> origin() const override { return Element{0.0}; }
  double norm(const Element& x) const override { return x[0]; }
  double dist(const Element& x, const Element& y) const override { return std::abs(x[0] - y[0]); }
  ConeFlags flags() const override { return {}; }
  Element random_direction(Rng&) const override { return {1.0}; }
};

ConePtr cone(const char* name) { return make_cone(name); }

}  // namespace

TEST(Axioms, EveryGalleryConeIsGreen) {
  for (const auto& name : cone_names()) {
    const auto c = make_cone(name);
    const auto report = check_axioms(*c, 1000, 11);
    EXPECT_TRUE(report.ok()) << name << ": " << (report.ok() ? "" : to_string(report.violations[0].law) + " " +
                                                                     report.violations[0].witness);
  }
}

TEST(Axioms, HalfLineMaxWitnessesIdempotency) {
  const auto report = check_axioms(*cone("half-line-max"), 100, 3);
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(report.was_witnessed(Law::kIdempotency));
  EXPECT_FALSE(check_axioms(*cone("half-line-plus"), 100, 3).was_witnessed(Law::kIdempotency));
}

TEST(Axioms, WronglyClaimedSecondDistributivity) {
  auto flags = make_cone("power")->flags();
  flags.second_distributive = true;
  const auto liar = with_flags(make_cone("power"), flags);

  const auto v = check_tuple(*liar, {{1.0}, {1.0}, {1.0}, 1.0, 1.0});
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().law, Law::kSecondDistributivity);

  EXPECT_TRUE(check_axioms(*liar, 200, 5).has_violation(Law::kSecondDistributivity));
}

TEST(Axioms, WronglyClaimedIdempotency) {
  auto flags = make_cone("half-line-plus")->flags();
  flags.idempotent = true;
  EXPECT_TRUE(check_axioms(*with_flags(make_cone("half-line-plus"), flags), 50, 5).has_violation(Law::kIdempotency));
}

TEST(Axioms, BrokenAdditionIsCaught) {
  const auto report = check_axioms(LopsidedCone{}, 100, 1);
  EXPECT_TRUE(report.has_violation(Law::kCommutativity));
  EXPECT_TRUE(report.has_violation(Law::kNeutral) || report.has_violation(Law::kAssociativity));
}

TEST(Axioms, SubInvariantNormIsLipschitz) {
  Rng rng(19);
  for (const auto& name : cone_names()) {
    const auto c = make_cone(name);
    if (!c->flags().sub_invariant) continue;
    for (int i = 0; i < 500; ++i) {
      const auto x = c->random_element(rng);
      const auto h = c->random_element(rng);
      const double lhs = std::abs(c->norm(c->add(x, h)) - c->norm(x));
      EXPECT_LE(lhs, c->norm(h) * (1.0 + 1e-12) + 1e-12) << name;
    }
  }
}

TEST(Axioms, ZeroTrialsRejected) { EXPECT_THROW(check_axioms(*cone("half-line-plus"), 0, 1), std::invalid_argument); }

TEST(Equality, ToleranceIsRelative) {
  const auto c = cone("half-line-plus");
  EXPECT_TRUE(c->equal({1e6}, {1e6 + 1e-4}));
  EXPECT_FALSE(c->equal({1e6}, {1e6 + 1e-2}));
  EXPECT_TRUE(c->equal({0.0}, {5e-10}));
  EXPECT_FALSE(c->equal({0.0}, {5e-9}));
}

TEST(Polar, ScalarCone) {
  const auto p = polar(*cone("half-line-plus"), {3.0});
  EXPECT_DOUBLE_EQ(p.radius, 3.0);
  EXPECT_EQ(p.direction, Element({1.0}));
}

TEST(Polar, CoordMaxUsesSupNorm) {
  const auto p = polar(*cone("coord-max"), {2.0, 4.0});
  EXPECT_DOUBLE_EQ(p.radius, 4.0);
  EXPECT_EQ(p.direction, Element({0.5, 1.0}));
}

TEST(Polar, DiskSupportVector) {
  const ConvexBody2D body(32);
  const auto p = polar(body, body.disk(2.0));
  EXPECT_DOUBLE_EQ(p.radius, 2.0);
  EXPECT_TRUE(body.equal(p.direction, body.disk(1.0)));
}

TEST(Polar, RejectsOriginNeutralAndInfinity) {
  EXPECT_THROW(polar(*cone("half-line-plus"), {0.0}), std::invalid_argument);
  EXPECT_THROW(polar(*cone("half-line-min"), {kInfinity}), std::invalid_argument);
  EXPECT_THROW(polar(*cone("harmonic"), {0.0}), std::invalid_argument);
}

TEST(Polar, ReconstructsSampledElements) {
  Rng rng(23);
  for (const auto& name : cone_names()) {
    const auto c = make_cone(name);
    for (int i = 0; i < 200; ++i) {
      const auto x = c->random_element(rng);
      const double r = c->norm(x);
      if (!std::isfinite(r) || r == 0.0 || c->equal(x, c->neutral())) continue;
      const auto p = polar(*c, x);
      EXPECT_NEAR(c->norm(p.direction), 1.0, 1e-12) << name;
      EXPECT_TRUE(c->equal(c->scale(p.radius, p.direction), x)) << name;
    }
  }
}

TEST(StableElement, NeutralIsStableForAnyAlpha) {
  for (const auto& name : cone_names()) {
    const auto c = make_cone(name);
    for (double alpha : {-2.0, -0.5, 0.3, 1.0, 2.5}) {
      EXPECT_TRUE(is_alpha_stable_element(*c, c->neutral(), alpha)) << name << " " << alpha;
    }
  }
}

TEST(StableElement, PowerConeElementsAreBetaStable) {
  for (double beta : {0.5, 1.0, 2.0, 3.5}) {
    const PowerCone c(beta);
    Rng rng(29);
    for (int i = 0; i < 1000; ++i) {
      EXPECT_TRUE(is_alpha_stable_element(c, c.random_element(rng), beta)) << beta;
    }
    EXPECT_FALSE(is_alpha_stable_element(c, {1.0}, beta + 0.5));
  }
}

TEST(StableElement, ArithmeticCounterexample) {
  EXPECT_FALSE(is_alpha_stable_element(*cone("half-line-plus"), {1.0}, 0.5));
  EXPECT_TRUE(is_alpha_stable_element(*cone("half-line-plus"), {1.0}, 1.0));
}

TEST(StableElement, NoneBelowOneInSubInvariantCones) {
  for (const auto& name : cone_names()) {
    const auto c = make_cone(name);
    if (!c->flags().sub_invariant) continue;
    Rng rng(31);
    for (int i = 0; i < 1000; ++i) {
      const auto z = c->random_element(rng);
      const double r = c->norm(z);
      if (!(r > 0.0) || !std::isfinite(r)) continue;
      for (double alpha : {0.3, 0.7}) EXPECT_FALSE(is_alpha_stable_element(*c, z, alpha)) << name;
    }
  }
}

TEST(StableElement, RejectsZeroAlpha) {
  EXPECT_THROW(is_alpha_stable_element(*cone("half-line-plus"), {1.0}, 0.0), std::invalid_argument);
}
