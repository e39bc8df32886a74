#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "conestable/gallery.hpp"
#include "conestable/point_process.hpp"
#include "conestable/sampling.hpp"

using namespace conestable;

namespace {

CountingMeasure scalar_measure(const Cone& c, std::vector<std::pair<double, std::size_t>> atoms) {
  std::vector<Point> pts;
  for (auto [v, k] : atoms) pts.push_back({{v}, v, k, std::nullopt});
  return CountingMeasure::from_points(c, std::move(pts), Annulus::all());
}

}  // namespace

TEST(Annulus, ContainsAndCovers) {
  const auto a = Annulus::above(1.0);
  EXPECT_FALSE(a.contains(1.0));
  EXPECT_TRUE(a.contains(1.0 + 1e-12));
  EXPECT_TRUE(a.contains(kInfinity));
  EXPECT_TRUE(Annulus::below(2.0).contains(0.0));
  EXPECT_FALSE(Annulus::below(2.0).contains(2.0));
  EXPECT_TRUE(Annulus::above(1.0).covers(Annulus::above(2.0)));
  EXPECT_FALSE(Annulus::above(2.0).covers(Annulus::above(1.0)));
  EXPECT_EQ(Annulus::above(1.0).scaled(3.0), Annulus::above(3.0));
  EXPECT_EQ(intersect(Annulus::above(1.0), Annulus::below(4.0)), Annulus(1.0, 4.0, false, false));
  EXPECT_THROW(intersect(Annulus::above(5.0), Annulus::below(4.0)), std::invalid_argument);
  EXPECT_THROW(Annulus(2.0, 1.0), std::invalid_argument);
}

TEST(Binomial, DivisionAndMerge) {
  const HalfLinePlus c;
  const std::vector<Element> samples{{2.0}, {4.0}, {4.0}};
  const auto m = binomial_process(c, samples, 2.0);
  ASSERT_EQ(m.points().size(), 2u);
  EXPECT_EQ(m.points()[0].value, Element({1.0}));
  EXPECT_EQ(m.points()[0].multiplicity, 1u);
  EXPECT_EQ(m.points()[1].value, Element({2.0}));
  EXPECT_EQ(m.points()[1].multiplicity, 2u);
  EXPECT_EQ(m.total_count(), 3u);

  const std::vector<Element> one{{3.5}};
  const auto d = binomial_process(c, one, 1.0);
  ASSERT_EQ(d.points().size(), 1u);
  EXPECT_EQ(d.points()[0].value, Element({3.5}));
  EXPECT_THROW(binomial_process(c, one, 0.0), std::invalid_argument);
}

TEST(Binomial, KeepsDirectionIdsApart) {
  const CoordMax c(2);
  const std::vector<Element> samples{{1.0, 0.0}, {1.0, 0.0}};
  const std::vector<std::size_t> ids{0, 1};
  const auto m = binomial_process(c, samples, 1.0, ids);
  EXPECT_EQ(m.points().size(), 2u);
  const std::size_t g[] = {1};
  EXPECT_EQ(count_in(m, Annulus::all(), std::span<const std::size_t>(g)), 1u);
}

TEST(ScaleMeasure, Examples) {
  const HalfLinePlus c;
  const auto m = scalar_measure(c, {{1.0, 1}, {2.0, 1}});
  const auto id = scale_measure(c, m, 1.0);
  EXPECT_EQ(id.points()[0].value, m.points()[0].value);
  EXPECT_EQ(id.points()[1].value, m.points()[1].value);

  const auto s = scale_measure(c, m, 3.0);
  EXPECT_EQ(s.points()[0].value, Element({3.0}));
  EXPECT_EQ(s.points()[1].value, Element({6.0}));
  EXPECT_EQ(sum_points(c, s), Element({9.0}));

  const CoordMax cm(2);
  const auto v = CountingMeasure::from_points(cm, {{{1.0, 2.0}, 2.0, 1, std::nullopt}}, Annulus::all());
  EXPECT_EQ(scale_measure(cm, v, 0.5).points()[0].value, Element({0.5, 1.0}));
}

TEST(ScaleMeasure, SumCommutesWithScaling) {
  // sum of a-scaled points equals a times the sum of the points
  Rng rng(41);
  for (const auto& name : cone_names()) {
    const auto c = make_cone(name);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<Point> pts;
      for (int i = 0; i < 6; ++i) {
        auto x = c->random_element(rng);
        const double n = c->norm(x);
        pts.push_back({std::move(x), n, 1 + rng.below(3), std::nullopt});
      }
      const auto m = CountingMeasure::from_points(*c, std::move(pts), Annulus::all());
      const double a = std::exp(4.0 * rng.uniform() - 2.0);
      EXPECT_TRUE(c->equal(sum_points(*c, scale_measure(*c, m, a)), c->scale(a, sum_points(*c, m)))) << name;
    }
  }
}

TEST(Superpose, UnionOfMultisets) {
  const HalfLinePlus c;
  const CountingMeasure empty;
  const auto m2 = scalar_measure(c, {{1.0, 2}});
  const auto u = superpose(c, empty, m2);
  ASSERT_EQ(u.points().size(), 1u);
  EXPECT_EQ(u.points()[0].multiplicity, 2u);

  const auto both = superpose(c, scalar_measure(c, {{1.0, 1}}), m2);
  ASSERT_EQ(both.points().size(), 1u);
  EXPECT_EQ(both.points()[0].multiplicity, 3u);
}

TEST(Superpose, WindowIsIntersection) {
  const HalfLinePlus c;
  SpectralMeasure s(c, {{{1.0}, 1.0}});
  const auto a = stable_poisson_points(c, 1.0, s, 1.0, 1);
  const auto b = stable_poisson_points(c, 1.0, s, 2.0, 2);
  const auto u = superpose(c, a, b);
  EXPECT_EQ(u.window(), Annulus::above(2.0));
  EXPECT_EQ(count_in(u, Annulus::above(2.0)), count_in(a, Annulus::above(2.0)) + count_in(b, Annulus::above(2.0)));
}

TEST(CountIn, EmptyMonotoneAndGuarded) {
  const HalfLinePlus c;
  EXPECT_EQ(count_in(CountingMeasure{}, Annulus::above(1.0)), 0u);
  SpectralMeasure s(c, {{{1.0}, 1.0}});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto m = stable_poisson_points(c, 1.0, s, 1.0, seed);
    EXPECT_LE(count_in(m, Annulus::above(2.0)), count_in(m, Annulus::above(1.0)));
    EXPECT_THROW(count_in(m, Annulus::above(0.5)), std::domain_error);
  }
  const auto plain = scalar_measure(c, {{1.0, 1}});
  const std::size_t g[] = {0};
  EXPECT_THROW(count_in(plain, Annulus::all(), std::span<const std::size_t>(g)), std::invalid_argument);
}

TEST(SumPoints, Examples) {
  EXPECT_EQ(sum_points(HalfLinePlus{}, CountingMeasure{}), Element({0.0}));
  EXPECT_EQ(sum_points(HalfLineMin{}, CountingMeasure{}), Element({kInfinity}));
  const HalfLineMax mx;
  EXPECT_EQ(sum_points(mx, scalar_measure(mx, {{0.5, 1}, {2.0, 1}})), Element({2.0}));
  const HalfLinePlus plus;
  EXPECT_EQ(sum_points(plus, scalar_measure(plus, {{1.0, 2}, {3.0, 1}})), Element({5.0}));
}

TEST(CountingMeasure, RejectsPointsOutsideWindow) {
  const HalfLinePlus c;
  EXPECT_THROW(CountingMeasure::from_points(c, {{{0.5}, 0.5, 1, std::nullopt}}, Annulus::above(1.0)),
               std::invalid_argument);
  EXPECT_THROW(CountingMeasure::from_points(c, {{{1.5}, 1.5, 0, std::nullopt}}, Annulus::above(1.0)),
               std::invalid_argument);
}
