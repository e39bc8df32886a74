#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "conestable/gallery.hpp"
#include "conestable/stat_verify.hpp"
#include "oracles.hpp"

using namespace conestable;

namespace {

std::vector<double> uniforms(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform();
  return v;
}

SpectralMeasure unit_atom(const Cone& c) { return SpectralMeasure(c, {{{1.0}, 1.0}}); }

}  // namespace

TEST(Kolmogorov, MatchesSeriesOracle) {
  for (double lambda : {0.3, 0.5, 0.8, 1.0, 1.17, 1.19, 1.36, 1.63, 2.0, 3.0}) {
    EXPECT_NEAR(kolmogorov_sf(lambda), oracle::kolmogorov_sf(lambda), 1e-12) << lambda;
  }
  EXPECT_EQ(kolmogorov_sf(0.0), 1.0);
  // classical critical values
  EXPECT_NEAR(kolmogorov_sf(1.3581), 0.05, 1e-4);
  EXPECT_NEAR(kolmogorov_sf(1.6276), 0.01, 1e-4);
}

TEST(KsOneSample, DegenerateSample) {
  const std::vector<double> zeros(100, 0.0);
  const auto r = ks_one_sample(zeros, [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_DOUBLE_EQ(r.statistic, 1.0);
  EXPECT_FALSE(r.pass);
}

TEST(KsOneSample, NullCalibration) {
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = ks_one_sample(uniforms(seed, 1000), [](double x) { return std::clamp(x, 0.0, 1.0); });
    rejected += r.p_value < 0.01 ? 1 : 0;
  }
  EXPECT_LE(rejected, 5);
}

TEST(KsOneSample, RejectsBadInput) {
  const auto v = uniforms(1, 100);
  EXPECT_THROW(ks_one_sample(uniforms(1, 5), [](double x) { return x; }), std::invalid_argument);
  EXPECT_THROW(ks_one_sample(v, [](double x) { return 2.0 * x; }), std::invalid_argument);
  EXPECT_THROW(ks_one_sample(v, [](double x) { return 1.0 - x; }), std::invalid_argument);
}

TEST(KsTwoSample, IdenticalSamples) {
  const auto a = uniforms(3, 500);
  const auto r = ks_two_sample(a, a);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(KsTwoSample, MatchesBruteForceWithTies) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto a = uniforms(seed, 150);
    auto b = uniforms(seed + 100, 230);
    for (auto& x : a) x = std::round(x * 20.0);
    for (auto& x : b) x = std::round(x * 23.0) * 20.0 / 23.0;
    EXPECT_NEAR(ks_two_sample(a, b).statistic, oracle::ks_two_sample_brute(a, b), 1e-12);
  }
}

TEST(KsTwoSample, NullCalibration) {
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    rejected += ks_two_sample(uniforms(2 * seed, 800), uniforms(2 * seed + 1, 600)).p_value < 0.01 ? 1 : 0;
  }
  EXPECT_LE(rejected, 5);
}

TEST(Poisson, NearDegenerateMean) {
  const std::vector<std::size_t> zeros(100, 0);
  const auto r = poisson_dispersion_test(zeros, 1e-6);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.parts.size(), 1u);
}

TEST(Poisson, CalibratedOnPoissonCounts) {
  int passed = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    std::vector<std::size_t> counts(1000);
    for (auto& c : counts) c = oracle::poisson(rng, 4.0);
    passed += poisson_dispersion_test(counts, 4.0).pass ? 1 : 0;
  }
  EXPECT_GE(passed, 95);
}

TEST(Poisson, BinomialIsUnderdispersed) {
  Rng rng(8);
  std::vector<std::size_t> counts(10'000);
  for (auto& c : counts) c = oracle::binomial(rng, 10, 0.4);
  const auto r = poisson_dispersion_test(counts, 4.0);
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.parts.size(), 2u);
  EXPECT_TRUE(r.parts[0].pass);
  EXPECT_FALSE(r.parts[1].pass);
  EXPECT_NEAR(r.parts[1].statistic, 0.4, 0.05);
}

TEST(Protocol, NullPassProbability) {
  // 17 of 20 seeds at per-seed acceptance 0.99
  EXPECT_GE(binomial_upper_tail(20, 0.99, 17), 0.99);
  EXPECT_NEAR(binomial_upper_tail(3, 0.5, 2), 0.5, 1e-14);
  EXPECT_EQ(binomial_upper_tail(5, 0.3, 0), 1.0);
  EXPECT_EQ(binomial_upper_tail(5, 0.3, 6), 0.0);
  double brute = 0.0;
  for (int k = 7; k <= 12; ++k) brute += std::tgamma(13.0) / std::tgamma(k + 1.0) / std::tgamma(13.0 - k) *
                                         std::pow(0.35, k) * std::pow(0.65, 12 - k);
  EXPECT_NEAR(binomial_upper_tail(12, 0.35, 7), brute, 1e-13);
}

TEST(Protocol, RunsInSeedOrder) {
  Protocol p;
  p.jobs = 3;
  const auto report = run_protocol("even", p, [](std::uint64_t seed) {
    TestReport r;
    r.statistic = static_cast<double>(seed);
    r.pass = seed % 2 == 0;
    return r;
  });
  ASSERT_EQ(report.runs.size(), 20u);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(report.runs[i].seed, i + 1);
    EXPECT_EQ(report.runs[i].name, "even");
  }
  EXPECT_EQ(report.passed, 10u);
  EXPECT_FALSE(report.pass);

  p.min_pass = 10;
  EXPECT_TRUE(run_protocol("even", p, [](std::uint64_t s) {
                TestReport r;
                r.pass = s % 2 == 0;
                return r;
              }).pass);
  EXPECT_THROW(run_protocol("boom", p, [](std::uint64_t) -> TestReport { throw std::runtime_error("x"); }),
               std::runtime_error);
}

TEST(Protocol, DeterministicEnvForcesOneWorker) {
  ::setenv("CONESTABLE_DETERMINISTIC", "1", 1);
  EXPECT_EQ(effective_jobs(8), 1u);
  ::unsetenv("CONESTABLE_DETERMINISTIC");
  EXPECT_EQ(effective_jobs(8), 8u);
  EXPECT_GE(effective_jobs(0), 1u);
}

TEST(Protocol, CsvRows) {
  TestReport part;
  part.name = "chi:box,1,2";
  part.statistic = 0.5;
  part.p_value = 0.25;
  part.sample_sizes = {10, 20};
  part.pass = true;
  TestReport r;
  r.name = "t";
  r.seed = 4;
  r.statistic = 0.5;
  r.critical = 1.0;
  r.sample_sizes = {10};
  r.parts = {part};
  const auto rows = report_csv_rows(r);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "t,4,0.5,nan,1,10,0");
  EXPECT_EQ(rows[1], "t/chi:box;1;2,4,0.5,0.25,nan,10;20,1");
  EXPECT_EQ(report_csv_header(), "test,seed,statistic,p_value,critical,n,pass");
}

TEST(Oracles, ParetoAndLevyLaw) {
  Rng rng(12);
  std::vector<double> p(20'000), l(20'000);
  for (auto& x : p) x = pareto_sample(rng, 0.5);
  for (auto& x : l) x = levy_law_sample(rng, 2.0);
  EXPECT_TRUE(ks_one_sample(p, [](double x) { return x < 1.0 ? 0.0 : 1.0 - 1.0 / std::sqrt(x); }).pass);
  // scale / Z^2 <= x  iff  |Z| >= sqrt(scale / x)
  EXPECT_TRUE(ks_one_sample(l, [](double x) { return x <= 0.0 ? 0.0 : std::erfc(std::sqrt(2.0 / x) / std::sqrt(2.0)); })
                  .pass);
}

TEST(Stability, PassesAndDetectsWrongExponent) {
  const ConePtr plus = make_cone("half-line-plus");
  const LePageConfig cfg{0.7, unit_atom(*plus), std::nullopt, FixedRank{300}};
  const auto sampler = lepage_sampler(plus, cfg);
  const auto probes = probe_characters(*plus);
  int good = 0, bad = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    good += stability_identity_test(*plus, sampler, 0.7, 1.0, 2.0, 3000, probes, seed).pass ? 1 : 0;
    bad += stability_identity_test(*plus, sampler, 0.5, 1.0, 2.0, 3000, probes, seed).pass ? 1 : 0;
  }
  EXPECT_GE(good, 4);
  EXPECT_EQ(bad, 0);
}

TEST(Stability, MatchedSamplersScaleRanks) {
  const ConePtr plus = make_cone("half-line-plus");
  const LePageConfig cfg{0.7, unit_atom(*plus), std::nullopt, FixedRank{10}};
  const auto s = matched_lepage_samplers(plus, cfg, 1.0, 2.0);
  const auto direct = [&](std::size_t rank) {
    LePageConfig c = cfg;
    c.truncation = FixedRank{rank};
    Rng rng(9);
    return lepage_sample(*plus, c, rng).value;
  };
  Rng r1(9), r2(9), r3(9);
  EXPECT_EQ(s.first(r1), direct(10));
  EXPECT_EQ(s.second(r2), direct(20));
  EXPECT_EQ(s.combined(r3), direct(30));


  const ConePtr mx = make_cone("half-line-max");
  const auto e = matched_lepage_samplers(mx, {1.5, unit_atom(*mx), std::nullopt, ExactStop{}}, 1.0, 2.0);
  Rng q1(4), q2(4);
  EXPECT_EQ(e.first(q1), e.combined(q2));
  EXPECT_THROW(matched_lepage_samplers(plus, cfg, 0.0, 1.0), std::invalid_argument);
}

TEST(Superposition, PoissonTwoAndWrongScaling) {
  const HalfLinePlus plus;
  const auto s = unit_atom(plus);
  const auto ok = superposition_test(plus, 1.0, s, 1.0, 1.0, 1.0, {.replicates = 5000}, 3);
  EXPECT_TRUE(ok.pass) << ok.note;
  EXPECT_EQ(ok.parts.size(), 3u);

  SuperpositionOptions wrong{.replicates = 5000, .scaling_exponent = 1.0 / 2.0};
  EXPECT_FALSE(superposition_test(plus, 1.0, s, 1.0, 2.0, 1.0, wrong, 3).pass);

  // a small: the left side is essentially the b-scaled process
  const auto tiny = superposition_test(plus, 1.0, s, 1e-6, 1.0, 1.0, {.replicates = 5000}, 4);
  EXPECT_TRUE(tiny.pass);
  EXPECT_THROW(superposition_test(plus, -1.0, s, 1.0, 1.0, 1.0, {}, 1), UnsupportedCombination);
}

TEST(DoaCounts, ParetoTailArithmetic) {
  const HalfLinePlus plus;
  DoaCountsOptions opt{.n_grid = {10'000}, .r_grid = {1.0}, .replicates = 300, .atoms = {}};
  const auto r = doa_counts_experiment(plus, 0.5, unit_atom(plus), opt, 5);
  EXPECT_TRUE(r.pass);
  EXPECT_THROW(doa_counts_experiment(plus, 1.5, unit_atom(plus), opt, 5), UnsupportedCombination);
}

TEST(DoaCounts, DirectionalSubset) {
  const CoordMax c(2);
  const SpectralMeasure s(c, {{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 3.0}});
  DoaCountsOptions opt{.n_grid = {2000}, .r_grid = {1.0, 4.0}, .replicates = 400, .atoms = {1}};
  EXPECT_TRUE(doa_counts_experiment(c, 0.5, s, opt, 6).pass);
}

TEST(DoaSums, Guards) {
  const HarmonicCone harm;
  EXPECT_THROW(doa_sums_experiment(harm, 0.5, unit_atom(harm), {}, 1), UnsupportedCombination);
  const HalfLinePlus plus;
  EXPECT_THROW(doa_sums_experiment(plus, 1.5, unit_atom(plus), {}, 1), UnsupportedCombination);
}

TEST(DoaSums, MaxConeSmallRun) {
  const HalfLineMax mx;
  DoaSumsOptions opt{.n = 500, .replicates = 1000, .truncation = ExactStop{}, .frechet_check = true};
  EXPECT_TRUE(doa_sums_experiment(mx, 0.7, unit_atom(mx), opt, 2).pass);
}

TEST(LevyIncrement, WholeIntervalAndIndependence) {
  const HalfLineMax mx;
  LevyIncrementOptions opt{.rank = 200, .n = 1500, .independence = std::nullopt};
  EXPECT_TRUE(levy_increment_test(mx, 0.7, unit_atom(mx), {0.0, 1.0}, opt, 3).pass);
  opt.independence = std::pair{TimeInterval{0.0, 0.5}, TimeInterval{0.5, 1.0}};
  EXPECT_TRUE(levy_increment_test(mx, 0.7, unit_atom(mx), {0.0, 0.5}, opt, 4).pass);

  LevyPathConfig cfg{.alpha = 0.7, .spectral = unit_atom(mx), .times = {1.0}, .rank = 100};
  const auto chi = make_character(mx, CharacterFamily::kBelow, {1.0});
  EXPECT_THROW(increment_correlation(mx, cfg, {0.0, 0.6}, {0.5, 1.0}, chi, 100, 1), std::invalid_argument);
  EXPECT_LE(std::abs(increment_correlation(mx, cfg, {0.0, 0.5}, {0.5, 1.0}, chi, 2000, 1)), 3.0 / std::sqrt(2000.0));
}
