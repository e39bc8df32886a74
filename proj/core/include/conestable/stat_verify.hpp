#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conestable/characters.hpp"
#include "conestable/cone.hpp"
#include "conestable/random.hpp"
#include "conestable/sampling.hpp"

namespace conestable {

inline constexpr double kDefaultLevel = 0.01;

/// Outcome of one test run under one seed. Composite tests keep their
/// sub-tests in `parts` and pass only if every part passes.
struct TestReport {
  std::string name;
  double statistic = 0.0;
  /// NaN when the test compares against a critical band instead.
  double p_value = std::numeric_limits<double>::quiet_NaN();
  /// NaN when a p-value is used.
  double critical = std::numeric_limits<double>::quiet_NaN();
  double level = kDefaultLevel;
  std::vector<std::size_t> sample_sizes;
  std::uint64_t seed = 0;
  bool pass = false;
  std::vector<TestReport> parts;
  std::string note;
};

/// P{K > lambda} for the Kolmogorov distribution.
double kolmogorov_sf(double lambda);

/// Sup-distance between the empirical CDF of `values` and `cdf`, asymptotic
/// p-value from sqrt(n) D. Needs n >= 10; throws std::invalid_argument when
/// cdf is not a nondecreasing [0,1]-valued function on the sample.
TestReport ks_one_sample(std::span<const double> values, const std::function<double(double)>& cdf,
                         double level = kDefaultLevel);

/// Two-sample KS with ties handled exactly; p-value from sqrt(nm/(n+m)) D.
TestReport ks_two_sample(std::span<const double> a, std::span<const double> b, double level = kDefaultLevel);

/// Mean within 3 sqrt(mean/n) of `mean`, and sample variance / sample mean
/// within [1 - 6/sqrt(n), 1 + 6/sqrt(n)]. The dispersion band is only
/// informative when n * mean >= 10; below that only the mean is checked.
TestReport poisson_dispersion_test(std::span<const std::size_t> counts, double mean);

/// P{Binomial(n, p) >= k}.
double binomial_upper_tail(std::size_t n, double p, std::size_t k);

// ---------------------------------------------------------------------------
// Oracle samplers

/// (scale / Z^2) with standard normal Z: the one-sided stable(1/2) law with
/// Laplace transform exp(-sqrt(2 scale t)). Scale pi/2 gives exp(-sqrt(pi t)).
double levy_law_sample(Rng& rng, double scale);
/// R with P{R > r} = r^{-alpha}, r >= 1.
double pareto_sample(Rng& rng, double alpha);

// ---------------------------------------------------------------------------
// Distributional identities

using Sampler = std::function<Element(Rng&)>;

/// Sampler drawing lepage_sample(cone, cfg, rng).value.
Sampler lepage_sampler(ConePtr cone, LePageConfig cfg);

/// Draws n triples (triple i from Rng::substream(seed, i)), forms
/// L = a^{1/alpha} xi1 + b^{1/alpha} xi2 and R = (a+b)^{1/alpha} xi3, and runs
/// two-sample KS on norms and on every probe character.
TestReport stability_identity_test(const Cone& cone, const Sampler& sampler, double alpha, double a, double b,
                                   std::size_t n, std::span<const Character> probes, std::uint64_t seed);

/// Separate samplers for xi1, xi2 and xi3.
struct StabilitySamplers {
  Sampler first;
  Sampler second;
  Sampler combined;
};
TestReport stability_identity_test(const Cone& cone, const StabilitySamplers& samplers, double alpha, double a,
                                   double b, std::size_t n, std::span<const Character> probes, std::uint64_t seed);

/// LePage samplers whose ranks are proportional to a, b and a+b, so that after
/// scaling all three series are cut at the same radius c K^{-1/alpha}. A rank
/// truncation otherwise discards a^{1/alpha} T + b^{1/alpha} T on the left
/// against (a+b)^{1/alpha} T on the right. Exact-stop configs are returned as is.
StabilitySamplers matched_lepage_samplers(ConePtr cone, const LePageConfig& cfg, double a, double b);

struct SuperpositionOptions {
  std::size_t replicates = 10'000;
  /// Exponent used for the left-hand scalings a^e, b^e; default 1/alpha.
  std::optional<double> scaling_exponent;
};

/// Compares counts above window_r of D_{a^{1/alpha}} P' + D_{b^{1/alpha}} P''
/// and D_{(a+b)^{1/alpha}} P with the Poisson law of mean (a+b) sigma(S) r^{-alpha}.
TestReport superposition_test(const Cone& cone, double alpha, const SpectralMeasure& spectral, double a, double b,
                              double window_r, const SuperpositionOptions& options, std::uint64_t seed);

struct DoaCountsOptions {
  std::vector<std::size_t> n_grid{10'000};
  std::vector<double> r_grid{1.0};
  std::size_t replicates = 1000;
  /// Atom ids forming the direction set G; empty means all atoms.
  std::vector<std::size_t> atoms;
};

/// Binomial processes of n Pareto samples R eps scaled by n^{-1/alpha}:
/// mean counts above r in G against r^{-alpha} sigma-hat(G) within 3
/// standard errors, plus Poisson dispersion at the largest n.
TestReport doa_counts_experiment(const Cone& cone, double alpha, const SpectralMeasure& spectral,
                                 const DoaCountsOptions& options, std::uint64_t seed);

struct DoaSumsOptions {
  std::size_t n = 10'000;
  std::size_t replicates = 5000;
  /// Truncation of the comparison LePage samples.
  Truncation truncation = FixedRank{10'000};
  /// Adds a one-sample KS of the sums against the Frechet CDF (max cones).
  bool frechet_check = false;
};

/// n^{-1/alpha} (zeta_1 + ... + zeta_n) for Pareto zeta against LePage
/// samples with the normalised spectral measure; KS on norms and probes.
TestReport doa_sums_experiment(const Cone& cone, double alpha, const SpectralMeasure& spectral,
                               const DoaSumsOptions& options, std::uint64_t seed);

struct LevyIncrementOptions {
  std::size_t rank = 10'000;
  std::size_t n = 5000;
  /// Two disjoint intervals for the independence check.
  std::optional<std::pair<TimeInterval, TimeInterval>> independence;
};

/// Increments over (t,s] of simulated paths against direct LePage samples
/// with spectral mass (s-t) and rank round((s-t) K); optional correlation
/// band |corr| <= 3/sqrt(n) for increments over disjoint intervals.
TestReport levy_increment_test(const Cone& cone, double alpha, const SpectralMeasure& spectral,
                               TimeInterval interval, const LevyIncrementOptions& options, std::uint64_t seed);

/// Sample correlation of chi(xi_{I1}) and chi(xi_{I2}); throws
/// std::invalid_argument when the intervals overlap.
double increment_correlation(const Cone& cone, const LevyPathConfig& cfg, TimeInterval first,
                             TimeInterval second, const Character& chi, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Seed protocol

struct Protocol {
  std::vector<std::uint64_t> seeds = default_seeds();
  std::size_t min_pass = 17;
  /// Worker threads; 0 means hardware concurrency.
  unsigned jobs = 0;

  static std::vector<std::uint64_t> default_seeds();
};

struct ProtocolReport {
  std::string name;
  std::vector<TestReport> runs;
  std::size_t passed = 0;
  std::size_t min_pass = 0;
  bool pass = false;
};

/// Worker count after applying CONESTABLE_DETERMINISTIC=1.
unsigned effective_jobs(unsigned requested);

/// Runs `test` once per seed (concurrently up to the job limit) and collects
/// the runs in seed order.
ProtocolReport run_protocol(const std::string& name, const Protocol& protocol,
                            const std::function<TestReport(std::uint64_t)>& test);

/// "test,seed,statistic,p_value,critical,n,pass"
std::string report_csv_header();
/// One row per (test, seed); composite reports also list their parts as
/// "name/part".
std::vector<std::string> report_csv_rows(const TestReport& report);

}  // namespace conestable
