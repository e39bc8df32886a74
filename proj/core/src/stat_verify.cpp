#include "conestable/stat_verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "conestable/point_process.hpp"
#include "conestable/serialize.hpp"

namespace conestable {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index) { return Rng::substream(seed, index).next(); }

TestReport composite(std::string name, std::vector<TestReport> parts, std::uint64_t seed) {
  TestReport r;
  r.name = std::move(name);
  r.seed = seed;
  r.pass = std::all_of(parts.begin(), parts.end(), [](const TestReport& p) { return p.pass; });
  // Headline numbers: the worst part.
  double worst_p = 1.0;
  for (const auto& p : parts) {
    if (!std::isnan(p.p_value) && p.p_value <= worst_p) {
      worst_p = p.p_value;
      r.statistic = p.statistic;
      r.p_value = p.p_value;
    }
    for (auto n : p.sample_sizes) {
      if (std::find(r.sample_sizes.begin(), r.sample_sizes.end(), n) == r.sample_sizes.end()) {
        r.sample_sizes.push_back(n);
      }
    }
  }
  r.parts = std::move(parts);
  return r;
}

TestReport band_check(std::string name, double deviation, double critical, std::size_t n) {
  TestReport r;
  r.name = std::move(name);
  r.statistic = deviation;
  r.critical = critical;
  r.sample_sizes = {n};
  r.pass = deviation <= critical;
  return r;
}

std::string describe(const Character& chi) { return to_csv_row(chi); }

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
};

template <class Range>
Moments moments(const Range& xs) {
  Moments m;
  double k = 0.0;
  double m2 = 0.0;
  for (double x : xs) {
    k += 1.0;
    const double d = x - m.mean;
    m.mean += d / k;
    m2 += d * (x - m.mean);
  }
  m.variance = k > 1.0 ? m2 / (k - 1.0) : 0.0;
  return m;
}

double correlation(std::span<const double> x, std::span<const double> y) {
  const auto mx = moments(x);
  const auto my = moments(y);
  if (mx.variance == 0.0 || my.variance == 0.0) return std::numeric_limits<double>::quiet_NaN();
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx.mean) * (y[i] - my.mean);
  const double n = static_cast<double>(x.size());
  return sxy / (n - 1.0) / std::sqrt(mx.variance * my.variance);
}

// KS on norms plus every probe character, between two element samples.
std::vector<TestReport> compare_samples(const Cone& cone, std::span<const Element> left,
                                        std::span<const Element> right, std::span<const Character> probes) {
  std::vector<TestReport> parts;
  std::vector<double> a(left.size()), b(right.size());
  const auto run = [&](std::string name, auto&& f) {
    for (std::size_t i = 0; i < left.size(); ++i) a[i] = f(left[i]);
    for (std::size_t i = 0; i < right.size(); ++i) b[i] = f(right[i]);
    auto r = ks_two_sample(a, b);
    r.name = std::move(name);
    parts.push_back(std::move(r));
  };
  run("norm", [&](const Element& x) { return cone.norm(x); });
  for (const auto& chi : probes) {
    run("chi:" + describe(chi), [&](const Element& x) { return eval(cone, chi, x); });
  }
  return parts;
}

bool overlaps(TimeInterval a, TimeInterval b) { return a.start < b.end && b.start < a.end; }

SpectralMeasure normalized(const SpectralMeasure& spectral) { return spectral.scaled(1.0 / spectral.total()); }

}  // namespace

// ---------------------------------------------------------------------------

double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // Theta-function form converges fast for small lambda.
    const double w = kPi * kPi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double j = 2.0 * k - 1.0;
      cdf += std::exp(-j * j * w);
    }
    cdf *= std::sqrt(2.0 * kPi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sf = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sf += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sf, 0.0, 1.0);
}

TestReport ks_one_sample(std::span<const double> values, const std::function<double(double)>& cdf, double level) {
  if (values.size() < 10) throw std::invalid_argument("ks_one_sample: need n >= 10");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("ks_one_sample: cdf value outside [0,1]");
    if (f < prev) throw std::invalid_argument("ks_one_sample: cdf is not nondecreasing");
    prev = f;
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  TestReport r;
  r.name = "ks-one-sample";
  r.statistic = d;
  r.p_value = kolmogorov_sf(std::sqrt(n) * d);
  r.level = level;
  r.sample_sizes = {x.size()};
  r.pass = r.p_value >= level;
  return r;
}

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b, double level) {
  if (a.size() < 10 || b.size() < 10) throw std::invalid_argument("ks_two_sample: need n >= 10 in both samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  TestReport r;
  r.name = "ks-two-sample";
  r.statistic = d;
  r.p_value = kolmogorov_sf(std::sqrt(n * m / (n + m)) * d);
  r.level = level;
  r.sample_sizes = {x.size(), y.size()};
  r.pass = r.p_value >= level;
  return r;
}

TestReport poisson_dispersion_test(std::span<const std::size_t> counts, double mean) {
  if (counts.size() < 30) throw std::invalid_argument("poisson_dispersion_test: need n >= 30");
  if (!(mean > 0.0)) throw std::invalid_argument("poisson_dispersion_test: mean must be positive");
  const std::size_t n = counts.size();
  const double sn = std::sqrt(static_cast<double>(n));
  std::vector<double> xs(counts.begin(), counts.end());
  const auto mom = moments(xs);

  std::vector<TestReport> parts;
  parts.push_back(band_check("mean", std::abs(mom.mean - mean), 3.0 * std::sqrt(mean) / sn, n));
  parts.back().note = "sample mean " + format_double(mom.mean);
  if (static_cast<double>(n) * mean >= 10.0) {
    const double dispersion = mom.mean > 0.0 ? mom.variance / mom.mean : 0.0;
    auto disp = band_check("dispersion", std::abs(dispersion - 1.0), 6.0 / sn, n);
    disp.note = "index of dispersion " + format_double(dispersion);
    parts.push_back(std::move(disp));
  }
  auto r = composite("poisson-dispersion", std::move(parts), 0);
  r.statistic = mom.mean;
  if (r.parts.size() == 1) r.note = "dispersion band skipped: n * mean < 10";
  return r;
}

double binomial_upper_tail(std::size_t n, double p, std::size_t k) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  double sum = 0.0;
  const double nn = static_cast<double>(n);
  for (std::size_t j = k; j <= n; ++j) {
    const double jj = static_cast<double>(j);
    const double log_term = std::lgamma(nn + 1.0) - std::lgamma(jj + 1.0) - std::lgamma(nn - jj + 1.0) +
                            (p > 0.0 ? jj * std::log(p) : (j == 0 ? 0.0 : -kInfinity)) +
                            (p < 1.0 ? (nn - jj) * std::log1p(-p) : (j == n ? 0.0 : -kInfinity));
    sum += std::exp(log_term);
  }
  return std::min(sum, 1.0);
}

double levy_law_sample(Rng& rng, double scale) {
  const double z = rng.standard_normal();
  return scale / (z * z);
}

double pareto_sample(Rng& rng, double alpha) { return std::exp(-std::log(rng.uniform()) / alpha); }

// ---------------------------------------------------------------------------

Sampler lepage_sampler(ConePtr cone, LePageConfig cfg) {
  plan_truncation(*cone, cfg);
  return [cone = std::move(cone), cfg = std::move(cfg)](Rng& rng) { return lepage_sample(*cone, cfg, rng).value; };
}

TestReport stability_identity_test(const Cone& cone, const Sampler& sampler, double alpha, double a, double b,
                                   std::size_t n, std::span<const Character> probes, std::uint64_t seed) {
  return stability_identity_test(cone, StabilitySamplers{sampler, sampler, sampler}, alpha, a, b, n, probes, seed);
}

StabilitySamplers matched_lepage_samplers(ConePtr cone, const LePageConfig& cfg, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("matched_lepage_samplers: a, b must be positive");
  const auto plan = plan_truncation(*cone, cfg);
  if (plan.exact_stop) {
    auto s = lepage_sampler(cone, cfg);
    return {s, s, s};
  }
  const auto with_rank = [&](double mass) {
    LePageConfig c = cfg;
    c.truncation = FixedRank{std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(mass * plan.rank)))};
    return lepage_sampler(cone, std::move(c));
  };
  return {with_rank(a), with_rank(b), with_rank(a + b)};
}

TestReport stability_identity_test(const Cone& cone, const StabilitySamplers& samplers, double alpha, double a,
                                   double b, std::size_t n, std::span<const Character> probes, std::uint64_t seed) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("stability_identity_test: a, b must be positive");
  const double fa = std::pow(a, 1.0 / alpha);
  const double fb = std::pow(b, 1.0 / alpha);
  const double fab = std::pow(a + b, 1.0 / alpha);
  std::vector<Element> left, right;
  left.reserve(n);
  right.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::substream(seed, i);
    Element x1 = samplers.first(rng);
    Element x2 = samplers.second(rng);
    Element x3 = samplers.combined(rng);
    cone.scale_assign(fa, x1);
    cone.scale_assign(fb, x2);
    cone.add_assign(x1, x2);
    cone.scale_assign(fab, x3);
    left.push_back(std::move(x1));
    right.push_back(std::move(x3));
  }
  return composite("stability-identity", compare_samples(cone, left, right, probes), seed);
}

TestReport superposition_test(const Cone& cone, double alpha, const SpectralMeasure& spectral, double a, double b,
                              double window_r, const SuperpositionOptions& options, std::uint64_t seed) {
  if (!(window_r > 0.0)) throw std::invalid_argument("superposition_test: window_r must be positive");
  if (!(alpha > 0.0)) throw UnsupportedCombination("superposition_test: counts above r need alpha > 0");
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("superposition_test: a, b must be positive");
  const double e = options.scaling_exponent.value_or(1.0 / alpha);
  const double fa = std::pow(a, e);
  const double fb = std::pow(b, e);
  const double fab = std::pow(a + b, 1.0 / alpha);
  // Generate slightly wider windows so the scaled windows still cover (r, inf].
  constexpr double kWiden = 1.0 - 1e-12;
  const Annulus region = Annulus::above(window_r);
  std::vector<std::size_t> lhs(options.replicates), rhs(options.replicates);
  for (std::size_t i = 0; i < options.replicates; ++i) {
    Rng rng = Rng::substream(seed, i);
    const auto p1 = stable_poisson_points(cone, alpha, spectral, window_r / fa * kWiden, rng);
    const auto p2 = stable_poisson_points(cone, alpha, spectral, window_r / fb * kWiden, rng);
    const auto p = stable_poisson_points(cone, alpha, spectral, window_r / fab * kWiden, rng);
    const auto left = superpose(cone, scale_measure(cone, p1, fa), scale_measure(cone, p2, fb));
    lhs[i] = count_in(left, region);
    rhs[i] = count_in(scale_measure(cone, p, fab), region);
  }
  const double mean = (a + b) * spectral.total() * std::pow(window_r, -alpha);
  std::vector<TestReport> parts;
  parts.push_back(poisson_dispersion_test(lhs, mean));
  parts.back().name = "lhs-poisson";
  parts.push_back(poisson_dispersion_test(rhs, mean));
  parts.back().name = "rhs-poisson";
  std::vector<double> l(lhs.begin(), lhs.end()), r(rhs.begin(), rhs.end());
  parts.push_back(ks_two_sample(l, r));
  parts.back().name = "ks-counts";
  auto report = composite("superposition", std::move(parts), seed);
  report.note = "target mean " + format_double(mean);
  return report;
}

TestReport doa_counts_experiment(const Cone& cone, double alpha, const SpectralMeasure& spectral,
                                 const DoaCountsOptions& options, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UnsupportedCombination("doa_counts_experiment: alpha must be in (0,1)");
  if (options.n_grid.empty() || options.r_grid.empty()) {
    throw std::invalid_argument("doa_counts_experiment: empty n or r grid");
  }
  std::vector<std::size_t> atoms = options.atoms;
  if (atoms.empty()) {
    atoms.resize(spectral.size());
    std::iota(atoms.begin(), atoms.end(), std::size_t{0});
  }
  const double mass_g = spectral.mass_of(atoms) / spectral.total();
  const std::size_t largest_n = *std::max_element(options.n_grid.begin(), options.n_grid.end());

  std::vector<TestReport> parts;
  std::uint64_t stream = 0;
  for (std::size_t n : options.n_grid) {
    const double b_n = std::pow(static_cast<double>(n), 1.0 / alpha);
    std::vector<std::vector<std::size_t>> counts(options.r_grid.size(), std::vector<std::size_t>(options.replicates));
    std::vector<Element> samples(n);
    std::vector<std::size_t> ids(n);
    for (std::size_t rep = 0; rep < options.replicates; ++rep) {
      Rng rng = Rng::substream(seed, stream++);
      for (std::size_t i = 0; i < n; ++i) {
        const double radius = pareto_sample(rng, alpha);
        ids[i] = spectral.draw_index(rng);
        samples[i] = cone.scale(radius, spectral.atoms()[ids[i]].direction);
      }
      const auto process = binomial_process(cone, samples, b_n, ids);
      for (std::size_t j = 0; j < options.r_grid.size(); ++j) {
        counts[j][rep] = count_in(process, Annulus::above(options.r_grid[j]), std::span<const std::size_t>(atoms));
      }
    }
    for (std::size_t j = 0; j < options.r_grid.size(); ++j) {
      const double r = options.r_grid[j];
      const double target = std::pow(r, -alpha) * mass_g;
      std::vector<double> xs(counts[j].begin(), counts[j].end());
      const auto mom = moments(xs);
      const double se = std::sqrt(mom.variance / static_cast<double>(options.replicates));
      auto part = band_check("mean n=" + std::to_string(n) + " r=" + format_double(r), std::abs(mom.mean - target),
                             3.0 * se, options.replicates);
      part.note = "mean " + format_double(mom.mean) + " target " + format_double(target);
      parts.push_back(std::move(part));
      if (n == largest_n && target > 0.0) {
        auto disp = poisson_dispersion_test(counts[j], target);
        disp.name = "poisson n=" + std::to_string(n) + " r=" + format_double(r);
        parts.push_back(std::move(disp));
      }
    }
  }
  return composite("doa-counts", std::move(parts), seed);
}

TestReport doa_sums_experiment(const Cone& cone, double alpha, const SpectralMeasure& spectral,
                               const DoaSumsOptions& options, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0) && !cone.flags().idempotent) {
    throw UnsupportedCombination("doa_sums_experiment: alpha must be in (0,1) outside idempotent cones");
  }
  if (!cone.flags().sub_invariant) throw UnsupportedCombination("doa_sums_experiment: cone must be sub-invariant");
  const double b_n = std::pow(static_cast<double>(options.n), 1.0 / alpha);
  const SpectralMeasure unit = normalized(spectral);
  LePageConfig cfg{alpha, unit, std::nullopt, options.truncation};
  plan_truncation(cone, cfg);

  std::vector<Element> sums, limit;
  sums.reserve(options.replicates);
  limit.reserve(options.replicates);
  Element scratch = Element::zeros(cone.element_size());
  for (std::size_t rep = 0; rep < options.replicates; ++rep) {
    Rng rng = Rng::substream(seed, rep);
    Element acc = cone.neutral();
    for (std::size_t i = 0; i < options.n; ++i) {
      const double radius = pareto_sample(rng, alpha) / b_n;
      const std::size_t atom = unit.draw_index(rng);
      cone.add_scaled(acc, radius, unit.atoms()[atom].direction, scratch);
    }
    sums.push_back(std::move(acc));
    Rng lrng = Rng::substream(seed, options.replicates + rep);
    limit.push_back(lepage_sample(cone, cfg, lrng).value);
  }
  const auto probes = probe_characters(cone);
  auto parts = compare_samples(cone, sums, limit, probes);
  if (options.frechet_check) {
    std::vector<double> norms;
    norms.reserve(sums.size());
    for (const auto& s : sums) norms.push_back(cone.norm(s));
    auto r = ks_one_sample(norms, [alpha](double x) { return x > 0.0 ? std::exp(-std::pow(x, -alpha)) : 0.0; });
    r.name = "frechet";
    parts.push_back(std::move(r));
  }
  return composite("doa-sums", std::move(parts), seed);
}

namespace {

struct IncrementDraws {
  std::vector<Element> main;
  std::vector<Element> first;
  std::vector<Element> second;
};

IncrementDraws draw_increments(const Cone& cone, const LevyPathConfig& cfg, TimeInterval interval,
                               std::optional<std::pair<TimeInterval, TimeInterval>> pair, std::size_t n,
                               std::uint64_t seed) {
  IncrementDraws d;
  for (std::size_t i = 0; i < n; ++i) {
    const auto terms = levy_terms(cone, cfg, derived_seed(seed, i));
    d.main.push_back(levy_increment(cone, cfg, terms, interval));
    if (pair) {
      d.first.push_back(levy_increment(cone, cfg, terms, pair->first));
      d.second.push_back(levy_increment(cone, cfg, terms, pair->second));
    }
  }
  return d;
}

}  // namespace

double increment_correlation(const Cone& cone, const LevyPathConfig& cfg, TimeInterval first,
                             TimeInterval second, const Character& chi, std::size_t n, std::uint64_t seed) {
  if (overlaps(first, second)) throw std::invalid_argument("increment_correlation: intervals overlap");
  if (n < 3) throw std::invalid_argument("increment_correlation: need n >= 3");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n; ++i) {
    const auto terms = levy_terms(cone, cfg, derived_seed(seed, i));
    x.push_back(eval(cone, chi, levy_increment(cone, cfg, terms, first)));
    y.push_back(eval(cone, chi, levy_increment(cone, cfg, terms, second)));
  }
  return correlation(x, y);
}

TestReport levy_increment_test(const Cone& cone, double alpha, const SpectralMeasure& spectral,
                               TimeInterval interval, const LevyIncrementOptions& options, std::uint64_t seed) {
  if (!(interval.start >= 0.0 && interval.start < interval.end && interval.end <= 1.0)) {
    throw std::invalid_argument("levy_increment_test: need 0 <= t < s <= 1");
  }
  if (options.independence && overlaps(options.independence->first, options.independence->second)) {
    throw std::invalid_argument("levy_increment_test: independence intervals overlap");
  }
  LevyPathConfig cfg{alpha, spectral, {interval.end}, options.rank};
  const auto draws = draw_increments(cone, cfg, interval, options.independence, options.n, seed);

  const double width = interval.end - interval.start;
  const auto rank = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(width * options.rank)));
  LePageConfig direct{alpha, spectral.scaled(width / spectral.total()), std::nullopt, FixedRank{rank}};
  std::vector<Element> reference;
  reference.reserve(options.n);
  for (std::size_t i = 0; i < options.n; ++i) {
    Rng rng = Rng::substream(seed, options.n + i);
    reference.push_back(lepage_sample(cone, direct, rng).value);
  }
  auto parts = compare_samples(cone, draws.main, reference, {});

  if (options.independence) {
    const double band = 3.0 / std::sqrt(static_cast<double>(options.n));
    for (const auto& chi : probe_characters(cone)) {
      std::vector<double> x, y;
      for (std::size_t i = 0; i < options.n; ++i) {
        x.push_back(eval(cone, chi, draws.first[i]));
        y.push_back(eval(cone, chi, draws.second[i]));
      }
      const double rho = correlation(x, y);
      auto part = band_check("independence chi:" + describe(chi), std::isnan(rho) ? 0.0 : std::abs(rho), band,
                             options.n);
      if (std::isnan(rho)) part.note = "degenerate character values";
      parts.push_back(std::move(part));
    }
  }
  return composite("levy-increment", std::move(parts), seed);
}

// ---------------------------------------------------------------------------

std::vector<std::uint64_t> Protocol::default_seeds() {
  std::vector<std::uint64_t> seeds(20);
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{1});
  return seeds;
}

unsigned effective_jobs(unsigned requested) {
  if (const char* env = std::getenv("CONESTABLE_DETERMINISTIC"); env && std::string(env) == "1") return 1;
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

ProtocolReport run_protocol(const std::string& name, const Protocol& protocol,
                            const std::function<TestReport(std::uint64_t)>& test) {
  ProtocolReport report;
  report.name = name;
  report.min_pass = protocol.min_pass;
  report.runs.resize(protocol.seeds.size());
  const unsigned jobs = std::min<unsigned>(effective_jobs(protocol.jobs),
                                           static_cast<unsigned>(std::max<std::size_t>(1, protocol.seeds.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(protocol.seeds.size());
  const auto worker = [&] {
    for (std::size_t i = next++; i < protocol.seeds.size(); i = next++) {
      try {
        report.runs[i] = test(protocol.seeds[i]);
        report.runs[i].seed = protocol.seeds[i];
        report.runs[i].name = name;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  report.passed = static_cast<std::size_t>(
      std::count_if(report.runs.begin(), report.runs.end(), [](const TestReport& r) { return r.pass; }));
  report.pass = report.passed >= protocol.min_pass;
  return report;
}

std::string report_csv_header() { return "test,seed,statistic,p_value,critical,n,pass"; }

namespace {

void append_rows(const TestReport& r, const std::string& prefix, std::uint64_t seed, std::vector<std::string>& out) {
  std::string sizes;
  for (std::size_t i = 0; i < r.sample_sizes.size(); ++i) {
    if (i) sizes += ';';
    sizes += std::to_string(r.sample_sizes[i]);
  }
  std::string name = prefix.empty() ? r.name : prefix + "/" + r.name;
  // Part names may carry commas from character parameters.
  std::replace(name.begin(), name.end(), ',', ';');
  out.push_back(name + "," + std::to_string(seed) + "," + format_double(r.statistic) + "," +
                format_double(r.p_value) + "," + format_double(r.critical) + "," + sizes + "," +
                (r.pass ? "1" : "0"));
  for (const auto& p : r.parts) append_rows(p, name, seed, out);
}

}  // namespace

std::vector<std::string> report_csv_rows(const TestReport& report) {
  std::vector<std::string> out;
  append_rows(report, "", report.seed, out);
  return out;
}

}  // namespace conestable
