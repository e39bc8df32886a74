#include "conestable/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conestable {

// --- Gamma arrivals --------------------------------------------------------

GammaArrivals GammaArrivals::from_exponentials(std::span<const double> gaps) {
  GammaArrivals g;
  double sum = 0.0;
  for (double gap : gaps) {
    if (!(gap > 0.0)) throw std::invalid_argument("GammaArrivals: exponential gaps must be positive");
    sum += gap;
    g.gammas_.push_back(sum);
  }
  return g;
}

void GammaArrivals::extend_to(std::size_t k) {
  if (k <= gammas_.size()) return;
  if (!rng_) throw std::logic_error("GammaArrivals: fixed arrivals cannot be extended");
  gammas_.reserve(k);
  double sum = gammas_.empty() ? 0.0 : gammas_.back();
  while (gammas_.size() < k) {
    sum += rng_->exponential();
    gammas_.push_back(sum);
  }
}

GammaArrivals gamma_arrivals(std::uint64_t seed, std::size_t k) {
  if (k == 0) throw std::invalid_argument("gamma_arrivals: k must be >= 1");
  GammaArrivals g(seed);
  g.extend_to(k);
  return g;
}

// --- spectral measures -----------------------------------------------------

SpectralMeasure::SpectralMeasure(const Cone& cone, std::vector<SpectralAtom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("SpectralMeasure: at least one atom required");
  for (const auto& atom : atoms_) {
    cone.validate(atom.direction);
    if (!(atom.weight > 0.0) || !std::isfinite(atom.weight)) {
      throw std::invalid_argument("SpectralMeasure: weights must be positive and finite");
    }
    if (std::abs(cone.norm(atom.direction) - 1.0) > kEqualityTolerance) {
      throw std::invalid_argument("SpectralMeasure: atom direction must have unit norm");
    }
    total_ += atom.weight;
  }
  double running = 0.0;
  for (const auto& atom : atoms_) {
    running += atom.weight;
    cumulative_.push_back(running / total_);
  }
  cumulative_.back() = 1.0;
}

std::vector<double> SpectralMeasure::normalized_weights() const {
  std::vector<double> w;
  for (const auto& atom : atoms_) w.push_back(atom.weight / total_);
  return w;
}

double SpectralMeasure::mass_of(std::span<const std::size_t> atom_ids) const {
  double m = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (std::find(atom_ids.begin(), atom_ids.end(), i) != atom_ids.end()) m += atoms_[i].weight;
  }
  return m;
}

SpectralMeasure SpectralMeasure::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("SpectralMeasure::scaled: factor must be positive");
  SpectralMeasure out = *this;
  out.total_ = 0.0;
  for (auto& atom : out.atoms_) {
    atom.weight *= factor;
    out.total_ += atom.weight;
  }
  return out;
}

Element sample_spectral(std::uint64_t seed, const SpectralMeasure& spectral) {
  Rng rng(seed);
  return spectral.draw(rng);
}

// --- truncation ------------------------------------------------------------

double expected_tail(double alpha, std::size_t rank) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("expected_tail: alpha must lie in (0,1)");
  if (rank == 0) return kInfinity;
  const double p = 1.0 / alpha;
  const double k = static_cast<double>(rank);
  // Telescoping: Gamma(j-p)/Gamma(j) = [Gamma(j-p)/Gamma(j-1) - Gamma(j-p+1)/Gamma(j)] / (p-1).
  if (k + 1.0 - p <= 0.0) return kInfinity;
  return std::exp(std::lgamma(k + 1.0 - p) - std::lgamma(k)) / (p - 1.0);
}

std::size_t truncation_rank(double alpha, double tol) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("truncation_rank: alpha must lie in (0,1)");
  if (!(tol > 0.0)) throw std::invalid_argument("truncation_rank: tol must be positive");
  const double limit = tol * (1.0 + 1e-12);
  const auto ok = [&](std::size_t k) { return expected_tail(alpha, k) <= limit; };
  if (ok(1)) return 1;
  std::size_t hi = 2;
  while (!ok(hi)) {
    if (hi > (std::size_t{1} << 62)) throw std::overflow_error("truncation_rank: tolerance too small");
    hi *= 2;
  }
  std::size_t lo = hi / 2;  // !ok(lo)
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

TruncationPlan plan_truncation(const Cone& cone, const LePageConfig& cfg) {
  const double alpha = cfg.alpha;
  if (alpha == 0.0 || !std::isfinite(alpha)) throw std::invalid_argument("LePage: alpha must be a nonzero real");
  TruncationPlan plan;
  if (const auto* fixed = std::get_if<FixedRank>(&cfg.truncation)) {
    if (fixed->rank == 0) throw std::invalid_argument("LePage: fixed rank must be >= 1");
    plan.rank = fixed->rank;
    plan.tail_bound = kInfinity;
  } else if (const auto* tail = std::get_if<ExpectedTail>(&cfg.truncation)) {
    if (!cone.flags().sub_invariant) {
      throw UnsupportedCombination("expected-tail truncation needs a sub-invariant cone; " + cone.id() +
                                   " is not");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw UnsupportedCombination("expected-tail truncation needs alpha in (0,1)");
    }
    plan.rank = truncation_rank(alpha, tail->tol);
    plan.tail_bound = cfg.scale_constant() * expected_tail(alpha, plan.rank);
  } else {
    const auto& exact = std::get<ExactStop>(cfg.truncation);
    const bool absorbs = (cone.absorption() == Absorption::kSmall && alpha > 0.0) ||
                         (cone.absorption() == Absorption::kLarge && alpha < 0.0);
    if (!cone.flags().idempotent || !absorbs) {
      throw UnsupportedCombination("exact-stop truncation needs an idempotent cone whose addition absorbs "
                                   "the LePage terms for this sign of alpha; " + cone.id() + " does not");
    }
    plan.rank = exact.max_terms;
    plan.exact_stop = true;
    plan.tail_bound = 0.0;
  }
  return plan;
}

// --- LePage series ---------------------------------------------------------

namespace {

// Every later term is absorbed once all atoms scaled by the current radius are.
bool absorbed(const Cone& cone, const Element& acc, double radius, const SpectralMeasure& spectral,
              Element& probe, Element& scratch) {
  for (const auto& atom : spectral.atoms()) {
    probe.assign(acc);
    cone.add_scaled(probe, radius, atom.direction, scratch);
    if (probe != acc) return false;
  }
  return true;
}

}  // namespace

LePageSample lepage_sample(const Cone& cone, const LePageConfig& cfg, Rng& rng) {
  const TruncationPlan plan = plan_truncation(cone, cfg);
  LePageSample out;
  out.value = cfg.deterministic_part ? *cfg.deterministic_part : cone.neutral();
  out.tail_bound = plan.tail_bound;
  Element scratch = Element::zeros(cone.element_size());
  Element probe = Element::zeros(cone.element_size());
  LePageTerms terms(cfg.spectral, cfg.alpha, cfg.scale_constant(), rng);
  std::size_t k = 0;
  for (; k < plan.rank; ++k) {
    const auto term = terms.next();
    if (plan.exact_stop && absorbed(cone, out.value, term.radius, cfg.spectral, probe, scratch)) break;
    cone.add_scaled(out.value, term.radius, cfg.spectral.atoms()[term.atom].direction, scratch);
  }
  if (plan.exact_stop && k == plan.rank) out.tail_bound = kInfinity;
  out.terms = k;
  return out;
}

LePageSample lepage_sample(const Cone& cone, const LePageConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  return lepage_sample(cone, cfg, rng);
}

std::vector<LePageSample> lepage_batch(const Cone& cone, const LePageConfig& cfg, std::uint64_t seed,
                                       std::size_t n) {
  std::vector<LePageSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::substream(seed, i);
    out.push_back(lepage_sample(cone, cfg, rng));
  }
  return out;
}

Element lepage_sum(const Cone& cone, double alpha, double c, std::span<const double> gammas,
                   std::span<const Element> directions, const std::optional<Element>& z) {
  if (gammas.size() != directions.size()) throw std::invalid_argument("lepage_sum: one direction per arrival");
  if (alpha == 0.0) throw std::invalid_argument("lepage_sum: alpha must be nonzero");
  Element acc = z ? *z : cone.neutral();
  Element scratch = Element::zeros(cone.element_size());
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    cone.add_scaled(acc, c * inverse_power(gammas[k], 1.0 / alpha), directions[k], scratch);
  }
  return acc;
}

// --- stable Poisson processes ---------------------------------------------

CountingMeasure stable_poisson_points(const Cone& cone, double alpha, const SpectralMeasure& spectral,
                                      double window_r, Rng& rng) {
  if (!(window_r > 0.0)) throw std::invalid_argument("stable_poisson_points: window_r must be positive");
  if (alpha == 0.0 || !std::isfinite(alpha)) {
    throw std::invalid_argument("stable_poisson_points: alpha must be a nonzero real");
  }
  const double c = std::pow(spectral.total(), 1.0 / alpha);
  const Annulus window = alpha > 0.0 ? Annulus::above(window_r) : Annulus::below(1.0 / window_r);
  LePageTerms terms(spectral, alpha, c, rng);
  std::vector<Point> points;
  while (true) {
    const auto term = terms.next();
    if (!window.contains(term.radius)) break;
    Point p;
    p.value = cone.scale(term.radius, spectral.atoms()[term.atom].direction);
    p.norm = cone.norm(p.value);
    p.direction = term.atom;
    points.push_back(std::move(p));
  }
  return CountingMeasure::from_points(cone, std::move(points), window);
}

CountingMeasure stable_poisson_points(const Cone& cone, double alpha, const SpectralMeasure& spectral,
                                      double window_r, std::uint64_t seed) {
  Rng rng(seed);
  return stable_poisson_points(cone, alpha, spectral, window_r, rng);
}

// --- multiplied processes --------------------------------------------------

void ScaleMixture::validate() const {
  if (values.empty() || values.size() != probabilities.size()) {
    throw std::invalid_argument("ScaleMixture: need matching nonempty values and probabilities");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      throw std::invalid_argument("ScaleMixture: values must be finite and nonnegative");
    }
    if (!(probabilities[i] > 0.0)) throw std::invalid_argument("ScaleMixture: probabilities must be positive");
    total += probabilities[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("ScaleMixture: probabilities must sum to 1");
}

double ScaleMixture::draw(Rng& rng) const noexcept {
  if (values.size() == 1) return values[0];
  const double u = rng.uniform();
  double running = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    running += probabilities[i];
    if (u < running) return values[i];
  }
  return values.back();
}

double ScaleMixture::moment(double alpha) const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0.0) {
      if (alpha < 0.0) return kInfinity;
      continue;
    }
    m += probabilities[i] * std::pow(values[i], alpha);
  }
  return m;
}

double ScaleMixture::smallest_positive() const {
  double v = kInfinity;
  for (double x : values) {
    if (x > 0.0) v = std::min(v, x);
  }
  return v;
}

double ScaleMixture::largest() const { return *std::max_element(values.begin(), values.end()); }

MultipliedPoints multiply_points(const Cone& cone, const CountingMeasure& points, const ScaleMixture& eta,
                                 double alpha, std::uint64_t seed) {
  eta.validate();
  if (alpha == 0.0) throw std::invalid_argument("multiply_points: alpha must be nonzero");
  const double lo_factor = eta.smallest_positive();
  const double hi_factor = eta.largest();
  if (!std::isfinite(lo_factor)) throw std::invalid_argument("multiply_points: eta is identically zero");

  // Unseen points (norm outside the window) can only land outside the image
  // band (hi_factor * lower, lo_factor * upper].
  const Annulus& w = points.window();
  const double new_lo = w.lower * hi_factor;
  const double new_hi = w.upper * lo_factor;
  if (!(new_lo < new_hi)) throw std::invalid_argument("multiply_points: no exact window survives the mixing");
  const Annulus window(new_lo, new_hi, w.lower_closed, w.upper_closed);

  Rng rng(seed);
  std::vector<Point> out;
  for (const auto& p : points.points()) {
    for (std::size_t j = 0; j < p.multiplicity; ++j) {
      const double factor = eta.draw(rng);
      if (factor == 0.0) continue;
      Point q;
      q.value = cone.scale(factor, p.value);
      q.norm = cone.norm(q.value);
      q.direction = p.direction;
      if (window.contains(q.norm)) out.push_back(std::move(q));
    }
  }
  return {CountingMeasure::from_points(cone, std::move(out), window), eta.moment(alpha)};
}

// --- Levy processes --------------------------------------------------------

namespace {

void check_levy_config(const Cone& cone, const LevyPathConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw UnsupportedCombination("levy path: alpha must lie in (0,1)");
  if (!cone.flags().sub_invariant) {
    throw UnsupportedCombination("levy path: cone " + cone.id() + " is not sub-invariant");
  }
  if (cfg.rank == 0) throw std::invalid_argument("levy path: rank must be >= 1");
  for (std::size_t j = 0; j < cfg.times.size(); ++j) {
    const double t = cfg.times[j];
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("levy path: times must lie in [0,1]");
    if (j > 0 && !(t > cfg.times[j - 1])) throw std::invalid_argument("levy path: times must increase");
  }
}

}  // namespace

LevyTerms levy_terms(const Cone& cone, const LevyPathConfig& cfg, std::uint64_t seed) {
  check_levy_config(cone, cfg);
  Rng rng(seed);
  const SpectralMeasure unit = cfg.spectral.scaled(1.0 / cfg.spectral.total());
  LePageTerms series(unit, cfg.alpha, 1.0, rng);
  LevyTerms out;
  out.radius.reserve(cfg.rank);
  out.atom.reserve(cfg.rank);
  out.mark.reserve(cfg.rank);
  for (std::size_t k = 0; k < cfg.rank; ++k) {
    const auto term = series.next();
    out.radius.push_back(term.radius);
    out.atom.push_back(term.atom);
    out.mark.push_back(rng.uniform());
  }
  return out;
}

std::vector<Element> levy_path(const Cone& cone, const LevyPathConfig& cfg, std::uint64_t seed) {
  const LevyTerms terms = levy_terms(cone, cfg, seed);
  const std::size_t grid = cfg.times.size();
  // Bucket j collects marks in (t_{j-1}, t_j]; bucket 0 collects marks <= t_0.
  std::vector<std::vector<std::size_t>> buckets(grid);
  for (std::size_t k = 0; k < terms.mark.size(); ++k) {
    const auto it = std::lower_bound(cfg.times.begin(), cfg.times.end(), terms.mark[k]);
    if (it == cfg.times.end()) continue;
    buckets[static_cast<std::size_t>(it - cfg.times.begin())].push_back(k);
  }
  std::vector<Element> path;
  path.reserve(grid);
  Element acc = cone.neutral();
  Element increment = cone.neutral();
  Element scratch = Element::zeros(cone.element_size());
  for (std::size_t j = 0; j < grid; ++j) {
    increment = cone.neutral();
    for (std::size_t k : buckets[j]) {
      cone.add_scaled(increment, terms.radius[k], cfg.spectral.atoms()[terms.atom[k]].direction, scratch);
    }
    cone.add_assign(acc, increment);
    path.push_back(acc);
  }
  return path;
}

Element levy_increment(const Cone& cone, const LevyPathConfig& cfg, const LevyTerms& terms,
                       TimeInterval interval) {
  if (!(interval.start < interval.end)) throw std::invalid_argument("levy_increment: need start < end");
  Element acc = cone.neutral();
  Element scratch = Element::zeros(cone.element_size());
  for (std::size_t k = 0; k < terms.mark.size(); ++k) {
    const double tau = terms.mark[k];
    if (tau > interval.start && tau <= interval.end) {
      cone.add_scaled(acc, terms.radius[k], cfg.spectral.atoms()[terms.atom[k]].direction, scratch);
    }
  }
  return acc;
}

}  // namespace conestable
