#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "conestable/cone.hpp"
#include "conestable/point_process.hpp"
#include "conestable/random.hpp"

namespace conestable {

/// Jump times Gamma_1 < Gamma_2 < ... of a unit-rate Poisson process:
/// partial sums of unit-mean exponentials drawn by inversion.
class GammaArrivals {
 public:
  explicit GammaArrivals(std::uint64_t seed) : rng_(Rng(seed)) {}

  /// Fixed arrivals built from given exponential gaps; cannot be extended.
  static GammaArrivals from_exponentials(std::span<const double> gaps);

  /// Makes at least k arrivals available.
  void extend_to(std::size_t k);

  std::size_t size() const noexcept { return gammas_.size(); }
  /// Gamma_{i+1} (zero-based).
  double operator[](std::size_t i) const noexcept { return gammas_[i]; }
  std::span<const double> values() const noexcept { return gammas_; }

 private:
  GammaArrivals() = default;

  std::optional<Rng> rng_;
  std::vector<double> gammas_;
};

GammaArrivals gamma_arrivals(std::uint64_t seed, std::size_t k);

struct SpectralAtom {
  Element direction;
  double weight = 1.0;
};

/// Finite atomic measure on the unit sphere of a cone.
class SpectralMeasure {
 public:
  /// Validates that every direction is a valid unit-norm element and every
  /// weight is positive and finite.
  SpectralMeasure(const Cone& cone, std::vector<SpectralAtom> atoms);

  const std::vector<SpectralAtom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double total() const noexcept { return total_; }
  std::vector<double> normalized_weights() const;
  double mass_of(std::span<const std::size_t> atom_ids) const;

  /// Same directions, weights multiplied by `factor`.
  SpectralMeasure scaled(double factor) const;

  /// Atom index with probability weight/total. Consumes one uniform unless
  /// there is a single atom.
  std::size_t draw_index(Rng& rng) const noexcept {
    if (cumulative_.size() == 1) return 0;
    const double u = rng.uniform();
    std::size_t i = 0;
    while (i + 1 < cumulative_.size() && u >= cumulative_[i]) ++i;
    return i;
  }
  const Element& draw(Rng& rng) const noexcept { return atoms_[draw_index(rng)].direction; }

 private:
  std::vector<SpectralAtom> atoms_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

/// One draw from sigma-hat using Rng(seed).
Element sample_spectral(std::uint64_t seed, const SpectralMeasure& spectral);

// ---------------------------------------------------------------------------
// Truncation of the LePage series

/// Sum exactly K terms; the tail is not controlled (tail_bound = +inf).
struct FixedRank {
  std::size_t rank = 1;
};
/// Smallest K whose analytic expected discarded tail is <= tol. Needs a
/// sub-invariant cone and alpha in (0,1).
struct ExpectedTail {
  double tol = 1e-3;
};
/// Idempotent cones: stop once no later term can change the partial sum.
struct ExactStop {
  std::size_t max_terms = 10'000'000;
};
using Truncation = std::variant<FixedRank, ExpectedTail, ExactStop>;

/// sum_{k>K} Gamma(k - 1/alpha)/Gamma(k) = E sum_{k>K} Gamma_k^{-1/alpha}.
/// Closed form Gamma(K+1-1/alpha) / ((1/alpha - 1) Gamma(K)); +inf when a
/// term has infinite mean. Requires alpha in (0,1), K >= 1.
double expected_tail(double alpha, std::size_t rank);

/// Smallest K >= 1 with expected_tail(alpha, K) <= tol (relative slack
/// 1e-12 so exact ties resolve to the smaller K).
std::size_t truncation_rank(double alpha, double tol);

/// g^{-p} with exact fast paths for small integer p.
inline double inverse_power(double g, double p) noexcept {
  if (p == 2.0) return 1.0 / (g * g);
  if (p == 1.0) return 1.0 / g;
  if (p == -1.0) return g;
  if (p == -2.0) return g * g;
  return std::exp(-p * std::log(g));
}

struct LePageConfig {
  double alpha = 0.5;
  SpectralMeasure spectral;
  std::optional<Element> deterministic_part;
  Truncation truncation = FixedRank{1000};

  /// c = sigma(S)^{1/alpha}
  double scale_constant() const { return std::pow(spectral.total(), 1.0 / alpha); }
};

struct LePageSample {
  Element value;
  /// Expected discarded-tail norm (expected-tail mode), 0 (exact stop) or
  /// +inf (fixed rank).
  double tail_bound = 0.0;
  std::size_t terms = 0;
};

/// Resolved truncation: rank (or term cap) and declared tail bound. Throws
/// UnsupportedCombination when the cone cannot honour the requested mode.
struct TruncationPlan {
  std::size_t rank = 0;
  bool exact_stop = false;
  double tail_bound = kInfinity;
};
TruncationPlan plan_truncation(const Cone& cone, const LePageConfig& cfg);

/// Successive LePage terms c * Gamma_k^{-1/alpha} along random atoms.
/// Per term the stream consumes one uniform for the exponential gap, then
/// one for the atom (skipped for a single atom).
class LePageTerms {
 public:
  LePageTerms(const SpectralMeasure& spectral, double alpha, double c, Rng& rng) noexcept
      : spectral_(&spectral), inv_alpha_(1.0 / alpha), c_(c), rng_(&rng) {}

  struct Term {
    double gamma;
    double radius;
    std::size_t atom;
  };

  Term next() noexcept {
    gamma_ += rng_->exponential();
    const std::size_t atom = spectral_->draw_index(*rng_);
    return {gamma_, c_ * inverse_power(gamma_, inv_alpha_), atom};
  }

 private:
  const SpectralMeasure* spectral_;
  double inv_alpha_;
  double c_;
  Rng* rng_;
  double gamma_ = 0.0;
};

/// z + c * sum_{k<=K} Gamma_k^{-1/alpha} eps_k, summed in increasing k.
LePageSample lepage_sample(const Cone& cone, const LePageConfig& cfg, Rng& rng);
LePageSample lepage_sample(const Cone& cone, const LePageConfig& cfg, std::uint64_t seed);

/// n samples, replicate i drawn from Rng::substream(seed, i).
std::vector<LePageSample> lepage_batch(const Cone& cone, const LePageConfig& cfg, std::uint64_t seed,
                                       std::size_t n);

/// Deterministic evaluation of z + c * sum_k gammas[k]^{-1/alpha} directions[k].
Element lepage_sum(const Cone& cone, double alpha, double c, std::span<const double> gammas,
                   std::span<const Element> directions, const std::optional<Element>& z = std::nullopt);

// ---------------------------------------------------------------------------
// Stable Poisson processes

/// Exact realisation of the stable Poisson process with intensity
/// theta_alpha x sigma, restricted to norms > window_r (alpha > 0) or
/// norms < 1/window_r (alpha < 0). Points carry their atom index.
CountingMeasure stable_poisson_points(const Cone& cone, double alpha, const SpectralMeasure& spectral,
                                      double window_r, Rng& rng);
CountingMeasure stable_poisson_points(const Cone& cone, double alpha, const SpectralMeasure& spectral,
                                      double window_r, std::uint64_t seed);

/// Discrete law of a nonnegative multiplier eta. A zero value sends the point
/// to the origin, which removes it from the configuration.
struct ScaleMixture {
  std::vector<double> values;
  std::vector<double> probabilities;

  static ScaleMixture constant(double v) { return {{v}, {1.0}}; }

  void validate() const;
  double draw(Rng& rng) const noexcept;
  /// E[eta^alpha] (zero values contribute 0 for alpha > 0).
  double moment(double alpha) const;
  double smallest_positive() const;
  double largest() const;
};

struct MultipliedPoints {
  CountingMeasure measure;
  /// a = E[eta^alpha]: the result is the stable process with spectral mass a*sigma.
  double intensity_factor = 1.0;
};

/// Replaces every point x (each copy of a multiple point separately) by
/// eta_i x with i.i.d. eta_i. The exact window shrinks to what the support
/// of eta guarantees.
MultipliedPoints multiply_points(const Cone& cone, const CountingMeasure& points, const ScaleMixture& eta,
                                 double alpha, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Levy processes

struct LevyPathConfig {
  double alpha = 0.5;
  SpectralMeasure spectral;
  /// 0 <= t_0 < t_1 < ... <= 1
  std::vector<double> times;
  std::size_t rank = 1000;
};

/// Raw realisation shared by paths and increments: K terms with radius,
/// atom and uniform mark tau_k. Per term the stream consumes the gap, the
/// atom (if more than one) and then the mark.
struct LevyTerms {
  std::vector<double> radius;
  std::vector<std::size_t> atom;
  std::vector<double> mark;
};
LevyTerms levy_terms(const Cone& cone, const LevyPathConfig& cfg, std::uint64_t seed);

/// X(t_j) = sum_{k<=K, tau_k <= t_j} Gamma_k^{-1/alpha} eps_k.
std::vector<Element> levy_path(const Cone& cone, const LevyPathConfig& cfg, std::uint64_t seed);

struct TimeInterval {
  double start;  // exclusive
  double end;    // inclusive
};

/// Sum over terms with tau_k in (start, end], increasing k.
Element levy_increment(const Cone& cone, const LevyPathConfig& cfg, const LevyTerms& terms,
                       TimeInterval interval);

}  // namespace conestable
