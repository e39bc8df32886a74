#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "conestable/cone.hpp"

namespace conestable {

/// Character families shipped with the gallery. All are [0,1]-valued with
/// the identical involution.
enum class CharacterFamily {
  kExpLinear,       // half-line-plus:   exp(-t x)                 params {t}
  kBelow,           // half-line-max:    1[x <= a]                 params {a}
  kAbove,           // half-line-min:    1[x >= z]                 params {z}
  kBox,             // coord-max:        1[x <= z coordinatewise]  params z
  kExpPower,        // power(beta):      exp(-t x^beta)            params {t, beta}
  kExpReciprocal,   // harmonic:         exp(-a / x)               params {a}
  kExpSupport,      // convex-body-2d:   exp(-sum_i nu_i h_i)      params nu
  kExpMass,         // discrete-measure: exp(-sum_i u_i m_i)       params u
};

std::string to_string(CharacterFamily family);
CharacterFamily character_family_from_string(const std::string& name);

struct Character {
  std::string cone_id;
  CharacterFamily family;
  std::vector<double> params;
};

/// Builds a character, checking that the family matches the cone and the
/// parameter vector is admissible.
Character make_character(const Cone& cone, CharacterFamily family, std::vector<double> params);

/// chi(x). Throws std::invalid_argument on a cone mismatch.
double eval(const Cone& cone, const Character& chi, const Element& x);

/// The character x -> chi(s x).
Character scale_char(double s, const Character& chi);

/// Small probe set used by the statistical tests (three to five characters
/// per cone, chosen so that typical stable samples give non-degenerate
/// values).
std::vector<Character> probe_characters(const Cone& cone);

/// Richer probe set for separation checks. Threshold families use the
/// log grid 10^{-3 + k/4}, k = 0..24, so two scalar elements are told apart
/// whenever a grid point separates them; exponential families are strictly
/// monotone and separate every pair of distinct finite values.
std::vector<Character> separating_probes(const Cone& cone);

struct LaplaceEstimate {
  Character character;
  std::size_t n = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  /// -log(mean); +inf when mean == 0.
  double exponent = 0.0;
  /// Set when mean == 0: the character is too extreme for the sample.
  bool degenerate = false;
};

/// Empirical Laplace transform (1/n) sum chi(xi_i) and exponent -log of it.
/// Standard error is the sample standard deviation over sqrt(n).
LaplaceEstimate empirical_laplace(const Cone& cone, std::span<const Element> samples, const Character& chi);

struct AlphaFit {
  double alpha = 0.0;
  double alpha_standard_error = 0.0;
  double intercept = 0.0;
  std::vector<double> scales;
  std::vector<LaplaceEstimate> estimates;
  /// log(phi_hat) - fitted value, per grid point.
  std::vector<double> residuals;
  /// Delta-method standard error of log(phi_hat), per grid point.
  std::vector<double> log_exponent_se;
};

/// Weighted least-squares slope of log phi(s o chi) against log s, weights
/// from the delta-method variance of log(-log m_hat). Throws
/// std::domain_error when an exponent is 0 or +inf.
AlphaFit estimate_alpha(const Cone& cone, std::span<const Element> samples, const Character& chi,
                        std::span<const double> s_grid);

/// "family,p0,p1,..."
std::string to_csv_row(const Character& chi);
/// "family,params...,n,mean,se,exponent" with params joined by ';'.
std::string to_csv_row(const LaplaceEstimate& est);

}  // namespace conestable
