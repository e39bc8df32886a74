#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "conestable/element.hpp"
#include "conestable/random.hpp"

namespace conestable {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Relative tolerance for element equality: dist <= kEqualityTolerance *
/// max(1, norm of either element).
inline constexpr double kEqualityTolerance = 1e-9;

/// Raised when a (cone, alpha, mode) combination is not supported, as
/// opposed to a malformed argument.
class UnsupportedCombination : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ConeFlags {
  bool sub_invariant = false;
  bool second_distributive = false;
  bool idempotent = false;
  bool origin_equals_neutral = false;

  friend bool operator==(const ConeFlags&, const ConeFlags&) = default;
};

/// How an idempotent addition swallows scaled copies of a direction.
///
/// `kSmall`: x + a*e == x once a is small enough (maximum-type cones).
/// `kLarge`: x + a*e == x once a is large enough (minimum-type cones).
enum class Absorption { kNone, kSmall, kLarge };

/// A convex cone: an abelian semigroup with a scaling action of the positive
/// reals, a neutral element, an optional origin and a homogeneous norm.
///
/// Implementations are immutable after construction, so a cone can be shared
/// freely between threads. The in-place primitives (`add_assign`,
/// `scale_assign`, `add_scaled`) exist so samplers can accumulate long series
/// without allocating per term; the value-returning forms are built on them.
class Cone {
 public:
  virtual ~Cone() = default;

  /// Short registry name, e.g. "half-line-plus".
  virtual std::string name() const = 0;
  /// Name plus parameters, e.g. "coord-max(d=2)". Characters are keyed on it.
  virtual std::string id() const { return name(); }
  /// Number of coordinates of every element.
  virtual std::size_t element_size() const = 0;

  virtual void add_assign(Element& acc, const Element& x) const = 0;
  virtual void scale_assign(double a, Element& x) const = 0;

  /// acc <- acc + a*x. `scratch` is a caller-owned buffer of element size.
  virtual void add_scaled(Element& acc, double a, const Element& x, Element& scratch) const;

  virtual Element neutral() const = 0;
  virtual std::optional<Element> origin() const = 0;

  /// Norm with values in [0, +inf].
  virtual double norm(const Element& x) const = 0;
  virtual double dist(const Element& x, const Element& y) const = 0;

  virtual ConeFlags flags() const = 0;
  virtual Absorption absorption() const { return Absorption::kNone; }

  /// Default unit-norm direction for axiom testing.
  virtual Element random_direction(Rng& rng) const = 0;
  /// Radius log-uniform on [1e-3, 1e3] times `random_direction`.
  virtual Element random_element(Rng& rng) const;

  /// Throws std::invalid_argument if `x` is not a valid element.
  virtual void validate(const Element& x) const;

  /// Column names used when an element is written as a CSV row.
  virtual std::vector<std::string> csv_columns() const;

  Element add(const Element& x, const Element& y) const {
    Element out = x;
    add_assign(out, y);
    return out;
  }
  Element scale(double a, const Element& x) const {
    Element out = x;
    scale_assign(a, out);
    return out;
  }

  /// Equality within the cone's tolerance (see kEqualityTolerance).
  bool equal(const Element& x, const Element& y) const;
};

using ConePtr = std::shared_ptr<const Cone>;

/// Wraps a cone and reports different capability flags. Used to test that
/// check_axioms catches a wrongly declared law.
ConePtr with_flags(ConePtr base, ConeFlags flags);

// ---------------------------------------------------------------------------
// Axiom checking

enum class Law {
  kCommutativity,
  kAssociativity,
  kNeutral,
  kDistributivity,
  kScaleComposition,
  kUnitScale,
  kNeutralScale,
  kNormHomogeneity,
  kNormZeroAtOrigin,
  kSubInvariance,
  kSecondDistributivity,
  kIdempotency,
  kOriginEqualsNeutral,
};

std::string to_string(Law law);

struct AxiomTuple {
  Element x;
  Element y;
  Element z;
  double a = 1.0;
  double b = 1.0;
};

struct Violation {
  Law law;
  std::string witness;
};

struct AxiomReport {
  std::string cone_id;
  std::size_t trials = 0;
  std::vector<Violation> violations;
  /// Laws confirmed on at least one tuple, for flags that are only
  /// meaningful when witnessed (e.g. idempotency).
  std::vector<Law> witnessed;

  bool ok() const noexcept { return violations.empty(); }
  bool has_violation(Law law) const noexcept;
  bool was_witnessed(Law law) const noexcept;
};

/// Checks every law of a cone (and every law its flags claim) on one tuple.
std::vector<Violation> check_tuple(const Cone& cone, const AxiomTuple& tuple);

/// Runs check_tuple on `trials` random tuples drawn with the cone's own
/// element generator. Violations are reported, not thrown.
AxiomReport check_axioms(const Cone& cone, std::size_t trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Polar decomposition and stable elements

struct PolarPair {
  double radius = 0.0;
  Element direction;
};

/// x = radius * direction with norm(direction) == 1. Rejects the origin, the
/// neutral element and elements of infinite norm.
PolarPair polar(const Cone& cone, const Element& x);

struct ScalePair {
  double a;
  double b;
};

std::vector<ScalePair> default_stability_grid();

/// True iff a^{1/alpha} z + b^{1/alpha} z == (a+b)^{1/alpha} z on every pair.
bool is_alpha_stable_element(const Cone& cone, const Element& z, double alpha,
                             std::span<const ScalePair> grid);

inline bool is_alpha_stable_element(const Cone& cone, const Element& z, double alpha) {
  const auto grid = default_stability_grid();
  return is_alpha_stable_element(cone, z, alpha, grid);
}

}  // namespace conestable
