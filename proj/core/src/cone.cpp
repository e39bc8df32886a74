#include "conestable/cone.hpp"

#include <algorithm>
#include <cmath>

#include "conestable/serialize.hpp"

namespace conestable {

void Cone::add_scaled(Element& acc, double a, const Element& x, Element& scratch) const {
  scratch.assign(x);
  scale_assign(a, scratch);
  add_assign(acc, scratch);
}

Element Cone::random_element(Rng& rng) const {
  const double radius = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
  Element x = random_direction(rng);
  scale_assign(radius, x);
  return x;
}

void Cone::validate(const Element& x) const {
  if (x.size() != element_size()) {
    throw std::invalid_argument(id() + ": element has " + std::to_string(x.size()) +
                                " coordinates, expected " + std::to_string(element_size()));
  }
  for (double v : x) {
    if (std::isnan(v)) throw std::invalid_argument(id() + ": element has a NaN coordinate");
  }
}

std::vector<std::string> Cone::csv_columns() const {
  if (element_size() == 1) return {"value"};
  std::vector<std::string> cols;
  for (std::size_t i = 0; i < element_size(); ++i) cols.push_back("x" + std::to_string(i));
  return cols;
}

namespace {

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

}  // namespace

bool Cone::equal(const Element& x, const Element& y) const {
  const double d = dist(x, y);
  if (std::isnan(d)) return false;
  const double scale_ref =
      std::max({1.0, finite_or_zero(norm(x)), finite_or_zero(norm(y))});
  return d <= kEqualityTolerance * scale_ref;
}

// ---------------------------------------------------------------------------

namespace {

class FlaggedCone final : public Cone {
 public:
  FlaggedCone(ConePtr base, ConeFlags flags) : base_(std::move(base)), flags_(flags) {}

  std::string name() const override { return base_->name(); }
  std::string id() const override { return base_->id(); }
  std::size_t element_size() const override { return base_->element_size(); }
  void add_assign(Element& acc, const Element& x) const override { base_->add_assign(acc, x); }
  void scale_assign(double a, Element& x) const override { base_->scale_assign(a, x); }
  void add_scaled(Element& acc, double a, const Element& x, Element& scratch) const override {
    base_->add_scaled(acc, a, x, scratch);
  }
  Element neutral() const override { return base_->neutral(); }
  std::optional<Element> origin() const override { return base_->origin(); }
  double norm(const Element& x) const override { return base_->norm(x); }
  double dist(const Element& x, const Element& y) const override { return base_->dist(x, y); }
  ConeFlags flags() const override { return flags_; }
  Absorption absorption() const override { return base_->absorption(); }
  Element random_direction(Rng& rng) const override { return base_->random_direction(rng); }
  Element random_element(Rng& rng) const override { return base_->random_element(rng); }
  void validate(const Element& x) const override { base_->validate(x); }
  std::vector<std::string> csv_columns() const override { return base_->csv_columns(); }

 private:
  ConePtr base_;
  ConeFlags flags_;
};

}  // namespace

ConePtr with_flags(ConePtr base, ConeFlags flags) {
  return std::make_shared<FlaggedCone>(std::move(base), flags);
}

// ---------------------------------------------------------------------------

std::string to_string(Law law) {
  switch (law) {
    case Law::kCommutativity: return "commutativity";
    case Law::kAssociativity: return "associativity";
    case Law::kNeutral: return "neutral";
    case Law::kDistributivity: return "distributivity";
    case Law::kScaleComposition: return "scale-composition";
    case Law::kUnitScale: return "unit-scale";
    case Law::kNeutralScale: return "neutral-scale";
    case Law::kNormHomogeneity: return "norm-homogeneity";
    case Law::kNormZeroAtOrigin: return "norm-zero-at-origin";
    case Law::kSubInvariance: return "sub-invariance";
    case Law::kSecondDistributivity: return "second-distributivity";
    case Law::kIdempotency: return "idempotency";
    case Law::kOriginEqualsNeutral: return "origin-equals-neutral";
  }
  return "unknown";
}

bool AxiomReport::has_violation(Law law) const noexcept {
  return std::any_of(violations.begin(), violations.end(),
                     [law](const Violation& v) { return v.law == law; });
}

bool AxiomReport::was_witnessed(Law law) const noexcept {
  return std::find(witnessed.begin(), witnessed.end(), law) != witnessed.end();
}

namespace {

std::string describe(const AxiomTuple& t) {
  return "x=" + to_string(t.x) + " y=" + to_string(t.y) + " z=" + to_string(t.z) +
         " a=" + format_double(t.a) + " b=" + format_double(t.b);
}

bool close_reals(double lhs, double rhs) {
  if (std::isinf(lhs) || std::isinf(rhs)) return lhs == rhs;
  return std::abs(lhs - rhs) <= kEqualityTolerance * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace

std::vector<Violation> check_tuple(const Cone& cone, const AxiomTuple& t) {
  std::vector<Violation> out;
  const auto fail = [&](Law law) { out.push_back({law, describe(t)}); };
  const Element e = cone.neutral();
  const ConeFlags flags = cone.flags();

  if (!cone.equal(cone.add(t.x, t.y), cone.add(t.y, t.x))) fail(Law::kCommutativity);
  if (!cone.equal(cone.add(cone.add(t.x, t.y), t.z), cone.add(t.x, cone.add(t.y, t.z)))) {
    fail(Law::kAssociativity);
  }
  if (!cone.equal(cone.add(t.x, e), t.x)) fail(Law::kNeutral);
  if (!cone.equal(cone.scale(t.a, cone.add(t.x, t.y)),
                  cone.add(cone.scale(t.a, t.x), cone.scale(t.a, t.y)))) {
    fail(Law::kDistributivity);
  }
  if (!cone.equal(cone.scale(t.a, cone.scale(t.b, t.x)), cone.scale(t.a * t.b, t.x))) {
    fail(Law::kScaleComposition);
  }
  if (!cone.equal(cone.scale(1.0, t.x), t.x)) fail(Law::kUnitScale);
  if (!cone.equal(cone.scale(t.a, e), e)) fail(Law::kNeutralScale);

  const double nx = cone.norm(t.x);
  if (std::isfinite(nx) && !close_reals(cone.norm(cone.scale(t.a, t.x)), t.a * nx)) {
    fail(Law::kNormHomogeneity);
  }
  if (const auto o = cone.origin()) {
    const bool x_is_origin = cone.dist(t.x, *o) == 0.0;
    if (cone.norm(*o) != 0.0 || (!x_is_origin && nx == 0.0)) fail(Law::kNormZeroAtOrigin);
  }

  if (flags.sub_invariant) {
    const double nh = cone.norm(t.y);
    const double d = cone.dist(cone.add(t.x, t.y), t.x);
    const double slack = kEqualityTolerance * std::max({1.0, finite_or_zero(nx), finite_or_zero(nh)});
    if (!(d <= nh + slack)) fail(Law::kSubInvariance);
  }
  if (flags.second_distributive) {
    if (!cone.equal(cone.add(cone.scale(t.a, t.x), cone.scale(t.b, t.x)),
                    cone.scale(t.a + t.b, t.x))) {
      fail(Law::kSecondDistributivity);
    }
  }
  if (flags.idempotent && !cone.equal(cone.add(t.x, t.x), t.x)) fail(Law::kIdempotency);
  if (flags.origin_equals_neutral) {
    const auto o = cone.origin();
    if (!o || !cone.equal(*o, e)) fail(Law::kOriginEqualsNeutral);
  }
  return out;
}

AxiomReport check_axioms(const Cone& cone, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("check_axioms: trials must be >= 1");
  AxiomReport report;
  report.cone_id = cone.id();
  report.trials = trials;
  Rng rng(seed);
  const auto log_uniform_scalar = [&rng] { return std::pow(10.0, -2.0 + 4.0 * rng.uniform()); };
  bool idempotency_seen = false;
  for (std::size_t i = 0; i < trials; ++i) {
    AxiomTuple t;
    t.x = cone.random_element(rng);
    t.y = cone.random_element(rng);
    t.z = cone.random_element(rng);
    t.a = log_uniform_scalar();
    t.b = log_uniform_scalar();
    // Every twentieth tuple exercises the neutral element as the second operand.
    if (i % 20 == 19) t.y = cone.neutral();
    auto v = check_tuple(cone, t);
    if (cone.flags().idempotent && cone.dist(cone.add(t.x, t.x), t.x) == 0.0) {
      idempotency_seen = true;
    }
    report.violations.insert(report.violations.end(), std::make_move_iterator(v.begin()),
                             std::make_move_iterator(v.end()));
  }
  if (idempotency_seen) report.witnessed.push_back(Law::kIdempotency);
  return report;
}

// ---------------------------------------------------------------------------

PolarPair polar(const Cone& cone, const Element& x) {
  cone.validate(x);
  const double r = cone.norm(x);
  if (!std::isfinite(r)) throw std::invalid_argument("polar: element has infinite norm");
  if (r <= 0.0) throw std::invalid_argument("polar: the origin has no direction");
  if (cone.equal(x, cone.neutral())) throw std::invalid_argument("polar: the neutral element has no direction");
  return {r, cone.scale(1.0 / r, x)};
}

std::vector<ScalePair> default_stability_grid() {
  return {{1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}, {0.5, 3.0}, {3.0, 0.25}};
}

bool is_alpha_stable_element(const Cone& cone, const Element& z, double alpha,
                             std::span<const ScalePair> grid) {
  if (alpha == 0.0 || !std::isfinite(alpha)) {
    throw std::invalid_argument("is_alpha_stable_element: alpha must be a nonzero real");
  }
  for (const auto& [a, b] : grid) {
    if (!(a > 0.0) || !(b > 0.0)) {
      throw std::invalid_argument("is_alpha_stable_element: grid scalars must be positive");
    }
    const double p = 1.0 / alpha;
    const Element lhs = cone.add(cone.scale(std::pow(a, p), z), cone.scale(std::pow(b, p), z));
    const Element rhs = cone.scale(std::pow(a + b, p), z);
    if (!cone.equal(lhs, rhs)) return false;
  }
  return true;
}

}  // namespace conestable
