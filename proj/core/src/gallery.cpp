#include "conestable/gallery.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ranges>

#include "conestable/serialize.hpp"

namespace conestable {

namespace {

double extended_gap(double x, double y) {
  if (x == y) return 0.0;
  return std::abs(x - y);
}

void require(bool ok, const Cone& cone, const char* what) {
  if (!ok) throw std::invalid_argument(cone.id() + ": " + what);
}

void validate_scalar(const Cone& cone, const Element& x, bool allow_infinity) {
  require(x.size() == 1, cone, "expected a scalar element");
  require(x[0] >= 0.0, cone, "element must be nonnegative");
  require(allow_infinity || std::isfinite(x[0]), cone, "element must be finite");
}

// Scaling by a positive number keeps +inf at +inf (0 * inf never arises).
void scale_extended(double a, Element& x) {
  if (!std::isinf(x[0])) x[0] *= a;
}

}  // namespace

// --- half-lines ------------------------------------------------------------

double HalfLinePlus::dist(const Element& x, const Element& y) const { return extended_gap(x[0], y[0]); }
void HalfLinePlus::validate(const Element& x) const { validate_scalar(*this, x, false); }

double HalfLineMax::dist(const Element& x, const Element& y) const { return extended_gap(x[0], y[0]); }
void HalfLineMax::validate(const Element& x) const { validate_scalar(*this, x, false); }

void HalfLineMin::scale_assign(double a, Element& x) const { scale_extended(a, x); }
double HalfLineMin::dist(const Element& x, const Element& y) const { return extended_gap(x[0], y[0]); }
void HalfLineMin::validate(const Element& x) const { validate_scalar(*this, x, true); }

// --- coordinatewise maximum ------------------------------------------------

CoordMax::CoordMax(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("coord-max: dimension must be >= 1");
}

std::string CoordMax::id() const { return "coord-max(d=" + std::to_string(dim_) + ")"; }

void CoordMax::add_assign(Element& acc, const Element& x) const {
  for (std::size_t i = 0; i < dim_; ++i) acc[i] = std::max(acc[i], x[i]);
}

void CoordMax::scale_assign(double a, Element& x) const {
  for (auto& v : x.values()) v *= a;
}

void CoordMax::add_scaled(Element& acc, double a, const Element& x, Element&) const {
  for (std::size_t i = 0; i < dim_; ++i) acc[i] = std::max(acc[i], a * x[i]);
}

double CoordMax::norm(const Element& x) const {
  return *std::max_element(x.begin(), x.end());
}

double CoordMax::dist(const Element& x, const Element& y) const {
  double d = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

Element CoordMax::random_direction(Rng& rng) const {
  Element x = Element::zeros(dim_);
  for (auto& v : x.values()) v = rng.uniform();
  x[rng.below(dim_)] = 1.0;
  return x;
}

void CoordMax::validate(const Element& x) const {
  Cone::validate(x);
  for (double v : x) require(v >= 0.0 && std::isfinite(v), *this, "coordinates must be finite and nonnegative");
}

// --- power addition --------------------------------------------------------

PowerCone::PowerCone(double beta, std::optional<bool> sub_invariant) : beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("power: beta must be positive");
  flags_.second_distributive = beta == 1.0;
  flags_.origin_equals_neutral = true;
  if (sub_invariant) {
    flags_.sub_invariant = *sub_invariant;
  } else {
    const PowerCone candidate(beta, true);
    const auto report = check_axioms(candidate, 1000, 0x9e3779b9ULL);
    flags_.sub_invariant = !report.has_violation(Law::kSubInvariance);
    probed_ = true;
  }
}

std::string PowerCone::id() const { return "power(beta=" + format_double(beta_) + ")"; }

void PowerCone::add_assign(Element& acc, const Element& x) const {
  const double hi = std::max(acc[0], x[0]);
  const double lo = std::min(acc[0], x[0]);
  if (hi == 0.0) {
    acc[0] = 0.0;
    return;
  }
  // hi * (1 + (lo/hi)^beta)^{1/beta}, evaluated without forming x^beta.
  acc[0] = hi * std::exp(std::log1p(std::pow(lo / hi, beta_)) / beta_);
}

double PowerCone::dist(const Element& x, const Element& y) const { return extended_gap(x[0], y[0]); }
void PowerCone::validate(const Element& x) const { validate_scalar(*this, x, false); }

// --- harmonic sum ----------------------------------------------------------

void HarmonicCone::add_assign(Element& acc, const Element& x) const {
  // IEEE division gives 1/0 = inf and 1/inf = 0, which is exactly x + 0 = 0
  // and x + inf = x.
  acc[0] = 1.0 / (1.0 / acc[0] + 1.0 / x[0]);
}

void HarmonicCone::scale_assign(double a, Element& x) const { scale_extended(a, x); }
double HarmonicCone::dist(const Element& x, const Element& y) const { return extended_gap(x[0], y[0]); }
void HarmonicCone::validate(const Element& x) const { validate_scalar(*this, x, true); }

// --- convex bodies ---------------------------------------------------------

ConvexBody2D::ConvexBody2D(std::size_t grid) : grid_(grid), cos_(grid), sin_(grid) {
  if (grid < 4) throw std::invalid_argument("convex-body-2d: grid must have at least 4 directions");
  for (std::size_t i = 0; i < grid; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(grid);
    cos_[i] = std::cos(theta);
    sin_[i] = std::sin(theta);
  }
}

std::string ConvexBody2D::id() const { return "convex-body-2d(m=" + std::to_string(grid_) + ")"; }

void ConvexBody2D::add_assign(Element& acc, const Element& x) const {
  double* out = acc.data();
  const double* in = x.data();
  for (std::size_t i = 0; i < grid_; ++i) out[i] += in[i];
}

void ConvexBody2D::scale_assign(double a, Element& x) const {
  for (auto& v : x.values()) v *= a;
}

void ConvexBody2D::add_scaled(Element& acc, double a, const Element& x, Element&) const {
  double* out = acc.data();
  const double* in = x.data();
  for (std::size_t i = 0; i < grid_; ++i) out[i] += a * in[i];
}

double ConvexBody2D::norm(const Element& x) const {
  double n = 0.0;
  for (double v : x) n = std::max(n, std::abs(v));
  return n;
}

double ConvexBody2D::dist(const Element& x, const Element& y) const {
  double d = 0.0;
  for (std::size_t i = 0; i < grid_; ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

Element ConvexBody2D::hull_of(std::span<const std::array<double, 2>> points) const {
  if (points.empty()) throw std::invalid_argument("convex-body-2d: hull of no points");
  Element h = Element::filled(grid_, -kInfinity);
  for (const auto& p : points) {
    for (std::size_t i = 0; i < grid_; ++i) h[i] = std::max(h[i], p[0] * cos_[i] + p[1] * sin_[i]);
  }
  return h;
}

Element ConvexBody2D::segment(std::array<double, 2> p, std::array<double, 2> q) const {
  const std::array<std::array<double, 2>, 2> pts{p, q};
  return hull_of(pts);
}

Element ConvexBody2D::disk(double r, std::array<double, 2> centre) const {
  if (!(r >= 0.0)) throw std::invalid_argument("convex-body-2d: disk radius must be nonnegative");
  Element h = Element::zeros(grid_);
  for (std::size_t i = 0; i < grid_; ++i) h[i] = r + centre[0] * cos_[i] + centre[1] * sin_[i];
  return h;
}

Element ConvexBody2D::random_direction(Rng& rng) const {
  // random triangle with one vertex at the origin, so h >= 0 and the
  // support-function characters stay in [0,1]
  std::array<std::array<double, 2>, 3> pts{};
  for (auto& p : pts | std::views::drop(1)) p = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
  Element h = hull_of(pts);
  scale_assign(1.0 / norm(h), h);
  return h;
}

void ConvexBody2D::validate(const Element& x) const {
  Cone::validate(x);
  for (double v : x) require(std::isfinite(v), *this, "support values must be finite");
  require(validate_support_vector(x.values()), *this, "support vector violates discrete convexity");
}

std::vector<std::string> ConvexBody2D::csv_columns() const {
  std::vector<std::string> cols;
  for (std::size_t i = 0; i < grid_; ++i) cols.push_back("h" + std::to_string(i));
  return cols;
}

// --- discrete measures -----------------------------------------------------

DiscreteMeasure::DiscreteMeasure(std::size_t ground) : ground_(ground) {
  if (ground == 0) throw std::invalid_argument("discrete-measure: ground set must be nonempty");
}

std::string DiscreteMeasure::id() const { return "discrete-measure(G=" + std::to_string(ground_) + ")"; }

void DiscreteMeasure::add_assign(Element& acc, const Element& x) const {
  for (std::size_t i = 0; i < ground_; ++i) acc[i] += x[i];
}

void DiscreteMeasure::scale_assign(double a, Element& x) const {
  for (auto& v : x.values()) v *= a;
}

void DiscreteMeasure::add_scaled(Element& acc, double a, const Element& x, Element&) const {
  for (std::size_t i = 0; i < ground_; ++i) acc[i] += a * x[i];
}

double DiscreteMeasure::norm(const Element& x) const {
  double total = 0.0;
  for (double v : x) total += v;
  return total;
}

double DiscreteMeasure::dist(const Element& x, const Element& y) const { return kantorovich_tv(x, y); }

Element DiscreteMeasure::random_direction(Rng& rng) const {
  Element m = Element::zeros(ground_);
  double total = 0.0;
  for (auto& v : m.values()) total += (v = rng.uniform());
  scale_assign(1.0 / total, m);
  return m;
}

void DiscreteMeasure::validate(const Element& x) const {
  Cone::validate(x);
  for (double v : x) require(v >= 0.0 && std::isfinite(v), *this, "masses must be finite and nonnegative");
}

std::vector<std::string> DiscreteMeasure::csv_columns() const {
  std::vector<std::string> cols;
  for (std::size_t i = 0; i < ground_; ++i) cols.push_back("m" + std::to_string(i));
  return cols;
}

// ---------------------------------------------------------------------------

bool validate_support_vector(std::span<const double> h) {
  const std::size_t m = h.size();
  if (m < 4) throw std::invalid_argument("validate_support_vector: need at least 4 directions");
  const double c = std::cos(2.0 * std::numbers::pi / static_cast<double>(m));
  double scale_ref = 1.0;
  for (double v : h) scale_ref = std::max(scale_ref, std::abs(v));
  const double slack = 1e-12 * scale_ref;
  for (std::size_t i = 0; i < m; ++i) {
    const double prev = h[(i + m - 1) % m];
    const double next = h[(i + 1) % m];
    if (prev + next < 2.0 * h[i] * c - slack) return false;
  }
  return true;
}

std::array<double, 2> steiner_point(std::span<const double> h) {
  if (!validate_support_vector(h)) throw std::invalid_argument("steiner_point: support vector is not convex");
  const std::size_t m = h.size();
  std::array<double, 2> s{0.0, 0.0};
  for (std::size_t i = 0; i < m; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
    s[0] += h[i] * std::cos(theta);
    s[1] += h[i] * std::sin(theta);
  }
  // (1/kappa_2) * (2 pi/m) with kappa_2 = pi.
  const double w = 2.0 / static_cast<double>(m);
  return {w * s[0], w * s[1]};
}

double kantorovich_tv(const Element& m1, const Element& m2) {
  if (m1.size() != m2.size()) throw std::invalid_argument("kantorovich_tv: ground sets differ in size");
  double d = 0.0;
  for (std::size_t i = 0; i < m1.size(); ++i) d += std::abs(m1[i] - m2[i]);
  return d;
}

// ---------------------------------------------------------------------------

std::vector<std::string> cone_names() {
  return {"half-line-plus", "half-line-max", "half-line-min", "coord-max",
          "power",          "harmonic",      "convex-body-2d", "discrete-measure"};
}

ConePtr make_cone(std::string_view name, const ConeParams& params) {
  if (name == "half-line-plus") return std::make_shared<HalfLinePlus>();
  if (name == "half-line-max") return std::make_shared<HalfLineMax>();
  if (name == "half-line-min") return std::make_shared<HalfLineMin>();
  if (name == "coord-max") return std::make_shared<CoordMax>(params.dim);
  if (name == "power") return std::make_shared<PowerCone>(params.beta);
  if (name == "harmonic") return std::make_shared<HarmonicCone>();
  if (name == "convex-body-2d") return std::make_shared<ConvexBody2D>(params.grid);
  if (name == "discrete-measure") return std::make_shared<DiscreteMeasure>(params.ground);
  throw std::invalid_argument("unknown cone '" + std::string(name) + "'");
}

}  // namespace conestable
