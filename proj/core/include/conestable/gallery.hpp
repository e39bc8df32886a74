#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conestable/cone.hpp"

namespace conestable {

/// [0, inf) with ordinary addition.
class HalfLinePlus final : public Cone {
 public:
  std::string name() const override { return "half-line-plus"; }
  std::size_t element_size() const override { return 1; }
  void add_assign(Element& acc, const Element& x) const override { acc[0] += x[0]; }
  void scale_assign(double a, Element& x) const override { x[0] *= a; }
  void add_scaled(Element& acc, double a, const Element& x, Element&) const override { acc[0] += a * x[0]; }
  Element neutral() const override { return {0.0}; }
  std::optional<Element> origin() const override { return Element{0.0}; }
  double norm(const Element& x) const override { return x[0]; }
  double dist(const Element& x, const Element& y) const override;
  ConeFlags flags() const override { return {true, true, false, true}; }
  Element random_direction(Rng&) const override { return {1.0}; }
  void validate(const Element& x) const override;
};

/// [0, inf) with the maximum as addition.
class HalfLineMax final : public Cone {
 public:
  std::string name() const override { return "half-line-max"; }
  std::size_t element_size() const override { return 1; }
  void add_assign(Element& acc, const Element& x) const override {
    if (x[0] > acc[0]) acc[0] = x[0];
  }
  void scale_assign(double a, Element& x) const override { x[0] *= a; }
  void add_scaled(Element& acc, double a, const Element& x, Element&) const override {
    const double v = a * x[0];
    if (v > acc[0]) acc[0] = v;
  }
  Element neutral() const override { return {0.0}; }
  std::optional<Element> origin() const override { return Element{0.0}; }
  double norm(const Element& x) const override { return x[0]; }
  double dist(const Element& x, const Element& y) const override;
  ConeFlags flags() const override { return {true, false, true, true}; }
  Absorption absorption() const override { return Absorption::kSmall; }
  Element random_direction(Rng&) const override { return {1.0}; }
  void validate(const Element& x) const override;
};

/// [0, inf] with the minimum as addition; the neutral element is +inf.
class HalfLineMin final : public Cone {
 public:
  std::string name() const override { return "half-line-min"; }
  std::size_t element_size() const override { return 1; }
  void add_assign(Element& acc, const Element& x) const override {
    if (x[0] < acc[0]) acc[0] = x[0];
  }
  void scale_assign(double a, Element& x) const override;
  Element neutral() const override { return {kInfinity}; }
  std::optional<Element> origin() const override { return Element{0.0}; }
  double norm(const Element& x) const override { return x[0]; }
  double dist(const Element& x, const Element& y) const override;
  ConeFlags flags() const override { return {false, false, true, false}; }
  Absorption absorption() const override { return Absorption::kLarge; }
  Element random_direction(Rng&) const override { return {1.0}; }
  void validate(const Element& x) const override;
};

/// [0, inf)^d with the coordinatewise maximum and the sup-norm.
class CoordMax final : public Cone {
 public:
  explicit CoordMax(std::size_t dim);

  std::string name() const override { return "coord-max"; }
  std::string id() const override;
  std::size_t element_size() const override { return dim_; }
  void add_assign(Element& acc, const Element& x) const override;
  void scale_assign(double a, Element& x) const override;
  void add_scaled(Element& acc, double a, const Element& x, Element&) const override;
  Element neutral() const override { return Element::zeros(dim_); }
  std::optional<Element> origin() const override { return Element::zeros(dim_); }
  double norm(const Element& x) const override;
  double dist(const Element& x, const Element& y) const override;
  ConeFlags flags() const override { return {true, false, true, true}; }
  Absorption absorption() const override { return Absorption::kSmall; }
  Element random_direction(Rng& rng) const override;
  void validate(const Element& x) const override;

  std::size_t dim() const noexcept { return dim_; }

 private:
  std::size_t dim_;
};

/// [0, inf) with x + y = (x^beta + y^beta)^{1/beta}.
///
/// Whether the Euclidean metric is sub-invariant is not declared up front:
/// unless `sub_invariant` is given, the constructor probes the law with
/// check_axioms and records the outcome (see `sub_invariance_probed`).
class PowerCone final : public Cone {
 public:
  explicit PowerCone(double beta, std::optional<bool> sub_invariant = std::nullopt);

  std::string name() const override { return "power"; }
  std::string id() const override;
  std::size_t element_size() const override { return 1; }
  void add_assign(Element& acc, const Element& x) const override;
  void scale_assign(double a, Element& x) const override { x[0] *= a; }
  Element neutral() const override { return {0.0}; }
  std::optional<Element> origin() const override { return Element{0.0}; }
  double norm(const Element& x) const override { return x[0]; }
  double dist(const Element& x, const Element& y) const override;
  ConeFlags flags() const override { return flags_; }
  Element random_direction(Rng&) const override { return {1.0}; }
  void validate(const Element& x) const override;

  double beta() const noexcept { return beta_; }
  bool sub_invariance_probed() const noexcept { return probed_; }

 private:
  double beta_;
  ConeFlags flags_;
  bool probed_ = false;
};

/// [0, inf] with the harmonic sum (x^{-1} + y^{-1})^{-1}; neutral is +inf,
/// origin is 0 and x + 0 = 0.
class HarmonicCone final : public Cone {
 public:
  std::string name() const override { return "harmonic"; }
  std::size_t element_size() const override { return 1; }
  void add_assign(Element& acc, const Element& x) const override;
  void scale_assign(double a, Element& x) const override;
  Element neutral() const override { return {kInfinity}; }
  std::optional<Element> origin() const override { return Element{0.0}; }
  double norm(const Element& x) const override { return x[0]; }
  double dist(const Element& x, const Element& y) const override;
  ConeFlags flags() const override { return {}; }
  Element random_direction(Rng&) const override { return {1.0}; }
  void validate(const Element& x) const override;
};

/// Planar convex bodies stored by their support function on m equally spaced
/// directions u_i = (cos 2 pi i/m, sin 2 pi i/m). Addition is Minkowski
/// addition (pointwise sum of support values); the metric is the grid
/// Hausdorff distance max_i |h_i - g_i|.
class ConvexBody2D final : public Cone {
 public:
  explicit ConvexBody2D(std::size_t grid = 64);

  std::string name() const override { return "convex-body-2d"; }
  std::string id() const override;
  std::size_t element_size() const override { return grid_; }
  void add_assign(Element& acc, const Element& x) const override;
  void scale_assign(double a, Element& x) const override;
  void add_scaled(Element& acc, double a, const Element& x, Element&) const override;
  Element neutral() const override { return Element::zeros(grid_); }
  std::optional<Element> origin() const override { return Element::zeros(grid_); }
  double norm(const Element& x) const override;
  double dist(const Element& x, const Element& y) const override;
  ConeFlags flags() const override { return {true, true, false, true}; }
  /// Unit-norm support vector of the hull of three random points in [-1,1]^2.
  Element random_direction(Rng& rng) const override;
  void validate(const Element& x) const override;
  std::vector<std::string> csv_columns() const override;

  std::size_t grid() const noexcept { return grid_; }
  std::array<double, 2> direction(std::size_t i) const { return {cos_[i], sin_[i]}; }

  /// Support vector of conv(points).
  Element hull_of(std::span<const std::array<double, 2>> points) const;
  /// Support vector of the segment [p, q].
  Element segment(std::array<double, 2> p, std::array<double, 2> q) const;
  /// Support vector of the disk of radius r centred at c.
  Element disk(double r, std::array<double, 2> centre = {0.0, 0.0}) const;

 private:
  std::size_t grid_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Finite measures on a ground set of G points: componentwise sum, total
/// mass as norm, total-variation distance.
class DiscreteMeasure final : public Cone {
 public:
  explicit DiscreteMeasure(std::size_t ground = 5);

  std::string name() const override { return "discrete-measure"; }
  std::string id() const override;
  std::size_t element_size() const override { return ground_; }
  void add_assign(Element& acc, const Element& x) const override;
  void scale_assign(double a, Element& x) const override;
  void add_scaled(Element& acc, double a, const Element& x, Element&) const override;
  Element neutral() const override { return Element::zeros(ground_); }
  std::optional<Element> origin() const override { return Element::zeros(ground_); }
  double norm(const Element& x) const override;
  double dist(const Element& x, const Element& y) const override;
  ConeFlags flags() const override { return {true, true, false, true}; }
  Element random_direction(Rng& rng) const override;
  void validate(const Element& x) const override;
  std::vector<std::string> csv_columns() const override;

  std::size_t ground() const noexcept { return ground_; }

 private:
  std::size_t ground_;
};

// ---------------------------------------------------------------------------

/// Steiner point (2/m) sum_i h_i u_i of a discrete support vector.
/// Throws std::invalid_argument if `h` fails discrete convexity.
std::array<double, 2> steiner_point(std::span<const double> h);

/// h_{i-1} + h_{i+1} >= 2 h_i cos(2 pi/m) at every index (mod m).
/// Requires m >= 4.
bool validate_support_vector(std::span<const double> h);

/// sum_i |m1_i - m2_i|; throws on size mismatch.
double kantorovich_tv(const Element& m1, const Element& m2);

// ---------------------------------------------------------------------------

struct ConeParams {
  double beta = 2.0;        // power
  std::size_t dim = 2;      // coord-max
  std::size_t grid = 64;    // convex-body-2d
  std::size_t ground = 5;   // discrete-measure
};

/// The eight shipped cones, by registry name.
std::vector<std::string> cone_names();

/// Throws std::invalid_argument for an unknown name or bad parameters.
ConePtr make_cone(std::string_view name, const ConeParams& params = {});

}  // namespace conestable
