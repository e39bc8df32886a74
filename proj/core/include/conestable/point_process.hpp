#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "conestable/cone.hpp"

namespace conestable {

/// Norm band {x : lower <(=) norm(x) <(=) upper}. By default the lower end
/// is open and the upper end closed, i.e. (lower, upper].
struct Annulus {
  double lower = 0.0;
  double upper = kInfinity;
  bool lower_closed = false;
  bool upper_closed = true;

  Annulus(double lo, double hi, bool lo_closed = false, bool hi_closed = true);

  static Annulus all() { return {0.0, kInfinity, true, true}; }
  /// (r, inf]
  static Annulus above(double r) { return {r, kInfinity, false, true}; }
  /// [0, r)
  static Annulus below(double r) { return {0.0, r, true, false}; }

  bool contains(double r) const noexcept;
  /// True iff every norm in `inner` lies in *this.
  bool covers(const Annulus& inner) const noexcept;
  Annulus scaled(double a) const;

  friend bool operator==(const Annulus&, const Annulus&) = default;
};

/// Throws std::invalid_argument when the bands are disjoint.
Annulus intersect(const Annulus& a, const Annulus& b);

struct Point {
  Element value;
  double norm = 0.0;
  std::size_t multiplicity = 1;
  /// Index of the spectral atom the point was generated along, when known.
  std::optional<std::size_t> direction;
};

/// A finite multiset of cone elements, exact on `window`: every point of the
/// underlying (possibly infinite) configuration whose norm lies in the window
/// is present, and nothing outside it is.
class CountingMeasure {
 public:
  explicit CountingMeasure(Annulus window = Annulus::all()) : window_(window) {}

  /// Sorts by norm and merges equal points (cone tolerance, same direction
  /// id). Throws if a point lies outside `window` or has multiplicity 0.
  static CountingMeasure from_points(const Cone& cone, std::vector<Point> points, Annulus window);

  const std::vector<Point>& points() const noexcept { return points_; }
  const Annulus& window() const noexcept { return window_; }
  std::size_t total_count() const noexcept;
  bool empty() const noexcept { return points_.empty(); }

 private:
  std::vector<Point> points_;
  Annulus window_;
};

/// sum_k delta_{x_k / b_n}; the window covers all norms.
CountingMeasure binomial_process(const Cone& cone, std::span<const Element> samples, double b_n,
                                 std::span<const std::size_t> direction_ids = {});

/// Image under x -> a x. The window is scaled along with the points.
CountingMeasure scale_measure(const Cone& cone, const CountingMeasure& m, double a);

/// Multiset union on the intersection of the two windows.
CountingMeasure superpose(const Cone& cone, const CountingMeasure& m1, const CountingMeasure& m2);

/// Number of points (with multiplicity) with norm in `region` and, if
/// `directions` is given, direction id in that set. Throws std::domain_error
/// when the region is not inside the measure's window.
std::size_t count_in(const CountingMeasure& m, const Annulus& region,
                     std::optional<std::span<const std::size_t>> directions = std::nullopt);

/// Cone sum of all points with multiplicity, in increasing-norm order.
Element sum_points(const Cone& cone, const CountingMeasure& m);

}  // namespace conestable
