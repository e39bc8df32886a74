#include "conestable/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conestable {

Annulus::Annulus(double lo, double hi, bool lo_closed, bool hi_closed)
    : lower(lo), upper(hi), lower_closed(lo_closed), upper_closed(hi_closed) {
  if (!(lo >= 0.0) || !(lo < hi)) throw std::invalid_argument("Annulus: need 0 <= lower < upper");
}

bool Annulus::contains(double r) const noexcept {
  const bool above_lo = lower_closed ? r >= lower : r > lower;
  const bool below_hi = upper_closed ? r <= upper : r < upper;
  return above_lo && below_hi;
}

bool Annulus::covers(const Annulus& inner) const noexcept {
  const bool lo_ok = inner.lower > lower || (inner.lower == lower && (lower_closed || !inner.lower_closed));
  const bool hi_ok = inner.upper < upper || (inner.upper == upper && (upper_closed || !inner.upper_closed));
  return lo_ok && hi_ok;
}

Annulus Annulus::scaled(double a) const {
  if (!(a > 0.0)) throw std::invalid_argument("Annulus::scaled: factor must be positive");
  return {lower * a, upper * a, lower_closed, upper_closed};
}

Annulus intersect(const Annulus& a, const Annulus& b) {
  double lo = std::max(a.lower, b.lower);
  bool lo_closed = a.lower == b.lower ? (a.lower_closed && b.lower_closed)
                                      : (a.lower > b.lower ? a.lower_closed : b.lower_closed);
  double hi = std::min(a.upper, b.upper);
  bool hi_closed = a.upper == b.upper ? (a.upper_closed && b.upper_closed)
                                      : (a.upper < b.upper ? a.upper_closed : b.upper_closed);
  if (!(lo < hi)) throw std::invalid_argument("intersect: windows do not overlap");
  return {lo, hi, lo_closed, hi_closed};
}

// ---------------------------------------------------------------------------

CountingMeasure CountingMeasure::from_points(const Cone& cone, std::vector<Point> points, Annulus window) {
  for (const auto& p : points) {
    if (p.multiplicity == 0) throw std::invalid_argument("CountingMeasure: multiplicity must be >= 1");
    if (!window.contains(p.norm)) throw std::invalid_argument("CountingMeasure: point outside window");
  }
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    return a.value.vector() < b.value.vector();
  });
  CountingMeasure m(window);
  m.points_.reserve(points.size());
  for (auto& p : points) {
    if (!m.points_.empty()) {
      Point& last = m.points_.back();
      if (last.direction == p.direction && cone.equal(last.value, p.value)) {
        last.multiplicity += p.multiplicity;
        continue;
      }
    }
    m.points_.push_back(std::move(p));
  }
  return m;
}

std::size_t CountingMeasure::total_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : points_) n += p.multiplicity;
  return n;
}

CountingMeasure binomial_process(const Cone& cone, std::span<const Element> samples, double b_n,
                                 std::span<const std::size_t> direction_ids) {
  if (!(b_n > 0.0)) throw std::invalid_argument("binomial_process: b_n must be positive");
  if (!direction_ids.empty() && direction_ids.size() != samples.size()) {
    throw std::invalid_argument("binomial_process: one direction id per sample required");
  }
  std::vector<Point> points;
  points.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Point p;
    p.value = cone.scale(1.0 / b_n, samples[i]);
    p.norm = cone.norm(p.value);
    if (!direction_ids.empty()) p.direction = direction_ids[i];
    points.push_back(std::move(p));
  }
  return CountingMeasure::from_points(cone, std::move(points), Annulus::all());
}

CountingMeasure scale_measure(const Cone& cone, const CountingMeasure& m, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("scale_measure: factor must be positive");
  std::vector<Point> points = m.points();
  for (auto& p : points) {
    cone.scale_assign(a, p.value);
    p.norm = cone.norm(p.value);
  }
  return CountingMeasure::from_points(cone, std::move(points), m.window().scaled(a));
}

CountingMeasure superpose(const Cone& cone, const CountingMeasure& m1, const CountingMeasure& m2) {
  const Annulus window = intersect(m1.window(), m2.window());
  std::vector<Point> points;
  points.reserve(m1.points().size() + m2.points().size());
  for (const auto* m : {&m1, &m2}) {
    for (const auto& p : m->points()) {
      if (window.contains(p.norm)) points.push_back(p);
    }
  }
  return CountingMeasure::from_points(cone, std::move(points), window);
}

std::size_t count_in(const CountingMeasure& m, const Annulus& region,
                     std::optional<std::span<const std::size_t>> directions) {
  if (!m.window().covers(region)) {
    throw std::domain_error("count_in: region extends outside the exact window of the configuration");
  }
  std::size_t n = 0;
  for (const auto& p : m.points()) {
    if (!region.contains(p.norm)) continue;
    if (directions) {
      if (!p.direction) throw std::invalid_argument("count_in: directional count needs direction ids");
      if (std::find(directions->begin(), directions->end(), *p.direction) == directions->end()) continue;
    }
    n += p.multiplicity;
  }
  return n;
}

Element sum_points(const Cone& cone, const CountingMeasure& m) {
  Element acc = cone.neutral();
  // Points are kept sorted by norm.
  for (const auto& p : m.points()) {
    for (std::size_t j = 0; j < p.multiplicity; ++j) cone.add_assign(acc, p.value);
  }
  return acc;
}

}  // namespace conestable
