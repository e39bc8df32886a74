#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace conestable {

/// A point of some cone, stored as a flat coordinate vector.
///
/// The meaning of the coordinates belongs to the cone: a scalar for the
/// half-line cones, a coordinate vector for `CoordMax`, support values for
/// `ConvexBody2D`, masses for `DiscreteMeasure`. An `Element` never knows
/// which cone it came from; cone operations validate shape where it matters.
class Element {
 public:
  Element() = default;
  Element(std::initializer_list<double> values) : values_(values) {}
  explicit Element(std::vector<double> values) : values_(std::move(values)) {}

  static Element zeros(std::size_t n) { return Element(std::vector<double>(n, 0.0)); }
  static Element filled(std::size_t n, double v) { return Element(std::vector<double>(n, v)); }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }

  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  void assign(const Element& other) { values_.assign(other.values_.begin(), other.values_.end()); }

  friend bool operator==(const Element&, const Element&) = default;

 private:
  std::vector<double> values_;
};

}  // namespace conestable
