#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "conestable/element.hpp"

namespace conestable {

class Cone;

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite.
std::string format_double(double v);
/// Inverse of format_double. Throws std::invalid_argument on garbage.
double parse_double(std::string_view text);

/// "(x0, x1, ...)" for diagnostics.
std::string to_string(const Element& x);

/// Coordinates joined by ','.
std::string to_csv_row(const Element& x);
/// Parses a CSV row of coordinates and validates it against the cone.
Element parse_csv_row(const Cone& cone, std::string_view row);

std::vector<std::string_view> split(std::string_view text, char sep);

}  // namespace conestable
