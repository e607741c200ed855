#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectratile/int_matrix.hpp"

namespace spectratile {

inline constexpr std::uint64_t kDefaultGuard = 10'000'000;

// Reads SPECTRATILE_GUARD, falling back to kDefaultGuard when unset.
// Throws InputError on a malformed value.
std::uint64_t guard_from_environment();

using Point = std::vector<std::int64_t>;

/// The group Z_m^d.
struct GroupSpec {
  std::int64_t modulus = 1;
  std::size_t dimension = 1;

  GroupSpec() = default;
  GroupSpec(std::int64_t m, std::size_t d);

  // m^d, saturating at UINT64_MAX.
  std::uint64_t order() const noexcept;
  Integer exact_order() const;

  // Throws GuardError when m^d exceeds the cell budget.
  void require_within(std::uint64_t guard) const;

  // Mixed-radix index with the first coordinate most significant, so index
  // order coincides with lexicographic order of reduced vectors.
  std::uint64_t index_of(const Point& p) const;
  Point point_at(std::uint64_t index) const;
  Point reduce(const Point& p) const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// Ordered set of distinct integer vectors of one dimension, at least one
/// point. Columns of a d x k matrix and points are interchangeable.
class PointSet {
public:
  PointSet(std::size_t dimension, std::vector<Point> points);
  PointSet(std::initializer_list<std::initializer_list<std::int64_t>> points);

  static PointSet from_columns(const IntMatrix& matrix);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  // d x k matrix with the points as columns.
  IntMatrix as_columns() const;

  // Points reduced into [0, m)^d; duplicates allowed in the result list.
  std::vector<Point> residues(std::int64_t m) const;

  // First pair (i, j), i < j, of points congruent mod m, if any.
  std::optional<std::pair<std::size_t, std::size_t>> find_congruent_pair(std::int64_t m) const;

  PointSet translated(const Point& shift) const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

private:
  std::size_t dimension_;
  std::vector<Point> points_;
};

// The cube [0, n)^d in lexicographic order.
PointSet cube_points(std::int64_t n, std::size_t d, std::uint64_t guard = kDefaultGuard);

std::string format_point_set(const PointSet& s);
PointSet parse_point_set(std::istream& in);
PointSet parse_point_set(const std::string& text);
std::ostream& operator<<(std::ostream& os, const PointSet& s);

} // namespace spectratile
