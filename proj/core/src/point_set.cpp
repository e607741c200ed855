#include "spectratile/point_set.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "spectratile/errors.hpp"

namespace spectratile {

std::uint64_t guard_from_environment() {
  const char* raw = std::getenv("SPECTRATILE_GUARD");
  if (!raw || !*raw) return kDefaultGuard;
  std::uint64_t value = 0;
  const char* end = raw + std::char_traits<char>::length(raw);
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc{} || ptr != end || value == 0)
    throw InputError(std::string("SPECTRATILE_GUARD must be a positive integer, got '") + raw + "'");
  return value;
}

GroupSpec::GroupSpec(std::int64_t m, std::size_t d) : modulus(m), dimension(d) {
  if (m < 1) throw InputError("group modulus must be at least 1");
  if (d < 1) throw InputError("group dimension must be at least 1");
}

std::uint64_t GroupSpec::order() const noexcept {
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t n = 1;
  const auto m = static_cast<std::uint64_t>(modulus);
  for (std::size_t i = 0; i < dimension; ++i) {
    if (m != 0 && n > cap / m) return cap;
    n *= m;
  }
  return n;
}

Integer GroupSpec::exact_order() const {
  Integer n;
  mpz_ui_pow_ui(n.get_mpz_t(), static_cast<unsigned long>(modulus),
                static_cast<unsigned long>(dimension));
  return n;
}

void GroupSpec::require_within(std::uint64_t guard) const {
  if (order() > guard)
    throw GuardError("group Z_" + std::to_string(modulus) + "^" + std::to_string(dimension) +
                     " has " + exact_order().get_str() + " cells, above the guard of " +
                     std::to_string(guard));
}

std::uint64_t GroupSpec::index_of(const Point& p) const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < dimension; ++i) {
    std::int64_t r = p[i] % modulus;
    if (r < 0) r += modulus;
    idx = idx * static_cast<std::uint64_t>(modulus) + static_cast<std::uint64_t>(r);
  }
  return idx;
}

Point GroupSpec::point_at(std::uint64_t index) const {
  Point p(dimension);
  for (std::size_t i = dimension; i-- > 0;) {
    p[i] = static_cast<std::int64_t>(index % static_cast<std::uint64_t>(modulus));
    index /= static_cast<std::uint64_t>(modulus);
  }
  return p;
}

Point GroupSpec::reduce(const Point& p) const {
  Point r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i] = p[i] % modulus;
    if (r[i] < 0) r[i] += modulus;
  }
  return r;
}

PointSet::PointSet(std::size_t dimension, std::vector<Point> points)
    : dimension_(dimension), points_(std::move(points)) {
  if (dimension_ == 0) throw InputError("point set dimension must be at least 1");
  if (points_.empty()) throw InputError("point set must contain at least one point");
  std::vector<const Point*> order;
  order.reserve(points_.size());
  for (const auto& p : points_) {
    if (p.size() != dimension_)
      throw InputError("point of length " + std::to_string(p.size()) + " in a set of dimension " +
                       std::to_string(dimension_));
    order.push_back(&p);
  }
  // Sorting pointers is much cheaper than a node-based set for the
  // million-point complements produced by lifting.
  std::sort(order.begin(), order.end(), [](const Point* a, const Point* b) { return *a < *b; });
  if (std::adjacent_find(order.begin(), order.end(), [](const Point* a, const Point* b) { return *a == *b; }) !=
      order.end())
    throw InputError("duplicate point in set");
}

PointSet::PointSet(std::initializer_list<std::initializer_list<std::int64_t>> points)
    : PointSet(points.size() ? points.begin()->size() : 0, [&] {
        std::vector<Point> v;
        for (const auto& p : points) v.emplace_back(p);
        return v;
      }()) {}

PointSet PointSet::from_columns(const IntMatrix& matrix) {
  std::vector<Point> pts(matrix.cols(), Point(matrix.rows()));
  for (std::size_t c = 0; c < matrix.cols(); ++c)
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
      const Integer& v = matrix(r, c);
      if (!v.fits_slong_p()) throw InputError("point coordinate does not fit in 64 bits");
      pts[c][r] = v.get_si();
    }
  return PointSet(matrix.rows(), std::move(pts));
}

IntMatrix PointSet::as_columns() const {
  IntMatrix m(dimension_, points_.size());
  for (std::size_t c = 0; c < points_.size(); ++c)
    for (std::size_t r = 0; r < dimension_; ++r) m(r, c) = static_cast<long>(points_[c][r]);
  return m;
}

std::vector<Point> PointSet::residues(std::int64_t m) const {
  const GroupSpec g(m, dimension_);
  std::vector<Point> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(g.reduce(p));
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> PointSet::find_congruent_pair(
    std::int64_t m) const {
  const auto res = residues(m);
  std::map<Point, std::size_t> first;
  for (std::size_t j = 0; j < res.size(); ++j) {
    auto [it, inserted] = first.emplace(res[j], j);
    if (!inserted) return std::pair{it->second, j};
  }
  return std::nullopt;
}

PointSet PointSet::translated(const Point& shift) const {
  if (shift.size() != dimension_) throw InputError("translation vector has wrong dimension");
  std::vector<Point> pts = points_;
  for (auto& p : pts)
    for (std::size_t i = 0; i < dimension_; ++i) p[i] += shift[i];
  return PointSet(dimension_, std::move(pts));
}

PointSet cube_points(std::int64_t n, std::size_t d, std::uint64_t guard) {
  const GroupSpec g(n, d);
  g.require_within(guard);
  std::vector<Point> pts;
  pts.reserve(g.order());
  for (std::uint64_t i = 0; i < g.order(); ++i) pts.push_back(g.point_at(i));
  return PointSet(d, std::move(pts));
}

std::ostream& operator<<(std::ostream& os, const PointSet& s) {
  os << s.size() << ' ' << s.dimension() << '\n';
  for (const auto& p : s.points()) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) os << ' ';
      os << p[i];
    }
    os << '\n';
  }
  return os;
}

std::string format_point_set(const PointSet& s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

PointSet parse_point_set(std::istream& in) {
  long long count = 0, dim = 0;
  if (!(in >> count >> dim)) throw InputError("point set header must be 'count dimension'");
  if (count <= 0 || dim <= 0) throw InputError("point set count and dimension must be positive");
  std::vector<Point> pts(static_cast<std::size_t>(count), Point(static_cast<std::size_t>(dim)));
  for (auto& p : pts)
    for (auto& x : p)
      if (!(in >> x)) throw InputError("point set has fewer coordinates than declared");
  return PointSet(static_cast<std::size_t>(dim), std::move(pts));
}

PointSet parse_point_set(const std::string& text) {
  std::istringstream in(text);
  PointSet s = parse_point_set(in);
  std::string extra;
  if (in >> extra) throw InputError("trailing data after point set: '" + extra + "'");
  return s;
}

} // namespace spectratile
