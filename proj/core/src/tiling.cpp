#include "spectratile/tiling.hpp"

#include <map>
#include <set>

#include "spectratile/errors.hpp"
#include "spectratile/modlinalg.hpp"
#include "spectratile/spectral.hpp"

namespace spectratile {

std::string to_string(NonTilingReason r) {
  switch (r) {
  case NonTilingReason::divisibility: return "divisibility";
  case NonTilingReason::duplicate_residues: return "duplicate-residues";
  case NonTilingReason::exhausted_search: return "exhausted-search";
  }
  return "unknown";
}

std::optional<NonTilingReason> non_tiling_reason_from_string(const std::string& s) {
  if (s == "divisibility") return NonTilingReason::divisibility;
  if (s == "duplicate-residues") return NonTilingReason::duplicate_residues;
  if (s == "exhausted-search") return NonTilingReason::exhausted_search;
  return std::nullopt;
}

namespace {

void require_dimension(const PointSet& set, const GroupSpec& group, const char* what) {
  if (set.dimension() != group.dimension)
    throw InputError(std::string(what) + " has dimension " + std::to_string(set.dimension()) +
                     " in a group of dimension " + std::to_string(group.dimension));
}

// Adds a reduced offset to a cell index without materializing points.
class CellArithmetic {
public:
  explicit CellArithmetic(const GroupSpec& g) : g_(g) {}

  std::uint64_t add(std::uint64_t cell, const Point& offset) const {
    const auto m = static_cast<std::uint64_t>(g_.modulus);
    std::uint64_t out = 0, stride = 1;
    for (std::size_t i = g_.dimension; i-- > 0;) {
      const std::uint64_t c = cell % m;
      cell /= m;
      const std::uint64_t s = (c + static_cast<std::uint64_t>(offset[i])) % m;
      out += s * stride;
      stride *= m;
    }
    return out;
  }

private:
  GroupSpec g_;
};

class ExactCoverSearch {
public:
  ExactCoverSearch(const PointSet& set, const GroupSpec& group)
      : group_(group), arith_(group), covered_(group.order(), 0) {
    const auto res = set.residues(group.modulus);
    // offsets_[t] lists t' - t (mod m) for every t': the cells covered by
    // the translate that puts t on the current cell.
    offsets_.resize(res.size());
    for (std::size_t t = 0; t < res.size(); ++t)
      for (const auto& other : res) {
        Point diff(other.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = other[i] - res[t][i];
        offsets_[t].push_back(group.reduce(diff));
      }
    minus_t_.reserve(res.size());
    for (const auto& t : res) {
      Point neg(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) neg[i] = -t[i];
      minus_t_.push_back(group.reduce(neg));
    }
  }

  // Complement in placement order, or nullopt after exhausting the tree.
  std::optional<std::vector<std::uint64_t>> run() {
    const std::uint64_t order = group_.order();
    struct Frame {
      std::uint64_t cell;
      std::size_t next_t = 0;
      std::uint64_t sigma = 0;
      std::vector<std::uint64_t> placed{};
    };
    std::vector<Frame> stack;
    stack.push_back({next_uncovered(0)});
    ++nodes_;

    std::vector<std::uint64_t> cells(offsets_.size());
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.cell == order) {
        std::vector<std::uint64_t> sigmas;
        for (std::size_t i = 0; i + 1 < stack.size(); ++i) sigmas.push_back(stack[i].sigma);
        return sigmas;
      }
      if (!f.placed.empty()) {
        for (auto c : f.placed) covered_[c] = 0;
        f.placed.clear();
      }
      bool advanced = false;
      while (f.next_t < offsets_.size()) {
        const std::size_t t = f.next_t++;
        bool fits = true;
        for (std::size_t j = 0; j < offsets_[t].size() && fits; ++j) {
          cells[j] = arith_.add(f.cell, offsets_[t][j]);
          fits = !covered_[cells[j]];
        }
        if (!fits) continue;
        for (auto c : cells) covered_[c] = 1;
        f.placed = cells;
        f.sigma = arith_.add(f.cell, minus_t_[t]);
        const std::uint64_t next = next_uncovered(f.cell + 1);
        stack.push_back({next});
        ++nodes_;
        advanced = true;
        break;
      }
      if (!advanced) stack.pop_back();
    }
    return std::nullopt;
  }

  std::uint64_t nodes() const noexcept { return nodes_; }

private:
  std::uint64_t next_uncovered(std::uint64_t from) const {
    while (from < covered_.size() && covered_[from]) ++from;
    return from;
  }

  GroupSpec group_;
  CellArithmetic arith_;
  std::vector<std::uint8_t> covered_;
  std::vector<std::vector<Point>> offsets_;
  std::vector<Point> minus_t_;
  std::uint64_t nodes_ = 0;
};

} // namespace

bool verify_tiling(const TilingCertificate& cert, std::uint64_t guard) {
  const GroupSpec& g = cert.group;
  if (cert.set.dimension() != g.dimension || cert.complement.dimension() != g.dimension) return false;
  g.require_within(guard);
  if (Integer(static_cast<unsigned long>(cert.set.size())) *
          Integer(static_cast<unsigned long>(cert.complement.size())) !=
      g.exact_order())
    return false;
  CellArithmetic arith(g);
  std::vector<std::uint8_t> count(g.order(), 0);
  const auto set_res = cert.set.residues(g.modulus);
  for (const auto& sigma : cert.complement.points()) {
    const std::uint64_t base = g.index_of(sigma);
    for (const auto& t : set_res) {
      auto& c = count[arith.add(base, t)];
      if (c) return false;
      c = 1;
    }
  }
  return true; // sizes multiply to m^d and nothing overlaps, so all cells are hit
}

bool verify_non_tiling_claim(const NonTilingCertificate& cert) {
  if (cert.set.dimension() != cert.group.dimension) return false;
  switch (cert.reason) {
  case NonTilingReason::divisibility: {
    const Integer k(static_cast<unsigned long>(cert.set.size()));
    return cert.group.exact_order() % k != 0;
  }
  case NonTilingReason::duplicate_residues: {
    if (!cert.colliding_pair) return false;
    auto [i, j] = *cert.colliding_pair;
    if (i == j || i >= cert.set.size() || j >= cert.set.size()) return false;
    return cert.group.reduce(cert.set[i]) == cert.group.reduce(cert.set[j]);
  }
  case NonTilingReason::exhausted_search:
    return cert.nodes > 0;
  }
  return false;
}

bool replay_non_tiling(const NonTilingCertificate& cert, std::uint64_t guard) {
  if (!verify_non_tiling_claim(cert)) return false;
  if (cert.reason != NonTilingReason::exhausted_search) return true;
  if (cert.set.find_congruent_pair(cert.group.modulus)) return false;
  cert.group.require_within(guard);
  ExactCoverSearch search(cert.set, cert.group);
  return !search.run() && search.nodes() == cert.nodes;
}

TilingVerdict decide_m_tile(const PointSet& set, const GroupSpec& group,
                            const TileDecisionOptions& options) {
  require_dimension(set, group, "set");
  if (auto pair = set.find_congruent_pair(group.modulus))
    return NonTilingCertificate{group, set, NonTilingReason::duplicate_residues, pair, 0};

  if (options.divisibility_shortcut &&
      group.exact_order() % Integer(static_cast<unsigned long>(set.size())) != 0)
    return NonTilingCertificate{group, set, NonTilingReason::divisibility, std::nullopt, 0};

  group.require_within(options.guard);
  ExactCoverSearch search(set, group);
  auto sigmas = search.run();
  if (!sigmas)
    return NonTilingCertificate{group, set, NonTilingReason::exhausted_search, std::nullopt,
                                search.nodes()};

  std::vector<Point> complement;
  for (auto s : *sigmas) complement.push_back(group.point_at(s));
  TilingCertificate cert{group, set, PointSet(group.dimension, std::move(complement))};
  if (!verify_tiling(cert, options.guard))
    throw VerificationError("exact cover search produced an invalid tiling");
  return cert;
}

TilingCertificate compose_tile(const TilingCertificate& cert_t, const TilingCertificate& cert_s,
                               std::uint64_t guard) {
  const std::size_t d = cert_t.group.dimension;
  if (cert_s.group.dimension != d)
    throw InputError("cannot compose tilings of dimension " + std::to_string(d) + " and " +
                     std::to_string(cert_s.group.dimension));
  if (!verify_tiling(cert_t, guard)) throw InputError("first tiling certificate does not verify");
  if (!verify_tiling(cert_s, guard)) throw InputError("second tiling certificate does not verify");

  const std::int64_t m = cert_t.group.modulus;
  const std::int64_t n = cert_s.group.modulus;
  const GroupSpec out_group(m * n, d);
  out_group.require_within(guard);

  auto combine = [&](const PointSet& inner, const PointSet& outer) {
    std::vector<Point> pts;
    for (const auto& o : outer.points())
      for (const auto& i : inner.points()) {
        Point x(d);
        for (std::size_t c = 0; c < d; ++c) x[c] = i[c] + m * o[c];
        pts.push_back(out_group.reduce(x));
      }
    return PointSet(d, std::move(pts));
  };

  TilingCertificate out{out_group, combine(cert_t.set, cert_s.set),
                        combine(cert_t.complement, cert_s.complement)};
  if (!verify_tiling(out, guard)) throw VerificationError("composed tiling failed re-verification");
  return out;
}

TilingCertificate lift_tile(const PointSet& set, const IntMatrix& l1,
                            const TilingCertificate& cert_image, std::uint64_t guard) {
  if (l1.cols() != set.dimension() || l1.rows() != cert_image.set.dimension())
    throw InputError("lift matrix shape does not connect the set to the certificate's set");
  if (cert_image.set.size() != set.size())
    throw InputError("certificate set and original set differ in size");
  if (!verify_tiling(cert_image, guard)) throw InputError("image tiling certificate does not verify");

  const std::int64_t m = cert_image.group.modulus;
  const Integer mz(static_cast<long>(m));
  const IntMatrix image = matmul_mod(l1, set.as_columns(), mz);
  {
    std::set<std::vector<Integer>> cols;
    const IntMatrix t = image.transpose();
    for (std::size_t c = 0; c < t.rows(); ++c)
      if (!cols.emplace(t.row(c).begin(), t.row(c).end()).second)
        throw InputError("duplicate columns in l1 * T (mod " + std::to_string(m) + ")");
  }
  if (image != cert_image.set.as_columns().reduced(mz))
    throw InputError("certificate set does not match l1 * T (mod " + std::to_string(m) + ")");

  const GroupSpec group(m, set.dimension());
  group.require_within(guard);

  const GroupSpec& image_group = cert_image.group;
  std::vector<std::uint8_t> in_sigma1(image_group.order(), 0);
  for (const auto& s : cert_image.complement.points()) in_sigma1[image_group.index_of(s)] = 1;

  const IntMatrix l1_mod = l1.reduced(mz);
  std::vector<std::int64_t> coeff;
  for (const auto& e : l1_mod.entries()) coeff.push_back(e.get_si());

  // Odometer over Z_m^d, last coordinate fastest, so cells come out in
  // index order; the image l1·p mod m is updated incrementally.
  const std::size_t d = set.dimension(), rows = l1.rows();
  std::vector<Point> sigma;
  Point p(d, 0), image_point(rows, 0);
  for (std::uint64_t idx = 0; idx < group.order(); ++idx) {
    if (in_sigma1[image_group.index_of(image_point)]) sigma.push_back(p);
    for (std::size_t c = d; c-- > 0;) {
      const bool wraps = ++p[c] == m;
      if (wraps) p[c] = 0;
      for (std::size_t r = 0; r < rows; ++r) {
        const std::int64_t step = wraps ? -(m - 1) * coeff[r * d + c] : coeff[r * d + c];
        image_point[r] = ((image_point[r] + step) % m + m) % m;
      }
      if (!wraps) break;
    }
  }
  if (sigma.empty()) throw VerificationError("lifted complement is empty");

  TilingCertificate out{group, set, PointSet(set.dimension(), std::move(sigma))};
  if (!verify_tiling(out, guard)) throw VerificationError("lifted tiling failed re-verification");
  return out;
}

IndependenceChain independent_tile(const PointSet& set, std::uint64_t guard) {
  const IntMatrix t = set.as_columns();
  const std::size_t k = set.size(), d = set.dimension();
  if (k > d || rank_rational(t) != k)
    throw InputError("independent_tile needs linearly independent vectors");

  // First row subset, scanning top to bottom, that keeps full rank.
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < d && rows.size() < k; ++r) {
    IntMatrix trial(rows.size() + 1, k);
    for (std::size_t i = 0; i <= rows.size(); ++i) {
      const std::size_t src = i < rows.size() ? rows[i] : r;
      for (std::size_t c = 0; c < k; ++c) trial(i, c) = t(src, c);
    }
    if (rank_rational(trial) == rows.size() + 1) rows.push_back(r);
  }

  IntMatrix p(k, d);
  for (std::size_t i = 0; i < k; ++i) p(i, rows[i]) = 1;
  IntMatrix pt = matmul_mod(p, t);
  DetAdjugate da = det_and_adjugate(pt);
  const Integer scale_z = abs(da.determinant);
  const Integer modulus_z = scale_z * static_cast<unsigned long>(k);
  if (!modulus_z.fits_slong_p())
    throw GuardError("independence modulus does not fit in 64 bits");
  const std::int64_t scale = scale_z.get_si();
  const std::int64_t modulus = modulus_z.get_si();
  GroupSpec(modulus, d).require_within(guard);

  IntMatrix kvec(1, k);
  for (std::size_t i = 0; i < k; ++i) kvec(0, i) = static_cast<unsigned long>(i);
  IntMatrix functional = matmul_mod(kvec, da.adjugate);
  if (sgn(da.determinant) < 0)
    for (std::size_t i = 0; i < k; ++i) functional(0, i) = -functional(0, i);

  IntMatrix target(1, k);
  for (std::size_t i = 0; i < k; ++i) target(0, i) = scale_z * static_cast<unsigned long>(i);
  if (matmul_mod(functional, pt) != target)
    throw VerificationError("functional does not map the block onto D*(0..k-1)");

  std::vector<Point> line_pts, line_comp;
  for (std::size_t i = 0; i < k; ++i) line_pts.push_back({scale * static_cast<std::int64_t>(i)});
  for (std::int64_t s = 0; s < scale; ++s) line_comp.push_back({s});
  TilingCertificate line{GroupSpec(modulus, 1), PointSet(1, std::move(line_pts)),
                         PointSet(1, std::move(line_comp))};
  if (!verify_tiling(line, guard)) throw VerificationError("one-dimensional tiling failed");

  const PointSet block_set = PointSet::from_columns(pt);
  TilingCertificate block = lift_tile(block_set, functional, line, guard);
  TilingCertificate result = lift_tile(set, p, block, guard);

  return {std::move(rows), std::move(p),     std::move(pt),    da.determinant, scale,
          modulus,         std::move(functional), std::move(line), std::move(block),
          std::move(result)};
}

PointSet build_extension(const PointSet& set, std::int64_t m, std::int64_t n, std::uint64_t guard) {
  if (m < 1) throw InputError("modulus must be at least 1");
  if (n < 1) throw InputError("side count must be at least 1");
  for (const auto& p : set.points())
    for (auto x : p)
      if (x < 0 || x >= m) throw InputError("set is not contained in [0, m)^d");
  const PointSet cube = cube_points(n, set.dimension(), guard);
  std::vector<Point> pts;
  pts.reserve(cube.size() * set.size());
  for (const auto& v : cube.points())
    for (const auto& t : set.points()) {
      Point x(t.size());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = t[i] + m * v[i];
      pts.push_back(std::move(x));
    }
  return PointSet(set.dimension(), std::move(pts));
}

ModReduction check_mod_reduction(const PointSet& big, std::int64_t m, const PointSet& base) {
  if (big.dimension() != base.dimension()) return {};
  const GroupSpec g(m, base.dimension());
  std::map<Point, std::uint64_t> counts;
  for (const auto& r : base.residues(m)) counts.emplace(r, 0);
  for (const auto& p : big.points()) {
    auto it = counts.find(g.reduce(p));
    if (it == counts.end()) return {};
    ++it->second;
  }
  const std::uint64_t first = counts.begin()->second;
  for (const auto& [res, c] : counts)
    if (c != first) return {};
  if (first == 0) return {};
  return {true, first};
}

ExtensionReport extension_obstructions(const PointSet& set, std::int64_t m, std::int64_t n,
                                       std::uint64_t guard) {
  const std::size_t d = set.dimension();
  const GroupSpec base_group(m, d);
  const GroupSpec big_group(m * n, d);
  const Integer side_power = GroupSpec(n, d).exact_order();
  const Integer ext_size = side_power * static_cast<unsigned long>(set.size());
  const Integer order = big_group.exact_order();

  TilingVerdict verdict = decide_m_tile(set, base_group, {.guard = guard});
  ModReduction reduction = check_mod_reduction(build_extension(set, m, n, guard), m, set);
  std::optional<std::string> claim;
  if (std::holds_alternative<NonTilingCertificate>(verdict)) claim = kExtensionNonTilingClaim;

  return {m, n, set.size(), ext_size, order, order % ext_size == 0,
          std::move(verdict), reduction, std::move(claim)};
}

} // namespace spectratile
