#include "spectratile/spectral.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>

#include "spectratile/cyclotomic.hpp"
#include "spectratile/errors.hpp"
#include "spectratile/modlinalg.hpp"

namespace spectratile {

namespace {

std::vector<std::int64_t> to_small(const IntMatrix& m) {
  std::vector<std::int64_t> out;
  out.reserve(m.entries().size());
  for (const auto& e : m.entries()) out.push_back(e.get_si());
  return out;
}

} // namespace

PhaseMatrix::PhaseMatrix(IntMatrix numerators, std::int64_t denominator)
    : numerators_(std::move(numerators)), denominator_(denominator) {
  if (denominator_ < 1) throw InputError("phase denominator must be at least 1");
  numerators_ = numerators_.reduced(Integer(static_cast<long>(denominator_)));
}

std::string format_phase_matrix(const PhaseMatrix& p) {
  return format_matrix(p.numerators()) + "denominator " + std::to_string(p.denominator()) + "\n";
}

PhaseMatrix parse_phase_matrix(const std::string& text) {
  std::istringstream in(text);
  IntMatrix m = parse_matrix(in);
  std::string keyword;
  long long denominator = 0;
  if (!(in >> keyword >> denominator) || keyword != "denominator")
    throw InputError("phase matrix must end with a 'denominator m' line");
  std::string extra;
  if (in >> extra) throw InputError("trailing data after phase matrix: '" + extra + "'");
  return PhaseMatrix(std::move(m), denominator);
}

bool is_log_hadamard(const PhaseMatrix& mat) {
  if (mat.rows() != mat.cols())
    throw InputError("log-Hadamard check needs a square matrix, got " +
                     std::to_string(mat.rows()) + "x" + std::to_string(mat.cols()));
  const std::size_t k = mat.rows();
  const std::int64_t m = mat.denominator();
  const auto h = to_small(mat.numerators());
  // For unimodular square matrices, row orthogonality implies column
  // orthogonality (H H* = kI gives H* H = kI), so rows suffice.
  ExponentMultiset diff(m);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      std::fill(diff.counts.begin(), diff.counts.end(), 0);
      for (std::size_t c = 0; c < k; ++c) diff.add(h[i * k + c] - h[j * k + c]);
      if (!is_vanishing_sum(diff)) return false;
    }
  return true;
}

bool is_m_spectral(const PointSet& set, const PhaseMatrix& spectrum) {
  if (spectrum.rows() != set.size())
    throw InputError("spectrum has " + std::to_string(spectrum.rows()) + " rows for a set of " +
                     std::to_string(set.size()) + " points");
  if (spectrum.cols() != set.dimension())
    throw InputError("spectrum has " + std::to_string(spectrum.cols()) +
                     " columns for a set of dimension " + std::to_string(set.dimension()));
  const Integer m(static_cast<long>(spectrum.denominator()));
  return is_log_hadamard(
      PhaseMatrix(matmul_mod(spectrum.numerators(), set.as_columns(), m), spectrum.denominator()));
}

bool verify_spectrum(const SpectrumCertificate& cert) {
  if (cert.group.modulus != cert.spectrum.denominator()) return false;
  if (cert.group.dimension != cert.set.dimension()) return false;
  if (cert.spectrum.rows() != cert.set.size() || cert.spectrum.cols() != cert.set.dimension())
    return false;
  return is_m_spectral(cert.set, cert.spectrum);
}

namespace {

class SpectrumSearch {
public:
  SpectrumSearch(const PointSet& set, const GroupSpec& group)
      : group_(group), residues_(set.residues(group.modulus)),
        orthogonal_(group.order(), kUnknown), k_(set.size()) {}

  std::optional<std::vector<std::uint64_t>> run() {
    chosen_.assign(1, 0);
    if (k_ > group_.order()) return std::nullopt;
    for (std::uint64_t c = 1; c < group_.order(); ++c)
      if (orthogonal(c)) candidates_.push_back(c);
    if (extend(0)) return chosen_;
    return std::nullopt;
  }

  std::uint64_t nodes() const noexcept { return nodes_; }

private:
  static constexpr std::int8_t kUnknown = -1;

  // Whether frequency difference δ (by cell index) annihilates the set:
  // Σ_t ω^{<δ, t>} = 0.
  bool orthogonal(std::uint64_t delta) {
    auto& state = orthogonal_[delta];
    if (state == kUnknown) {
      const Point d = group_.point_at(delta);
      const std::int64_t m = group_.modulus;
      ExponentMultiset exps(m);
      for (const auto& t : residues_) {
        std::int64_t dot = 0;
        for (std::size_t i = 0; i < d.size(); ++i) dot = (dot + d[i] * t[i]) % m;
        exps.add(dot);
      }
      state = is_vanishing_sum(exps) ? 1 : 0;
    }
    return state == 1;
  }

  std::uint64_t difference(std::uint64_t a, std::uint64_t b) const {
    Point pa = group_.point_at(a);
    const Point pb = group_.point_at(b);
    for (std::size_t i = 0; i < pa.size(); ++i) pa[i] -= pb[i];
    return group_.index_of(pa);
  }

  bool extend(std::size_t from) {
    ++nodes_;
    if (chosen_.size() == k_) return true;
    for (std::size_t ci = from; ci < candidates_.size(); ++ci) {
      // Not enough candidates left to complete the spectrum.
      if (candidates_.size() - ci < k_ - chosen_.size()) break;
      const std::uint64_t c = candidates_[ci];
      bool ok = true;
      for (std::size_t j = 1; j < chosen_.size() && ok; ++j) ok = orthogonal(difference(c, chosen_[j]));
      if (!ok) continue;
      chosen_.push_back(c);
      if (extend(ci + 1)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  GroupSpec group_;
  std::vector<Point> residues_;
  std::vector<std::int8_t> orthogonal_;
  std::size_t k_;
  std::vector<std::uint64_t> candidates_;
  std::vector<std::uint64_t> chosen_;
  std::uint64_t nodes_ = 0;
};

} // namespace

std::optional<SpectrumCertificate> find_spectrum(const PointSet& set, std::int64_t m,
                                                 std::uint64_t guard, SpectrumSearchStats* stats) {
  const GroupSpec group(m, set.dimension());
  group.require_within(guard);
  SpectrumSearch search(set, group);
  auto rows = search.run();
  if (stats) stats->nodes = search.nodes();
  if (!rows) return std::nullopt;

  IntMatrix numerators(set.size(), set.dimension());
  for (std::size_t r = 0; r < rows->size(); ++r) {
    const Point p = group.point_at((*rows)[r]);
    for (std::size_t c = 0; c < p.size(); ++c) numerators(r, c) = static_cast<long>(p[c]);
  }
  SpectrumCertificate cert{group, set, PhaseMatrix(std::move(numerators), m)};
  if (!verify_spectrum(cert)) throw VerificationError("spectrum search produced an invalid certificate");
  return cert;
}

SpectrumCertificate compose_spectral(const SpectrumCertificate& cert_t,
                                     const SpectrumCertificate& cert_s) {
  if (cert_t.set.dimension() != cert_s.set.dimension())
    throw InputError("cannot compose sets of dimension " + std::to_string(cert_t.set.dimension()) +
                     " and " + std::to_string(cert_s.set.dimension()));
  if (!verify_spectrum(cert_t)) throw InputError("first spectrum certificate does not verify");
  if (!verify_spectrum(cert_s)) throw InputError("second spectrum certificate does not verify");

  const std::int64_t m = cert_t.group.modulus;
  const std::int64_t n = cert_s.group.modulus;
  const std::size_t d = cert_t.set.dimension();

  std::vector<Point> gamma;
  gamma.reserve(cert_t.set.size() * cert_s.set.size());
  std::set<Point> seen;
  for (const auto& s : cert_s.set.points())
    for (const auto& t : cert_t.set.points()) {
      Point x(d);
      for (std::size_t i = 0; i < d; ++i) x[i] = t[i] + m * s[i];
      if (!seen.insert(x).second) throw InputError("collision in composed set T + mS");
      gamma.push_back(std::move(x));
    }

  const IntMatrix& l = cert_t.spectrum.numerators();
  const IntMatrix& q = cert_s.spectrum.numerators();
  IntMatrix lambda(gamma.size(), d);
  std::size_t row = 0;
  for (std::size_t qi = 0; qi < q.rows(); ++qi)
    for (std::size_t li = 0; li < l.rows(); ++li, ++row)
      for (std::size_t c = 0; c < d; ++c) lambda(row, c) = n * l(li, c) + q(qi, c);

  SpectrumCertificate out{GroupSpec(m * n, d), PointSet(d, std::move(gamma)),
                          PhaseMatrix(std::move(lambda), m * n)};
  if (!verify_spectrum(out)) throw VerificationError("composed spectrum failed re-verification");
  return out;
}

PointSet apply_matrix(const IntMatrix& l1, const PointSet& set) {
  if (l1.cols() != set.dimension())
    throw InputError("matrix with " + std::to_string(l1.cols()) +
                     " columns applied to points of dimension " + std::to_string(set.dimension()));
  return PointSet::from_columns(matmul_mod(l1, set.as_columns()));
}

SpectrumCertificate lift_spectrum(const PointSet& set, const IntMatrix& l1,
                                  const SpectrumCertificate& cert_image) {
  if (l1.cols() != set.dimension() || l1.rows() != cert_image.set.dimension())
    throw InputError("lift matrix shape does not connect the set to the certificate's set");
  if (cert_image.set.size() != set.size())
    throw InputError("certificate set and original set differ in size");
  const std::int64_t m = cert_image.group.modulus;
  const Integer mz(static_cast<long>(m));

  const IntMatrix image = matmul_mod(l1, set.as_columns(), mz);
  if (image != cert_image.set.as_columns().reduced(mz))
    throw InputError("certificate set does not match l1 * T (mod " + std::to_string(m) + ")");
  if (!verify_spectrum(cert_image)) throw InputError("image spectrum certificate does not verify");

  SpectrumCertificate out{GroupSpec(m, set.dimension()), set,
                          PhaseMatrix(matmul_mod(cert_image.spectrum.numerators(), l1, mz), m)};
  if (!verify_spectrum(out)) throw VerificationError("lifted spectrum failed re-verification");
  return out;
}

SpectrumCertificate cube_spectrum(std::int64_t n, std::size_t d, std::uint64_t guard) {
  PointSet cube = cube_points(n, d, guard);
  IntMatrix numerators = cube.as_columns().transpose();
  return {GroupSpec(n, d), std::move(cube), PhaseMatrix(std::move(numerators), n)};
}

} // namespace spectratile
