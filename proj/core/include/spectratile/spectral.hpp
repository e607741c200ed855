#pragma once

#include <cstdint>
#include <optional>

#include "spectratile/int_matrix.hpp"
#include "spectratile/point_set.hpp"

namespace spectratile {

/// Matrix with entries in (1/m)Z: integer numerators, reduced to [0, m),
/// over a common denominator m. Used both for square candidate
/// log-Hadamard matrices and for k x d spectra.
class PhaseMatrix {
public:
  PhaseMatrix(IntMatrix numerators, std::int64_t denominator);

  const IntMatrix& numerators() const noexcept { return numerators_; }
  std::int64_t denominator() const noexcept { return denominator_; }
  std::size_t rows() const noexcept { return numerators_.rows(); }
  std::size_t cols() const noexcept { return numerators_.cols(); }

  PhaseMatrix transpose() const { return {numerators_.transpose(), denominator_}; }

  friend bool operator==(const PhaseMatrix&, const PhaseMatrix&) = default;

private:
  IntMatrix numerators_;
  std::int64_t denominator_;
};

// Matrix text format followed by a "denominator m" line.
std::string format_phase_matrix(const PhaseMatrix& p);
PhaseMatrix parse_phase_matrix(const std::string& text);

/// A set T in Z^d together with a spectrum L over denominator m, with
/// (L·T)/m log-Hadamard. Completeness is implied by |L| = |T| in a
/// finite group, so only orthogonality is ever checked.
struct SpectrumCertificate {
  GroupSpec group;
  PointSet set;
  PhaseMatrix spectrum;

  friend bool operator==(const SpectrumCertificate&, const SpectrumCertificate&) = default;
};

// Distinct rows pairwise orthogonal after exponentiation, decided by
// exact cyclotomic divisibility. Throws InputError for non-square input.
bool is_log_hadamard(const PhaseMatrix& mat);

// (spectrum · T) mod m over m is log-Hadamard. Throws InputError when the
// spectrum shape does not match the set.
bool is_m_spectral(const PointSet& set, const PhaseMatrix& spectrum);
bool verify_spectrum(const SpectrumCertificate& cert);

struct SpectrumSearchStats {
  std::uint64_t nodes = 0;
};

// Lexicographically least spectrum with first row 0 and strictly
// increasing rows, or nullopt if the set is not m-spectral.
std::optional<SpectrumCertificate> find_spectrum(const PointSet& set, std::int64_t m,
                                                 std::uint64_t guard = kDefaultGuard,
                                                 SpectrumSearchStats* stats = nullptr);

// Γ = T + m·S with spectrum rows n·l + q over m·n. Both orders run with the
// S / Q index outermost. Throws InputError on dimension mismatch, invalid
// inputs or a collision in Γ.
SpectrumCertificate compose_spectral(const SpectrumCertificate& cert_t,
                                     const SpectrumCertificate& cert_s);

// Pulls a spectrum of l1·T back to T as (L·l1) mod m.
SpectrumCertificate lift_spectrum(const PointSet& set, const IntMatrix& l1,
                                  const SpectrumCertificate& cert_image);

// [0, n)^d with its character spectrum.
SpectrumCertificate cube_spectrum(std::int64_t n, std::size_t d, std::uint64_t guard = kDefaultGuard);

// Columns of l1 · T as a point set in Z^{d1}.
PointSet apply_matrix(const IntMatrix& l1, const PointSet& set);

} // namespace spectratile
