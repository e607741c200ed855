#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spectratile/int_matrix.hpp"

namespace spectratile {

inline constexpr std::int64_t kDefaultCyclotomicBound = 10000;

/// Polynomial over the integers, coefficients in ascending degree order.
/// The zero polynomial has no coefficients; otherwise the leading
/// coefficient is nonzero.
class IntPolynomial {
public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Integer> coefficients);
  IntPolynomial(std::initializer_list<long> coefficients);

  static IntPolynomial monomial(const Integer& coefficient, std::size_t degree);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<Integer>& coefficients() const noexcept { return coeffs_; }
  const Integer& leading() const { return coeffs_.back(); }

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  std::string to_string() const;

private:
  void canonicalize();
  std::vector<Integer> coeffs_;
};

struct PolyDivision {
  IntPolynomial quotient;
  IntPolynomial remainder;
};

// Division with remainder by a divisor whose leading coefficient is ±1.
PolyDivision poly_divrem(const IntPolynomial& num, const IntPolynomial& den);

// Φ_m, memoized per process. Throws InputError outside [1, bound].
const IntPolynomial& cyclotomic_polynomial(std::int64_t m,
                                           std::int64_t bound = kDefaultCyclotomicBound);

/// Multiset of residues mod m, stored as per-residue counts.
struct ExponentMultiset {
  std::int64_t modulus;
  std::vector<std::uint64_t> counts;

  explicit ExponentMultiset(std::int64_t m);
  ExponentMultiset(std::int64_t m, std::vector<std::uint64_t> counts);

  // Exponents may be any integers; they are reduced mod m.
  static ExponentMultiset from_exponents(std::int64_t m, std::span<const std::int64_t> exps);

  void add(std::int64_t exponent, std::uint64_t count = 1);
  std::uint64_t total() const;
  IntPolynomial as_polynomial() const;
};

// Exact test of Σ counts[j]·ω^j = 0 for ω = e^{2πi/m}: Φ_m must divide the
// count polynomial. The empty sum vanishes.
bool is_vanishing_sum(const ExponentMultiset& exps);

} // namespace spectratile
