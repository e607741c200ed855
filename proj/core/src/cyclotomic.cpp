#include "spectratile/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "spectratile/errors.hpp"

namespace spectratile {

IntPolynomial::IntPolynomial(std::vector<Integer> coefficients) : coeffs_(std::move(coefficients)) {
  canonicalize();
}

IntPolynomial::IntPolynomial(std::initializer_list<long> coefficients) {
  for (long c : coefficients) coeffs_.emplace_back(c);
  canonicalize();
}

IntPolynomial IntPolynomial::monomial(const Integer& coefficient, std::size_t degree) {
  std::vector<Integer> c(degree + 1);
  c[degree] = coefficient;
  return IntPolynomial(std::move(c));
}

void IntPolynomial::canonicalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<Integer> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return IntPolynomial(std::move(c));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<Integer> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
  return IntPolynomial(std::move(c));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Integer> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return IntPolynomial(std::move(c));
}

std::string IntPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (long d = degree(); d >= 0; --d) {
    const Integer& c = coeffs_[static_cast<std::size_t>(d)];
    if (c == 0) continue;
    Integer mag = abs(c);
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    if (mag != 1 || d == 0) os << mag.get_str();
    if (d >= 1) os << "x";
    if (d >= 2) os << "^" << d;
    first = false;
  }
  return os.str();
}

PolyDivision poly_divrem(const IntPolynomial& num, const IntPolynomial& den) {
  if (den.is_zero()) throw InputError("polynomial division by zero");
  if (abs(den.leading()) != 1)
    throw InputError("divisor leading coefficient must be a unit, got " + den.leading().get_str());

  std::vector<Integer> rem = num.coefficients();
  const std::size_t dd = static_cast<std::size_t>(den.degree());
  if (rem.size() <= dd) return {IntPolynomial{}, num};

  std::vector<Integer> quot(rem.size() - dd);
  const Integer& lead = den.leading();
  const auto& dc = den.coefficients();
  for (std::size_t i = rem.size(); i-- > dd;) {
    if (rem[i] == 0) continue;
    Integer q = rem[i] * lead; // lead is ±1, so this is rem[i] / lead
    quot[i - dd] = q;
    for (std::size_t j = 0; j <= dd; ++j) rem[i - dd + j] -= q * dc[j];
  }
  rem.resize(dd);
  return {IntPolynomial(std::move(quot)), IntPolynomial(std::move(rem))};
}

namespace {

struct CyclotomicCache {
  std::shared_mutex mutex;
  std::map<std::int64_t, IntPolynomial> table; // node-stable, never erased
};

CyclotomicCache& cache() {
  static CyclotomicCache c;
  return c;
}

IntPolynomial compute_cyclotomic(std::int64_t m, std::int64_t bound) {
  // x^m - 1 divided by Φ_d for every proper divisor d of m.
  std::vector<Integer> c(static_cast<std::size_t>(m) + 1);
  c[0] = -1;
  c[static_cast<std::size_t>(m)] = 1;
  IntPolynomial p(std::move(c));
  for (std::int64_t d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    PolyDivision div = poly_divrem(p, cyclotomic_polynomial(d, bound));
    if (!div.remainder.is_zero())
      throw VerificationError("cyclotomic recursion left a nonzero remainder");
    p = std::move(div.quotient);
  }
  return p;
}

} // namespace

const IntPolynomial& cyclotomic_polynomial(std::int64_t m, std::int64_t bound) {
  if (m < 1 || m > bound)
    throw InputError("cyclotomic index " + std::to_string(m) + " outside [1, " +
                     std::to_string(bound) + "]");
  auto& c = cache();
  {
    std::shared_lock lock(c.mutex);
    if (auto it = c.table.find(m); it != c.table.end()) return it->second;
  }
  // Computed without the lock held (the recursion re-enters); a concurrent
  // duplicate computation yields an identical value and emplace keeps one.
  IntPolynomial p = compute_cyclotomic(m, bound);
  std::unique_lock lock(c.mutex);
  return c.table.emplace(m, std::move(p)).first->second;
}

ExponentMultiset::ExponentMultiset(std::int64_t m) : modulus(m) {
  if (m < 1) throw InputError("exponent modulus must be positive");
  counts.assign(static_cast<std::size_t>(m), 0);
}

ExponentMultiset::ExponentMultiset(std::int64_t m, std::vector<std::uint64_t> c)
    : modulus(m), counts(std::move(c)) {
  if (m < 1) throw InputError("exponent modulus must be positive");
  if (counts.size() != static_cast<std::size_t>(m))
    throw InputError("exponent multiset needs exactly m counts");
}

ExponentMultiset ExponentMultiset::from_exponents(std::int64_t m,
                                                  std::span<const std::int64_t> exps) {
  ExponentMultiset e(m);
  for (std::int64_t x : exps) e.add(x);
  return e;
}

void ExponentMultiset::add(std::int64_t exponent, std::uint64_t count) {
  std::int64_t r = exponent % modulus;
  if (r < 0) r += modulus;
  counts[static_cast<std::size_t>(r)] += count;
}

std::uint64_t ExponentMultiset::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

IntPolynomial ExponentMultiset::as_polynomial() const {
  std::vector<Integer> c;
  c.reserve(counts.size());
  for (auto n : counts) c.emplace_back(static_cast<unsigned long>(n));
  return IntPolynomial(std::move(c));
}

bool is_vanishing_sum(const ExponentMultiset& exps) {
  if (exps.total() == 0) return true;
  const IntPolynomial& phi = cyclotomic_polynomial(exps.modulus);
  return poly_divrem(exps.as_polynomial(), phi).remainder.is_zero();
}

} // namespace spectratile
