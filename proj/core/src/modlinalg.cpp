#include "spectratile/modlinalg.hpp"

#include <algorithm>

#include "spectratile/errors.hpp"

namespace spectratile {

namespace {

void require_prime(const Integer& p) {
  if (!is_prime(p)) throw InputError("modulus " + p.get_str() + " is not prime");
}

Integer inverse_mod(const Integer& a, const Integer& p) {
  Integer inv;
  mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
  return inv;
}

// Bareiss elimination on a copy; returns the rank and, for square input,
// the determinant (zero when singular).
struct BareissResult {
  std::size_t rank;
  Integer determinant;
};

BareissResult bareiss(IntMatrix a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  Integer prev = 1;
  int sign = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a(pivot, col) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t c = 0; c < cols; ++c) std::swap(a(pivot, c), a(rank, c));
      sign = -sign;
    }
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t c = col + 1; c < cols; ++c) {
        Integer v = a(rank, col) * a(r, c) - a(r, col) * a(rank, c);
        mpz_divexact(a(r, c).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      a(r, col) = 0;
    }
    prev = a(rank, col);
    ++rank;
  }
  Integer det = 0;
  if (a.is_square() && rank == rows) det = sign * prev;
  return {rank, det};
}

} // namespace

bool is_prime(const Integer& p) {
  if (p < 2) return false;
  return mpz_probab_prime_p(p.get_mpz_t(), 40) > 0;
}

EchelonForm row_reduce_mod_p(const IntMatrix& matrix, const Integer& p) {
  require_prime(p);
  IntMatrix a = matrix.reduced(p);
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < cols && lead < rows; ++col) {
    std::size_t pivot = lead;
    while (pivot < rows && a(pivot, col) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != lead)
      for (std::size_t c = 0; c < cols; ++c) std::swap(a(pivot, c), a(lead, c));

    const Integer inv = inverse_mod(a(lead, col), p);
    for (std::size_t c = col; c < cols; ++c) a(lead, c) = mod_floor(a(lead, c) * inv, p);

    for (std::size_t r = 0; r < rows; ++r) {
      if (r == lead || a(r, col) == 0) continue;
      const Integer factor = a(r, col);
      for (std::size_t c = col; c < cols; ++c)
        a(r, c) = mod_floor(a(r, c) - factor * a(lead, c), p);
    }
    pivots.push_back(col);
    ++lead;
  }
  return {std::move(a), std::move(pivots)};
}

std::size_t rank_mod_p(const IntMatrix& matrix, const Integer& p) {
  return row_reduce_mod_p(matrix, p).pivot_columns.size();
}

std::size_t rank_rational(const IntMatrix& matrix) { return bareiss(matrix).rank; }

RankFactorization rank_factorize_mod_p(const IntMatrix& matrix, const Integer& p) {
  EchelonForm ef = row_reduce_mod_p(matrix, p);
  const std::size_t rank = ef.pivot_columns.size();
  if (rank == 0) throw InputError("matrix has rank 0 mod " + p.get_str() + "; nothing to factor");

  IntMatrix left(matrix.rows(), rank);
  for (std::size_t r = 0; r < matrix.rows(); ++r)
    for (std::size_t k = 0; k < rank; ++k)
      left(r, k) = mod_floor(matrix(r, ef.pivot_columns[k]), p);

  IntMatrix right(rank, matrix.cols());
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t c = 0; c < matrix.cols(); ++c) right(k, c) = ef.rref(k, c);

  return {p, std::move(left), std::move(right), rank};
}

bool check_factorization(const RankFactorization& f, const IntMatrix& original) {
  if (sgn(f.modulus) <= 0) return false;
  if (f.left.rows() != original.rows() || f.right.cols() != original.cols()) return false;
  if (f.left.cols() != f.rank || f.right.rows() != f.rank) return false;
  return matmul_mod(f.left, f.right, f.modulus) == original.reduced(f.modulus);
}

Integer determinant(const IntMatrix& matrix) {
  if (!matrix.is_square()) throw InputError("determinant of a non-square matrix");
  return bareiss(matrix).determinant;
}

DetAdjugate det_and_adjugate(const IntMatrix& matrix) {
  if (!matrix.is_square()) throw InputError("adjugate of a non-square matrix");
  const std::size_t n = matrix.rows();
  if (n == 1) return {matrix(0, 0), IntMatrix::identity(1)};

  // adj(M)(j, i) = (-1)^{i+j} det(minor(i, j))
  IntMatrix adj(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (std::size_t r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (std::size_t c = 0, mc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(mr, mc++) = matrix(r, c);
        }
        ++mr;
      }
      Integer cof = bareiss(std::move(minor)).determinant;
      adj(j, i) = ((i + j) % 2 == 0) ? cof : Integer(-cof);
    }
  }
  return {bareiss(matrix).determinant, std::move(adj)};
}

IntMatrix matmul_mod(const IntMatrix& a, const IntMatrix& b, const std::optional<Integer>& modulus) {
  if (a.cols() != b.rows())
    throw InputError("dimension mismatch in matrix product: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " times " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  if (modulus && sgn(*modulus) <= 0) throw InputError("modulus must be positive");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) {
      Integer acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(r, k) * b(k, c);
      out(r, c) = modulus ? mod_floor(acc, *modulus) : acc;
    }
  return out;
}

} // namespace spectratile
