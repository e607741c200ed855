#pragma once

#include <cstddef>
#include <optional>

#include "spectratile/int_matrix.hpp"

namespace spectratile {

/// Factorization matrix ≡ left · right (mod modulus) with rank-many
/// inner columns. `left` holds the original pivot columns reduced mod p,
/// `right` the nonzero rows of the reduced row echelon form.
struct RankFactorization {
  Integer modulus;
  IntMatrix left;
  IntMatrix right;
  std::size_t rank;
};

struct DetAdjugate {
  Integer determinant;
  IntMatrix adjugate;
};

bool is_prime(const Integer& p);

// Rank over F_p. Throws InputError if p is not prime.
std::size_t rank_mod_p(const IntMatrix& matrix, const Integer& p);

// Rank over the rationals, by fraction-free elimination.
std::size_t rank_rational(const IntMatrix& matrix);

// Reduced row echelon form over F_p, entries in [0, p), with the pivot
// column indices in order. Pivot search is column-major, first nonzero row.
struct EchelonForm {
  IntMatrix rref;
  std::vector<std::size_t> pivot_columns;
};
EchelonForm row_reduce_mod_p(const IntMatrix& matrix, const Integer& p);

// Throws InputError for a non-prime modulus or a rank-0 matrix (no factor
// with a positive inner dimension exists).
RankFactorization rank_factorize_mod_p(const IntMatrix& matrix, const Integer& p);

// True iff left · right ≡ original (mod modulus) and the recorded rank fits
// the factor shapes.
bool check_factorization(const RankFactorization& f, const IntMatrix& original);

// Exact determinant (Bareiss) and adjugate, adj(M) · M = det(M) · I.
DetAdjugate det_and_adjugate(const IntMatrix& matrix);
Integer determinant(const IntMatrix& matrix);

// Exact product when modulus is empty, otherwise reduced to [0, modulus).
IntMatrix matmul_mod(const IntMatrix& a, const IntMatrix& b,
                     const std::optional<Integer>& modulus = std::nullopt);

} // namespace spectratile
