#pragma once

#include "spectratile/int_matrix.hpp"
#include "spectratile/point_set.hpp"
#include "spectratile/spectral.hpp"

namespace spectratile::fixtures {

// The 6x6 exponent matrix K whose entries over 3 form a log-Hadamard
// matrix, and its mod-3 factorization K = L·T with L 6x4, T 4x6.
IntMatrix exponent_matrix_k();
IntMatrix factor_l();
IntMatrix factor_t();

// Columns of T: six points in Z^4.
PointSet set_t();
// L over denominator 3, a spectrum of set_t().
PhaseMatrix spectrum_l();

} // namespace spectratile::fixtures
