#include "spectratile/fixtures.hpp"

namespace spectratile::fixtures {

IntMatrix exponent_matrix_k() {
  return {{0, 0, 0, 0, 0, 0},
          {0, 0, 1, 1, 2, 2},
          {0, 1, 0, 2, 2, 1},
          {0, 1, 2, 0, 1, 2},
          {0, 2, 2, 1, 0, 1},
          {0, 2, 1, 2, 1, 0}};
}

IntMatrix factor_l() {
  return {{0, 0, 0, 0},
          {0, 1, 1, 2},
          {1, 0, 2, 2},
          {1, 2, 0, 1},
          {2, 2, 1, 0},
          {2, 1, 2, 1}};
}

IntMatrix factor_t() {
  return {{0, 1, 0, 0, 0, 2},
          {0, 0, 1, 0, 0, 2},
          {0, 0, 0, 1, 0, 2},
          {0, 0, 0, 0, 1, 2}};
}

PointSet set_t() { return PointSet::from_columns(factor_t()); }

PhaseMatrix spectrum_l() { return PhaseMatrix(factor_l(), 3); }

} // namespace spectratile::fixtures
