#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "spectratile/errors.hpp"
#include "spectratile/fixtures.hpp"
#include "spectratile/modlinalg.hpp"
#include "spectratile/tiling.hpp"

using namespace spectratile;

namespace {

PointSet line(const std::vector<std::int64_t>& xs) {
  std::vector<Point> pts;
  for (auto x : xs) pts.push_back({x});
  return PointSet(1, pts);
}

const TilingCertificate* as_tiling(const TilingVerdict& v) { return std::get_if<TilingCertificate>(&v); }
const NonTilingCertificate* as_non_tiling(const TilingVerdict& v) {
  return std::get_if<NonTilingCertificate>(&v);
}

} // namespace

TEST(VerifyTiling, CyclicExamples) {
  EXPECT_TRUE(verify_tiling({GroupSpec(4, 1), line({0, 1}), line({0, 2})}));
  EXPECT_FALSE(verify_tiling({GroupSpec(4, 1), line({0, 1}), line({0, 1})}));
  EXPECT_FALSE(verify_tiling({GroupSpec(4, 1), line({0, 1}), line({0})}));
  EXPECT_FALSE(verify_tiling({GroupSpec(4, 2), line({0, 1}), line({0, 2})}));
}

TEST(VerifyTiling, CubeInLargerCube) {
  const PointSet cube = cube_points(2, 4);
  std::vector<Point> sigma;
  for (std::int64_t a : {0, 2, 4})
    for (std::int64_t b : {0, 2, 4})
      for (std::int64_t c : {0, 2, 4})
        for (std::int64_t d : {0, 2, 4}) sigma.push_back({a, b, c, d});
  EXPECT_TRUE(verify_tiling({GroupSpec(6, 4), cube, PointSet(4, sigma)}));
}

TEST(VerifyTiling, GuardApplies) {
  EXPECT_THROW(verify_tiling({GroupSpec(4, 1), line({0, 1}), line({0, 2})}, 3), GuardError);
}

TEST(DecideTile, SmallCyclicComplements) {
  const auto a = decide_m_tile(line({0, 1}), GroupSpec(4, 1));
  ASSERT_NE(as_tiling(a), nullptr);
  EXPECT_EQ(as_tiling(a)->complement, line({0, 2}));

  const auto b = decide_m_tile(line({0, 2}), GroupSpec(4, 1));
  ASSERT_NE(as_tiling(b), nullptr);
  EXPECT_EQ(as_tiling(b)->complement, line({0, 1}));
}

TEST(DecideTile, DivisibilityShortcut) {
  const auto v = decide_m_tile(line({0, 1, 2}), GroupSpec(4, 1));
  ASSERT_NE(as_non_tiling(v), nullptr);
  EXPECT_EQ(as_non_tiling(v)->reason, NonTilingReason::divisibility);
  EXPECT_TRUE(verify_non_tiling_claim(*as_non_tiling(v)));
}

TEST(DecideTile, DuplicateResidues) {
  const auto v = decide_m_tile(line({0, 5}), GroupSpec(5, 1));
  ASSERT_NE(as_non_tiling(v), nullptr);
  EXPECT_EQ(as_non_tiling(v)->reason, NonTilingReason::duplicate_residues);
  ASSERT_TRUE(as_non_tiling(v)->colliding_pair.has_value());
  EXPECT_TRUE(verify_non_tiling_claim(*as_non_tiling(v)));
}

TEST(DecideTile, ExhaustedSearchOnZ6) {
  const auto v = decide_m_tile(line({0, 1, 3}), GroupSpec(6, 1));
  ASSERT_NE(as_non_tiling(v), nullptr);
  EXPECT_EQ(as_non_tiling(v)->reason, NonTilingReason::exhausted_search);
  EXPECT_TRUE(replay_non_tiling(*as_non_tiling(v)));
}

TEST(DecideTile, FixtureSetDoesNotThreeTile) {
  const auto quick = decide_m_tile(fixtures::set_t(), GroupSpec(3, 4));
  ASSERT_NE(as_non_tiling(quick), nullptr);
  EXPECT_EQ(as_non_tiling(quick)->reason, NonTilingReason::divisibility);

  const auto full = decide_m_tile(fixtures::set_t(), GroupSpec(3, 4), {kDefaultGuard, false});
  ASSERT_NE(as_non_tiling(full), nullptr);
  EXPECT_EQ(as_non_tiling(full)->reason, NonTilingReason::exhausted_search);
  // Node count of the deterministic search, frozen from an independent
  // exact-cover prototype with the same branching rule.
  EXPECT_EQ(as_non_tiling(full)->nodes, 750u);
  EXPECT_TRUE(replay_non_tiling(*as_non_tiling(full)));
}

TEST(DecideTile, TamperedNonTilingClaimsFail) {
  NonTilingCertificate c{GroupSpec(4, 1), line({0, 1}), NonTilingReason::divisibility, std::nullopt, 0};
  EXPECT_FALSE(verify_non_tiling_claim(c));
  c.reason = NonTilingReason::duplicate_residues;
  c.colliding_pair = std::make_pair(std::size_t{0}, std::size_t{1});
  EXPECT_FALSE(verify_non_tiling_claim(c));
  c.reason = NonTilingReason::exhausted_search;
  c.colliding_pair.reset();
  c.nodes = 3;
  EXPECT_FALSE(replay_non_tiling(c));
}

TEST(DecideTile, GuardBeforeSearch) {
  EXPECT_THROW(decide_m_tile(PointSet{{0, 0, 0, 0, 0, 0, 0, 0}}, GroupSpec(10, 8), {1000, true}), GuardError);
}

TEST(DecideTile, CyclicAgreesWithBruteForce) {
  int tiles = 0, total = 0;
  for (std::int64_t m = 1; m <= 8; ++m)
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      std::vector<std::int64_t> t;
      for (std::int64_t x = 0; x < m; ++x)
        if (mask & (1u << x)) t.push_back(x);
      if (t.size() > 4) continue;
      const auto v = decide_m_tile(line(t), GroupSpec(m, 1));
      const bool ours = as_tiling(v) != nullptr;
      ASSERT_EQ(ours, oracle::tiles_cyclic_brute_force(t, m)) << "m=" << m << " mask=" << mask;
      if (ours) ASSERT_TRUE(verify_tiling(*as_tiling(v)));
      tiles += ours;
      ++total;
    }
  // Frozen from an independent enumeration.
  EXPECT_EQ(total, 372);
  EXPECT_EQ(tiles, 112);
}

TEST(ComposeTile, CyclicExample) {
  const TilingCertificate c{GroupSpec(2, 1), line({0}), line({0, 1})};
  const TilingCertificate d{GroupSpec(2, 1), line({0, 1}), line({0})};
  const auto out = compose_tile(d, c);
  EXPECT_EQ(out.group, GroupSpec(4, 1));
  EXPECT_EQ(out.set, line({0, 1}));
  EXPECT_TRUE(verify_tiling(out));
}

TEST(ComposeTile, RejectsGroupMismatch) {
  const TilingCertificate c{GroupSpec(2, 1), line({0}), line({0, 1})};
  const TilingCertificate p{GroupSpec(2, 2), PointSet{{0, 0}, {0, 1}}, PointSet{{0, 0}, {1, 0}}};
  EXPECT_THROW(compose_tile(c, p), InputError);
}

TEST(LiftTile, ProjectionExample) {
  const PointSet set{{0, 0}, {1, 0}};
  const IntMatrix l1{{1, 0}};
  const TilingCertificate image{GroupSpec(2, 1), line({0, 1}), line({0})};
  const auto out = lift_tile(set, l1, image);
  EXPECT_EQ(out.complement, (PointSet{{0, 0}, {0, 1}}));
  EXPECT_TRUE(verify_tiling(out));
}

TEST(IndependentTile, IdentityColumns) {
  const auto chain = independent_tile(PointSet::from_columns(IntMatrix::identity(3)));
  EXPECT_EQ(chain.scale, 1);
  EXPECT_EQ(chain.modulus, 3);
  EXPECT_TRUE(verify_tiling(chain.result));
}

TEST(IndependentTile, ChainPiecesAreConsistent) {
  const PointSet set = PointSet::from_columns(IntMatrix{{2, 1}, {0, 3}, {1, 1}});
  const auto chain = independent_tile(set);
  EXPECT_EQ(chain.selected_rows.size(), 2u);
  EXPECT_EQ(chain.scale, Integer(abs(chain.determinant)).get_si());
  EXPECT_EQ(chain.modulus, 2 * chain.scale);
  const IntMatrix jt = matmul_mod(chain.functional, chain.selected_block);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(jt(0, i), chain.scale * static_cast<long>(i));
  EXPECT_TRUE(verify_tiling(chain.line));
  EXPECT_TRUE(verify_tiling(chain.block));
  EXPECT_TRUE(verify_tiling(chain.result));
  EXPECT_EQ(chain.result.set, set);
}

TEST(IndependentTile, RejectsDependentSets) {
  EXPECT_THROW(independent_tile(PointSet{{1, 2}, {2, 4}}), InputError);
  EXPECT_THROW(independent_tile(PointSet{{0, 0}}), InputError);
  EXPECT_THROW(independent_tile(PointSet{{1, 0}, {0, 1}, {1, 1}}), InputError);
}

TEST(Extension, BuildAndReduce) {
  const PointSet base = line({0, 1});
  const PointSet ext = build_extension(base, 3, 2);
  EXPECT_EQ(ext, line({0, 1, 3, 4}));
  const auto red = check_mod_reduction(ext, 3, base);
  EXPECT_TRUE(red.uniform);
  EXPECT_EQ(red.multiplicity, 2u);
  EXPECT_FALSE(check_mod_reduction(line({0, 1, 3}), 3, base).uniform);
  EXPECT_THROW(build_extension(line({0, 4}), 3, 2), InputError);
}

TEST(Extension, FixtureSetReport) {
  const auto report = extension_obstructions(fixtures::set_t(), 3, 2);
  EXPECT_EQ(report.extension_size, 96);
  EXPECT_EQ(report.group_order, 1296);
  EXPECT_FALSE(report.size_divides_order);
  EXPECT_NE(std::get_if<NonTilingCertificate>(&report.base_verdict), nullptr);
  EXPECT_TRUE(report.reduction.uniform);
  EXPECT_EQ(report.reduction.multiplicity, 16u);
  ASSERT_TRUE(report.cited_claim.has_value());
  EXPECT_EQ(*report.cited_claim, kExtensionNonTilingClaim);
}

TEST(Extension, TilingBaseHasNoCitedClaim) {
  const auto report = extension_obstructions(line({0, 1}), 4, 3);
  EXPECT_TRUE(report.size_divides_order);
  EXPECT_NE(std::get_if<TilingCertificate>(&report.base_verdict), nullptr);
  EXPECT_FALSE(report.cited_claim.has_value());
}

TEST(NonTilingReason, StringRoundTrip) {
  for (auto r : {NonTilingReason::divisibility, NonTilingReason::duplicate_residues,
                 NonTilingReason::exhausted_search})
    EXPECT_EQ(non_tiling_reason_from_string(to_string(r)), r);
  EXPECT_FALSE(non_tiling_reason_from_string("nope").has_value());
}
