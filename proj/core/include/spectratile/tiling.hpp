#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spectratile/int_matrix.hpp"
#include "spectratile/point_set.hpp"

namespace spectratile {

/// T ⊕ Σ = Z_m^d: every cell is σ + t (mod m) for exactly one pair.
struct TilingCertificate {
  GroupSpec group;
  PointSet set;
  PointSet complement;

  friend bool operator==(const TilingCertificate&, const TilingCertificate&) = default;
};

enum class NonTilingReason { divisibility, duplicate_residues, exhausted_search };

std::string to_string(NonTilingReason r);
std::optional<NonTilingReason> non_tiling_reason_from_string(const std::string& s);

struct NonTilingCertificate {
  GroupSpec group;
  PointSet set;
  NonTilingReason reason;
  // duplicate_residues: indices of two points congruent mod m.
  std::optional<std::pair<std::size_t, std::size_t>> colliding_pair;
  // exhausted_search: explored search nodes.
  std::uint64_t nodes = 0;

  friend bool operator==(const NonTilingCertificate&, const NonTilingCertificate&) = default;
};

using TilingVerdict = std::variant<TilingCertificate, NonTilingCertificate>;

// Linear coverage count over Z_m^d.
bool verify_tiling(const TilingCertificate& cert, std::uint64_t guard = kDefaultGuard);

// Checks what a static non-tiling certificate can prove on its own: the
// divisibility and collision claims. An exhausted-search certificate is
// only structurally checked here; replay_non_tiling re-runs the search.
bool verify_non_tiling_claim(const NonTilingCertificate& cert);
bool replay_non_tiling(const NonTilingCertificate& cert, std::uint64_t guard = kDefaultGuard);

struct TileDecisionOptions {
  std::uint64_t guard = kDefaultGuard;
  // When false, a size that does not divide m^d still goes to exhaustive search.
  bool divisibility_shortcut = true;
};

// Complete decision: duplicate residues, divisibility, then exact cover by
// backtracking on the least uncovered cell with translates in point order.
TilingVerdict decide_m_tile(const PointSet& set, const GroupSpec& group,
                            const TileDecisionOptions& options = {});

// Γ = T + mS with complement Σ_T + m·Σ_S, all mod mn. Throws
// VerificationError if the result fails verify_tiling.
TilingCertificate compose_tile(const TilingCertificate& cert_t, const TilingCertificate& cert_s,
                               std::uint64_t guard = kDefaultGuard);

// Σ = {σ ∈ Z_m^d : l1·σ mod m ∈ Σ_1}, by full enumeration of Z_m^d.
TilingCertificate lift_tile(const PointSet& set, const IntMatrix& l1,
                            const TilingCertificate& cert_image, std::uint64_t guard = kDefaultGuard);

/// The constructive chain behind tiling by a linearly independent set:
/// select rows P so PT is invertible, tile Z_M (M = k·D) by D·{0..k-1},
/// then lift through j = sign(det)·k·adj(PT) and through P.
struct IndependenceChain {
  std::vector<std::size_t> selected_rows;
  IntMatrix selection;       // P, k x d
  IntMatrix selected_block;  // PT, k x k
  Integer determinant;       // det(PT)
  std::int64_t scale;        // D = |det(PT)|
  std::int64_t modulus;      // M = k·D
  IntMatrix functional;      // j*, 1 x k, with j*·PT = D·(0, 1, ..., k-1)
  TilingCertificate line;    // D·{0..k-1} in Z_M
  TilingCertificate block;   // PT in Z_M^k
  TilingCertificate result;  // T in Z_M^d
};

IndependenceChain independent_tile(const PointSet& set, std::uint64_t guard = kDefaultGuard);

// S_n = {t + m·v : v ∈ [0, n)^d, t ∈ T}, v outermost.
PointSet build_extension(const PointSet& set, std::int64_t m, std::int64_t n,
                         std::uint64_t guard = kDefaultGuard);

struct ModReduction {
  bool uniform = false;
  // Common multiplicity when uniform.
  std::uint64_t multiplicity = 0;
};

// Every point of `big` reduces mod m to a residue of `base`, each residue
// of base hit equally often.
ModReduction check_mod_reduction(const PointSet& big, std::int64_t m, const PointSet& base);

struct ExtensionReport {
  std::int64_t base_modulus;
  std::int64_t side;
  std::size_t base_size;
  Integer extension_size;    // |S_n| = |T|·n^d
  Integer group_order;       // (mn)^d
  bool size_divides_order;   // |S_n| divides (mn)^d, equivalently |T| divides m^d
  TilingVerdict base_verdict;
  ModReduction reduction;
  // Present when the base does not tile Z_m^d: the asymptotic non-tiling
  // statement for Z^d, recorded as cited and not machine-verified.
  std::optional<std::string> cited_claim;
};

ExtensionReport extension_obstructions(const PointSet& set, std::int64_t m, std::int64_t n,
                                       std::uint64_t guard = kDefaultGuard);

inline constexpr const char* kExtensionNonTilingClaim =
    "if the base set does not tile Z_m^d, then for all sufficiently large n the extension "
    "T + m[0,n)^d does not tile Z^d (asymptotic covering argument; cited, not machine-verified)";

} // namespace spectratile
