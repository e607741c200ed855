#include "spectratile/pipeline.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <sstream>

#include "spectratile/errors.hpp"
#include "spectratile/fixtures.hpp"

namespace spectratile {

bool PipelineReport::overall() const {
  if (steps.empty()) return false;
  for (const auto& s : steps)
    if (!s.passed) return false;
  return true;
}

namespace {

class StepRunner {
public:
  explicit StepRunner(PipelineReport& report) : report_(report) {}

  // `body` fills in the detail and returns whether the step passed.
  void run(std::string name, std::string ref, const std::function<bool(std::string&)>& body) {
    PipelineStep step{std::move(name), false, {}, std::move(ref), 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      step.passed = body(step.detail);
    } catch (const GuardError&) {
      throw;
    } catch (const std::exception& e) {
      step.passed = false;
      step.detail = std::string("error: ") + e.what();
    }
    step.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report_.steps.push_back(std::move(step));
  }

private:
  PipelineReport& report_;
};

std::string str(const Integer& v) { return v.get_str(); }

} // namespace

CounterexampleRun verify_counterexample(std::int64_t n, std::uint64_t guard) {
  if (n < 1) throw InputError("side count n must be at least 1");
  constexpr std::int64_t kModulus = 3;
  const Integer three(kModulus);

  const IntMatrix k = fixtures::exponent_matrix_k();
  const IntMatrix l = fixtures::factor_l();
  const IntMatrix t = fixtures::factor_t();
  const PointSet set = fixtures::set_t();
  const std::size_t d = set.dimension();

  CounterexampleRun run;
  StepRunner steps(run.report);

  std::size_t rank = 0;
  std::optional<RankFactorization> fresh;
  std::optional<SpectrumCertificate> base_spectrum, fresh_spectrum, composed;
  std::optional<NonTilingCertificate> by_divisibility, by_search;
  std::optional<ExtensionReport> extension;

  steps.run("log-hadamard", "exponent_matrix", [&](std::string& detail) {
    const bool ok = is_log_hadamard(PhaseMatrix(k, kModulus));
    detail = "K/3 rows pairwise orthogonal over all " + std::to_string(k.rows() * (k.rows() - 1) / 2) +
             " row pairs (exact cyclotomic check)";
    return ok;
  });

  steps.run("rank-mod-3", "rank", [&](std::string& detail) {
    rank = rank_mod_p(k, three);
    detail = "rank of K over F_3 = " + std::to_string(rank);
    return rank == 4;
  });

  steps.run("factorization", "given_factorization", [&](std::string& detail) {
    const RankFactorization given{three, l, t, 4};
    const bool given_ok = check_factorization(given, k);
    fresh = rank_factorize_mod_p(k, three);
    const bool fresh_ok = check_factorization(*fresh, k);
    detail = std::string("L*T == K (mod 3): ") + (given_ok ? "yes" : "no") +
             "; fresh factorization rank " + std::to_string(fresh->rank) + " re-multiplies: " +
             (fresh_ok ? "yes" : "no");
    return given_ok && fresh_ok && fresh->rank == 4;
  });

  steps.run("t-is-3-spectral", "base_spectrum", [&](std::string& detail) {
    base_spectrum = SpectrumCertificate{GroupSpec(kModulus, d), set, fixtures::spectrum_l()};
    const bool ok = verify_spectrum(*base_spectrum);
    bool fresh_ok = false;
    if (fresh) {
      fresh_spectrum = SpectrumCertificate{GroupSpec(kModulus, fresh->right.rows()),
                                           PointSet::from_columns(fresh->right),
                                           PhaseMatrix(fresh->left, kModulus)};
      fresh_ok = verify_spectrum(*fresh_spectrum);
    }
    detail = std::string("T with spectrum L/3: ") + (ok ? "spectral" : "NOT spectral") +
             "; fresh right factor with fresh left factor: " + (fresh_ok ? "spectral" : "NOT spectral");
    return ok && fresh_ok;
  });

  steps.run("t-not-3-tile", "non_tiling_exhaustive", [&](std::string& detail) {
    const GroupSpec group(kModulus, d);
    auto shortcut = decide_m_tile(set, group, {.guard = guard, .divisibility_shortcut = true});
    auto search = decide_m_tile(set, group, {.guard = guard, .divisibility_shortcut = false});
    const auto* a = std::get_if<NonTilingCertificate>(&shortcut);
    const auto* b = std::get_if<NonTilingCertificate>(&search);
    if (a) by_divisibility = *a;
    if (b) by_search = *b;
    const bool ok = a && a->reason == NonTilingReason::divisibility && b &&
                    b->reason == NonTilingReason::exhausted_search;
    std::ostringstream os;
    os << "|T| = " << set.size() << ", |Z_3^4| = " << str(group.exact_order())
       << (a ? "; divisibility: " + to_string(a->reason) : "; divisibility: tiles?!");
    if (b) os << "; exhaustive exact cover: " << to_string(b->reason) << " after " << b->nodes << " nodes";
    detail = os.str();
    return ok;
  });

  steps.run("composition", "composed_spectrum", [&](std::string& detail) {
    if (!base_spectrum) return false;
    composed = compose_spectral(*base_spectrum, cube_spectrum(n, d, guard));
    const bool ok = verify_spectrum(*composed);
    const bool same_set = composed->set == build_extension(set, kModulus, n, guard);
    const std::size_t pts = composed->set.size();
    detail = "S = T + 3[0," + std::to_string(n) + ")^4 has " + std::to_string(pts) + " points, " +
             std::to_string(kModulus * n) + "-spectral over " + std::to_string(pts * (pts - 1) / 2) +
             " row pairs: " + (ok ? "yes" : "no");
    return ok && same_set && pts == set.size() * static_cast<std::size_t>(n * n * n * n);
  });

  steps.run("extension-obstructions", "extension", [&](std::string& detail) {
    extension = extension_obstructions(set, kModulus, n, guard);
    const auto& r = *extension;
    detail = "|S| = " + str(r.extension_size) + ", (3n)^4 = " + str(r.group_order) +
             (r.size_divides_order ? ", divides" : ", does not divide") +
             "; mod-3 reduction uniform with multiplicity " + std::to_string(r.reduction.multiplicity);
    return !r.size_divides_order && std::holds_alternative<NonTilingCertificate>(r.base_verdict) &&
           r.reduction.uniform && r.cited_claim.has_value();
  });

  if (run.report.overall()) {
    certio::CounterexampleRecord record{
        n,
        k,
        RankFactorization{three, l, t, 4},
        *fresh,
        rank,
        *base_spectrum,
        *fresh_spectrum,
        *by_divisibility,
        *by_search,
        *composed,
        *extension,
    };
    const std::string side = std::to_string(n);
    std::vector<certio::ProvenanceStep> prov{
        {"is_log_hadamard", {{"matrix", "K"}, {"denominator", "3"}}},
        {"rank_mod_p", {{"matrix", "K"}, {"p", "3"}}},
        {"check_factorization", {{"left", "L"}, {"right", "T"}, {"p", "3"}}},
        {"rank_factorize_mod_p", {{"matrix", "K"}, {"p", "3"}}},
        {"is_m_spectral", {{"set", "T"}, {"spectrum", "L"}, {"m", "3"}}},
        {"decide_m_tile", {{"set", "T"}, {"m", "3"}, {"divisibility_shortcut", "true"}}},
        {"decide_m_tile", {{"set", "T"}, {"m", "3"}, {"divisibility_shortcut", "false"}}},
        {"compose_spectral", {{"first", "T"}, {"second", "cube_spectrum"}, {"n", side}}},
        {"extension_obstructions", {{"set", "T"}, {"m", "3"}, {"n", side}}},
    };
    run.envelope = certio::counterexample_envelope(record, std::move(prov));
  }
  return run;
}

std::string format_report(const PipelineReport& report) {
  std::ostringstream os;
  for (const auto& s : report.steps)
    os << (s.passed ? "[pass] " : "[FAIL] ") << std::left << std::setw(24) << s.name << ' '
       << std::fixed << std::setprecision(3) << s.seconds << "s  " << s.detail << '\n';
  os << "overall: " << (report.overall() ? "pass" : "FAIL") << '\n';
  return os.str();
}

} // namespace spectratile
