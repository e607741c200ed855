#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectratile/certio.hpp"

namespace spectratile {

struct PipelineStep {
  std::string name;
  bool passed = false;
  std::string detail;
  // Payload key in the counterexample envelope backing this step.
  std::string certificate_ref;
  double seconds = 0.0;
};

struct PipelineReport {
  std::vector<PipelineStep> steps;
  bool overall() const;
};

struct CounterexampleRun {
  PipelineReport report;
  // Present only when every step passed.
  std::optional<certio::CertificateEnvelope> envelope;
};

// Runs the spectral-but-not-a-tile reproduction in Z^4 for side n: the
// 6x6 exponent matrix, its mod-3 factorization, spectrality of T, the
// non-tiling of T in Z_3^4, the composition with the cube [0,n)^4 and
// the extension obstructions. Throws InputError for n < 1 and GuardError
// when an enumeration exceeds the guard.
CounterexampleRun verify_counterexample(std::int64_t n, std::uint64_t guard = kDefaultGuard);

std::string format_report(const PipelineReport& report);

} // namespace spectratile
