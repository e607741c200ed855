#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectratile/modlinalg.hpp"
#include "spectratile/spectral.hpp"
#include "spectratile/tiling.hpp"

namespace spectratile::certio {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "spectratile-certificate/1";

enum class Kind {
  spectrum,
  tiling,
  non_tiling,
  composition,
  lift,
  independence_chain,
  counterexample,
};

std::string to_string(Kind k);
std::optional<Kind> kind_from_string(const std::string& s);

struct ProvenanceStep {
  std::string operation;
  std::map<std::string, std::string> inputs;

  friend bool operator==(const ProvenanceStep&, const ProvenanceStep&) = default;
};

/// A self-contained, re-checkable record. The payload layout depends on
/// the kind; every integer inside it is a decimal string.
struct CertificateEnvelope {
  std::string schema_version = kSchemaVersion;
  Kind kind = Kind::spectrum;
  Json payload;
  std::vector<ProvenanceStep> provenance;

  friend bool operator==(const CertificateEnvelope&, const CertificateEnvelope&) = default;
};

enum class ParseErrorKind { malformed, schema_version, unknown_kind, invariant_violation };

class ParseError : public std::runtime_error {
public:
  ParseError(ParseErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ParseErrorKind kind() const noexcept { return kind_; }

private:
  ParseErrorKind kind_;
};

// What a loaded certificate establishes without rerunning a search.
enum class Trust { verified, replay_required };

// Canonical bytes: sorted keys, compact, trailing newline.
std::string serialize(const CertificateEnvelope& env);

// Structural decoding plus the kind's verifier. Throws ParseError.
CertificateEnvelope parse(const std::string& bytes);

// replay_required iff some non-tiling record rests on an exhausted search.
Trust trust_of(const CertificateEnvelope& env);

// Payload encoders/decoders. Decoders throw ParseError.
Json to_json(const Integer& v);
Json to_json(const IntMatrix& m);
Json to_json(const GroupSpec& g);
Json to_json(const PointSet& s);
Json to_json(const PhaseMatrix& p);
Json to_json(const SpectrumCertificate& c);
Json to_json(const TilingCertificate& c);
Json to_json(const NonTilingCertificate& c);
Json to_json(const TilingVerdict& v);
Json to_json(const RankFactorization& f);
Json to_json(const IndependenceChain& c);
Json to_json(const ExtensionReport& r);

Integer integer_from_json(const Json& j);
IntMatrix matrix_from_json(const Json& j);
GroupSpec group_from_json(const Json& j);
PointSet point_set_from_json(const Json& j);
PhaseMatrix phase_matrix_from_json(const Json& j);
SpectrumCertificate spectrum_from_json(const Json& j);
TilingCertificate tiling_from_json(const Json& j);
NonTilingCertificate non_tiling_from_json(const Json& j);
TilingVerdict verdict_from_json(const Json& j);
RankFactorization factorization_from_json(const Json& j);

// Envelope builders for the single-certificate kinds.
CertificateEnvelope envelope(const SpectrumCertificate& c, std::vector<ProvenanceStep> provenance);
CertificateEnvelope envelope(const TilingCertificate& c, std::vector<ProvenanceStep> provenance);
CertificateEnvelope envelope(const NonTilingCertificate& c, std::vector<ProvenanceStep> provenance);
CertificateEnvelope envelope(const TilingVerdict& v, std::vector<ProvenanceStep> provenance);
CertificateEnvelope envelope(const IndependenceChain& c, std::vector<ProvenanceStep> provenance);

CertificateEnvelope spectral_composition_envelope(const SpectrumCertificate& first,
                                                  const SpectrumCertificate& second,
                                                  const SpectrumCertificate& result,
                                                  std::vector<ProvenanceStep> provenance);
CertificateEnvelope tiling_composition_envelope(const TilingCertificate& first,
                                                const TilingCertificate& second,
                                                const TilingCertificate& result,
                                                std::vector<ProvenanceStep> provenance);
CertificateEnvelope spectral_lift_envelope(const PointSet& set, const IntMatrix& l1,
                                           const SpectrumCertificate& image,
                                           const SpectrumCertificate& result,
                                           std::vector<ProvenanceStep> provenance);
CertificateEnvelope tiling_lift_envelope(const PointSet& set, const IntMatrix& l1,
                                         const TilingCertificate& image,
                                         const TilingCertificate& result,
                                         std::vector<ProvenanceStep> provenance);

} // namespace spectratile::certio

namespace spectratile::certio {

/// Everything the four-dimensional counterexample pipeline establishes,
/// in re-checkable form.
struct CounterexampleRecord {
  std::int64_t side;
  IntMatrix exponent_matrix;
  RankFactorization given_factorization;
  RankFactorization fresh_factorization;
  std::size_t rank;
  SpectrumCertificate base_spectrum;   // T with spectrum L over 3
  SpectrumCertificate fresh_spectrum;  // fresh right factor with fresh left factor
  NonTilingCertificate divisibility;   // with the shortcut
  NonTilingCertificate exhaustive;     // shortcut disabled
  SpectrumCertificate composed;        // T + 3[0,n)^4 over 3n
  ExtensionReport extension;
};

Json to_json(const CounterexampleRecord& r);
CertificateEnvelope counterexample_envelope(const CounterexampleRecord& r,
                                            std::vector<ProvenanceStep> provenance);

} // namespace spectratile::certio
