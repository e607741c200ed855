#include "spectratile/certio.hpp"

#include "spectratile/errors.hpp"

namespace spectratile::certio {

std::string to_string(Kind k) {
  switch (k) {
  case Kind::spectrum: return "spectrum";
  case Kind::tiling: return "tiling";
  case Kind::non_tiling: return "non-tiling";
  case Kind::composition: return "composition";
  case Kind::lift: return "lift";
  case Kind::independence_chain: return "independence-chain";
  case Kind::counterexample: return "counterexample";
  }
  return "unknown";
}

std::optional<Kind> kind_from_string(const std::string& s) {
  for (Kind k : {Kind::spectrum, Kind::tiling, Kind::non_tiling, Kind::composition, Kind::lift,
                 Kind::independence_chain, Kind::counterexample})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw ParseError(ParseErrorKind::malformed, what);
}

[[noreturn]] void violation(const std::string& what) {
  throw ParseError(ParseErrorKind::invariant_violation, what);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) malformed(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

const Json& array_field(const Json& j, const char* key) {
  const Json& a = field(j, key);
  if (!a.is_array()) malformed(std::string("field '") + key + "' must be an array");
  return a;
}

std::string string_field(const Json& j, const char* key) {
  const Json& s = field(j, key);
  if (!s.is_string()) malformed(std::string("field '") + key + "' must be a string");
  return s.get<std::string>();
}

std::int64_t small_integer(const Json& j) {
  const Integer v = integer_from_json(j);
  if (!v.fits_slong_p()) malformed("integer " + v.get_str() + " does not fit in 64 bits");
  return v.get_si();
}

std::uint64_t count_from_json(const Json& j) {
  const Integer v = integer_from_json(j);
  if (sgn(v) < 0 || !v.fits_ulong_p()) malformed("expected a nonnegative count, got " + v.get_str());
  return v.get_ui();
}

Json count(std::uint64_t v) { return std::to_string(v); }

// Decoders raise InputError for type invariants; those surface as
// invariant violations rather than malformed input.
template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    violation(e.what());
  }
}

} // namespace

Json to_json(const Integer& v) { return v.get_str(); }

Json to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (const auto& e : m.row(r)) row.push_back(e.get_str());
    rows.push_back(std::move(row));
  }
  return {{"rows", count(m.rows())}, {"cols", count(m.cols())}, {"entries", std::move(rows)}};
}

Json to_json(const GroupSpec& g) {
  return {{"modulus", std::to_string(g.modulus)}, {"dimension", count(g.dimension)}};
}

Json to_json(const PointSet& s) {
  Json pts = Json::array();
  for (const auto& p : s.points()) {
    Json pt = Json::array();
    for (auto x : p) pt.push_back(std::to_string(x));
    pts.push_back(std::move(pt));
  }
  return {{"dimension", count(s.dimension())}, {"points", std::move(pts)}};
}

Json to_json(const PhaseMatrix& p) {
  return {{"numerators", to_json(p.numerators())}, {"denominator", std::to_string(p.denominator())}};
}

Json to_json(const SpectrumCertificate& c) {
  return {{"group", to_json(c.group)}, {"set", to_json(c.set)}, {"spectrum", to_json(c.spectrum)}};
}

Json to_json(const TilingCertificate& c) {
  return {{"group", to_json(c.group)}, {"set", to_json(c.set)}, {"complement", to_json(c.complement)}};
}

Json to_json(const NonTilingCertificate& c) {
  Json j = {{"group", to_json(c.group)}, {"set", to_json(c.set)}, {"reason", to_string(c.reason)}};
  if (c.colliding_pair)
    j["colliding_pair"] = Json::array({count(c.colliding_pair->first), count(c.colliding_pair->second)});
  if (c.reason == NonTilingReason::exhausted_search) j["nodes"] = count(c.nodes);
  return j;
}

Json to_json(const TilingVerdict& v) {
  if (const auto* t = std::get_if<TilingCertificate>(&v))
    return {{"verdict", "tiling"}, {"certificate", to_json(*t)}};
  return {{"verdict", "non-tiling"}, {"certificate", to_json(std::get<NonTilingCertificate>(v))}};
}

Json to_json(const RankFactorization& f) {
  return {{"modulus", f.modulus.get_str()},
          {"left", to_json(f.left)},
          {"right", to_json(f.right)},
          {"rank", count(f.rank)}};
}

Json to_json(const IndependenceChain& c) {
  Json rows = Json::array();
  for (auto r : c.selected_rows) rows.push_back(count(r));
  return {{"selected_rows", std::move(rows)},
          {"selection", to_json(c.selection)},
          {"selected_block", to_json(c.selected_block)},
          {"determinant", c.determinant.get_str()},
          {"scale", std::to_string(c.scale)},
          {"modulus", std::to_string(c.modulus)},
          {"functional", to_json(c.functional)},
          {"line", to_json(c.line)},
          {"block", to_json(c.block)},
          {"result", to_json(c.result)}};
}

Json to_json(const ExtensionReport& r) {
  Json j = {{"base_modulus", std::to_string(r.base_modulus)},
            {"side", std::to_string(r.side)},
            {"base_size", count(r.base_size)},
            {"extension_size", r.extension_size.get_str()},
            {"group_order", r.group_order.get_str()},
            {"size_divides_order", r.size_divides_order},
            {"base_verdict", to_json(r.base_verdict)},
            {"reduction",
             {{"uniform", r.reduction.uniform}, {"multiplicity", count(r.reduction.multiplicity)}}}};
  if (r.cited_claim) j["cited_claim"] = *r.cited_claim;
  return j;
}

Json to_json(const CounterexampleRecord& r) {
  return {{"side", std::to_string(r.side)},
          {"exponent_matrix", to_json(r.exponent_matrix)},
          {"given_factorization", to_json(r.given_factorization)},
          {"fresh_factorization", to_json(r.fresh_factorization)},
          {"rank", count(r.rank)},
          {"base_spectrum", to_json(r.base_spectrum)},
          {"fresh_spectrum", to_json(r.fresh_spectrum)},
          {"non_tiling_divisibility", to_json(r.divisibility)},
          {"non_tiling_exhaustive", to_json(r.exhaustive)},
          {"composed_spectrum", to_json(r.composed)},
          {"extension", to_json(r.extension)}};
}

Integer integer_from_json(const Json& j) {
  if (!j.is_string()) malformed("integers must be encoded as decimal strings");
  const auto& s = j.get_ref<const std::string&>();
  Integer v;
  if (s.empty() || v.set_str(s, 10) != 0) malformed("not a decimal integer: '" + s + "'");
  if (v.get_str() != s) malformed("non-canonical integer encoding: '" + s + "'");
  return v;
}

IntMatrix matrix_from_json(const Json& j) {
  const std::uint64_t rows = count_from_json(field(j, "rows"));
  const std::uint64_t cols = count_from_json(field(j, "cols"));
  const Json& entries = array_field(j, "entries");
  if (entries.size() != rows) violation("matrix row count does not match 'rows'");
  std::vector<Integer> flat;
  for (const auto& row : entries) {
    if (!row.is_array()) malformed("matrix rows must be arrays");
    if (row.size() != cols) violation("matrix row length does not match 'cols'");
    for (const auto& e : row) flat.push_back(integer_from_json(e));
  }
  return guarded([&] { return IntMatrix(rows, cols, std::move(flat)); });
}

GroupSpec group_from_json(const Json& j) {
  const std::int64_t m = small_integer(field(j, "modulus"));
  const std::uint64_t d = count_from_json(field(j, "dimension"));
  return guarded([&] { return GroupSpec(m, d); });
}

PointSet point_set_from_json(const Json& j) {
  const std::uint64_t d = count_from_json(field(j, "dimension"));
  std::vector<Point> pts;
  for (const auto& p : array_field(j, "points")) {
    if (!p.is_array()) malformed("points must be arrays");
    Point pt;
    for (const auto& x : p) pt.push_back(small_integer(x));
    pts.push_back(std::move(pt));
  }
  return guarded([&] { return PointSet(d, std::move(pts)); });
}

PhaseMatrix phase_matrix_from_json(const Json& j) {
  IntMatrix num = matrix_from_json(field(j, "numerators"));
  const std::int64_t den = small_integer(field(j, "denominator"));
  PhaseMatrix p = guarded([&] { return PhaseMatrix(num, den); });
  if (!(p.numerators() == num)) violation("phase numerators must be reduced to [0, denominator)");
  return p;
}

SpectrumCertificate spectrum_from_json(const Json& j) {
  return {group_from_json(field(j, "group")), point_set_from_json(field(j, "set")),
          phase_matrix_from_json(field(j, "spectrum"))};
}

TilingCertificate tiling_from_json(const Json& j) {
  return {group_from_json(field(j, "group")), point_set_from_json(field(j, "set")),
          point_set_from_json(field(j, "complement"))};
}

NonTilingCertificate non_tiling_from_json(const Json& j) {
  NonTilingCertificate c{group_from_json(field(j, "group")), point_set_from_json(field(j, "set")),
                         NonTilingReason::divisibility, std::nullopt, 0};
  const std::string reason = string_field(j, "reason");
  auto r = non_tiling_reason_from_string(reason);
  if (!r) malformed("unknown non-tiling reason '" + reason + "'");
  c.reason = *r;
  if (j.contains("colliding_pair")) {
    const Json& pair = array_field(j, "colliding_pair");
    if (pair.size() != 2) malformed("colliding_pair must have two entries");
    c.colliding_pair = std::pair{static_cast<std::size_t>(count_from_json(pair[0])),
                                 static_cast<std::size_t>(count_from_json(pair[1]))};
  }
  if (j.contains("nodes")) c.nodes = count_from_json(j.at("nodes"));
  return c;
}

TilingVerdict verdict_from_json(const Json& j) {
  const std::string v = string_field(j, "verdict");
  if (v == "tiling") return tiling_from_json(field(j, "certificate"));
  if (v == "non-tiling") return non_tiling_from_json(field(j, "certificate"));
  malformed("unknown verdict '" + v + "'");
}

RankFactorization factorization_from_json(const Json& j) {
  return {integer_from_json(field(j, "modulus")), matrix_from_json(field(j, "left")),
          matrix_from_json(field(j, "right")),
          static_cast<std::size_t>(count_from_json(field(j, "rank")))};
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) violation(what);
}

void check_spectrum(const SpectrumCertificate& c, const std::string& what) {
  require(guarded([&] { return verify_spectrum(c); }), what + ": spectrum does not verify");
}

void check_tiling(const TilingCertificate& c, const std::string& what) {
  const Integer cells = c.group.exact_order();
  require(Integer(static_cast<unsigned long>(c.set.size())) *
                  Integer(static_cast<unsigned long>(c.complement.size())) ==
              cells,
          what + ": |set| * |complement| differs from m^d = " + cells.get_str());
  require(verify_tiling(c), what + ": tiling does not cover every cell exactly once");
}

void check_non_tiling(const NonTilingCertificate& c, const std::string& what) {
  require(verify_non_tiling_claim(c), what + ": non-tiling claim does not hold");
}

void verify_counterexample(const Json& p) {
  const std::int64_t side = small_integer(field(p, "side"));
  require(side >= 1, "side must be at least 1");
  const IntMatrix k = matrix_from_json(field(p, "exponent_matrix"));
  require(k.is_square(), "exponent matrix must be square");
  require(guarded([&] { return is_log_hadamard(PhaseMatrix(k, 3)); }),
          "exponent matrix over 3 is not log-Hadamard");
  const std::size_t rank = count_from_json(field(p, "rank"));
  require(guarded([&] { return rank_mod_p(k, 3); }) == rank, "recorded rank is not the mod-3 rank");

  for (const char* key : {"given_factorization", "fresh_factorization"}) {
    const RankFactorization f = factorization_from_json(field(p, key));
    require(f.modulus == 3 && f.rank == rank, std::string(key) + ": wrong modulus or rank");
    require(guarded([&] { return check_factorization(f, k); }),
            std::string(key) + ": left * right differs from the exponent matrix mod 3");
  }
  const RankFactorization given = factorization_from_json(field(p, "given_factorization"));
  const RankFactorization fresh = factorization_from_json(field(p, "fresh_factorization"));

  const SpectrumCertificate base = spectrum_from_json(field(p, "base_spectrum"));
  check_spectrum(base, "base_spectrum");
  require(base.set == guarded([&] { return PointSet::from_columns(given.right); }) &&
              base.spectrum == PhaseMatrix(given.left, 3),
          "base_spectrum is not the given factorization");

  const SpectrumCertificate fresh_spec = spectrum_from_json(field(p, "fresh_spectrum"));
  check_spectrum(fresh_spec, "fresh_spectrum");
  require(fresh_spec.set == guarded([&] { return PointSet::from_columns(fresh.right); }) &&
              fresh_spec.spectrum == PhaseMatrix(fresh.left, 3),
          "fresh_spectrum is not the fresh factorization");

  const NonTilingCertificate div = non_tiling_from_json(field(p, "non_tiling_divisibility"));
  check_non_tiling(div, "non_tiling_divisibility");
  require(div.reason == NonTilingReason::divisibility && div.set == base.set,
          "non_tiling_divisibility must be a divisibility claim about the base set");
  const NonTilingCertificate ex = non_tiling_from_json(field(p, "non_tiling_exhaustive"));
  check_non_tiling(ex, "non_tiling_exhaustive");
  require(ex.reason == NonTilingReason::exhausted_search && ex.set == base.set,
          "non_tiling_exhaustive must be an exhausted search on the base set");

  const SpectrumCertificate composed = spectrum_from_json(field(p, "composed_spectrum"));
  const SpectrumCertificate expected =
      guarded([&] { return compose_spectral(base, cube_spectrum(side, base.set.dimension())); });
  require(composed == expected, "composed_spectrum is not T + 3[0,n)^d with the composed spectrum");

  const Json& ext = field(p, "extension");
  const ExtensionReport fresh_report =
      guarded([&] { return extension_obstructions(base.set, 3, side); });
  require(to_json(fresh_report) == ext, "extension report does not match its recomputation");
}

void verify_payload(Kind kind, const Json& p) {
  switch (kind) {
  case Kind::spectrum: check_spectrum(spectrum_from_json(p), "spectrum"); return;
  case Kind::tiling: check_tiling(tiling_from_json(p), "tiling"); return;
  case Kind::non_tiling: check_non_tiling(non_tiling_from_json(p), "non-tiling"); return;
  case Kind::composition: {
    const std::string flavor = string_field(p, "flavor");
    if (flavor == "spectral") {
      auto first = spectrum_from_json(field(p, "first"));
      auto second = spectrum_from_json(field(p, "second"));
      auto result = spectrum_from_json(field(p, "result"));
      check_spectrum(result, "composition result");
      require(guarded([&] { return compose_spectral(first, second); }) == result,
              "composition result does not match its inputs");
    } else if (flavor == "tiling") {
      auto first = tiling_from_json(field(p, "first"));
      auto second = tiling_from_json(field(p, "second"));
      auto result = tiling_from_json(field(p, "result"));
      check_tiling(result, "composition result");
      require(guarded([&] { return compose_tile(first, second); }) == result,
              "composition result does not match its inputs");
    } else {
      malformed("unknown composition flavor '" + flavor + "'");
    }
    return;
  }
  case Kind::lift: {
    const std::string flavor = string_field(p, "flavor");
    const PointSet set = point_set_from_json(field(p, "set"));
    const IntMatrix l1 = matrix_from_json(field(p, "matrix"));
    if (flavor == "spectral") {
      auto image = spectrum_from_json(field(p, "image"));
      auto result = spectrum_from_json(field(p, "result"));
      check_spectrum(result, "lift result");
      require(guarded([&] { return lift_spectrum(set, l1, image); }) == result,
              "lift result does not match its inputs");
    } else if (flavor == "tiling") {
      auto image = tiling_from_json(field(p, "image"));
      auto result = tiling_from_json(field(p, "result"));
      check_tiling(result, "lift result");
      require(guarded([&] { return lift_tile(set, l1, image); }) == result,
              "lift result does not match its inputs");
    } else {
      malformed("unknown lift flavor '" + flavor + "'");
    }
    return;
  }
  case Kind::independence_chain: {
    const TilingCertificate result = tiling_from_json(field(p, "result"));
    check_tiling(result, "independence chain result");
    require(to_json(guarded([&] { return independent_tile(result.set); })) == p,
            "independence chain does not match its reconstruction");
    return;
  }
  case Kind::counterexample: verify_counterexample(p); return;
  }
}

bool mentions_exhausted_search(const Json& j) {
  if (j.is_object()) {
    if (auto it = j.find("reason"); it != j.end() && *it == "exhausted-search") return true;
    for (const auto& [key, value] : j.items())
      if (mentions_exhausted_search(value)) return true;
  } else if (j.is_array()) {
    for (const auto& v : j)
      if (mentions_exhausted_search(v)) return true;
  }
  return false;
}

} // namespace

Trust trust_of(const CertificateEnvelope& env) {
  return mentions_exhausted_search(env.payload) ? Trust::replay_required : Trust::verified;
}

std::string serialize(const CertificateEnvelope& env) {
  Json prov = Json::array();
  for (const auto& step : env.provenance) {
    Json inputs = Json::object();
    for (const auto& [k, v] : step.inputs) inputs[k] = v;
    prov.push_back({{"operation", step.operation}, {"inputs", std::move(inputs)}});
  }
  const Json j = {{"schema_version", env.schema_version},
                  {"kind", to_string(env.kind)},
                  {"payload", env.payload},
                  {"provenance", std::move(prov)}};
  return j.dump() + "\n";
}

CertificateEnvelope parse(const std::string& bytes) {
  Json j;
  try {
    j = Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) malformed("certificate must be a JSON object");

  CertificateEnvelope env;
  env.schema_version = string_field(j, "schema_version");
  if (env.schema_version != kSchemaVersion)
    throw ParseError(ParseErrorKind::schema_version, "unsupported schema version '" +
                                                         env.schema_version + "', expected '" +
                                                         kSchemaVersion + "'");
  const std::string kind = string_field(j, "kind");
  auto k = kind_from_string(kind);
  if (!k) throw ParseError(ParseErrorKind::unknown_kind, "unknown certificate kind '" + kind + "'");
  env.kind = *k;
  env.payload = field(j, "payload");
  if (!env.payload.is_object()) malformed("payload must be an object");

  for (const auto& step : array_field(j, "provenance")) {
    ProvenanceStep ps{string_field(step, "operation"), {}};
    const Json& inputs = field(step, "inputs");
    if (!inputs.is_object()) malformed("provenance inputs must be an object");
    for (const auto& [key, value] : inputs.items()) {
      if (!value.is_string()) malformed("provenance input values must be strings");
      ps.inputs.emplace(key, value.get<std::string>());
    }
    env.provenance.push_back(std::move(ps));
  }
  if (env.provenance.empty()) violation("provenance must not be empty");

  verify_payload(env.kind, env.payload);
  return env;
}

namespace {

CertificateEnvelope make(Kind kind, Json payload, std::vector<ProvenanceStep> provenance) {
  if (provenance.empty()) throw InputError("certificate provenance must not be empty");
  CertificateEnvelope env;
  env.kind = kind;
  env.payload = std::move(payload);
  env.provenance = std::move(provenance);
  return env;
}

} // namespace

CertificateEnvelope envelope(const SpectrumCertificate& c, std::vector<ProvenanceStep> provenance) {
  return make(Kind::spectrum, to_json(c), std::move(provenance));
}

CertificateEnvelope envelope(const TilingCertificate& c, std::vector<ProvenanceStep> provenance) {
  return make(Kind::tiling, to_json(c), std::move(provenance));
}

CertificateEnvelope envelope(const NonTilingCertificate& c, std::vector<ProvenanceStep> provenance) {
  return make(Kind::non_tiling, to_json(c), std::move(provenance));
}

CertificateEnvelope envelope(const TilingVerdict& v, std::vector<ProvenanceStep> provenance) {
  if (const auto* t = std::get_if<TilingCertificate>(&v)) return envelope(*t, std::move(provenance));
  return envelope(std::get<NonTilingCertificate>(v), std::move(provenance));
}

CertificateEnvelope envelope(const IndependenceChain& c, std::vector<ProvenanceStep> provenance) {
  return make(Kind::independence_chain, to_json(c), std::move(provenance));
}

CertificateEnvelope spectral_composition_envelope(const SpectrumCertificate& first,
                                                  const SpectrumCertificate& second,
                                                  const SpectrumCertificate& result,
                                                  std::vector<ProvenanceStep> provenance) {
  return make(Kind::composition,
              {{"flavor", "spectral"},
               {"first", to_json(first)},
               {"second", to_json(second)},
               {"result", to_json(result)}},
              std::move(provenance));
}

CertificateEnvelope tiling_composition_envelope(const TilingCertificate& first,
                                                const TilingCertificate& second,
                                                const TilingCertificate& result,
                                                std::vector<ProvenanceStep> provenance) {
  return make(Kind::composition,
              {{"flavor", "tiling"},
               {"first", to_json(first)},
               {"second", to_json(second)},
               {"result", to_json(result)}},
              std::move(provenance));
}

CertificateEnvelope spectral_lift_envelope(const PointSet& set, const IntMatrix& l1,
                                           const SpectrumCertificate& image,
                                           const SpectrumCertificate& result,
                                           std::vector<ProvenanceStep> provenance) {
  return make(Kind::lift,
              {{"flavor", "spectral"},
               {"set", to_json(set)},
               {"matrix", to_json(l1)},
               {"image", to_json(image)},
               {"result", to_json(result)}},
              std::move(provenance));
}

CertificateEnvelope tiling_lift_envelope(const PointSet& set, const IntMatrix& l1,
                                         const TilingCertificate& image,
                                         const TilingCertificate& result,
                                         std::vector<ProvenanceStep> provenance) {
  return make(Kind::lift,
              {{"flavor", "tiling"},
               {"set", to_json(set)},
               {"matrix", to_json(l1)},
               {"image", to_json(image)},
               {"result", to_json(result)}},
              std::move(provenance));
}

CertificateEnvelope counterexample_envelope(const CounterexampleRecord& r,
                                            std::vector<ProvenanceStep> provenance) {
  return make(Kind::counterexample, to_json(r), std::move(provenance));
}

} // namespace spectratile::certio
