#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "spectratile/certio.hpp"
#include "spectratile/errors.hpp"
#include "spectratile/pipeline.hpp"

namespace spectratile::cli {

namespace {

struct Options {
  std::string set_file;
  std::string spectrum_file;
  std::string matrix_file;
  std::vector<std::string> cert_files;
  std::string json_file;
  std::optional<long long> modulus;
  long long side = 2;
  std::optional<std::uint64_t> guard;
  bool quiet = false;
  bool no_shortcut = false;
  bool replay = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Session {
public:
  Session(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  std::uint64_t guard() const { return o_.guard ? *o_.guard : guard_from_environment(); }

  std::int64_t modulus(const char* what) const {
    if (!o_.modulus) throw InputError(std::string(what) + " needs -m/-p");
    if (*o_.modulus < 1) throw InputError("modulus must be positive");
    return *o_.modulus;
  }

  PointSet set() const { return parse_point_set(read_file(require(o_.set_file, "--set"))); }
  IntMatrix matrix() const { return parse_matrix(read_file(require(o_.matrix_file, "--matrix"))); }

  certio::CertificateEnvelope cert(std::size_t i) const {
    if (o_.cert_files.size() <= i) throw InputError("missing --cert argument");
    return certio::parse(read_file(o_.cert_files[i]));
  }

  void say(const std::string& line) const {
    if (!o_.quiet) out_ << line << '\n';
  }

  // Everything emitted must load back through the verifying parser.
  void emit(const certio::CertificateEnvelope& env) const {
    const std::string bytes = certio::serialize(env);
    if (!(certio::parse(bytes) == env))
      throw VerificationError("emitted certificate does not round-trip");
    if (!o_.json_file.empty()) {
      std::ofstream f(o_.json_file, std::ios::binary);
      if (!f) throw InputError("cannot write '" + o_.json_file + "'");
      f << bytes;
    }
  }

private:
  static const std::string& require(const std::string& path, const char* flag) {
    if (path.empty()) throw InputError(std::string("missing ") + flag + " FILE");
    return path;
  }

  const Options& o_;
  std::ostream& out_;
};

certio::ProvenanceStep step(std::string op, std::map<std::string, std::string> inputs) {
  return {std::move(op), std::move(inputs)};
}

int cmd_counterexample(const Session& s, const Options& o, std::ostream& out) {
  auto run = verify_counterexample(o.side, s.guard());
  if (!o.quiet) out << format_report(run.report);
  if (run.envelope) s.emit(*run.envelope);
  return run.report.overall() ? kAffirmative : kNegative;
}

int cmd_spectrum_find(const Session& s, const Options& o) {
  const PointSet set = s.set();
  const std::int64_t m = s.modulus("spectrum find");
  SpectrumSearchStats stats;
  auto cert = find_spectrum(set, m, s.guard(), &stats);
  if (!cert) {
    s.say("no spectrum with denominator " + std::to_string(m) + " (" + std::to_string(stats.nodes) +
          " search nodes)");
    return kNegative;
  }
  s.say("spectral over " + std::to_string(m) + "; spectrum:");
  s.say(format_phase_matrix(cert->spectrum));
  s.emit(certio::envelope(*cert, {step("find_spectrum", {{"set", o.set_file}, {"m", std::to_string(m)}})}));
  return kAffirmative;
}

int cmd_spectrum_check(const Session& s, const Options& o) {
  const PointSet set = s.set();
  if (o.spectrum_file.empty()) throw InputError("spectrum check needs --spectrum FILE");
  const PhaseMatrix spectrum = parse_phase_matrix(read_file(o.spectrum_file));
  if (o.modulus && *o.modulus != spectrum.denominator())
    throw InputError("-m does not match the spectrum's denominator");
  if (!is_m_spectral(set, spectrum)) {
    s.say("not a spectrum: some pair of rows is not orthogonal");
    return kNegative;
  }
  s.say("spectral over " + std::to_string(spectrum.denominator()));
  SpectrumCertificate cert{GroupSpec(spectrum.denominator(), set.dimension()), set, spectrum};
  s.emit(certio::envelope(cert, {step("is_m_spectral", {{"set", o.set_file}, {"spectrum", o.spectrum_file}})}));
  return kAffirmative;
}

int cmd_tile_decide(const Session& s, const Options& o) {
  const PointSet set = s.set();
  const std::int64_t m = s.modulus("tile decide");
  const GroupSpec group(m, set.dimension());
  auto verdict = decide_m_tile(set, group, {.guard = s.guard(), .divisibility_shortcut = !o.no_shortcut});
  s.emit(certio::envelope(verdict, {step("decide_m_tile", {{"set", o.set_file},
                                                           {"m", std::to_string(m)},
                                                           {"divisibility_shortcut", o.no_shortcut ? "false" : "true"}})}));
  if (const auto* t = std::get_if<TilingCertificate>(&verdict)) {
    s.say("tiles Z_" + std::to_string(m) + "^" + std::to_string(set.dimension()) + "; complement:");
    s.say(format_point_set(t->complement));
    return kAffirmative;
  }
  const auto& nt = std::get<NonTilingCertificate>(verdict);
  std::string why = to_string(nt.reason);
  if (nt.reason == NonTilingReason::divisibility)
    why += " (" + std::to_string(set.size()) + " does not divide " + group.exact_order().get_str() + ")";
  if (nt.reason == NonTilingReason::exhausted_search) why += " (" + std::to_string(nt.nodes) + " nodes)";
  if (nt.colliding_pair)
    why += " (points " + std::to_string(nt.colliding_pair->first) + " and " +
           std::to_string(nt.colliding_pair->second) + ")";
  s.say("does not tile: " + why);
  return kNegative;
}

int cmd_tile_verify(const Session& s, const Options& o) {
  // parse() already ran the verifier; a failure throws ParseError.
  const auto env = s.cert(0);
  if (o.replay && env.kind == certio::Kind::non_tiling) {
    const auto nt = certio::non_tiling_from_json(env.payload);
    if (!replay_non_tiling(nt, s.guard())) {
      s.say("replay failed: the search did not reproduce the recorded exhaustion");
      return kNegative;
    }
  }
  const bool replay_needed = certio::trust_of(env) == certio::Trust::replay_required && !o.replay;
  s.say(certio::to_string(env.kind) + " certificate verifies" +
        (replay_needed ? " (exhausted search: replay required for full trust)" : ""));
  if (env.kind == certio::Kind::non_tiling) return kNegative;
  return kAffirmative;
}

int cmd_tile_compose(const Session& s, const Options& o) {
  const auto a = s.cert(0), b = s.cert(1);
  if (a.kind != certio::Kind::tiling || b.kind != certio::Kind::tiling)
    throw InputError("tile compose needs two tiling certificates");
  const auto ta = certio::tiling_from_json(a.payload), tb = certio::tiling_from_json(b.payload);
  const auto out = compose_tile(ta, tb, s.guard());
  s.say("composed set of " + std::to_string(out.set.size()) + " points tiles Z_" +
        std::to_string(out.group.modulus) + "^" + std::to_string(out.group.dimension));
  s.emit(certio::tiling_composition_envelope(
      ta, tb, out, {step("compose_tile", {{"first", o.cert_files[0]}, {"second", o.cert_files[1]}})}));
  return kAffirmative;
}

int cmd_tile_lift(const Session& s, const Options& o) {
  const PointSet set = s.set();
  const IntMatrix l1 = s.matrix();
  const auto env = s.cert(0);
  if (env.kind != certio::Kind::tiling) throw InputError("tile lift needs a tiling certificate");
  const auto image = certio::tiling_from_json(env.payload);
  const auto out = lift_tile(set, l1, image, s.guard());
  s.say("lifted tiling of Z_" + std::to_string(out.group.modulus) + "^" +
        std::to_string(out.group.dimension) + " with " + std::to_string(out.complement.size()) +
        " translates");
  s.emit(certio::tiling_lift_envelope(
      set, l1, image, out,
      {step("lift_tile", {{"set", o.set_file}, {"matrix", o.matrix_file}, {"image", o.cert_files[0]}})}));
  return kAffirmative;
}

int cmd_tile_independent(const Session& s, const Options& o) {
  const PointSet set = s.set();
  const auto chain = independent_tile(set, s.guard());
  s.say("independent set tiles Z_" + std::to_string(chain.modulus) + "^" +
        std::to_string(set.dimension()) + " (|det| = " + std::to_string(chain.scale) + ")");
  s.emit(certio::envelope(chain, {step("independent_tile", {{"set", o.set_file}})}));
  return kAffirmative;
}

int cmd_matrix_rank(const Session& s, std::ostream& out) {
  const IntMatrix m = s.matrix();
  out << rank_mod_p(m, Integer(static_cast<long>(s.modulus("matrix rank")))) << '\n';
  return kAffirmative;
}

int cmd_matrix_factorize(const Session& s, std::ostream& out) {
  const IntMatrix m = s.matrix();
  const auto f = rank_factorize_mod_p(m, Integer(static_cast<long>(s.modulus("matrix factorize"))));
  if (!check_factorization(f, m)) throw VerificationError("factorization does not re-multiply");
  out << "rank " << f.rank << '\n' << "left\n" << f.left << "right\n" << f.right;
  return kAffirmative;
}

int cmd_matrix_hadamard(const Session& s) {
  const IntMatrix m = s.matrix();
  const bool ok = is_log_hadamard(PhaseMatrix(m, s.modulus("matrix hadamard")));
  s.say(ok ? "log-Hadamard" : "not log-Hadamard");
  return ok ? kAffirmative : kNegative;
}

int cmd_certificate_check(const Session& s, const Options& o) {
  const auto env = s.cert(0);
  if (o.replay && env.kind == certio::Kind::non_tiling) {
    if (!replay_non_tiling(certio::non_tiling_from_json(env.payload), s.guard())) {
      s.say("replay failed");
      return kNegative;
    }
  }
  s.say(certio::to_string(env.kind) + " certificate verifies; trust: " +
        (certio::trust_of(env) == certio::Trust::verified ? "verified" : "replay-required"));
  return kAffirmative;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Certificates for spectral sets and tiles in Z_m^d", "spectratile"};
  app.require_subcommand(1);

  auto guard_opt = [&](CLI::App* a) { a->add_option("--guard", o.guard, "Maximum cells enumerated (default $SPECTRATILE_GUARD or 1e7)"); };
  auto common = [&](CLI::App* a) {
    guard_opt(a);
    a->add_flag("--quiet", o.quiet, "Suppress human-readable output");
    a->add_option("--json", o.json_file, "Write the certificate to FILE");
  };

  auto* cx = app.add_subcommand("verify-counterexample", "Reproduce the spectral non-tile in Z^4");
  cx->add_option("-n", o.side, "Cube side n for T + 3[0,n)^4")->capture_default_str();
  common(cx);

  auto* spec = app.add_subcommand("spectrum", "Spectra with entries in (1/m)Z");
  spec->require_subcommand(1);
  auto* find = spec->add_subcommand("find", "Search for a spectrum");
  find->add_option("--set", o.set_file)->required();
  find->add_option("-m,-p", o.modulus)->required();
  common(find);
  auto* check = spec->add_subcommand("check", "Check a given spectrum");
  check->add_option("--set", o.set_file)->required();
  check->add_option("--spectrum", o.spectrum_file)->required();
  check->add_option("-m,-p", o.modulus);
  common(check);

  auto* tile = app.add_subcommand("tile", "Tilings of Z_m^d");
  tile->require_subcommand(1);
  auto* decide = tile->add_subcommand("decide", "Decide whether a set tiles Z_m^d");
  decide->add_option("--set", o.set_file)->required();
  decide->add_option("-m,-p", o.modulus)->required();
  decide->add_flag("--no-shortcut", o.no_shortcut, "Search even when |T| does not divide m^d");
  common(decide);
  auto* verify = tile->add_subcommand("verify", "Verify a tiling or non-tiling certificate");
  verify->add_option("--cert", o.cert_files)->required();
  verify->add_flag("--replay", o.replay, "Re-run exhausted searches");
  common(verify);
  auto* compose = tile->add_subcommand("compose", "Compose T (mod m) with S (mod n)");
  compose->add_option("--cert", o.cert_files)->required()->expected(2);
  common(compose);
  auto* lift = tile->add_subcommand("lift", "Pull a tiling of l1*T back to T");
  lift->add_option("--set", o.set_file)->required();
  lift->add_option("--matrix", o.matrix_file)->required();
  lift->add_option("--cert", o.cert_files)->required();
  common(lift);
  auto* indep = tile->add_subcommand("independent", "Tiling by linearly independent vectors");
  indep->add_option("--set", o.set_file)->required();
  common(indep);

  auto* mat = app.add_subcommand("matrix", "Matrix steps");
  mat->require_subcommand(1);
  auto* rank = mat->add_subcommand("rank", "Rank over F_p");
  auto* fact = mat->add_subcommand("factorize", "Rank factorization over F_p");
  auto* had = mat->add_subcommand("hadamard", "Is matrix/m log-Hadamard");
  for (auto* a : {rank, fact, had}) {
    a->add_option("--matrix", o.matrix_file)->required();
    a->add_option("-p,-m", o.modulus)->required();
    guard_opt(a);
    a->add_flag("--quiet", o.quiet);
  }

  auto* cert = app.add_subcommand("certificate", "Certificate files");
  cert->require_subcommand(1);
  auto* ccheck = cert->add_subcommand("check", "Parse and verify any certificate");
  ccheck->add_option("--cert", o.cert_files)->required();
  ccheck->add_flag("--replay", o.replay, "Re-run exhausted searches");
  guard_opt(ccheck);
  ccheck->add_flag("--quiet", o.quiet);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kAffirmative;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kAffirmative;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  const Session s(o, out);
  try {
    if (*cx) {
      if (o.side < 1) throw InputError("-n must be at least 1");
      return cmd_counterexample(s, o, out);
    }
    if (*find) return cmd_spectrum_find(s, o);
    if (*check) return cmd_spectrum_check(s, o);
    if (*decide) return cmd_tile_decide(s, o);
    if (*verify) return cmd_tile_verify(s, o);
    if (*compose) return cmd_tile_compose(s, o);
    if (*lift) return cmd_tile_lift(s, o);
    if (*indep) return cmd_tile_independent(s, o);
    if (*rank) return cmd_matrix_rank(s, out);
    if (*fact) return cmd_matrix_factorize(s, out);
    if (*had) return cmd_matrix_hadamard(s);
    if (*ccheck) return cmd_certificate_check(s, o);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const GuardError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const certio::ParseError& e) {
    err << "error: invalid certificate: " << e.what() << '\n';
    // A well-formed certificate whose claim fails is a negative verdict;
    // anything unreadable is a usage error.
    return e.kind() == certio::ParseErrorKind::invariant_violation ? kNegative : kUsageError;
  }
  err << "error: no command\n";
  return kUsageError;
}

} // namespace spectratile::cli
