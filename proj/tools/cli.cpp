#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "document.hpp"
#include "problem_file.hpp"
#include "superlat/parallel.hpp"
#include "superlat/supergrade.hpp"

namespace superlat::cli {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct Output {
  std::ostream& out;
  std::ostream& err;
  std::string json_path;

  void emit(Json doc, const Stopwatch& clock) {
    doc["timing"] = Json{{"seconds", clock.seconds()}};
    const std::string text = dump(doc);
    out << text;
    if (!json_path.empty()) {
      std::ofstream f(json_path);
      if (!f) throw Error(ErrorCode::ParseError, "cannot write '" + json_path + "'");
      f << text;
    }
  }
};

QVector anchor_of(const ProblemFile& pf, const std::string& w_flag) {
  if (!w_flag.empty()) {
    QVector w = parse_vector(w_flag);
    if (w.size() != pf.n) parse_fail("--w has the wrong length");
    if (!is_integral(w) || w.is_zero()) parse_fail("--w must be a nonzero integer vector");
    return w;
  }
  if (!pf.w) parse_fail("no anchor: give a w block or --w");
  return *pf.w;
}

Json input_echo(const IsometryProblem& p) {
  Json in;
  in["B"] = to_json(p.b.gram());
  in["Bprime"] = to_json(p.bp.gram());
  in["w"] = to_json(p.w);
  in["z0"] = Json::array();
  for (const auto& z : p.z0_basis) in["z0"].push_back(to_json(z));
  return in;
}

// ---------------------------------------------------------------- decompose

Json decomposition_json(const GradedContext& ctx, const Endo& phi) {
  GradedDecomposition d = full_decomposition(ctx, phi);
  auto [even, odd] = split(ctx, phi);
  Endo back = reassemble(ctx, d);
  QMatrix residual = phi.mat - back.mat;
  Json out;
  out["phi0"] = to_json(d.phi0.mat);
  out["weight"] = to_string(d.wt);
  out["a"] = to_json(d.a);
  out["b"] = to_json(d.b);
  out["even"] = to_json(even.mat);
  out["odd"] = to_json(odd.mat);
  out["residual"] = to_json(residual);
  out["residual_zero"] = residual.is_zero();
  return out;
}

int cmd_decompose(const std::string& file, const std::string& w_flag, const std::string& phi_file, Output& io) {
  Stopwatch clock;
  ProblemFile pf = load_problem(file);
  QVector w = anchor_of(pf, w_flag);
  QMatrix phi_m = !phi_file.empty() ? load_matrix(phi_file, pf.n) : pf.phi ? *pf.phi : QMatrix();
  if (phi_m.rows() == 0) parse_fail("no endomorphism: give a phi block or --phi");
  GradedContext ctx(GramForm(pf.b), w);
  Endo phi(phi_m);

  Json doc;
  doc["command"] = "decompose";
  doc["input"] = Json{{"B", to_json(pf.b)}, {"w", to_json(w)}, {"phi", to_json(phi_m)}};
  doc["decomposition"] = decomposition_json(ctx, phi);
  const bool ok = doc["decomposition"]["residual_zero"].get<bool>();
  io.err << "decompose: weight " << doc["decomposition"]["weight"].get<std::string>() << ", residual "
         << (ok ? "zero" : "NONZERO") << "\n";
  io.emit(std::move(doc), clock);
  return ok ? kSuccess : kInvariant;
}

// -------------------------------------------------------------- grade-basis

Json basis_json(const GradedContext& ctx) {
  auto even = even_basis(ctx);
  auto odd = odd_basis(ctx);
  std::vector<QVector> flat;
  Json out;
  out["even"] = Json::array();
  out["odd"] = Json::array();
  auto flatten = [](const QMatrix& m) {
    std::vector<Rational> xs;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) xs.push_back(m(i, j));
    return QVector(std::move(xs));
  };
  for (const auto& e : even) {
    out["even"].push_back(to_json(e.mat));
    flat.push_back(flatten(e.mat));
  }
  for (const auto& e : odd) {
    out["odd"].push_back(to_json(e.mat));
    flat.push_back(flatten(e.mat));
  }
  out["even_dim"] = even.size();
  out["odd_dim"] = odd.size();
  out["independent"] = rank_of(flat) == flat.size();
  return out;
}

int cmd_grade_basis(const std::string& file, const std::string& w_flag, Output& io) {
  Stopwatch clock;
  ProblemFile pf = load_problem(file);
  QVector w = anchor_of(pf, w_flag);
  GradedContext ctx(GramForm(pf.b), w);
  Json doc;
  doc["command"] = "grade-basis";
  doc["input"] = Json{{"B", to_json(pf.b)}, {"w", to_json(w)}};
  doc["basis"] = basis_json(ctx);
  const bool ok = doc["basis"]["independent"].get<bool>();
  io.err << "grade-basis: " << doc["basis"]["even_dim"] << " even, " << doc["basis"]["odd_dim"] << " odd\n";
  io.emit(std::move(doc), clock);
  return ok ? kSuccess : kInvariant;
}

// ---------------------------------------------------------------- factorize

struct FactorizeFlags {
  std::string w;
  bool first = false;
  bool integral_only = false;
  bool cs_prune = false;
  bool canonical = false;
};

int cmd_factorize(const std::string& file, const FactorizeFlags& f, int threads, Output& io) {
  Stopwatch clock;
  ProblemFile pf = load_problem(file);
  if (!pf.bprime) parse_fail("factorize needs a Bprime block");
  QVector w = anchor_of(pf, f.w);
  IsometryProblem p = make_problem(pf.b, *pf.bprime, w, pf.z0);

  SearchOptions opts;
  opts.first_witness = f.first;
  opts.integral_only = f.integral_only;
  opts.cs_prune = f.cs_prune;
  opts.canonical_only = f.canonical;
  opts.threads = threads;
  SearchResult res = find_isometries(p, opts);

  Json doc;
  doc["command"] = "factorize";
  doc["input"] = input_echo(p);
  doc["options"] = Json{{"mode", f.first ? "first" : "all"}, {"integral_only", f.integral_only}, {"cs_prune", f.cs_prune}, {"canonical", f.canonical}};
  doc["determinant_mismatch"] = p.determinant_mismatch;
  doc["counts"] = to_json(res.stats);
  doc["candidates"] = Json::array();
  for (const auto& c : res.candidates) doc["candidates"].push_back(to_json(c, is_canonical_isometry(c.m)));
  doc["certificate"] = to_json(res.certificate);

  const bool witness = res.certificate.verdict == Verdict::IsometricWitness;
  io.err << "factorize: " << to_string(res.certificate.verdict) << ", " << res.stats.integral_candidates
         << " integral (" << res.stats.integral_canonical << " canonical) of " << res.stats.rational_candidates
         << " candidates\n";
  io.emit(std::move(doc), clock);
  return witness ? kSuccess : kNegative;
}

// ----------------------------------------------------------------- obstruct

struct ObstructFlags {
  std::string family;
  std::string m, n, alpha, beta, gamma;
  std::string big_n;
  int squares = 0;
};

Integer integer_flag(const std::string& text, const char* name) {
  Rational q = parse_rational(text);
  if (!is_integer(q)) parse_fail(std::string("--") + name + " must be an integer");
  return q.get_num();
}

Certificate squares_certificate(const Integer& n, int squares) {
  Certificate cert;
  cert.constants["N"] = n.get_str();
  cert.constants["squares"] = std::to_string(squares);
  if (squares == 2) {
    cert.equation = "N = x^2 + y^2";
    cert.verdict = two_squares_representable(n) ? Verdict::Inconclusive : Verdict::ObstructionTwoSquares;
  } else {
    cert.equation = "N = x^2 + y^2 + z^2";
    cert.verdict = three_squares_representable(n) ? Verdict::Inconclusive : Verdict::ObstructionThreeSquares;
  }
  return cert;
}

std::optional<Integer> optional_flag(const std::string& text, const char* name) {
  if (text.empty()) return std::nullopt;
  return integer_flag(text, name);
}

int cmd_obstruct(const ObstructFlags& f, Output& io) {
  Stopwatch clock;
  Json doc;
  doc["command"] = "obstruct";
  Certificate cert;
  if (!f.family.empty()) {
    if (f.m.empty()) parse_fail("--family needs --m");
    FamilyParams params;
    params.m = integer_flag(f.m, "m");
    params.n = f.n.empty() ? Integer(1) : integer_flag(f.n, "n");
    params.alpha = optional_flag(f.alpha, "alpha");
    params.beta = optional_flag(f.beta, "beta");
    params.gamma = optional_flag(f.gamma, "gamma");
    const Family kind = f.family == "rank2" ? Family::TwoSquaresRank2 : Family::ThreeSquaresRank3;
    Json in{{"family", f.family}, {"m", params.m.get_str()}};
    if (kind == Family::TwoSquaresRank2) in["n"] = params.n.get_str();
    if (params.alpha) in["alpha"] = params.alpha->get_str();
    if (params.beta) in["beta"] = params.beta->get_str();
    if (params.gamma) in["gamma"] = params.gamma->get_str();
    doc["input"] = std::move(in);
    cert = family_obstruction(kind, params);
  } else {
    if (f.big_n.empty() || f.squares == 0) parse_fail("give --family or both --N and --squares");
    Integer n = integer_flag(f.big_n, "N");
    doc["input"] = Json{{"N", n.get_str()}, {"squares", f.squares}};
    cert = squares_certificate(n, f.squares);
  }
  doc["certificate"] = to_json(cert);
  const bool obstructed = cert.verdict != Verdict::Inconclusive;
  io.err << "obstruct: " << to_string(cert.verdict) << " (N = " << cert.constants["N"] << ")\n";
  io.emit(std::move(doc), clock);
  return obstructed ? kSuccess : kNegative;
}

// ------------------------------------------------------------------- oracle

int cmd_oracle(const std::string& file, long bound, bool canonical, int threads, Output& io) {
  Stopwatch clock;
  ProblemFile pf = load_problem(file);
  if (!pf.bprime) parse_fail("oracle needs a Bprime block");
  GramForm b(pf.b), bp(*pf.bprime);
  auto all = brute_force_isometries(b, bp, bound < 0, bound, threads);
  auto ms = canonical ? canonical_isometries(all) : all;
  Json doc;
  doc["command"] = "oracle";
  doc["input"] = Json{{"B", to_json(pf.b)}, {"Bprime", to_json(*pf.bprime)}, {"bound", bound}};
  doc["options"] = Json{{"canonical", canonical}};
  doc["total"] = all.size();
  doc["canonical_total"] = canonical_isometries(all).size();
  doc["count"] = ms.size();
  doc["matrices"] = Json::array();
  for (const auto& m : ms) doc["matrices"].push_back(to_json(m));
  io.err << "oracle: " << all.size() << " integral isometries, " << doc["canonical_total"] << " canonical\n";
  io.emit(std::move(doc), clock);
  return ms.empty() ? kNegative : kSuccess;
}

// ------------------------------------------------------------------- verify

bool verify_factorize(const Json& doc) {
  const Json& in = doc.at("input");
  std::vector<QVector> z0;
  for (const auto& z : in.at("z0")) z0.push_back(vector_from_json(z));
  IsometryProblem p =
      make_problem(matrix_from_json(in.at("B")), matrix_from_json(in.at("Bprime")), vector_from_json(in.at("w")), z0);
  Certificate cert = certificate_from_json(doc.at("certificate"));
  if (!verify_certificate(cert, p)) return false;
  std::size_t integral = 0;
  for (const auto& c : doc.at("candidates")) {
    QMatrix m = matrix_from_json(c.at("M"));
    if (!m.is_square() || m.rows() != p.b.dim()) return false;
    if (transpose(m) * p.b.gram() * m != p.bp.gram()) return false;
    const bool flagged = c.at("integral").get<bool>();
    if (flagged != is_unimodular(m)) return false;
    if (c.at("canonical").get<bool>() != is_canonical_isometry(m)) return false;
    integral += flagged ? 1 : 0;
  }
  if (cert.verdict == Verdict::NoIntegralIsometry && integral != 0) return false;
  return true;
}

bool verify_obstruct(const Json& doc) {
  const Json& in = doc.at("input");
  Certificate cert = certificate_from_json(doc.at("certificate"));
  if (in.contains("family")) {
    FamilyParams params;
    params.m = integer_flag(in.at("m").get<std::string>(), "m");
    params.n = in.contains("n") ? integer_flag(in.at("n").get<std::string>(), "n") : Integer(1);
    if (in.contains("alpha")) params.alpha = integer_flag(in.at("alpha").get<std::string>(), "alpha");
    if (in.contains("beta")) params.beta = integer_flag(in.at("beta").get<std::string>(), "beta");
    if (in.contains("gamma")) params.gamma = integer_flag(in.at("gamma").get<std::string>(), "gamma");
    const std::string fam = in.at("family").get<std::string>();
    const Family kind = fam == "rank2" ? Family::TwoSquaresRank2 : Family::ThreeSquaresRank3;
    if (cert.verdict != family_obstruction(kind, params).verdict) return false;
    return verify_certificate(cert, family_problem(kind, params));
  }
  Integer n = integer_flag(in.at("N").get<std::string>(), "N");
  Certificate again = squares_certificate(n, in.at("squares").get<int>());
  return again.verdict == cert.verdict && again.constants == cert.constants;
}

bool verify_oracle(const Json& doc) {
  const Json& in = doc.at("input");
  GramForm b(matrix_from_json(in.at("B"))), bp(matrix_from_json(in.at("Bprime")));
  std::vector<QMatrix> ms;
  for (const auto& m : doc.at("matrices")) ms.push_back(matrix_from_json(m));
  if (ms.size() != doc.at("count").get<std::size_t>()) return false;
  const bool canonical = doc.at("options").at("canonical").get<bool>();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (canonical && !is_canonical_isometry(ms[i])) return false;
    if (i > 0 && !(ms[i - 1] < ms[i])) return false;
    if (!is_unimodular(ms[i]) || transpose(ms[i]) * b.gram() * ms[i] != bp.gram()) return false;
  }
  return true;
}

bool verify_decompose(const Json& doc) {
  const Json& in = doc.at("input");
  GradedContext ctx(GramForm(matrix_from_json(in.at("B"))), vector_from_json(in.at("w")));
  Json again = decomposition_json(ctx, Endo(matrix_from_json(in.at("phi"))));
  return again == doc.at("decomposition") && again["residual_zero"].get<bool>();
}

bool verify_grade_basis(const Json& doc) {
  const Json& in = doc.at("input");
  GradedContext ctx(GramForm(matrix_from_json(in.at("B"))), vector_from_json(in.at("w")));
  Json again = basis_json(ctx);
  return again == doc.at("basis") && again["independent"].get<bool>();
}

int cmd_verify(const std::string& file, Output& io) {
  Json doc;
  try {
    doc = Json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("command")) parse_fail("not a result document");
  const std::string cmd = doc.at("command").get<std::string>();
  bool ok = false;
  try {
    if (cmd == "factorize") ok = verify_factorize(doc);
    else if (cmd == "obstruct") ok = verify_obstruct(doc);
    else if (cmd == "oracle") ok = verify_oracle(doc);
    else if (cmd == "decompose") ok = verify_decompose(doc);
    else if (cmd == "grade-basis") ok = verify_grade_basis(doc);
    else throw Error(ErrorCode::Unsupported, "cannot verify '" + cmd + "' documents");
  } catch (const nlohmann::json::exception& e) {
    io.err << "verify: malformed document: " << e.what() << "\n";
    ok = false;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Unsupported) throw;
    io.err << "verify: " << e.what() << "\n";
    ok = false;
  }
  io.out << (ok ? "valid" : "invalid") << "\n";
  io.err << "verify: " << cmd << " document " << (ok ? "valid" : "INVALID") << "\n";
  return ok ? kSuccess : kNegative;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::BadFamilyParams:
      return kParse;
    case ErrorCode::Unsupported:
    case ErrorCode::NotPositiveDefinite:
      return kUnsupported;
    default:
      return kInvariant;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"superlat: graded decompositions of endomorphisms and lattice isometry search"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: OpenMP default; capped by SUPERLAT_THREADS)")
      ->check(CLI::NonNegativeNumber);

  Output io{out, err, {}};
  std::function<int()> action;

  std::string file, w_flag, phi_file;

  auto* dec = app.add_subcommand("decompose", "Split an endomorphism into its graded parts");
  dec->add_option("file", file, "Problem file with B (and optionally w, phi)")->required();
  dec->add_option("--w", w_flag, "Anchor vector, e.g. 1,0,0");
  dec->add_option("--phi", phi_file, "File holding the endomorphism");
  dec->add_option("--json", io.json_path, "Also write the document here");
  dec->callback([&] { action = [&] { return cmd_decompose(file, w_flag, phi_file, io); }; });

  auto* gb = app.add_subcommand("grade-basis", "Print the even and odd bases for (B, w)");
  gb->add_option("file", file, "Problem file with B and w")->required();
  gb->add_option("--w", w_flag, "Anchor vector");
  gb->add_option("--json", io.json_path, "Also write the document here");
  gb->callback([&] { action = [&] { return cmd_grade_basis(file, w_flag, io); }; });

  FactorizeFlags ff;
  bool all = false;
  auto* fac = app.add_subcommand("factorize", "Search for integral M with M^T B M = Bprime");
  fac->add_option("file", file, "Problem file with B, Bprime and w")->required();
  fac->add_option("--w", ff.w, "Anchor vector");
  auto* all_flag = fac->add_flag("--all", all, "Enumerate every candidate (default)");
  fac->add_flag("--first", ff.first, "Stop at the first integral isometry")->excludes(all_flag);
  fac->add_flag("--integral-only", ff.integral_only, "Drop rational candidates from the output");
  fac->add_flag("--cs-prune", ff.cs_prune, "Skip eq3 solutions ruled out by Cauchy-Schwarz");
  fac->add_flag("--canonical", ff.canonical, "Keep one candidate per {M, -M} with det M = +1");
  fac->add_option("--json", io.json_path, "Also write the document here");
  fac->callback([&] { action = [&] { return cmd_factorize(file, ff, threads, io); }; });

  ObstructFlags of;
  auto* obs = app.add_subcommand("obstruct", "Two- and three-squares obstructions");
  obs->add_option("--family", of.family, "rank2 or rank3")->check(CLI::IsMember({"rank2", "rank3"}));
  obs->add_option("--m", of.m, "Family parameter m");
  obs->add_option("--n", of.n, "Family parameter n (rank2)");
  obs->add_option("--alpha", of.alpha, "Bprime entry alpha");
  obs->add_option("--beta", of.beta, "Bprime entry beta");
  obs->add_option("--gamma", of.gamma, "Bprime entry gamma");
  obs->add_option("--N", of.big_n, "Test N directly");
  obs->add_option("--squares", of.squares, "2 or 3")->check(CLI::IsMember({2, 3}));
  obs->add_option("--json", io.json_path, "Also write the document here");
  obs->callback([&] { action = [&] { return cmd_obstruct(of, io); }; });

  long bound = -1;
  bool oracle_canonical = false;
  auto* ora = app.add_subcommand("oracle", "Brute-force every integral isometry");
  ora->add_option("file", file, "Problem file with B and Bprime")->required();
  ora->add_option("--bound", bound, "Box bound on entries (default: exact per-column enumeration)");
  ora->add_flag("--canonical", oracle_canonical, "Keep one matrix per {M, -M} with det M = +1");
  ora->add_option("--json", io.json_path, "Also write the document here");
  ora->callback([&] { action = [&] { return cmd_oracle(file, bound, oracle_canonical, threads, io); }; });

  std::string result_file;
  auto* ver = app.add_subcommand("verify", "Re-check a result document");
  ver->add_option("result", result_file, "JSON written by another subcommand")->required();
  ver->callback([&] { action = [&] { return cmd_verify(result_file, io); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kSuccess : kParse;
  }

  try {
    return action();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace superlat::cli
