#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "examples.hpp"
#include "properties.hpp"
#include "superlat/error.hpp"
#include "superlat/isosearch.hpp"
#include "superlat/supergrade.hpp"
#include "support.hpp"

using namespace superlat;
namespace st = superlat::testing;

namespace {

std::vector<QMatrix> matrices(const SearchResult& r) {
  std::vector<QMatrix> out;
  for (const auto& c : r.candidates) out.push_back(c.m);
  return out;
}

bool contains(const std::vector<QMatrix>& ms, const QMatrix& m) {
  return std::find(ms.begin(), ms.end(), m) != ms.end();
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Unsupported;
}

}  // namespace

TEST_CASE("problem validation") {
  QMatrix i2 = QMatrix::identity(2);
  CHECK(code_of([&] { make_problem(i2, i2, QVector::from_ints({0, 0})); }) == ErrorCode::ZeroVector);
  CHECK(code_of([&] { make_problem(QMatrix{{1, 0}, {0, -1}}, i2, QVector::from_ints({1, 1})); }) ==
        ErrorCode::IsotropicAnchor);
  CHECK(code_of([&] { make_problem(QMatrix{{1, 1}, {0, 1}}, i2, QVector::from_ints({1, 0})); }) ==
        ErrorCode::InvalidForm);
  CHECK(code_of([&] { make_problem(QMatrix::diagonal({make_rational(1, 2), 2}), i2, QVector::from_ints({1, 0})); }) ==
        ErrorCode::NonIntegralForm);
  CHECK(code_of([&] { make_problem(i2, i2, QVector::from_ints({1, 0}), {QVector::from_ints({2, 0})}); }) ==
        ErrorCode::DegenerateZ0);
  auto p = make_problem(i2, i2, QVector::from_ints({1, 0}));
  CHECK(code_of([&] { solve_eq3_per_z0(p, QVector::from_ints({-3, 0})); }) == ErrorCode::DegenerateZ0);
  CHECK(make_problem(i2, QMatrix::diagonal({1, 2}), QVector::from_ints({1, 0})).determinant_mismatch);

  auto z = default_z0_basis(QVector::from_ints({1, -3, 2}));
  REQUIRE(z.size() == 2);
  CHECK(z[0] == QVector::from_ints({1, 0, 0}));
  CHECK(z[1] == QVector::from_ints({0, 0, 1}));
  CHECK(suggest_anchor(GramForm(QMatrix::diagonal({3, 1, 1}))) == QVector::from_ints({0, 1, 0}));
}

TEST_CASE("indefinite B is unsupported") {
  auto p = make_problem(QMatrix{{1, 0}, {0, -1}}, QMatrix{{1, 0}, {0, -1}}, QVector::from_ints({1, 0}));
  CHECK(code_of([&] { find_isometries(p); }) == ErrorCode::Unsupported);
}

TEST_CASE("rank 2: eq1 has no solutions") {
  auto p = st::rank2_problem();
  auto r = find_isometries(p);
  CHECK(r.certificate.verdict == Verdict::ObstructionEq1);
  CHECK(r.stats.eq1_raw == 0);
  CHECK(r.certificate.constants.at("target") == "2");
  CHECK(verify_certificate(r.certificate, p));
  Certificate bad = r.certificate;
  bad.constants["target"] = "3";
  CHECK_FALSE(verify_certificate(bad, p));
  CHECK(brute_force_isometries(p.b, p.bp).empty());
}

TEST_CASE("rank 4: rational isometries only") {
  auto p = st::rank4_problem();
  auto r = find_isometries(p);
  CHECK(r.stats.eq1_raw == 20);
  CHECK(r.stats.eq1_canonical == 10);
  CHECK(r.stats.eq3_raw == std::vector<std::size_t>{50, 84, 210});
  CHECK(r.stats.eq3_canonical == std::vector<std::size_t>{25, 42, 105});
  CHECK(r.stats.integral_candidates == 0);
  CHECK(r.certificate.verdict == Verdict::NoIntegralIsometry);
  auto ms = matrices(r);
  for (const auto& m : ms) CHECK(transpose(m) * p.b.gram() * m == p.bp.gram());
  for (const auto& m : st::rank4_listed()) {
    CHECK(transpose(m) * p.b.gram() * m == p.bp.gram());
    CHECK(contains(ms, m));
    CHECK(contains(ms, Rational(-1) * m));
  }
  CHECK(brute_force_isometries(p.b, p.bp, false, 4).empty());
  CHECK(brute_force_isometries(p.b, p.bp).empty());
  CHECK(verify_certificate(r.certificate, p));
}

TEST_CASE("Wilson matrix") {
  auto p = st::wilson_problem();
  SearchOptions opts;
  opts.integral_only = true;
  auto r = find_isometries(p, opts);
  CHECK(r.stats.eq1_raw == 48);
  CHECK(r.stats.eq1_canonical == 24);
  CHECK(r.stats.integral_candidates == 384);
  CHECK(r.stats.integral_canonical == 96);
  CHECK(r.certificate.verdict == Verdict::IsometricWitness);
  CHECK(verify_certificate(r.certificate, p));

  const QMatrix inv = mat_inverse(st::kWilsonFactor);
  std::set<QMatrix> us;
  for (const auto& m : matrices(r)) {
    CHECK(transpose(m) * m == st::kWilson);
    QMatrix u = m * inv;
    CHECK(is_integral(u));
    CHECK(transpose(u) * u == QMatrix::identity(4));
    us.insert(u);
  }
  CHECK(us.size() == 384);  // all of O_4(Z)

  opts.canonical_only = true;
  auto canon = find_isometries(p, opts);
  CHECK(canon.candidates.size() == 96);
  for (const auto& c : canon.candidates) CHECK(is_canonical_isometry(c.m));

  auto brute = brute_force_isometries(p.b, p.bp);
  CHECK(brute.size() == 384);
  CHECK(canonical_isometries(brute).size() == 96);
  auto ours = matrices(r);
  std::sort(ours.begin(), ours.end());
  CHECK(ours == brute);
}

TEST_CASE("witness certificates") {
  auto p = st::wilson_problem();
  SearchOptions opts;
  opts.first_witness = true;
  auto r = find_isometries(p, opts);
  REQUIRE(r.certificate.witness);
  CHECK(verify_certificate(r.certificate, p));
  Certificate tampered = r.certificate;
  tampered.witness->m(0, 0) += 1;
  CHECK_FALSE(verify_certificate(tampered, p));
  Certificate missing = r.certificate;
  missing.witness.reset();
  CHECK_FALSE(verify_certificate(missing, p));
  // a false negative claim is rejected
  Certificate wrong;
  wrong.verdict = Verdict::NoIntegralIsometry;
  CHECK_FALSE(verify_certificate(wrong, p));
}

TEST_CASE("first witness is the first integral candidate of the full run") {
  auto p = st::wilson_problem();
  auto all = find_isometries(p);
  SearchOptions opts;
  opts.first_witness = true;
  opts.canonical_only = true;
  auto first = find_isometries(p, opts);
  REQUIRE(all.certificate.witness);
  REQUIRE(first.certificate.witness);
  CHECK(first.certificate.witness->m == all.certificate.witness->m);
}

TEST_CASE("identity problems contain the identity") {
  st::Rng rng(71);
  for (int i = 0; i < 6; ++i) {
    const std::size_t n = static_cast<std::size_t>(st::uniform(rng, 2, 3));
    QMatrix b = st::definite_integral_form(rng, n, 3);
    QVector w = QVector(n);
    w[0] = 1;
    auto p = make_problem(b, b, w);
    auto r = find_isometries(p);
    CHECK(r.certificate.verdict == Verdict::IsometricWitness);
    CHECK(contains(matrices(r), QMatrix::identity(n)));
  }
}

TEST_CASE("degenerate branch: b~ = 0 and t = 0") {
  // B = B' = I2, w = e1: s = +-1 forces b~ = 0, then eq2 forces t = 0
  auto p = make_problem(QMatrix::identity(2), QMatrix::identity(2), QVector::from_ints({1, 0}));
  auto eqs = derive_equations(p);
  auto e1 = solve_eq1(eqs);
  auto e3 = solve_eq3(eqs, 0);
  for (const auto& s : e1.solutions) {
    auto tuples = filter_eq2(eqs, s, {e3});
    for (const auto& t : tuples) {
      const auto& c = e3[t[0]];
      if (s.btilde.is_zero()) CHECK(c.t == 0);
    }
  }
  auto r = find_isometries(p);
  CHECK(r.candidates.size() == 8);
  CHECK(brute_force_isometries(p.b, p.bp).size() == 8);
}

TEST_CASE("Cauchy-Schwarz pruning does not change the output") {
  for (auto p : {st::wilson_problem(), st::rank4_problem()}) {
    auto plain = find_isometries(p);
    SearchOptions opts;
    opts.cs_prune = true;
    auto pruned = find_isometries(p, opts);
    CHECK(matrices(plain) == matrices(pruned));
    CHECK(pruned.stats.cs_pruned > 0);
    // and the test is necessary: it never rejects an eq2 solution
    auto eqs = derive_equations(p);
    auto e1 = solve_eq1(eqs);
    for (std::size_t i = 0; i < p.z0_basis.size(); ++i) {
      auto e3 = solve_eq3(eqs, i);
      for (const auto& s : e1.solutions)
        for (const auto& c : e3)
          if (satisfies_eq2(eqs, s, i, c)) CHECK(cauchy_schwarz_admissible(eqs, s, i, c.t));
    }
  }
}

TEST_CASE("output is independent of the thread count") {
  auto p = st::rank4_problem();
  SearchOptions one;
  one.threads = 1;
  SearchOptions many;
  many.threads = 4;
  auto a = find_isometries(p, one), b = find_isometries(p, many);
  CHECK(matrices(a) == matrices(b));
  CHECK(a.stats.eq2_pairs == b.stats.eq2_pairs);
  CHECK(a.stats.joint_survivors == b.stats.joint_survivors);
}

TEST_CASE("known isometries solve every equation") {
  // phi unimodular, B' = pullback: phi's own (s, b~, t, c) must appear
  st::Rng rng(83);
  for (int iter = 0; iter < 10; ++iter) {
    const std::size_t n = static_cast<std::size_t>(st::uniform(rng, 2, 3));
    QMatrix b = st::definite_integral_form(rng, n, 3);
    QMatrix phi = st::unimodular(rng, n, 3);
    QMatrix bp = transpose(phi) * b * phi;
    QVector w(n);
    w[0] = 1;
    auto p = make_problem(b, bp, w);
    auto eqs = derive_equations(p);
    const Rational k(eqs.wnorm);
    QVector pw = phi * w;
    const Integer s = to_integer(eval(p.b, w, pw), "s");
    QVector bt = k * pw - Rational(s) * w;
    bool found1 = false;
    for (const auto& e : solve_eq1(eqs).solutions) found1 = found1 || (e.s == s && e.btilde == bt);
    CHECK(found1);
    for (std::size_t i = 0; i < p.z0_basis.size(); ++i) {
      QVector pz = phi * eqs.z[i];
      const Integer t = to_integer(k * eval(p.b, w, pz), "t");
      QVector c = k * k * pz - Rational(t) * w;
      bool found3 = false;
      for (const auto& e : solve_eq3(eqs, i)) found3 = found3 || (e.t == t && e.c == c);
      CHECK(found3);
    }
    CHECK(contains(matrices(find_isometries(p)), phi));
  }
}

TEST_CASE("family obstructions") {
  FamilyParams m3{3, 0, {}, {}, {}};
  auto c = family_obstruction(Family::ThreeSquaresRank3, m3);
  CHECK(c.verdict == Verdict::ObstructionThreeSquares);
  CHECK(c.constants.at("B(w,w)") == "36");
  CHECK(c.constants.at("B'(w,w)") == "112");
  CHECK(c.constants.at("B'(w,w) 4-free part") == "7");
  CHECK(verify_certificate(c, family_problem(Family::ThreeSquaresRank3, m3)));

  FamilyParams abg{3, 0, Integer(60), Integer(6), Integer(6)};
  auto c2 = family_obstruction(Family::ThreeSquaresRank3, abg);
  CHECK(c2.verdict == Verdict::ObstructionThreeSquares);
  CHECK(c2.constants.at("B'(w,w)") == "79");
  CHECK(verify_certificate(c2, family_problem(Family::ThreeSquaresRank3, abg)));

  FamilyParams m1{1, 0, {}, {}, {}};
  auto c3 = family_obstruction(Family::ThreeSquaresRank3, m1);
  CHECK(c3.verdict == Verdict::Inconclusive);
  CHECK(verify_certificate(c3, family_problem(Family::ThreeSquaresRank3, m1)));

  FamilyParams r2{3, 1, Integer(3), Integer(0), Integer(3)};
  auto c4 = family_obstruction(Family::TwoSquaresRank2, r2);
  CHECK(c4.verdict == Verdict::ObstructionTwoSquares);
  CHECK(c4.constants.at("N") == "243");
  CHECK(verify_certificate(c4, family_problem(Family::TwoSquaresRank2, r2)));
  // search agrees
  CHECK(find_isometries(family_problem(Family::TwoSquaresRank2, r2)).certificate.verdict == Verdict::ObstructionEq1);

  CHECK(code_of([] { family_problem(Family::ThreeSquaresRank3, FamilyParams{0, 0, {}, {}, {}}); }) ==
        ErrorCode::BadFamilyParams);
  CHECK(code_of([] { family_problem(Family::ThreeSquaresRank3, FamilyParams{3, 0, Integer(60), Integer(6), Integer(7)}); }) ==
        ErrorCode::BadFamilyParams);
  CHECK(code_of([] { family_problem(Family::TwoSquaresRank2, FamilyParams{3, 1, {}, {}, {}}); }) ==
        ErrorCode::BadFamilyParams);
  CHECK(code_of([] { family_problem(Family::ThreeSquaresRank3, FamilyParams{3, 0, Integer(60), {}, {}}); }) ==
        ErrorCode::BadFamilyParams);
}

TEST_CASE("rank-3 family search for small m") {
  // the obstructed case has an empty eq1
  auto p = family_problem(Family::ThreeSquaresRank3, FamilyParams{3, 0, {}, {}, {}});
  CHECK(solve_eq1(p).solutions.empty());
  // m = 1 is not obstructed by the squares test, but no integral isometry exists
  auto q = family_problem(Family::ThreeSquaresRank3, FamilyParams{1, 0, {}, {}, {}});
  auto r = find_isometries(q);
  CHECK(r.stats.integral_candidates == 0);
  CHECK(brute_force_isometries(q.b, q.bp).empty());
}

TEST_CASE("brute force modes agree") {
  st::Rng rng(97);
  for (int i = 0; i < 8; ++i) {
    GramForm b(st::definite_integral_form(rng, 3, 3));
    GramForm bp = pullback(b, Endo(st::unimodular(rng, 3, 2)));
    auto cols = brute_force_isometries(b, bp, true);
    auto box = brute_force_isometries(b, bp, false);
    CHECK(cols == box);
    CHECK_FALSE(cols.empty());
  }
}

TEST_CASE("search against brute force, small run") {
  auto r = st::oracle_equivalence(505, 8);
  INFO(r.summary());
  CHECK(r.ok());
}
