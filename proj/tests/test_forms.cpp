#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "superlat/error.hpp"
#include "superlat/forms.hpp"
#include "support.hpp"

using namespace superlat;
namespace st = superlat::testing;

TEST_CASE("GramForm validation") {
  CHECK_THROWS_AS(GramForm(QMatrix{{1, 2}, {3, 4}}), Error);
  CHECK_THROWS_AS(GramForm(QMatrix{{1, 1}, {1, 1}}), Error);
  GramForm b(QMatrix{{2, 1}, {1, 2}});
  CHECK(b.positive_definite());
  CHECK(b.integral());
  CHECK(b.det() == 3);
  CHECK_FALSE(GramForm(QMatrix{{1, 0}, {0, -1}}).positive_definite());
  CHECK_FALSE(GramForm(QMatrix{{make_rational(1, 2), 0}, {0, 1}}).integral());
}

TEST_CASE("eval") {
  GramForm b(QMatrix::diagonal({1, 2, 3}));
  QVector ones = QVector::from_ints({1, 1, 1});
  CHECK(eval(b, ones, ones) == 6);
  CHECK(eval(GramForm(QMatrix::diagonal({1, 5})), QVector::from_ints({1, 0}), QVector::from_ints({1, 0})) == 1);
  CHECK(eval(b, QVector(3), ones) == 0);
  CHECK_THROWS_AS(eval(b, QVector(2), ones), Error);

  st::Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    GramForm g = st::symmetric_form(rng, 3);
    QVector u = st::vec(rng, 3), v = st::vec(rng, 3);
    CHECK(eval(g, u, v) == eval(g, v, u));
  }
}

TEST_CASE("orthogonal complements") {
  GramForm b(QMatrix::diagonal({1, 2, 3}));
  auto basis = ortho_complement_basis(b, QVector::from_ints({1, 0, 0}));
  REQUIRE(basis.size() == 2);
  for (const auto& v : basis) CHECK(v[0] == 0);
  CHECK(rank_of(basis) == 2);
  CHECK_THROWS_AS(ortho_complement_basis(b, QVector(3)), Error);

  // rank-3 family at m = 3: B(w, v) = 2 m^2 (v1 + v3) with w = (1,1,1)
  GramForm fam(QMatrix{{19, -1, 0}, {-1, 1, 0}, {0, 0, 18}});
  QVector w = QVector::from_ints({1, 1, 1});
  for (const auto& v : ortho_complement_basis(fam, w)) CHECK(18 * (v[0] + v[2]) == 0);
  for (const auto& v : ortho_complement_lattice_basis(fam, w)) {
    CHECK(is_integral(v));
    CHECK(eval(fam, w, v) == 0);
  }

  st::Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    GramForm g = st::symmetric_form(rng, 4);
    QVector w0 = st::nonzero_int_vec(rng, 4, 3);
    auto perp = ortho_complement_basis(g, w0);
    REQUIRE(perp.size() == 3);
    for (const auto& v : perp) CHECK(eval(g, w0, v) == 0);
    if (eval(g, w0, w0) != 0) {
      auto all = perp;
      all.push_back(w0);
      CHECK(rank_of(all) == 4);
    }
  }
}

TEST_CASE("adjoint") {
  st::Rng rng(13);
  Endo phi(st::mat(rng, 3));
  CHECK(adjoint(GramForm(QMatrix::identity(3)), phi).mat == transpose(phi.mat));

  for (int i = 0; i < 100; ++i) {
    GramForm b = st::symmetric_form(rng, 3);
    Endo f(st::mat(rng, 3));
    Endo fd = adjoint(b, f);
    CHECK(adjoint(b, fd).mat == f.mat);
    for (std::size_t x = 0; x < 3; ++x)
      for (std::size_t y = 0; y < 3; ++y) {
        QVector ex = QVector::unit(3, x), ey = QVector::unit(3, y);
        CHECK(eval(b, f(ex), ey) == eval(b, ex, fd(ey)));
      }
    QVector u = st::vec(rng, 3), v = st::vec(rng, 3);
    CHECK(adjoint(b, outer(b, u, v)).mat == outer(b, v, u).mat);
  }
}

TEST_CASE("trace form") {
  CHECK(trace_form(GramForm(QMatrix::identity(4)), Endo::identity(4), Endo::identity(4)) == 4);
  st::Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    GramForm b = st::symmetric_form(rng, 3);
    Endo f(st::mat(rng, 3)), g(st::mat(rng, 3));
    CHECK(trace_form(b, f, g) == trace_form(b, g, f));
    CHECK(trace_form(b, f, g) == trace(mat_inverse(b.gram()) * transpose(f.mat) * b.gram() * g.mat));
  }
  for (int i = 0; i < 50; ++i) {
    GramForm b(st::definite_integral_form(rng, 3));
    Endo f(st::mat(rng, 3));
    if (f.mat.is_zero()) continue;
    CHECK(trace_form(b, f, f) > 0);
  }
}

TEST_CASE("pullbacks") {
  GramForm id4(QMatrix::identity(4));
  QMatrix mprime{{2, 3, 2, 2}, {1, 1, 2, 1}, {0, 0, 1, 2}, {0, 0, 1, 1}};
  QMatrix wilson{{5, 7, 6, 5}, {7, 10, 8, 7}, {6, 8, 10, 9}, {5, 7, 9, 10}};
  CHECK(pullback(id4, Endo(mprime)).gram() == wilson);
  CHECK(pullback(id4, Endo::identity(4)) == id4);
  CHECK(polarized_pullback(id4, Endo::identity(4), Endo::identity(4)) == id4);

  GramForm degenerate = pullback(id4, Endo(QMatrix::diagonal({1, 1, 1, 0})));
  CHECK_FALSE(degenerate.nondegenerate());
  CHECK_THROWS_AS(degenerate.inverse(), Error);

  st::Rng rng(19);
  for (int i = 0; i < 50; ++i) {
    GramForm b = st::symmetric_form(rng, 3);
    Endo f(st::mat(rng, 3)), g(st::mat(rng, 3));
    CHECK(pullback(b, f).gram() == transpose(f.mat) * b.gram() * f.mat);
    for (std::size_t x = 0; x < 3; ++x)
      for (std::size_t y = 0; y < 3; ++y) {
        QVector ex = QVector::unit(3, x), ey = QVector::unit(3, y);
        CHECK(eval(pullback(b, f), ex, ey) == eval(b, f(ex), f(ey)));
      }
    CHECK(polarized_pullback(b, f, f) == pullback(b, f));
    CHECK(is_symmetric(polarized_pullback(b, f, g).gram()));
    // B_{f+g} = B_f + 2 B_{f,g} + B_g
    CHECK(pullback(b, f + g).gram() ==
          pullback(b, f).gram() + Rational(2) * polarized_pullback(b, f, g).gram() + pullback(b, g).gram());
    // functoriality
    CHECK(pullback(b, f * g).gram() == pullback(pullback(b, f), g).gram());
  }
}

TEST_CASE("outer products") {
  GramForm id3(QMatrix::identity(3));
  QVector e1 = QVector::unit(3, 0);
  QMatrix unit(3, 3);
  unit(0, 0) = 1;
  CHECK(outer(id3, e1, e1).mat == unit);

  st::Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    GramForm b = st::symmetric_form(rng, 3);
    QVector u = st::vec(rng, 3), v = st::vec(rng, 3), x = st::vec(rng, 3);
    Endo o = outer(b, u, v);
    CHECK(o(x) == eval(b, v, x) * u);
    QMatrix expected(3, 3);
    QVector vg = transpose(b.gram()) * v;
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) expected(r, c) = u[r] * vg[c];
    CHECK(o.mat == expected);
  }
}

TEST_CASE("dual lattice membership") {
  GramForm b(QMatrix::diagonal({1, 5}));
  CHECK(dual_membership(b, QVector::from_ints({3, -2})));
  CHECK(dual_membership(b, QVector{0, make_rational(1, 5)}));
  CHECK_FALSE(dual_membership(b, QVector{make_rational(1, 2), 0}));
  CHECK_THROWS_AS(dual_membership(GramForm(QMatrix::diagonal({make_rational(1, 2), 1})), QVector(2)), Error);
}
