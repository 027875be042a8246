#include "properties.hpp"

#include <algorithm>
#include <set>

#include "superlat/isosearch.hpp"
#include "superlat/supergrade.hpp"
#include "support.hpp"

namespace superlat::testing {

std::string SuiteResult::summary() const {
  std::string s = std::to_string(checks - failures) + "/" + std::to_string(checks) + " checks";
  if (failures) s += "; first failure: " + first_failure;
  return s;
}

namespace {

QVector flatten(const QMatrix& m) {
  std::vector<Rational> xs;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) xs.push_back(m(i, j));
  return QVector(std::move(xs));
}

Endo combination(Rng& rng, const std::vector<Endo>& basis) {
  const std::size_t n = basis.front().dim();
  QMatrix acc(n, n);
  for (const auto& e : basis) acc += rational(rng, 5, 3) * e.mat;
  return Endo(acc);
}

QVector perp_combination(Rng& rng, const GradedContext& ctx) {
  QVector acc(ctx.dim());
  for (const auto& z : ctx.perp_basis()) acc += rational(rng, 5, 3) * z;
  return acc;
}

std::string tag(const char* what, std::size_t n, int i) {
  return std::string(what) + " (n=" + std::to_string(n) + ", #" + std::to_string(i) + ")";
}

}  // namespace

SuiteResult dimension_law(std::uint64_t seed, std::size_t n_lo, std::size_t n_hi, int per_n) {
  Rng rng(seed);
  SuiteResult r;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    for (int i = 0; i < per_n; ++i) {
      GramForm b = symmetric_form(rng, n);
      GradedContext ctx(b, anisotropic(rng, b));
      auto even = even_basis(ctx);
      auto odd = odd_basis(ctx);
      r.check(even.size() == n * n - 2 * n + 2, tag("even basis size", n, i));
      r.check(odd.size() == 2 * n - 2, tag("odd basis size", n, i));
      std::vector<QVector> flat;
      for (const auto& e : even) flat.push_back(flatten(e.mat));
      for (const auto& e : odd) flat.push_back(flatten(e.mat));
      r.check(rank_of(flat) == n * n, tag("union independent", n, i));
      for (const auto& e : even) r.check(is_even(ctx, e), tag("even basis member", n, i));
      for (const auto& e : odd) r.check(is_odd(ctx, e), tag("odd basis member", n, i));
    }
  }
  return r;
}

SuiteResult grading_suite(std::uint64_t seed, int graded_per_n, int transports_per_n) {
  Rng rng(seed);
  SuiteResult r;
  for (std::size_t n = 2; n <= 4; ++n) {
    GramForm b = symmetric_form(rng, n);
    GradedContext ctx(b, anisotropic(rng, b));
    const Rational& k = ctx.wnorm();
    auto even = even_basis(ctx);
    auto odd = odd_basis(ctx);

    // closure on basis pairs
    for (const auto& x : even)
      for (const auto& y : even) r.check(is_even(ctx, x * y), tag("even*even basis", n, 0));
    for (const auto& x : even)
      for (const auto& y : odd) {
        r.check(is_odd(ctx, x * y), tag("even*odd basis", n, 0));
        r.check(is_odd(ctx, y * x), tag("odd*even basis", n, 0));
      }
    for (const auto& x : odd)
      for (const auto& y : odd) r.check(is_even(ctx, x * y), tag("odd*odd basis", n, 0));

    for (int i = 0; i < graded_per_n; ++i) {
      Endo e1 = combination(rng, even), e2 = combination(rng, even);
      Endo o1 = combination(rng, odd), o2 = combination(rng, odd);
      r.check(is_even(ctx, e1 * e2), tag("even*even", n, i));
      r.check(is_odd(ctx, e1 * o1), tag("even*odd", n, i));
      r.check(is_odd(ctx, o1 * e1), tag("odd*even", n, i));
      r.check(is_even(ctx, o1 * o2), tag("odd*odd", n, i));

      r.check(trace_form(b, e1, o1) == 0, tag("trace orthogonality", n, i));
      r.check(trace_form(b, o2, e2) == 0, tag("trace orthogonality", n, i));

      r.check(weight(ctx, e1 * e2) == weight(ctx, e1) * weight(ctx, e2), tag("weight multiplicative", n, i));

      auto [a1, b1] = odd_components(ctx, o1);
      auto [a2, b2] = odd_components(ctx, o2);
      r.check(weight(ctx, o1 * o2) == eval(b, a1, b2) * k, tag("odd*odd weight", n, i));
      r.check((outer(b, ctx.anchor(), a1) + outer(b, b1, ctx.anchor())).mat == o1.mat, tag("odd components", n, i));

      Endo e1d = adjoint(b, e1), o1d = adjoint(b, o1);
      r.check(is_even(ctx, e1d), tag("adjoint of even", n, i));
      r.check(is_odd(ctx, o1d), tag("adjoint of odd", n, i));
      auto [ad, bd] = odd_components(ctx, o1d);
      r.check(ad == b1 && bd == a1, tag("adjoint swaps (a, b)", n, i));

      Endo phi(mat(rng, n));
      auto [ev, od] = split(ctx, phi);
      r.check((ev + od).mat == phi.mat, tag("split sums", n, i));
      r.check(is_even(ctx, ev) && is_odd(ctx, od), tag("split parts graded", n, i));
      r.check(trace_form(b, ev, od) == 0, tag("split orthogonal", n, i));
      r.check(split(ctx, ev).second.mat.is_zero(), tag("split idempotent", n, i));
    }

    for (int i = 0; i < transports_per_n; ++i) {
      Endo phi(invertible(rng, n));
      Endo e = combination(rng, even), o = combination(rng, odd);
      auto te = conjugate_transport(ctx, phi, e);
      auto to = conjugate_transport(ctx, phi, o);
      r.check(is_even(te.ctx, te.psi), tag("transport even", n, i));
      r.check(is_odd(to.ctx, to.psi), tag("transport odd", n, i));
      r.check(te.ctx.form().gram() == pullback(b, phi).gram(), tag("transport form", n, i));
      r.check(phi(te.ctx.anchor()) == ctx.anchor(), tag("transport anchor", n, i));
      for (const auto& x : even) r.check(is_even(te.ctx, conjugate_transport(ctx, phi, x).psi), tag("transport even basis", n, i));
      for (const auto& x : odd) r.check(is_odd(te.ctx, conjugate_transport(ctx, phi, x).psi), tag("transport odd basis", n, i));
    }
  }
  return r;
}

SuiteResult identity_suite(std::uint64_t seed, int count) {
  Rng rng(seed);
  SuiteResult r;
  for (int i = 0; i < count; ++i) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 4));
    GramForm b = symmetric_form(rng, n);
    QVector w = anisotropic(rng, b);
    GradedContext ctx(b, w);
    const Rational& k = ctx.wnorm();
    Endo phi(invertible(rng, n));
    GradedDecomposition d = full_decomposition(ctx, phi);
    const Rational& wt = d.wt;

    Endo pww = outer(b, w, w), pwa = outer(b, w, d.a), pbw = outer(b, d.b, w);
    r.check((d.phi0 + (wt / k) * pww + pwa + pbw).mat == phi.mat, tag("reassembly", n, i));
    r.check(d.phi0(w).is_zero() && adjoint(b, d.phi0)(w).is_zero(), tag("phi0 weight 0", n, i));
    r.check(eval(b, w, d.a) == 0 && eval(b, w, d.b) == 0, tag("a, b orthogonal to w", n, i));

    // B_phi term by term
    QMatrix expansion = pullback(b, d.phi0).gram() + (wt * wt / (k * k)) * pullback(b, pww).gram() +
                        pullback(b, pwa).gram() + pullback(b, pbw).gram() +
                        Rational(2) * (polarized_pullback(b, d.phi0, pbw).gram() +
                                       (wt / k) * polarized_pullback(b, pww, pwa).gram());
    r.check(expansion == pullback(b, phi).gram(), tag("expansion of B_phi", n, i));
    // the four cross terms dropped from the expansion
    r.check(polarized_pullback(b, d.phi0, pww).gram().is_zero(), tag("B_{phi0,phi_ww} = 0", n, i));
    r.check(polarized_pullback(b, pww, pbw).gram().is_zero(), tag("B_{phi_ww,phi_bw} = 0", n, i));
    r.check(polarized_pullback(b, d.phi0, pwa).gram().is_zero(), tag("B_{phi0,phi_wa} = 0", n, i));
    r.check(polarized_pullback(b, pwa, pbw).gram().is_zero(), tag("B_{phi_wa,phi_bw} = 0", n, i));

    // the three equations for B' = B_phi
    GramForm bp = pullback(b, phi);
    QVector z1 = perp_combination(rng, ctx), z2 = perp_combination(rng, ctx);
    r.check(eval(bp, w, w) == k * (wt * wt + k * eval(b, d.b, d.b)), tag("equation one", n, i));
    r.check(eval(bp, w, z1) == k * (wt * eval(b, d.a, z1) + eval(b, d.b, d.phi0(z1))), tag("equation two", n, i));
    r.check(eval(bp, z1, z2) == eval(b, d.phi0(z1), d.phi0(z2)) + eval(b, d.a, z1) * eval(b, d.a, z2) * k,
            tag("equation three", n, i));
  }
  return r;
}

SuiteResult oracle_equivalence(std::uint64_t seed, int problems) {
  Rng rng(seed);
  SuiteResult r;
  for (int i = 0; i < problems; ++i) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 4));
    QMatrix b = definite_integral_form(rng, n);
    QMatrix phi, bp;
    do {
      phi = unimodular(rng, n, static_cast<int>(uniform(rng, 1, 4)));
      bp = transpose(phi) * b * phi;
    } while (max_abs_entry(bp) > 10);

    std::vector<std::size_t> cheap;
    for (std::size_t j = 0; j < n; ++j)
      if (b(j, j) <= 2) cheap.push_back(j);
    const std::size_t anchor = cheap[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(cheap.size()) - 1))];

    IsometryProblem p = make_problem(b, bp, QVector::unit(n, anchor));
    SearchOptions opts;
    opts.integral_only = true;
    SearchResult res = find_isometries(p, opts);
    std::vector<QMatrix> found;
    for (const auto& c : res.candidates) found.push_back(c.m);
    std::sort(found.begin(), found.end());
    const bool unique = std::adjacent_find(found.begin(), found.end()) == found.end();
    auto oracle = brute_force_isometries(p.b, p.bp);

    r.check(unique, tag("no duplicate candidates", n, i));
    r.check(found == oracle, tag("pipeline = oracle", n, i));
    r.check(std::binary_search(found.begin(), found.end(), phi), tag("pipeline contains phi", n, i));
    r.check(std::binary_search(oracle.begin(), oracle.end(), phi), tag("oracle contains phi", n, i));
    r.check(res.certificate.verdict == Verdict::IsometricWitness, tag("witness verdict", n, i));
  }
  return r;
}

SuiteResult norm_enumeration_suite(std::uint64_t seed, int forms) {
  Rng rng(seed);
  SuiteResult r;
  for (int i = 0; i < forms; ++i) {
    const std::size_t d = static_cast<std::size_t>(uniform(rng, 1, 4));
    QMatrix q(d, d);
    for (;;) {
      for (std::size_t a = 0; a < d; ++a) {
        q(a, a) = uniform(rng, 1, 6);
        for (std::size_t c = a + 1; c < d; ++c) q(a, c) = q(c, a) = uniform(rng, -3, 3);
      }
      bool pd = true;
      for (const auto& m : leading_principal_minors(q)) pd = pd && m > 0;
      if (pd) break;
    }
    PosDefForm form(q);
    const Integer c = uniform(rng, 0, 50);
    NormSolutionSet fast = vectors_of_norm(form, c);
    NormSolutionSet serial = vectors_of_norm_serial(form, c);
    auto box = vectors_of_norm_box(form, c, form.coordinate_bounds(c));

    r.check(fast.solutions == box, tag("parallel = box", d, i));
    r.check(serial.solutions == box, tag("serial = box", d, i));
    std::set<QVector> set(box.begin(), box.end());
    bool closed = true;
    for (const auto& v : box) closed = closed && set.count(-v) == 1;
    r.check(closed, tag("closed under negation", d, i));
    const std::size_t zero = c == 0 ? 1 : 0;
    r.check(fast.canonical_count == (fast.raw_count - zero) / 2 + zero, tag("canonical count", d, i));
  }
  return r;
}

SuiteResult squares_suite(long limit) {
  SuiteResult r;
  std::vector<char> two(static_cast<std::size_t>(limit) + 1, 0), three(static_cast<std::size_t>(limit) + 1, 0);
  for (long x = 0; x * x <= limit; ++x)
    for (long y = x; x * x + y * y <= limit; ++y) {
      two[static_cast<std::size_t>(x * x + y * y)] = 1;
      for (long z = y; x * x + y * y + z * z <= limit; ++z) three[static_cast<std::size_t>(x * x + y * y + z * z)] = 1;
    }
  for (long n = 0; n <= limit; ++n) {
    r.check(two_squares_representable(Integer(n)) == (two[static_cast<std::size_t>(n)] != 0),
            "two squares at N=" + std::to_string(n));
    r.check(three_squares_representable(Integer(n)) == (three[static_cast<std::size_t>(n)] != 0),
            "three squares at N=" + std::to_string(n));
  }
  return r;
}

}  // namespace superlat::testing
