#pragma once

// Random generators for property tests. Everything is seeded so failures
// reproduce.

#include <algorithm>
#include <random>
#include <vector>

#include "superlat/forms.hpp"
#include "superlat/linalg.hpp"

namespace superlat::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline Rational rational(Rng& rng, long span = 9, long max_den = 5) {
  return make_rational(uniform(rng, -span, span), uniform(rng, 1, max_den));
}

inline QVector vec(Rng& rng, std::size_t n, long span = 9, long max_den = 5) {
  QVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rational(rng, span, max_den);
  return v;
}

inline QVector int_vec(Rng& rng, std::size_t n, long span) {
  QVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = uniform(rng, -span, span);
  return v;
}

inline QVector nonzero_int_vec(Rng& rng, std::size_t n, long span) {
  for (;;) {
    QVector v = int_vec(rng, n, span);
    if (!v.is_zero()) return v;
  }
}

inline QMatrix mat(Rng& rng, std::size_t n, long span = 9, long max_den = 5) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rational(rng, span, max_den);
  return m;
}

inline QMatrix invertible(Rng& rng, std::size_t n, long span = 9, long max_den = 5) {
  for (;;) {
    QMatrix m = mat(rng, n, span, max_den);
    if (determinant(m) != 0) return m;
  }
}

/// Random nondegenerate symmetric rational Gram matrix (indefinite allowed).
inline GramForm symmetric_form(Rng& rng, std::size_t n, long span = 6, long max_den = 3) {
  for (;;) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rational(rng, span, max_den);
    if (determinant(m) != 0) return GramForm(m);
  }
}

/// w with B(w, w) != 0.
inline QVector anisotropic(Rng& rng, const GramForm& b, long span = 4) {
  for (;;) {
    QVector w = nonzero_int_vec(rng, b.dim(), span);
    if (eval(b, w, w) != 0) return w;
  }
}

/// Product of random elementary operations and a signed permutation.
inline QMatrix unimodular(Rng& rng, std::size_t n, int steps, long coeff = 1) {
  QMatrix m = QMatrix::identity(n);
  for (int s = 0; s < steps; ++s) {
    std::size_t i = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    std::size_t j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 2));
    if (j >= i) ++j;
    long c = uniform(rng, -coeff, coeff);
    if (c == 0) c = 1;
    // row_i += c row_j
    for (std::size_t k = 0; k < n; ++k) m(i, k) += Rational(c) * m(j, k);
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  QMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) p(i, perm[i]) = uniform(rng, 0, 1) ? 1 : -1;
  return p * m;
}

/// Integral positive-definite Gram matrix with B_00 = 1, other diagonal
/// entries in [2, max_diag] and off-diagonal entries in [-1, 1].
inline QMatrix definite_integral_form(Rng& rng, std::size_t n, long max_diag = 4) {
  for (;;) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = i == 0 ? 1 : uniform(rng, 2, max_diag);
      for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = uniform(rng, -1, 1);
    }
    bool pd = true;
    for (const auto& minor : leading_principal_minors(m)) pd = pd && minor > 0;
    if (pd) return m;
  }
}

inline Rational max_abs_entry(const QMatrix& m) {
  Rational best = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) best = std::max(best, Rational(abs(m(i, j))));
  return best;
}

}  // namespace superlat::testing
