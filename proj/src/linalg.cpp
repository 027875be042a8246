#include "superlat/linalg.hpp"

#include <algorithm>
#include <utility>

namespace superlat {

namespace {

void require_square(const QMatrix& a, const char* what) {
  if (!a.is_square()) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " needs a square matrix");
}

using IntRow = std::vector<Integer>;

std::vector<IntRow> to_int_rows(const QMatrix& a) {
  std::vector<IntRow> rows(a.rows(), IntRow(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) rows[i][j] = to_integer(a(i, j), "HNF entry");
  return rows;
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

QMatrix transpose(const QMatrix& a) {
  QMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Rational trace(const QMatrix& a) {
  require_square(a, "trace");
  Rational t = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

Rational determinant(const QMatrix& a) {
  require_square(a, "determinant");
  QMatrix m = a;
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

QMatrix mat_inverse(const QMatrix& a) {
  require_square(a, "inverse");
  const std::size_t n = a.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) {
    throw Error(ErrorCode::SingularMatrix, "matrix has determinant 0");
  }
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

QVector solve(const QMatrix& a, const QVector& b) {
  require_square(a, "solve");
  if (b.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "solve right-hand side");
  const std::size_t n = a.rows();
  QMatrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) {
    throw Error(ErrorCode::SingularMatrix, "solve: matrix has determinant 0");
  }
  return aug.column(n);
}

std::size_t rank_of(const QMatrix& a) {
  QMatrix m = a;
  return rref(m).size();
}

std::size_t rank_of(const std::vector<QVector>& vectors) {
  if (vectors.empty()) return 0;
  return rank_of(QMatrix::from_rows(vectors));
}

std::vector<QVector> nullspace(const QMatrix& a) {
  QMatrix m = a;
  auto pivots = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    QVector v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

QMatrix hermite_normal_form(const QMatrix& a) {
  auto rows = to_int_rows(a);
  const std::size_t m = rows.size();
  const std::size_t n = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    for (std::size_t i = r + 1; i < m; ++i) {
      if (rows[i][c] == 0) continue;
      if (rows[r][c] == 0) {
        std::swap(rows[r], rows[i]);
        continue;
      }
      Integer g, p, q;
      mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), rows[r][c].get_mpz_t(),
                 rows[i][c].get_mpz_t());
      Integer x = rows[r][c] / g;
      Integer y = rows[i][c] / g;
      // [p q; -y x] has determinant p*x + q*y = 1
      for (std::size_t j = 0; j < n; ++j) {
        Integer top = p * rows[r][j] + q * rows[i][j];
        Integer bottom = x * rows[i][j] - y * rows[r][j];
        rows[r][j] = std::move(top);
        rows[i][j] = std::move(bottom);
      }
    }
    if (rows[r][c] == 0) continue;
    if (rows[r][c] < 0)
      for (auto& e : rows[r]) e = -e;
    for (std::size_t i = 0; i < r; ++i) {
      Integer k;
      mpz_fdiv_q(k.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
      if (k == 0) continue;
      for (std::size_t j = 0; j < n; ++j) rows[i][j] -= k * rows[r][j];
    }
    ++r;
  }
  QMatrix h(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = rows[i][j];
  return h;
}

QVector primitive_integer_vector(const QVector& f) {
  Integer lcm = 1;
  for (const auto& x : f) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  Integer g = 0;
  for (const auto& x : f) {
    Integer scaled = x.get_num() * (lcm / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled.get_mpz_t());
  }
  if (g == 0) return f;
  QVector out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = Rational(f[i].get_num() * (lcm / f[i].get_den()) / g);
  return out;
}

std::vector<QVector> integer_kernel_basis(const QVector& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroFunctional, "kernel of the zero functional");
  const std::size_t n = f.size();
  QVector prim = primitive_integer_vector(f);
  std::vector<Integer> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = prim[i].get_num();

  // Unimodular column operations U with f.U = (+-1, 0, ..., 0).
  std::vector<IntRow> u(n, IntRow(n));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  for (std::size_t k = 1; k < n; ++k) {
    if (g[k] == 0) continue;
    Integer d, p, q;
    mpz_gcdext(d.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), g[0].get_mpz_t(), g[k].get_mpz_t());
    Integer x = g[0] / d;
    Integer y = g[k] / d;
    for (std::size_t i = 0; i < n; ++i) {
      Integer c0 = p * u[i][0] + q * u[i][k];
      Integer ck = x * u[i][k] - y * u[i][0];
      u[i][0] = std::move(c0);
      u[i][k] = std::move(ck);
    }
    g[0] = d;
    g[k] = 0;
  }

  QMatrix kernel_rows(n - 1, n);
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) kernel_rows(k - 1, i) = u[i][k];
  QMatrix h = hermite_normal_form(kernel_rows);
  std::vector<QVector> basis;
  basis.reserve(h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i) basis.push_back(h.row(i));
  return basis;
}

bool is_integral(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return is_integer(x); });
}

bool is_integral(const QMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!is_integer(a(i, j))) return false;
  return true;
}

bool is_unimodular(const QMatrix& a) {
  if (!a.is_square() || !is_integral(a)) return false;
  Rational d = determinant(a);
  return d == 1 || d == -1;
}

std::vector<Rational> leading_principal_minors(const QMatrix& a) {
  require_square(a, "leading minors");
  // One elimination pass: the k-th minor is the product of the first k pivots
  // as long as no row exchange is needed.
  const std::size_t n = a.rows();
  QMatrix m = a;
  std::vector<Rational> minors;
  Rational acc = 1;
  for (std::size_t c = 0; c < n; ++c) {
    if (m(c, c) == 0) {
      // Fall back to direct determinants for the remaining sizes.
      for (std::size_t k = c + 1; k <= n; ++k) {
        QMatrix sub(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub(i, j) = a(i, j);
        minors.push_back(determinant(sub));
      }
      return minors;
    }
    acc *= m(c, c);
    minors.push_back(acc);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return minors;
}

bool is_symmetric(const QMatrix& a) {
  if (!a.is_square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != a(j, i)) return false;
  return true;
}

}  // namespace superlat
