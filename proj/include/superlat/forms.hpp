#pragma once

// Symmetric bilinear forms on Q^n given by Gram matrices, and the operations
// on endomorphisms that are defined relative to such a form.

#include <optional>
#include <vector>

#include "superlat/linalg.hpp"

namespace superlat {

/// An endomorphism of Q^n in the standard basis.
struct Endo {
  QMatrix mat;

  Endo() = default;
  explicit Endo(QMatrix m);
  static Endo identity(std::size_t n) { return Endo(QMatrix::identity(n)); }

  std::size_t dim() const noexcept { return mat.rows(); }
  QVector operator()(const QVector& x) const { return mat * x; }

  friend bool operator==(const Endo& a, const Endo& b) { return a.mat == b.mat; }
};

Endo operator+(const Endo& a, const Endo& b);
Endo operator-(const Endo& a, const Endo& b);
Endo operator*(const Rational& s, const Endo& a);
/// Composition: (a * b)(x) = a(b(x)).
Endo operator*(const Endo& a, const Endo& b);

/// Symmetric bilinear form B(u, v) = u^T G v.
///
/// The public constructor rejects non-symmetric or degenerate Gram matrices.
/// Degenerate forms only arise from `pullback` of a singular map; they carry
/// `nondegenerate() == false` and refuse operations that need G^{-1}.
class GramForm {
 public:
  explicit GramForm(QMatrix gram);

  const QMatrix& gram() const noexcept { return gram_; }
  std::size_t dim() const noexcept { return gram_.rows(); }
  const Rational& det() const noexcept { return det_; }
  bool nondegenerate() const noexcept { return det_ != 0; }
  bool positive_definite() const noexcept { return positive_definite_; }
  bool integral() const noexcept { return integral_; }
  /// G^{-1}; throws DegenerateForm on a flagged degenerate form.
  const QMatrix& inverse() const;

  friend bool operator==(const GramForm& a, const GramForm& b) { return a.gram_ == b.gram_; }

 private:
  struct AllowDegenerate {};
  GramForm(QMatrix gram, AllowDegenerate);
  void init(bool allow_degenerate);

  friend GramForm pullback(const GramForm& b, const Endo& phi);
  friend GramForm polarized_pullback(const GramForm& b, const Endo& phi1, const Endo& phi2);

  QMatrix gram_;
  Rational det_;
  bool positive_definite_ = false;
  bool integral_ = false;
  std::optional<QMatrix> inverse_;
};

/// u^T G v.
Rational eval(const GramForm& b, const QVector& u, const QVector& v);

/// Rational basis of {v : B(w, v) = 0}, n-1 vectors. Throws ZeroVector.
std::vector<QVector> ortho_complement_basis(const GramForm& b, const QVector& w);

/// Z-basis of Z^n intersected with {w}^perp (delegates to integer_kernel_basis
/// on the functional G w).
std::vector<QVector> ortho_complement_lattice_basis(const GramForm& b, const QVector& w);

/// phi^dagger with B(phi x, y) = B(x, phi^dagger y); matrix G^{-1} M^T G.
Endo adjoint(const GramForm& b, const Endo& phi);

/// Tr(phi1^dagger phi2).
Rational trace_form(const GramForm& b, const Endo& phi1, const Endo& phi2);

/// B_phi(x, y) = B(phi x, phi y); Gram matrix M^T G M. The result may be degenerate.
GramForm pullback(const GramForm& b, const Endo& phi);

/// B_{phi1,phi2}(x, y) = (B(phi1 x, phi2 y) + B(phi1 y, phi2 x)) / 2.
GramForm polarized_pullback(const GramForm& b, const Endo& phi1, const Endo& phi2);

/// phi_{B,u,v}(x) = B(v, x) u; matrix u v^T G.
Endo outer(const GramForm& b, const QVector& u, const QVector& v);

/// Membership of v in the dual lattice of Z^n: G v integral.
/// Throws NonIntegralForm when G itself is not integral.
bool dual_membership(const GramForm& b, const QVector& v);

}  // namespace superlat
