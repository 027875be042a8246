#include "superlat/forms.hpp"

#include <algorithm>

namespace superlat {

Endo::Endo(QMatrix m) : mat(std::move(m)) {
  if (!mat.is_square()) throw Error(ErrorCode::DimensionMismatch, "endomorphism matrix must be square");
}

static void check_dims(const Endo& a, const Endo& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "endomorphism dimensions differ");
}

Endo operator+(const Endo& a, const Endo& b) {
  check_dims(a, b);
  return Endo(a.mat + b.mat);
}

Endo operator-(const Endo& a, const Endo& b) {
  check_dims(a, b);
  return Endo(a.mat - b.mat);
}

Endo operator*(const Rational& s, const Endo& a) { return Endo(s * a.mat); }

Endo operator*(const Endo& a, const Endo& b) {
  check_dims(a, b);
  return Endo(a.mat * b.mat);
}

// ---------------------------------------------------------------- GramForm

GramForm::GramForm(QMatrix gram) : gram_(std::move(gram)) { init(false); }

GramForm::GramForm(QMatrix gram, AllowDegenerate) : gram_(std::move(gram)) { init(true); }

void GramForm::init(bool allow_degenerate) {
  if (!gram_.is_square() || gram_.rows() == 0) {
    throw Error(ErrorCode::InvalidForm, "Gram matrix must be square and nonempty");
  }
  if (!is_symmetric(gram_)) throw Error(ErrorCode::InvalidForm, "Gram matrix is not symmetric");
  det_ = determinant(gram_);
  if (det_ == 0 && !allow_degenerate) throw Error(ErrorCode::InvalidForm, "Gram matrix is degenerate");
  auto minors = leading_principal_minors(gram_);
  positive_definite_ = std::all_of(minors.begin(), minors.end(), [](const Rational& m) { return m > 0; });
  integral_ = is_integral(gram_);
  if (det_ != 0) inverse_ = mat_inverse(gram_);
}

const QMatrix& GramForm::inverse() const {
  if (!inverse_) throw Error(ErrorCode::DegenerateForm, "form has no inverse Gram matrix");
  return *inverse_;
}

static void check_vec(const GramForm& b, const QVector& v) {
  if (v.size() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "vector length does not match the form");
}

static void check_endo(const GramForm& b, const Endo& phi) {
  if (phi.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "endomorphism does not match the form");
}

Rational eval(const GramForm& b, const QVector& u, const QVector& v) {
  check_vec(b, u);
  check_vec(b, v);
  const QMatrix& g = b.gram();
  Rational acc = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0) continue;
    Rational row = 0;
    for (std::size_t j = 0; j < v.size(); ++j) row += g(i, j) * v[j];
    acc += u[i] * row;
  }
  return acc;
}

std::vector<QVector> ortho_complement_basis(const GramForm& b, const QVector& w) {
  check_vec(b, w);
  if (w.is_zero()) throw Error(ErrorCode::ZeroVector, "orthogonal complement of 0");
  QVector f = b.gram() * w;
  if (f.is_zero()) throw Error(ErrorCode::DegenerateForm, "w lies in the radical of the form");
  return nullspace(QMatrix::from_rows({f}));
}

std::vector<QVector> ortho_complement_lattice_basis(const GramForm& b, const QVector& w) {
  check_vec(b, w);
  if (w.is_zero()) throw Error(ErrorCode::ZeroVector, "orthogonal complement of 0");
  return integer_kernel_basis(b.gram() * w);
}

Endo adjoint(const GramForm& b, const Endo& phi) {
  check_endo(b, phi);
  return Endo(b.inverse() * transpose(phi.mat) * b.gram());
}

Rational trace_form(const GramForm& b, const Endo& phi1, const Endo& phi2) {
  check_endo(b, phi2);
  return trace((adjoint(b, phi1) * phi2).mat);
}

GramForm pullback(const GramForm& b, const Endo& phi) {
  check_endo(b, phi);
  return GramForm(transpose(phi.mat) * b.gram() * phi.mat, GramForm::AllowDegenerate{});
}

GramForm polarized_pullback(const GramForm& b, const Endo& phi1, const Endo& phi2) {
  check_endo(b, phi1);
  check_endo(b, phi2);
  QMatrix cross = transpose(phi1.mat) * b.gram() * phi2.mat;
  QMatrix sym = cross + transpose(cross);
  sym *= Rational(1, 2);
  return GramForm(std::move(sym), GramForm::AllowDegenerate{});
}

Endo outer(const GramForm& b, const QVector& u, const QVector& v) {
  check_vec(b, u);
  check_vec(b, v);
  // row vector v^T G
  QVector vg = transpose(b.gram()) * v;
  QMatrix m(u.size(), u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < u.size(); ++j) m(i, j) = u[i] * vg[j];
  }
  return Endo(std::move(m));
}

bool dual_membership(const GramForm& b, const QVector& v) {
  if (!b.integral()) throw Error(ErrorCode::NonIntegralForm, "dual lattice needs an integral Gram matrix");
  check_vec(b, v);
  return is_integral(b.gram() * v);
}

}  // namespace superlat
