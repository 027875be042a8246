#include "superlat/supergrade.hpp"

namespace superlat {

GradedContext::GradedContext(GramForm b, QVector w) : b_(std::move(b)), w_(std::move(w)) {
  if (w_.size() != b_.dim()) throw Error(ErrorCode::DimensionMismatch, "anchor length does not match the form");
  if (w_.is_zero()) throw Error(ErrorCode::ZeroVector, "anchor w must be nonzero");
  if (!b_.nondegenerate()) throw Error(ErrorCode::DegenerateForm, "grading needs a nondegenerate form");
  wnorm_ = eval(b_, w_, w_);
  if (wnorm_ == 0) throw Error(ErrorCode::IsotropicAnchor, "B(w, w) = 0");
  perp_ = ortho_complement_basis(b_, w_);
}

static void check(const GradedContext& ctx, const Endo& phi) {
  if (phi.dim() != ctx.dim()) throw Error(ErrorCode::DimensionMismatch, "endomorphism does not match the context");
}

bool is_even(const GradedContext& ctx, const Endo& phi) {
  check(ctx, phi);
  const auto& b = ctx.form();
  const auto& w = ctx.anchor();
  QVector phi_w = phi(w);
  for (const auto& u : ctx.perp_basis()) {
    if (eval(b, u, phi_w) != 0) return false;
    if (eval(b, w, phi(u)) != 0) return false;
  }
  return true;
}

bool is_odd(const GradedContext& ctx, const Endo& phi) {
  check(ctx, phi);
  const auto& b = ctx.form();
  const auto& w = ctx.anchor();
  if (eval(b, w, phi(w)) != 0) return false;
  for (const auto& v : ctx.perp_basis()) {
    QVector phi_v = phi(v);
    for (const auto& u : ctx.perp_basis())
      if (eval(b, u, phi_v) != 0) return false;
  }
  return true;
}

std::vector<Endo> even_basis(const GradedContext& ctx) {
  const auto& b = ctx.form();
  std::vector<Endo> basis;
  basis.push_back(outer(b, ctx.anchor(), ctx.anchor()));
  for (const auto& zi : ctx.perp_basis())
    for (const auto& zj : ctx.perp_basis()) basis.push_back(outer(b, zi, zj));
  return basis;
}

std::vector<Endo> odd_basis(const GradedContext& ctx) {
  const auto& b = ctx.form();
  std::vector<Endo> basis;
  for (const auto& z : ctx.perp_basis()) basis.push_back(outer(b, ctx.anchor(), z));
  for (const auto& z : ctx.perp_basis()) basis.push_back(outer(b, z, ctx.anchor()));
  return basis;
}

Rational weight(const GradedContext& ctx, const Endo& phi) {
  if (!is_even(ctx, phi)) throw Error(ErrorCode::NotEven, "weight is only defined on the even part");
  return eval(ctx.form(), ctx.anchor(), phi(ctx.anchor())) / ctx.wnorm();
}

namespace {

// (x - (B(w,x)/B(w,w)) w) / B(w,w): the component of x orthogonal to w, scaled.
QVector perp_part_scaled(const GradedContext& ctx, const QVector& x) {
  const auto& w = ctx.anchor();
  Rational coeff = eval(ctx.form(), w, x) / ctx.wnorm();
  QVector r = x - coeff * w;
  r *= 1 / ctx.wnorm();
  return r;
}

}  // namespace

std::pair<QVector, QVector> odd_components(const GradedContext& ctx, const Endo& odd) {
  check(ctx, odd);
  const auto& w = ctx.anchor();
  QVector b = perp_part_scaled(ctx, odd(w));
  QVector a = perp_part_scaled(ctx, adjoint(ctx.form(), odd)(w));
  return {std::move(a), std::move(b)};
}

std::pair<Endo, Endo> split(const GradedContext& ctx, const Endo& phi) {
  check(ctx, phi);
  const auto& form = ctx.form();
  const auto& w = ctx.anchor();
  QVector b = perp_part_scaled(ctx, phi(w));
  QVector a = perp_part_scaled(ctx, adjoint(form, phi)(w));
  Endo odd = outer(form, w, a) + outer(form, b, w);
  Endo even = phi - odd;
  return {std::move(even), std::move(odd)};
}

GradedDecomposition full_decomposition(const GradedContext& ctx, const Endo& phi) {
  check(ctx, phi);
  const auto& form = ctx.form();
  const auto& w = ctx.anchor();
  QVector b = perp_part_scaled(ctx, phi(w));
  QVector a = perp_part_scaled(ctx, adjoint(form, phi)(w));
  Endo odd = outer(form, w, a) + outer(form, b, w);
  Endo even = phi - odd;
  Rational wt = eval(form, w, even(w)) / ctx.wnorm();
  Endo phi0 = even - (wt / ctx.wnorm()) * outer(form, w, w);
  return {std::move(phi0), std::move(wt), std::move(a), std::move(b)};
}

Endo reassemble(const GradedContext& ctx, const GradedDecomposition& d) {
  const auto& form = ctx.form();
  const auto& w = ctx.anchor();
  return d.phi0 + (d.wt / ctx.wnorm()) * outer(form, w, w) + outer(form, w, d.a) + outer(form, d.b, w);
}

Transported conjugate_transport(const GradedContext& ctx, const Endo& phi, const Endo& psi) {
  check(ctx, phi);
  check(ctx, psi);
  Endo phi_inv(mat_inverse(phi.mat));
  GramForm moved = pullback(ctx.form(), phi);
  GradedContext next(std::move(moved), phi_inv(ctx.anchor()));
  return {std::move(next), phi_inv * psi * phi};
}

}  // namespace superlat
