#pragma once

// The Z/2-grading End(V) = E0(B,w) + E1(B,w) induced by a nondegenerate
// symmetric form B and an anisotropic anchor vector w.
//
//   E0: B(u, phi w) = B(w, phi u) = 0 for all u orthogonal to w
//       (equivalently phi w and phi^dagger w are multiples of w)
//   E1: B(u, phi v) = 0 for all u, v orthogonal to w, and B(w, phi w) = 0
//       (equivalently phi = phi_{B,w,a} + phi_{B,b,w} with a, b orthogonal to w)
//
// Products add degrees mod 2, the two parts are orthogonal for the trace form
// and have dimensions n^2 - 2n + 2 and 2n - 2.

#include <utility>
#include <vector>

#include "superlat/forms.hpp"

namespace superlat {

/// The data (B, w) with B(w, w) != 0 and a fixed rational basis of {w}^perp.
class GradedContext {
 public:
  /// Throws ZeroVector for w = 0 and IsotropicAnchor for B(w, w) = 0.
  GradedContext(GramForm b, QVector w);

  const GramForm& form() const noexcept { return b_; }
  const QVector& anchor() const noexcept { return w_; }
  const Rational& wnorm() const noexcept { return wnorm_; }
  const std::vector<QVector>& perp_basis() const noexcept { return perp_; }
  std::size_t dim() const noexcept { return w_.size(); }

 private:
  GramForm b_;
  QVector w_;
  Rational wnorm_;
  std::vector<QVector> perp_;
};

/// phi = phi0 + (wt / B(w,w)) phi_{B,w,w} + phi_{B,w,a} + phi_{B,b,w}
/// with phi0 even of weight 0 and a, b orthogonal to w.
struct GradedDecomposition {
  Endo phi0;
  Rational wt;
  QVector a;
  QVector b;
};

bool is_even(const GradedContext& ctx, const Endo& phi);
bool is_odd(const GradedContext& ctx, const Endo& phi);

/// {phi_{B,w,w}} + {phi_{B,z_i,z_j}} over the context's perp basis.
std::vector<Endo> even_basis(const GradedContext& ctx);
/// {phi_{B,w,z_i}} + {phi_{B,z_i,w}}.
std::vector<Endo> odd_basis(const GradedContext& ctx);

/// wt(phi) = B(w, phi w) / B(w, w). Defined on E0 only; throws NotEven otherwise.
Rational weight(const GradedContext& ctx, const Endo& phi);

/// Unique (even, odd) with even + odd = phi.
std::pair<Endo, Endo> split(const GradedContext& ctx, const Endo& phi);

/// The vectors (a, b) of an odd endomorphism phi_{B,w,a} + phi_{B,b,w}.
/// Only meaningful for odd input.
std::pair<QVector, QVector> odd_components(const GradedContext& ctx, const Endo& odd);

GradedDecomposition full_decomposition(const GradedContext& ctx, const Endo& phi);

/// Inverse of full_decomposition.
Endo reassemble(const GradedContext& ctx, const GradedDecomposition& d);

struct Transported {
  GradedContext ctx;
  Endo psi;
};

/// Conjugation by an invertible phi carries the (B, w) grading onto the
/// (B_phi, phi^{-1} w) grading: psi -> phi^{-1} psi phi. Throws SingularMatrix.
Transported conjugate_transport(const GradedContext& ctx, const Endo& phi, const Endo& psi);

}  // namespace superlat
