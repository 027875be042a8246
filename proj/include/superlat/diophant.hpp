#pragma once

// Integer points on positive-definite quadric surfaces, and the classical
// two- and three-squares criteria.
//
// Three enumerators share one contract (complete solution set, lexicographic
// order):
//   vectors_of_norm         OpenMP kernel, top coordinate split across workers
//   vectors_of_norm_serial  the same recursion on one thread; reference for tests
//   vectors_of_norm_box     naive box scan; independent oracle, desk scale only

#include <vector>

#include "superlat/linalg.hpp"

namespace superlat {

/// Symmetric positive-definite Gram matrix with a cached exact LDL^T factor:
///   x^T Q x = sum_k d_k (x_k + sum_{j>k} l_{jk} x_j)^2.
class PosDefForm {
 public:
  /// Throws NotPositiveDefinite unless all leading principal minors are > 0.
  explicit PosDefForm(QMatrix gram);

  const QMatrix& gram() const noexcept { return gram_; }
  std::size_t dim() const noexcept { return gram_.rows(); }
  /// Unit lower-triangular factor; only entries below the diagonal are used.
  const QMatrix& ldl_lower() const noexcept { return lower_; }
  const std::vector<Rational>& ldl_diagonal() const noexcept { return diag_; }

  Rational norm(const QVector& x) const;

  /// Per-coordinate bound |x_i| <= floor(sqrt(c (Q^{-1})_{ii})) valid for all
  /// x with x^T Q x <= c.
  std::vector<Integer> coordinate_bounds(const Integer& c) const;

 private:
  QMatrix gram_;
  QMatrix lower_;
  std::vector<Rational> diag_;
  QMatrix inverse_;
};

/// Orthogonal sum [a] + G as a PosDefForm.
PosDefForm prepend_scalar(const Rational& a, const QMatrix& g);

struct NormSolutionSet {
  Integer target;
  /// Lexicographically sorted. If `canonicalized`, only the representative of
  /// each +-pair whose first nonzero coordinate is positive is kept.
  std::vector<QVector> solutions;
  bool canonicalized = false;
  std::size_t raw_count = 0;
  std::size_t canonical_count = 0;
};

struct EnumOptions {
  bool canonicalize = false;
  int threads = 0;  // 0: resolve_threads() default
};

/// All integer x with x^T Q x = c. Throws NegativeTarget for c < 0.
NormSolutionSet vectors_of_norm(const PosDefForm& q, const Integer& c, EnumOptions opts = {});
NormSolutionSet vectors_of_norm_serial(const PosDefForm& q, const Integer& c, bool canonicalize = false);
/// Box scan with |x_i| <= bounds[i]; complete when bounds come from coordinate_bounds.
std::vector<QVector> vectors_of_norm_box(const PosDefForm& q, const Integer& c,
                                         const std::vector<Integer>& bounds);

/// First nonzero coordinate positive (the zero vector counts as canonical).
bool is_canonical_sign(const QVector& v);
std::vector<QVector> canonical_representatives(const std::vector<QVector>& vs);

/// N = x^2 + y^2 solvable: every prime 3 mod 4 divides N to an even power.
bool two_squares_representable(const Integer& n);
/// N = x^2 + y^2 + z^2 solvable: N is not of the form 4^t (8k + 7).
bool three_squares_representable(const Integer& n);

}  // namespace superlat
