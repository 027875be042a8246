#pragma once

// Exact linear algebra over Q and the integer-lattice primitives the search
// code relies on (kernel sublattices, Hermite normal form, unimodularity).

#include <optional>
#include <vector>

#include "superlat/rational.hpp"

namespace superlat {

QMatrix transpose(const QMatrix& a);
Rational trace(const QMatrix& a);

/// Exact determinant by fraction-keeping Gaussian elimination.
Rational determinant(const QMatrix& a);

/// Throws SingularMatrix when det(a) = 0, DimensionMismatch when not square.
QMatrix mat_inverse(const QMatrix& a);

/// Solves a x = b for square invertible a.
QVector solve(const QMatrix& a, const QVector& b);

/// Rank of the matrix whose rows are `vectors`.
std::size_t rank_of(const std::vector<QVector>& vectors);
std::size_t rank_of(const QMatrix& a);

/// Basis of {x : a x = 0} over Q, read off the reduced row echelon form
/// (one vector per free column, free columns in increasing order).
std::vector<QVector> nullspace(const QMatrix& a);

/// Integer row-style Hermite normal form of the rows of `a` (all entries
/// integral): upper echelon, positive pivots, entries above each pivot
/// reduced into [0, pivot). Zero rows are dropped.
QMatrix hermite_normal_form(const QMatrix& a);

/// Z-basis of the kernel sublattice {v in Z^n : f . v = 0}.
///
/// f is scaled to a primitive integer vector first. The n-1 returned vectors
/// are the rows of the Hermite normal form of any kernel basis, so the output
/// is unique: the i-th vector has its leading nonzero entry (positive) in a
/// strictly later coordinate than the (i-1)-th.
///
/// Throws ZeroFunctional when f = 0.
std::vector<QVector> integer_kernel_basis(const QVector& f);

/// Multiplies by the lcm of denominators and divides by the gcd of numerators.
/// Returns the zero vector unchanged.
QVector primitive_integer_vector(const QVector& f);

bool is_integral(const QVector& v);
bool is_integral(const QMatrix& a);
/// Integral square matrix with determinant +1 or -1.
bool is_unimodular(const QMatrix& a);

/// Leading principal minors det(a[0..k, 0..k]) for k = 1..n.
std::vector<Rational> leading_principal_minors(const QMatrix& a);

bool is_symmetric(const QMatrix& a);

}  // namespace superlat
