#pragma once

// Deciding B' = M^T B M over GL_n(Z) for integral positive-definite B.
//
// Fix an anchor w in Z^n and complete it with z0_1..z0_{n-1} to a Q-basis.
// Writing k = B(w,w) and z_i = z0_i - (B(z0_i,w)/k) w, any isometry phi
// yields integers s = B(w, phi w), t_i = B(a~, z0_i) and lattice vectors
// b~, c_i in Z^n orthogonal to w with
//
//   k^2 B'(w,w)     = k s^2 + B(b~,b~)                      (eq1)
//   k^3 B'(w,z_i)   = k s t_i + B(b~, c_i)                  (eq2)
//   k^4 B'(z_i,z_j) = B(c_i, c_j) + k t_i t_j               (eq3, i = j; cross terms i < j)
//
// where a~ = k^2 a lies in the dual lattice. Every solution of the system
// determines phi on the basis {w, z_i}:
//
//   phi(w)   = (s w + b~) / k
//   phi(z_i) = (c_i + t_i w) / k^2
//
// eq1 and eq3 are norm equations for the same positive-definite form
// [k] + (Gram of Z^n meet {w}^perp), so both are finite enumerations.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "superlat/diophant.hpp"
#include "superlat/forms.hpp"

namespace superlat {

struct IsometryProblem {
  GramForm b;
  GramForm bp;
  QVector w;
  std::vector<QVector> z0_basis;
  bool determinant_mismatch = false;
};

/// Validates integral symmetric Gram matrices and an integral nonzero w with
/// B(w,w) != 0. An empty `z0` selects default_z0_basis(w).
/// Throws InvalidForm, NonIntegralForm, ZeroVector, IsotropicAnchor, DegenerateZ0.
IsometryProblem make_problem(QMatrix b, QMatrix bp, QVector w, std::vector<QVector> z0 = {});

/// The n-1 standard basis vectors other than e_i, where i is the first index
/// maximizing |w_i|.
std::vector<QVector> default_z0_basis(const QVector& w);

/// e_i with the smallest diagonal entry B_ii (first on ties). A hint only;
/// nothing selects the anchor automatically.
QVector suggest_anchor(const GramForm& b);

struct Eq1Solution {
  Integer s;
  QVector btilde;
};

struct Eq3Solution {
  Integer t;
  QVector c;
};

/// Constants and the shared norm form derived from a problem.
struct IsometryEquations {
  QMatrix gram;  // B, for pairing lattice vectors
  Integer wnorm;
  std::vector<QVector> kernel;  // Z-basis of Z^n meet {w}^perp
  PosDefForm norm_form;         // [wnorm] + kernel Gram
  Integer eq1_target;
  std::vector<QVector> z;
  std::vector<Integer> eq2_target;
  std::vector<Integer> eq3_target;
  std::vector<std::vector<Integer>> cross_target;  // [i][j], symmetric
  QMatrix basis_inverse;                            // inverse of [w | z_1 .. z_{n-1}]
  QMatrix pairing_inverse;                          // recovers a~ from its pairings
};

/// Throws Unsupported when B is not positive definite.
IsometryEquations derive_equations(const IsometryProblem& p);

struct Eq1Result {
  std::vector<Eq1Solution> solutions;  // sign-complete, lexicographic in (s, kernel coords)
  std::size_t raw_count = 0;
  std::size_t canonical_count = 0;
};

Eq1Result solve_eq1(const IsometryEquations& eqs, int threads = 0);
Eq1Result solve_eq1(const IsometryProblem& p);

/// Solutions (t, c) of eq3 for the i-th z0 of the problem.
std::vector<Eq3Solution> solve_eq3(const IsometryEquations& eqs, std::size_t i, int threads = 0);
/// Same for an arbitrary z0 in Z^n; throws DegenerateZ0 when z0 is a multiple of w.
std::vector<Eq3Solution> solve_eq3_per_z0(const IsometryProblem& p, const QVector& z0);

bool satisfies_eq2(const IsometryEquations& eqs, const Eq1Solution& e1, std::size_t i, const Eq3Solution& e3);
bool cross_consistent(const IsometryEquations& eqs, std::size_t i, const Eq3Solution& ei, std::size_t j,
                      const Eq3Solution& ej);
/// (wnorm^3 B'(w,z) - wnorm s t)^2 <= B(b~,b~) (wnorm^4 B'(z,z) - wnorm t^2):
/// Cauchy-Schwarz for B(b~, c), which every eq2 solution satisfies.
bool cauchy_schwarz_admissible(const IsometryEquations& eqs, const Eq1Solution& e1, std::size_t i,
                               const Integer& t);

/// One index into per_z0[i] for every z0.
using JointTuple = std::vector<std::size_t>;

struct FilterStats {
  std::size_t cs_pruned = 0;  // eq3 solutions skipped by the Cauchy-Schwarz test
};

/// Every joint choice of eq3 solutions compatible with e1 through eq2 and the
/// cross terms, in lexicographic index order.
std::vector<JointTuple> filter_eq2(const IsometryEquations& eqs, const Eq1Solution& e1,
                                   const std::vector<std::vector<Eq3Solution>>& per_z0, bool cs_prune = false,
                                   FilterStats* stats = nullptr);

struct Provenance {
  Integer s;
  QVector btilde;
  QVector atilde;
  std::vector<Integer> t;
  std::vector<QVector> c;
};

struct CandidateIsometry {
  QMatrix m;
  bool integral = false;
  Provenance provenance;
};

enum class RejectReason { None, DualMembership, Verification };

/// Rebuilds phi from a surviving tuple. Empty when a~ is not in the dual
/// lattice or M^T B M != B' (the latter cannot happen for a true survivor).
std::optional<CandidateIsometry> reconstruct(const IsometryProblem& p, const IsometryEquations& eqs,
                                             const Eq1Solution& e1, const std::vector<Eq3Solution>& choice,
                                             RejectReason* why = nullptr);

enum class Verdict {
  IsometricWitness,
  NoIntegralIsometry,
  ObstructionEq1,
  ObstructionDeterminant,
  ObstructionTwoSquares,
  ObstructionThreeSquares,
  Inconclusive,
};

std::string to_string(Verdict v);
/// Throws ParseError on an unknown name.
Verdict verdict_from_string(const std::string& s);

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<CandidateIsometry> witness;
  std::string equation;                        // the equation or criterion the verdict rests on
  std::map<std::string, std::string> constants;  // its evaluated constants, exact
};

struct SearchOptions {
  bool first_witness = false;  // stop at the first integral isometry
  bool integral_only = false;  // drop rational candidates from the output
  bool cs_prune = false;
  bool canonical_only = false;  // keep one representative per class, see is_canonical_isometry
  int threads = 0;
};

struct SearchStats {
  std::size_t eq1_raw = 0;
  std::size_t eq1_canonical = 0;
  std::vector<std::size_t> eq3_raw;
  std::vector<std::size_t> eq3_canonical;
  /// (eq1 solution, z0, eq3 solution) triples satisfying eq2, summed over z0;
  /// `_canonical` restricts to canonical eq1 solutions.
  std::size_t eq2_pairs = 0;
  std::size_t eq2_pairs_canonical = 0;
  std::size_t joint_survivors = 0;
  std::size_t joint_survivors_canonical = 0;
  std::size_t cs_pruned = 0;
  std::size_t dual_rejected = 0;
  std::size_t verify_rejected = 0;
  std::size_t rational_candidates = 0;
  std::size_t integral_candidates = 0;
  std::size_t integral_canonical = 0;
};

struct SearchResult {
  std::vector<CandidateIsometry> candidates;
  Certificate certificate;
  SearchStats stats;
};

/// The full pipeline. Candidates come out ordered by eq1 solution, then by
/// joint tuple, independent of the thread count.
/// Throws Unsupported when B is not positive definite.
SearchResult find_isometries(const IsometryProblem& p, SearchOptions opts = {});

/// Representative of M modulo orientation and sign: det M = +1, and for even
/// n (where -M also has det +1) the first nonzero entry of M, row-major, is
/// positive. Picks one matrix out of every four when n is even, two when odd.
bool is_canonical_isometry(const QMatrix& m);
std::vector<QMatrix> canonical_isometries(const std::vector<QMatrix>& ms);

/// All integral M with M^T B M = B', column by column. Column candidates
/// come from vectors_of_norm (column_mode) or from a box scan bounded by
/// `bound` (or by the exact coordinate bounds of B when bound < 0).
/// Output sorted. Throws NotPositiveDefinite, NonIntegralForm.
std::vector<QMatrix> brute_force_isometries(const GramForm& b, const GramForm& bp, bool column_mode = true,
                                            long bound = -1, int threads = 0);

/// Re-checks a verdict without repeating the search: multiplies out the
/// witness, or re-runs only the enumeration the verdict names.
bool verify_certificate(const Certificate& cert, const IsometryProblem& p);

enum class Family { TwoSquaresRank2, ThreeSquaresRank3 };

/// Rank 2: B = diag(m^2, n^2), B' = [[alpha, beta], [beta, gamma]], w = e1,
///   requires alpha gamma - beta^2 = (m n)^2.
/// Rank 3: B = [[2m^2+1, -1, 0], [-1, 1, 0], [0, 0, 2m^2]], w = (1,1,1),
///   B' = diag(4m^3, m, 1), or [[alpha, beta, 0], [beta, gamma, 0], [0, 0, 1]]
///   when alpha/beta/gamma are given (then alpha gamma - beta^2 = 4 m^4).
struct FamilyParams {
  Integer m;
  Integer n;
  std::optional<Integer> alpha;
  std::optional<Integer> beta;
  std::optional<Integer> gamma;
};

/// Throws BadFamilyParams.
IsometryProblem family_problem(Family kind, const FamilyParams& params);

/// Applies the two- or three-squares criterion to eq1 of the family. The
/// obstruction is one-sided: a representable value yields Inconclusive.
Certificate family_obstruction(Family kind, const FamilyParams& params);

}  // namespace superlat
