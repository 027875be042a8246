#include "superlat/isosearch.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>

#include "superlat/parallel.hpp"

namespace superlat {

// ------------------------------------------------------------ problem setup

std::vector<QVector> default_z0_basis(const QVector& w) {
  const std::size_t n = w.size();
  std::size_t drop = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (abs(w[i]) > abs(w[drop])) drop = i;
  std::vector<QVector> basis;
  for (std::size_t i = 0; i < n; ++i)
    if (i != drop) basis.push_back(QVector::unit(n, i));
  return basis;
}

QVector suggest_anchor(const GramForm& b) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < b.dim(); ++i)
    if (b.gram()(i, i) < b.gram()(best, best)) best = i;
  return QVector::unit(b.dim(), best);
}

IsometryProblem make_problem(QMatrix b, QMatrix bp, QVector w, std::vector<QVector> z0) {
  GramForm form(std::move(b));
  GramForm target(std::move(bp));
  if (form.dim() != target.dim()) throw Error(ErrorCode::DimensionMismatch, "B and B' differ in size");
  if (!form.integral() || !target.integral()) {
    throw Error(ErrorCode::NonIntegralForm, "Z^n must be integral for both forms");
  }
  const std::size_t n = form.dim();
  if (n < 2) throw Error(ErrorCode::DimensionMismatch, "dimension must be at least 2");
  if (w.size() != n) throw Error(ErrorCode::DimensionMismatch, "w has the wrong length");
  if (w.is_zero()) throw Error(ErrorCode::ZeroVector, "w must be nonzero");
  if (!is_integral(w)) throw Error(ErrorCode::NonIntegralForm, "w must lie in Z^n");
  if (eval(form, w, w) == 0) throw Error(ErrorCode::IsotropicAnchor, "B(w, w) = 0");
  if (z0.empty()) z0 = default_z0_basis(w);
  if (z0.size() != n - 1) throw Error(ErrorCode::DegenerateZ0, "need exactly n-1 vectors z0");
  std::vector<QVector> all{w};
  for (const auto& z : z0) {
    if (z.size() != n) throw Error(ErrorCode::DimensionMismatch, "z0 has the wrong length");
    if (!is_integral(z)) throw Error(ErrorCode::NonIntegralForm, "z0 must lie in Z^n");
    all.push_back(z);
  }
  if (rank_of(all) != n) throw Error(ErrorCode::DegenerateZ0, "w and z0 do not span Q^n");
  IsometryProblem p{std::move(form), std::move(target), std::move(w), std::move(z0), false};
  p.determinant_mismatch = p.b.det() != p.bp.det();
  return p;
}

namespace {

void require_definite(const IsometryProblem& p) {
  if (!p.b.positive_definite()) {
    throw Error(ErrorCode::Unsupported, "search needs a positive-definite B (enumeration would not terminate)");
  }
}

QVector kernel_combination(const std::vector<QVector>& kernel, const QVector& coords, std::size_t offset) {
  QVector v(kernel.front().size());
  for (std::size_t k = 0; k < kernel.size(); ++k) {
    const Rational& y = coords[k + offset];
    if (y == 0) continue;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += y * kernel[k][i];
  }
  return v;
}

// (leading coordinate, kernel combination of the rest) for each norm solution
template <class Out, class Make>
std::vector<Out> lift_solutions(const IsometryEquations& eqs, const std::vector<QVector>& sols, Make make) {
  std::vector<Out> out;
  out.reserve(sols.size());
  for (const auto& x : sols) out.push_back(make(x[0].get_num(), kernel_combination(eqs.kernel, x, 1)));
  return out;
}

NormSolutionSet norm_solutions(const IsometryEquations& eqs, const Integer& target, int threads) {
  if (target < 0) {
    NormSolutionSet empty;
    empty.target = target;
    return empty;
  }
  return vectors_of_norm(eqs.norm_form, target, EnumOptions{false, threads});
}

}  // namespace

IsometryEquations derive_equations(const IsometryProblem& p) {
  require_definite(p);
  const auto& b = p.b;
  const auto& bp = p.bp;
  const auto& w = p.w;
  const std::size_t n = b.dim();

  Rational k = eval(b, w, w);
  Integer wnorm = k.get_num();
  std::vector<QVector> kernel = ortho_complement_lattice_basis(b, w);
  QMatrix kmat = QMatrix::from_columns(kernel);
  QMatrix kgram = transpose(kmat) * b.gram() * kmat;

  std::vector<QVector> z;
  for (const auto& z0 : p.z0_basis) {
    QVector zi = z0 - (eval(b, z0, w) / k) * w;
    if (zi.is_zero()) throw Error(ErrorCode::DegenerateZ0, "z0 is a multiple of w");
    z.push_back(std::move(zi));
  }

  const Rational k2 = k * k;
  const Rational k3 = k2 * k;
  const Rational k4 = k2 * k2;
  std::vector<Integer> eq2(n - 1), eq3(n - 1);
  std::vector<std::vector<Integer>> cross(n - 1, std::vector<Integer>(n - 1));
  for (std::size_t i = 0; i < n - 1; ++i) {
    eq2[i] = to_integer(k3 * eval(bp, w, z[i]), "eq2 constant");
    for (std::size_t j = 0; j < n - 1; ++j) cross[i][j] = to_integer(k4 * eval(bp, z[i], z[j]), "eq3 constant");
    eq3[i] = cross[i][i];
  }

  std::vector<QVector> cols{w};
  cols.insert(cols.end(), z.begin(), z.end());
  QMatrix basis_inverse = mat_inverse(QMatrix::from_columns(cols));

  std::vector<QVector> pair_rows{b.gram() * w};
  for (const auto& z0 : p.z0_basis) pair_rows.push_back(b.gram() * z0);
  QMatrix pairing_inverse = mat_inverse(QMatrix::from_rows(pair_rows));

  Integer eq1 = to_integer(k2 * eval(bp, w, w), "eq1 constant");
  return IsometryEquations{b.gram(),
                           wnorm,
                           std::move(kernel),
                           prepend_scalar(k, kgram),
                           eq1,
                           std::move(z),
                           std::move(eq2),
                           std::move(eq3),
                           std::move(cross),
                           std::move(basis_inverse),
                           std::move(pairing_inverse)};
}

Eq1Result solve_eq1(const IsometryEquations& eqs, int threads) {
  NormSolutionSet set = norm_solutions(eqs, eqs.eq1_target, threads);
  Eq1Result r;
  r.raw_count = set.raw_count;
  r.canonical_count = set.canonical_count;
  r.solutions = lift_solutions<Eq1Solution>(eqs, set.solutions, [](Integer s, QVector v) {
    return Eq1Solution{std::move(s), std::move(v)};
  });
  return r;
}

Eq1Result solve_eq1(const IsometryProblem& p) { return solve_eq1(derive_equations(p)); }

std::vector<Eq3Solution> solve_eq3(const IsometryEquations& eqs, std::size_t i, int threads) {
  NormSolutionSet set = norm_solutions(eqs, eqs.eq3_target.at(i), threads);
  return lift_solutions<Eq3Solution>(eqs, set.solutions, [](Integer t, QVector v) {
    return Eq3Solution{std::move(t), std::move(v)};
  });
}

std::vector<Eq3Solution> solve_eq3_per_z0(const IsometryProblem& p, const QVector& z0) {
  if (z0.size() != p.w.size() || !is_integral(z0)) {
    throw Error(ErrorCode::DegenerateZ0, "z0 must be an integral vector of length n");
  }
  if (rank_of(std::vector<QVector>{p.w, z0}) < 2) throw Error(ErrorCode::DegenerateZ0, "z0 is a multiple of w");
  IsometryEquations eqs = derive_equations(p);
  const Rational k(eqs.wnorm);
  QVector z = z0 - (eval(p.b, z0, p.w) / k) * p.w;
  Integer target = to_integer(k * k * k * k * eval(p.bp, z, z), "eq3 constant");
  NormSolutionSet set = norm_solutions(eqs, target, 0);
  return lift_solutions<Eq3Solution>(eqs, set.solutions, [](Integer t, QVector v) {
    return Eq3Solution{std::move(t), std::move(v)};
  });
}

// ------------------------------------------------------------ filtering

namespace {

Rational pairing(const QVector& x, const QVector& gy) { return dot(x, gy); }

// eq3 solution together with G c, so every pairing in the inner loop is a dot product
struct Paired {
  const Eq3Solution* sol;
  QVector gc;
};

std::vector<std::vector<Paired>> pair_up(const QMatrix& gram, const std::vector<std::vector<Eq3Solution>>& per_z0) {
  std::vector<std::vector<Paired>> out(per_z0.size());
  for (std::size_t i = 0; i < per_z0.size(); ++i) {
    out[i].reserve(per_z0[i].size());
    for (const auto& s : per_z0[i]) out[i].push_back(Paired{&s, gram * s.c});
  }
  return out;
}

// Backtracking over z0 indices. Level i keeps the eq3 solutions that satisfy
// eq2 against the fixed eq1 solution and the cross terms against levels < i.
class JointSearch {
 public:
  using Visit = std::function<bool(const JointTuple&)>;

  JointSearch(const IsometryEquations& eqs, const Eq1Solution& e1, const std::vector<std::vector<Paired>>& per_z0,
              bool cs_prune)
      : eqs_(eqs), e1_(e1), per_z0_(per_z0), cs_prune_(cs_prune), chosen_(per_z0.size()), k_(eqs.wnorm) {}

  // Calls visit on each joint tuple in lexicographic order; stops early when
  // visit returns true. Returns whether it stopped early.
  bool run(const Visit& visit) { return extend(0, visit); }

  std::size_t cs_pruned() const { return cs_pruned_; }

 private:
  bool extend(std::size_t i, const Visit& visit) {
    if (i == per_z0_.size()) return visit(chosen_);
    const auto& cands = per_z0_[i];
    const Rational target2(eqs_.eq2_target[i]);
    std::size_t idx = 0;
    while (idx < cands.size()) {
      // norm solutions are sorted with t leading, so equal t form a contiguous run
      const Integer& t = cands[idx].sol->t;
      std::size_t run_end = idx;
      while (run_end < cands.size() && cands[run_end].sol->t == t) ++run_end;
      if (cs_prune_ && !cauchy_schwarz_admissible(eqs_, e1_, i, t)) {
        cs_pruned_ += run_end - idx;
        idx = run_end;
        continue;
      }
      const Rational needed = target2 - k_ * Rational(e1_.s * t);
      for (; idx < run_end; ++idx) {
        const Paired& cand = cands[idx];
        if (pairing(e1_.btilde, cand.gc) != needed) continue;
        if (!consistent_with_previous(i, cand)) continue;
        chosen_[i] = idx;
        if (extend(i + 1, visit)) return true;
      }
    }
    return false;
  }

  bool consistent_with_previous(std::size_t i, const Paired& cand) const {
    for (std::size_t j = 0; j < i; ++j) {
      const Paired& prev = per_z0_[j][chosen_[j]];
      Rational lhs = pairing(prev.sol->c, cand.gc) + k_ * Rational(prev.sol->t * cand.sol->t);
      if (lhs != Rational(eqs_.cross_target[i][j])) return false;
    }
    return true;
  }

  const IsometryEquations& eqs_;
  const Eq1Solution& e1_;
  const std::vector<std::vector<Paired>>& per_z0_;
  bool cs_prune_;
  JointTuple chosen_;
  Rational k_;
  std::size_t cs_pruned_ = 0;
};

bool eq1_canonical(const Eq1Solution& e1) {
  if (e1.s != 0) return e1.s > 0;
  return is_canonical_sign(e1.btilde);
}

bool eq3_canonical(const Eq3Solution& e3) {
  if (e3.t != 0) return e3.t > 0;
  return is_canonical_sign(e3.c);
}

}  // namespace

bool satisfies_eq2(const IsometryEquations& eqs, const Eq1Solution& e1, std::size_t i, const Eq3Solution& e3) {
  Rational rhs = Rational(eqs.wnorm * e1.s * e3.t) + pairing(e1.btilde, eqs.gram * e3.c);
  return rhs == Rational(eqs.eq2_target.at(i));
}

bool cross_consistent(const IsometryEquations& eqs, std::size_t i, const Eq3Solution& ei, std::size_t j,
                      const Eq3Solution& ej) {
  Rational rhs = pairing(ei.c, eqs.gram * ej.c) + Rational(eqs.wnorm * ei.t * ej.t);
  return rhs == Rational(eqs.cross_target.at(i).at(j));
}

bool cauchy_schwarz_admissible(const IsometryEquations& eqs, const Eq1Solution& e1, std::size_t i,
                               const Integer& t) {
  const Integer& k = eqs.wnorm;
  Integer lhs = eqs.eq2_target.at(i) - k * e1.s * t;
  Integer bb = eqs.eq1_target - k * e1.s * e1.s;
  Integer cc = eqs.eq3_target.at(i) - k * t * t;
  if (cc < 0) return false;
  return lhs * lhs <= bb * cc;
}

std::vector<JointTuple> filter_eq2(const IsometryEquations& eqs, const Eq1Solution& e1,
                                   const std::vector<std::vector<Eq3Solution>>& per_z0, bool cs_prune,
                                   FilterStats* stats) {
  auto paired = pair_up(eqs.gram, per_z0);
  JointSearch search(eqs, e1, paired, cs_prune);
  std::vector<JointTuple> out;
  search.run([&](const JointTuple& tuple) {
    out.push_back(tuple);
    return false;
  });
  if (stats) stats->cs_pruned += search.cs_pruned();
  return out;
}

// ------------------------------------------------------------ reconstruction

std::optional<CandidateIsometry> reconstruct(const IsometryProblem& p, const IsometryEquations& eqs,
                                             const Eq1Solution& e1, const std::vector<Eq3Solution>& choice,
                                             RejectReason* why) {
  const std::size_t n = p.w.size();
  if (choice.size() != n - 1) throw Error(ErrorCode::DimensionMismatch, "one eq3 solution per z0");
  auto reject = [&](RejectReason r) -> std::optional<CandidateIsometry> {
    if (why) *why = r;
    return std::nullopt;
  };

  QVector pairings(n);
  for (std::size_t i = 0; i < n - 1; ++i) pairings[i + 1] = choice[i].t;
  QVector atilde = eqs.pairing_inverse * pairings;
  if (!dual_membership(p.b, atilde)) return reject(RejectReason::DualMembership);

  const Rational k(eqs.wnorm);
  QMatrix images(n, n);
  images.set_column(0, (1 / k) * (Rational(e1.s) * p.w + e1.btilde));
  for (std::size_t i = 0; i < n - 1; ++i) {
    images.set_column(i + 1, (1 / (k * k)) * (choice[i].c + Rational(choice[i].t) * p.w));
  }
  QMatrix m = images * eqs.basis_inverse;
  if (transpose(m) * p.b.gram() * m != p.bp.gram()) return reject(RejectReason::Verification);

  Provenance prov{e1.s, e1.btilde, std::move(atilde), {}, {}};
  for (const auto& c : choice) {
    prov.t.push_back(c.t);
    prov.c.push_back(c.c);
  }
  if (why) *why = RejectReason::None;
  bool integral = is_unimodular(m);
  return CandidateIsometry{std::move(m), integral, std::move(prov)};
}

// ------------------------------------------------------------ verdicts

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::IsometricWitness: return "IsometricWitness";
    case Verdict::NoIntegralIsometry: return "NoIntegralIsometry";
    case Verdict::ObstructionEq1: return "ObstructionEq1";
    case Verdict::ObstructionDeterminant: return "ObstructionDeterminant";
    case Verdict::ObstructionTwoSquares: return "ObstructionTwoSquares";
    case Verdict::ObstructionThreeSquares: return "ObstructionThreeSquares";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::IsometricWitness, Verdict::NoIntegralIsometry, Verdict::ObstructionEq1,
                    Verdict::ObstructionDeterminant, Verdict::ObstructionTwoSquares,
                    Verdict::ObstructionThreeSquares, Verdict::Inconclusive}) {
    if (to_string(v) == s) return v;
  }
  throw Error(ErrorCode::ParseError, "unknown verdict '" + s + "'");
}

namespace {

const char* kEq1Text = "B(w,w)^2 B'(w,w) = B(w,w) s^2 + B(b~,b~)";

Certificate eq1_certificate(const IsometryProblem& p, const IsometryEquations& eqs) {
  Certificate cert;
  cert.verdict = Verdict::ObstructionEq1;
  cert.equation = kEq1Text;
  cert.constants["B(w,w)"] = eqs.wnorm.get_str();
  cert.constants["B'(w,w)"] = eval(p.bp, p.w, p.w).get_str();
  cert.constants["target"] = eqs.eq1_target.get_str();
  return cert;
}

struct Branch {
  std::vector<CandidateIsometry> candidates;
  std::size_t joint = 0;
  std::size_t dual_rejected = 0;
  std::size_t verify_rejected = 0;
  std::size_t cs_pruned = 0;
  bool has_witness = false;
};

}  // namespace

bool is_canonical_isometry(const QMatrix& m) {
  if (determinant(m) != 1) return false;
  if (m.rows() % 2 == 1) return true;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) return m(i, j) > 0;
  return false;
}

std::vector<QMatrix> canonical_isometries(const std::vector<QMatrix>& ms) {
  std::vector<QMatrix> out;
  for (const auto& m : ms)
    if (is_canonical_isometry(m)) out.push_back(m);
  return out;
}

SearchResult find_isometries(const IsometryProblem& p, SearchOptions opts) {
  SearchResult res;
  if (p.determinant_mismatch) {
    res.certificate.verdict = Verdict::ObstructionDeterminant;
    res.certificate.equation = "det B = det B'";
    res.certificate.constants["det B"] = p.b.det().get_str();
    res.certificate.constants["det B'"] = p.bp.det().get_str();
    return res;
  }
  const IsometryEquations eqs = derive_equations(p);
  const int threads = resolve_threads(opts.threads);
  const std::size_t nz = p.z0_basis.size();
  auto& st = res.stats;

  Eq1Result e1 = solve_eq1(eqs, threads);
  st.eq1_raw = e1.solutions.size();
  st.eq1_canonical = static_cast<std::size_t>(
      std::count_if(e1.solutions.begin(), e1.solutions.end(), [](const auto& s) { return eq1_canonical(s); }));
  if (e1.solutions.empty()) {
    res.certificate = eq1_certificate(p, eqs);
    return res;
  }

  std::vector<std::vector<Eq3Solution>> per_z0(nz);
  for (std::size_t i = 0; i < nz; ++i) {
    per_z0[i] = solve_eq3(eqs, i, threads);
    st.eq3_raw.push_back(per_z0[i].size());
    st.eq3_canonical.push_back(static_cast<std::size_t>(
        std::count_if(per_z0[i].begin(), per_z0[i].end(), [](const auto& s) { return eq3_canonical(s); })));
  }
  const auto paired = pair_up(eqs.gram, per_z0);

  for (const auto& sol : e1.solutions) {
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < nz; ++i)
      for (const auto& c : per_z0[i]) pairs += satisfies_eq2(eqs, sol, i, c) ? 1 : 0;
    st.eq2_pairs += pairs;
    if (eq1_canonical(sol)) st.eq2_pairs_canonical += pairs;
  }

  const std::size_t branches = e1.solutions.size();
  std::vector<Branch> results(branches);
  std::atomic<long> witness_branch{std::numeric_limits<long>::max()};

#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (long bi = 0; bi < static_cast<long>(branches); ++bi) {
    if (opts.first_witness && bi > witness_branch.load()) continue;
    const auto& sol = e1.solutions[static_cast<std::size_t>(bi)];
    Branch& out = results[static_cast<std::size_t>(bi)];
    JointSearch search(eqs, sol, paired, opts.cs_prune);
    std::vector<Eq3Solution> choice(nz);
    search.run([&](const JointTuple& tuple) {
      ++out.joint;
      for (std::size_t i = 0; i < nz; ++i) choice[i] = per_z0[i][tuple[i]];
      RejectReason why = RejectReason::None;
      auto cand = reconstruct(p, eqs, sol, choice, &why);
      if (!cand) {
        (why == RejectReason::DualMembership ? out.dual_rejected : out.verify_rejected)++;
        return false;
      }
      const bool integral = cand->integral;
      out.candidates.push_back(std::move(*cand));
      if (integral && opts.first_witness) {
        out.has_witness = true;
        long seen = witness_branch.load();
        while (bi < seen && !witness_branch.compare_exchange_weak(seen, bi)) {
        }
        return true;
      }
      return false;
    });
    out.cs_pruned = search.cs_pruned();
  }

  const long last = opts.first_witness ? witness_branch.load() : std::numeric_limits<long>::max();
  std::optional<CandidateIsometry> witness;
  for (std::size_t bi = 0; bi < branches && static_cast<long>(bi) <= last; ++bi) {
    Branch& br = results[bi];
    st.joint_survivors += br.joint;
    if (eq1_canonical(e1.solutions[bi])) st.joint_survivors_canonical += br.joint;
    st.dual_rejected += br.dual_rejected;
    st.verify_rejected += br.verify_rejected;
    st.cs_pruned += br.cs_pruned;
    for (auto& c : br.candidates) {
      ++st.rational_candidates;
      const bool canonical = is_canonical_isometry(c.m);
      if (c.integral) {
        ++st.integral_candidates;
        if (canonical) ++st.integral_canonical;
        if (!witness) witness = c;
      }
      if (opts.integral_only && !c.integral) continue;
      if (opts.canonical_only && !canonical) continue;
      res.candidates.push_back(std::move(c));
    }
  }

  if (witness) {
    res.certificate.verdict = Verdict::IsometricWitness;
    res.certificate.equation = "M^T B M = B'";
    res.certificate.witness = std::move(witness);
  } else {
    res.certificate.verdict = Verdict::NoIntegralIsometry;
    res.certificate.equation = "no surviving tuple reconstructs an integral M";
    res.certificate.constants["rational candidates"] = std::to_string(st.rational_candidates);
    res.certificate.constants["eq1 solutions"] = std::to_string(st.eq1_raw);
  }
  return res;
}

// ------------------------------------------------------------ brute force

std::vector<QMatrix> brute_force_isometries(const GramForm& b, const GramForm& bp, bool column_mode, long bound,
                                            int threads) {
  if (b.dim() != bp.dim()) throw Error(ErrorCode::DimensionMismatch, "B and B' differ in size");
  if (!b.positive_definite()) throw Error(ErrorCode::NotPositiveDefinite, "brute force needs a definite B");
  if (!b.integral() || !bp.integral()) throw Error(ErrorCode::NonIntegralForm, "integral Gram matrices required");
  const std::size_t n = b.dim();
  const PosDefForm q(b.gram());
  const int nthreads = resolve_threads(threads);

  std::vector<std::vector<QVector>> cols(n);
  std::vector<std::vector<QVector>> gcols(n);
  for (std::size_t j = 0; j < n; ++j) {
    Integer target = bp.gram()(j, j).get_num();
    if (target < 0) return {};
    if (column_mode) {
      cols[j] = vectors_of_norm(q, target, EnumOptions{false, nthreads}).solutions;
    } else {
      std::vector<Integer> bounds =
          bound >= 0 ? std::vector<Integer>(n, Integer(bound)) : q.coordinate_bounds(target);
      cols[j] = vectors_of_norm_box(q, target, bounds);
    }
    for (const auto& v : cols[j]) gcols[j].push_back(b.gram() * v);
  }

  std::vector<std::vector<QMatrix>> found(cols[0].size());
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 1)
  for (long first = 0; first < static_cast<long>(cols[0].size()); ++first) {
    std::vector<std::size_t> pick(n);
    pick[0] = static_cast<std::size_t>(first);
    auto& out = found[static_cast<std::size_t>(first)];
    std::function<void(std::size_t)> extend = [&](std::size_t j) {
      if (j == n) {
        QMatrix m(n, n);
        for (std::size_t c = 0; c < n; ++c) m.set_column(c, cols[c][pick[c]]);
        out.push_back(std::move(m));
        return;
      }
      for (std::size_t idx = 0; idx < cols[j].size(); ++idx) {
        bool ok = true;
        for (std::size_t i = 0; i < j && ok; ++i) ok = dot(cols[i][pick[i]], gcols[j][idx]) == bp.gram()(i, j);
        if (!ok) continue;
        pick[j] = idx;
        extend(j + 1);
      }
    };
    extend(1);
  }

  std::vector<QMatrix> all;
  for (auto& f : found)
    for (auto& m : f) all.push_back(std::move(m));
  std::sort(all.begin(), all.end());
  return all;
}

// ------------------------------------------------------------ certificates

namespace {

bool constant_matches(const Certificate& cert, const std::string& key, const Integer& value) {
  auto it = cert.constants.find(key);
  return it != cert.constants.end() && it->second == value.get_str();
}

bool eq1_is_empty(const IsometryEquations& eqs) { return solve_eq1(eqs).solutions.empty(); }

}  // namespace

bool verify_certificate(const Certificate& cert, const IsometryProblem& p) {
  try {
    switch (cert.verdict) {
      case Verdict::IsometricWitness: {
        if (!cert.witness) return false;
        const QMatrix& m = cert.witness->m;
        if (m.rows() != p.b.dim() || !m.is_square()) return false;
        return is_unimodular(m) && transpose(m) * p.b.gram() * m == p.bp.gram();
      }
      case Verdict::ObstructionDeterminant:
        return p.b.det() != p.bp.det();
      case Verdict::ObstructionEq1: {
        IsometryEquations eqs = derive_equations(p);
        return constant_matches(cert, "target", eqs.eq1_target) && eq1_is_empty(eqs);
      }
      case Verdict::NoIntegralIsometry: {
        if (p.determinant_mismatch) return false;
        SearchOptions opts;
        opts.first_witness = true;
        SearchResult again = find_isometries(p, opts);
        return again.certificate.verdict == Verdict::NoIntegralIsometry;
      }
      case Verdict::ObstructionTwoSquares:
      case Verdict::ObstructionThreeSquares:
      case Verdict::Inconclusive: {
        IsometryEquations eqs = derive_equations(p);
        if (!constant_matches(cert, "N", eqs.eq1_target)) return false;
        const bool three = cert.verdict == Verdict::ObstructionThreeSquares ||
                           (cert.verdict == Verdict::Inconclusive && cert.constants.count("squares") &&
                            cert.constants.at("squares") == "3");
        const bool representable =
            three ? three_squares_representable(eqs.eq1_target) : two_squares_representable(eqs.eq1_target);
        if (cert.verdict == Verdict::Inconclusive) return representable;
        return !representable && eq1_is_empty(eqs);
      }
    }
  } catch (const Error&) {
    return false;
  }
  return false;
}

// ------------------------------------------------------------ families

IsometryProblem family_problem(Family kind, const FamilyParams& fp) {
  const Integer& m = fp.m;
  if (m == 0) throw Error(ErrorCode::BadFamilyParams, "m must be nonzero");
  const bool have_abg = fp.alpha && fp.beta && fp.gamma;
  if ((fp.alpha || fp.beta || fp.gamma) && !have_abg) {
    throw Error(ErrorCode::BadFamilyParams, "alpha, beta and gamma go together");
  }
  try {
    if (kind == Family::TwoSquaresRank2) {
      if (fp.n == 0) throw Error(ErrorCode::BadFamilyParams, "n must be nonzero");
      if (!have_abg) throw Error(ErrorCode::BadFamilyParams, "rank-2 family needs alpha, beta, gamma");
      const Integer &a = *fp.alpha, &b = *fp.beta, &c = *fp.gamma;
      if (a * c - b * b != (m * fp.n) * (m * fp.n)) {
        throw Error(ErrorCode::BadFamilyParams, "alpha gamma - beta^2 must equal (m n)^2");
      }
      QMatrix bm{{Rational(m * m), 0}, {0, Rational(fp.n * fp.n)}};
      QMatrix bpm{{Rational(a), Rational(b)}, {Rational(b), Rational(c)}};
      return make_problem(std::move(bm), std::move(bpm), QVector::from_ints({1, 0}));
    }
    const Integer m2 = m * m;
    QMatrix bm{{Rational(2 * m2 + 1), -1, 0}, {-1, 1, 0}, {0, 0, Rational(2 * m2)}};
    QMatrix bpm;
    if (have_abg) {
      const Integer &a = *fp.alpha, &b = *fp.beta, &c = *fp.gamma;
      if (a == 0 || b == 0 || c == 0) throw Error(ErrorCode::BadFamilyParams, "alpha, beta, gamma must be nonzero");
      if (a * c - b * b != 4 * m2 * m2) throw Error(ErrorCode::BadFamilyParams, "alpha gamma - beta^2 must equal 4 m^4");
      bpm = QMatrix{{Rational(a), Rational(b), 0}, {Rational(b), Rational(c), 0}, {0, 0, 1}};
    } else {
      bpm = QMatrix{{Rational(4 * m2 * m), 0, 0}, {0, Rational(m), 0}, {0, 0, 1}};
    }
    return make_problem(std::move(bm), std::move(bpm), QVector::from_ints({1, 1, 1}));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BadFamilyParams) throw;
    throw Error(ErrorCode::BadFamilyParams, e.what());
  }
}

Certificate family_obstruction(Family kind, const FamilyParams& fp) {
  IsometryProblem p = family_problem(kind, fp);
  const Rational k = eval(p.b, p.w, p.w);
  const Rational bpww = eval(p.bp, p.w, p.w);
  const Integer big_n = Rational(k * k * bpww).get_num();

  Certificate cert;
  cert.constants["m"] = fp.m.get_str();
  if (fp.alpha) {
    cert.constants["alpha"] = fp.alpha->get_str();
    cert.constants["beta"] = fp.beta->get_str();
    cert.constants["gamma"] = fp.gamma->get_str();
  }
  cert.constants["B(w,w)"] = k.get_str();
  cert.constants["B'(w,w)"] = bpww.get_str();
  cert.constants["N"] = big_n.get_str();

  if (kind == Family::TwoSquaresRank2) {
    cert.constants["n"] = fp.n.get_str();
    cert.constants["squares"] = "2";
    cert.equation = "alpha m^4 = (m s)^2 + (n t)^2";
    cert.verdict = two_squares_representable(big_n) ? Verdict::Inconclusive : Verdict::ObstructionTwoSquares;
    return cert;
  }

  cert.constants["squares"] = "3";
  cert.equation = "16 m^4 B'(w,w) = (2 m s)^2 + (2 m b1)^2 + (b1 - b2)^2";
  // N = 4^e r with 4 not dividing r; obstruction iff r = 7 mod 8
  auto strip = [](Integer v, const std::string& label, Certificate& c) {
    if (v <= 0) return;
    unsigned e = 0;
    while (mpz_divisible_ui_p(v.get_mpz_t(), 4) != 0) {
      v /= 4;
      ++e;
    }
    c.constants[label + " 4-exponent"] = std::to_string(e);
    c.constants[label + " 4-free part"] = v.get_str();
    c.constants[label + " 4-free part mod 8"] = std::to_string(mpz_fdiv_ui(v.get_mpz_t(), 8));
  };
  strip(big_n, "N", cert);
  if (is_integer(bpww)) strip(bpww.get_num(), "B'(w,w)", cert);
  cert.verdict = three_squares_representable(big_n) ? Verdict::Inconclusive : Verdict::ObstructionThreeSquares;
  return cert;
}

}  // namespace superlat
