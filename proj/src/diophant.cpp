#include "superlat/diophant.hpp"

#include <omp.h>

#include <algorithm>

#include "superlat/parallel.hpp"

namespace superlat {

PosDefForm::PosDefForm(QMatrix gram) : gram_(std::move(gram)) {
  if (!is_symmetric(gram_)) throw Error(ErrorCode::NotPositiveDefinite, "form is not symmetric");
  const std::size_t n = gram_.rows();
  lower_ = QMatrix::identity(n);
  diag_.assign(n, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    Rational d = gram_(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= lower_(j, k) * lower_(j, k) * diag_[k];
    if (d <= 0) throw Error(ErrorCode::NotPositiveDefinite, "nonpositive LDL pivot at index " + std::to_string(j));
    diag_[j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      Rational s = gram_(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k) * diag_[k];
      lower_(i, j) = s / d;
    }
  }
  inverse_ = mat_inverse(gram_);
}

Rational PosDefForm::norm(const QVector& x) const {
  if (x.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "vector length does not match the form");
  return dot(x, gram_ * x);
}

std::vector<Integer> PosDefForm::coordinate_bounds(const Integer& c) const {
  std::vector<Integer> bounds(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    Rational r = Rational(c) * inverse_(i, i);
    bounds[i] = r < 0 ? Integer(0) : isqrt(floor_of(r));
  }
  return bounds;
}

PosDefForm prepend_scalar(const Rational& a, const QMatrix& g) {
  const std::size_t n = g.rows() + 1;
  QMatrix q(n, n);
  q(0, 0) = a;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) q(i + 1, j + 1) = g(i, j);
  return PosDefForm(std::move(q));
}

namespace {

// Depth-first search over the LDL^T cylinder decomposition, one coordinate per
// level from the last to the first. All bounds are exact: a level's candidate
// range is padded by one integer on each side and every value is re-checked
// against the remaining budget.
class Enumerator {
 public:
  Enumerator(const PosDefForm& q, const Integer& c) : q_(q), target_(c), x_(q.dim()) {}

  // Candidate values for coordinate k given the remaining budget.
  void candidate_range(std::size_t k, const Rational& center, const Rational& remaining, Integer& lo,
                       Integer& hi) const {
    Rational r = remaining / q_.ldl_diagonal()[k];
    Integer s = isqrt(floor_of(r)) + 1;
    lo = floor_of(center) - s;
    hi = ceil_of(center) + s;
  }

  Rational center(std::size_t k) const {
    const QMatrix& l = q_.ldl_lower();
    Rational c = 0;
    for (std::size_t j = k + 1; j < x_.size(); ++j) c -= l(j, k) * x_[j];
    return c;
  }

  // Fixes coordinate k to v; returns false if the budget is exceeded.
  bool place(std::size_t k, const Integer& v, const Rational& center, const Rational& remaining,
             Rational& left) {
    Rational diff = Rational(v) - center;
    Rational used = q_.ldl_diagonal()[k] * diff * diff;
    if (used > remaining) return false;
    x_[k] = v;
    left = remaining - used;
    return true;
  }

  void descend(std::size_t k, const Rational& remaining, std::vector<QVector>& out) {
    Rational ctr = center(k);
    Integer lo, hi;
    candidate_range(k, ctr, remaining, lo, hi);
    Rational left;
    for (Integer v = lo; v <= hi; ++v) {
      if (!place(k, v, ctr, remaining, left)) continue;
      if (k == 0) {
        if (left == 0) emit(out);
      } else {
        descend(k - 1, left, out);
      }
    }
  }

  void run_from_top(const Integer& top_value, std::vector<QVector>& out) {
    const std::size_t k = x_.size() - 1;
    Rational left;
    Rational budget(target_);
    if (!place(k, top_value, Rational(0), budget, left)) return;
    if (k == 0) {
      if (left == 0) emit(out);
    } else {
      descend(k - 1, left, out);
    }
  }

  void run(std::vector<QVector>& out) { descend(x_.size() - 1, Rational(target_), out); }

  std::vector<Integer> top_candidates() const {
    Integer lo, hi;
    candidate_range(x_.size() - 1, Rational(0), Rational(target_), lo, hi);
    std::vector<Integer> vals;
    for (Integer v = lo; v <= hi; ++v) vals.push_back(v);
    return vals;
  }

 private:
  void emit(std::vector<QVector>& out) const {
    QVector v(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) v[i] = x_[i];
    out.push_back(std::move(v));
  }

  const PosDefForm& q_;
  Integer target_;
  std::vector<Integer> x_;
};

NormSolutionSet finish(const Integer& c, std::vector<QVector> sols, bool canonicalize) {
  std::sort(sols.begin(), sols.end());
  NormSolutionSet set;
  set.target = c;
  set.raw_count = sols.size();
  set.canonical_count = static_cast<std::size_t>(
      std::count_if(sols.begin(), sols.end(), [](const QVector& v) { return is_canonical_sign(v); }));
  set.canonicalized = canonicalize;
  set.solutions = canonicalize ? canonical_representatives(sols) : std::move(sols);
  return set;
}

void check_target(const Integer& c) {
  if (c < 0) throw Error(ErrorCode::NegativeTarget, "norm target " + c.get_str() + " < 0");
}

}  // namespace

NormSolutionSet vectors_of_norm_serial(const PosDefForm& q, const Integer& c, bool canonicalize) {
  check_target(c);
  std::vector<QVector> out;
  Enumerator e(q, c);
  e.run(out);
  return finish(c, std::move(out), canonicalize);
}

NormSolutionSet vectors_of_norm(const PosDefForm& q, const Integer& c, EnumOptions opts) {
  check_target(c);
  const int threads = resolve_threads(opts.threads);
  std::vector<Integer> tops = Enumerator(q, c).top_candidates();
  std::vector<std::vector<QVector>> buckets(tops.size());
  const auto slices = static_cast<long>(tops.size());

#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (long i = 0; i < slices; ++i) {
    Enumerator e(q, c);
    e.run_from_top(tops[static_cast<std::size_t>(i)], buckets[static_cast<std::size_t>(i)]);
  }

  std::vector<QVector> out;
  for (auto& b : buckets)
    for (auto& v : b) out.push_back(std::move(v));
  return finish(c, std::move(out), opts.canonicalize);
}

std::vector<QVector> vectors_of_norm_box(const PosDefForm& q, const Integer& c,
                                         const std::vector<Integer>& bounds) {
  check_target(c);
  const std::size_t n = q.dim();
  if (bounds.size() != n) throw Error(ErrorCode::DimensionMismatch, "one bound per coordinate");
  std::vector<Integer> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = -bounds[i];
  std::vector<QVector> out;
  const Rational target(c);
  while (true) {
    QVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i];
    if (q.norm(v) == target) out.push_back(std::move(v));
    // odometer, last coordinate fastest
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (x[i] < bounds[i]) {
        ++x[i];
        break;
      }
      x[i] = -bounds[i];
      if (i == 0) {
        std::sort(out.begin(), out.end());
        return out;
      }
    }
  }
}

bool is_canonical_sign(const QVector& v) {
  for (const auto& x : v)
    if (x != 0) return x > 0;
  return true;
}

std::vector<QVector> canonical_representatives(const std::vector<QVector>& vs) {
  std::vector<QVector> out;
  for (const auto& v : vs)
    if (is_canonical_sign(v)) out.push_back(v);
  return out;
}

bool two_squares_representable(const Integer& n) {
  if (n < 0) return false;
  if (n == 0) return true;
  Integer m = n;
  for (unsigned long p = 2; Integer(p) * p <= m; ++p) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), p) == 0) continue;
    unsigned exponent = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++exponent;
    }
    if (p % 4 == 3 && exponent % 2 == 1) return false;
  }
  // m is 1 or a prime
  return !(m > 1 && mpz_fdiv_ui(m.get_mpz_t(), 4) == 3);
}

bool three_squares_representable(const Integer& n) {
  if (n < 0) return false;
  if (n == 0) return true;
  Integer m = n;
  while (mpz_divisible_ui_p(m.get_mpz_t(), 4) != 0) mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), 4);
  return mpz_fdiv_ui(m.get_mpz_t(), 8) != 7;
}

}  // namespace superlat
