#pragma once

// Exact scalars, vectors and matrices over Q.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "superlat/error.hpp"

namespace superlat {

using Integer = mpz_class;
using Rational = mpq_class;  // gmpxx keeps every arithmetic result canonical

/// Builds num/den in canonical form; throws ParseError on den = 0.
Rational make_rational(const Integer& num, const Integer& den);

/// Parses "p/q" or "p" (optional sign); throws ParseError.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }
Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);
/// Largest k with k*k <= z; z >= 0.
Integer isqrt(const Integer& z);
/// Throws NonIntegralForm when q has a denominator.
Integer to_integer(const Rational& q, std::string_view what);

class QVector {
 public:
  QVector() = default;
  explicit QVector(std::size_t n) : entries_(n) {}
  QVector(std::initializer_list<Rational> init) : entries_(init) {}
  explicit QVector(std::vector<Rational> entries) : entries_(std::move(entries)) {}
  static QVector from_ints(std::initializer_list<long> init);
  static QVector unit(std::size_t n, std::size_t i);

  std::size_t size() const noexcept { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  Rational& operator[](std::size_t i) { return entries_[i]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const std::vector<Rational>& entries() const noexcept { return entries_; }

  bool is_zero() const;

  QVector& operator+=(const QVector& o);
  QVector& operator-=(const QVector& o);
  QVector& operator*=(const Rational& s);

  friend bool operator==(const QVector& a, const QVector& b) { return a.entries_ == b.entries_; }
  /// Lexicographic by value.
  friend bool operator<(const QVector& a, const QVector& b);

 private:
  std::vector<Rational> entries_;
};

QVector operator+(QVector a, const QVector& b);
QVector operator-(QVector a, const QVector& b);
QVector operator-(QVector a);
QVector operator*(const Rational& s, QVector v);
/// Plain coordinate dot product sum_i a_i b_i.
Rational dot(const QVector& a, const QVector& b);

/// Dense row-major matrix. Most of the library works with square matrices;
/// rectangular shapes appear for bases (one vector per column).
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  QMatrix(std::initializer_list<std::initializer_list<Rational>> rows);
  static QMatrix identity(std::size_t n);
  static QMatrix diagonal(const std::vector<Rational>& d);
  static QMatrix from_columns(const std::vector<QVector>& cols);
  static QMatrix from_rows(const std::vector<QVector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  QVector row(std::size_t i) const;
  QVector column(std::size_t j) const;
  void set_column(std::size_t j, const QVector& v);

  bool is_zero() const;

  QMatrix& operator+=(const QMatrix& o);
  QMatrix& operator-=(const QMatrix& o);
  QMatrix& operator*=(const Rational& s);

  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  /// Row-major lexicographic; only meaningful between equal shapes.
  friend bool operator<(const QMatrix& a, const QMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

QMatrix operator+(QMatrix a, const QMatrix& b);
QMatrix operator-(QMatrix a, const QMatrix& b);
QMatrix operator*(const Rational& s, QMatrix a);
QMatrix operator*(const QMatrix& a, const QMatrix& b);
QVector operator*(const QMatrix& a, const QVector& v);

std::string to_string(const QVector& v);
std::string to_string(const QMatrix& m);

}  // namespace superlat
