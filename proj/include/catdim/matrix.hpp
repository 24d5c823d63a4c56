#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "catdim/ring.hpp"

namespace catdim {

using Vector = std::vector<Scalar>;

/// Dense row-major matrix over a RingSpec. Every entry is kept in the ring's
/// canonical form, so operator== is exact equality of ring elements.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, RingSpec ring)
      : rows_(rows), cols_(cols), ring_(ring), data_(rows * cols) {}

  static Matrix zero(std::size_t rows, std::size_t cols, RingSpec ring) { return Matrix(rows, cols, ring); }
  static Matrix identity(std::size_t n, RingSpec ring);
  /// Entries are mapped into the ring (throws InputError if impossible).
  static Matrix from_rows(const std::vector<std::vector<Rational>>& rows, RingSpec ring);
  /// cols.size() columns of length `height`.
  static Matrix from_columns(const std::vector<Vector>& cols, std::size_t height, RingSpec ring);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] const RingSpec& ring() const { return ring_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  [[nodiscard]] const std::vector<Scalar>& data() const { return data_; }

  /// Stores ring.from_rational(value).
  void set(std::size_t r, std::size_t c, const Rational& value) { (*this)(r, c) = ring_.from_rational(value); }

  [[nodiscard]] Vector column(std::size_t c) const;
  [[nodiscard]] Vector row(std::size_t r) const;

  [[nodiscard]] Matrix transpose() const;
  [[nodiscard]] Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  /// this(r0.., c0..) += factor * b
  void add_block(std::size_t r0, std::size_t c0, const Matrix& b, const Scalar& factor);
  [[nodiscard]] Matrix select_columns(const std::vector<std::size_t>& cols) const;
  /// Same entries reinterpreted in another ring (e.g. Z -> Q, Z -> F_p).
  [[nodiscard]] Matrix as_ring(RingSpec ring) const;

  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_identity() const;
  [[nodiscard]] bool is_square() const { return rows_ == cols_; }

  [[nodiscard]] Vector apply(const Vector& v) const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  [[nodiscard]] Matrix scaled(const Scalar& factor) const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.ring_ == b.ring_ && a.data_ == b.data_;
  }

  [[nodiscard]] std::string str() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  RingSpec ring_;
  std::vector<Scalar> data_;
};

/// Vertical / horizontal concatenation (all parts must share the ring and
/// the concatenation dimension).
Matrix vstack(const std::vector<Matrix>& parts, std::size_t cols, RingSpec ring);
Matrix hstack(const std::vector<Matrix>& parts, std::size_t rows, RingSpec ring);

}  // namespace catdim
