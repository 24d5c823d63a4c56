#include "catdim/matrix.hpp"

#include <sstream>

#include "catdim/errors.hpp"

namespace catdim {

namespace {

void require_same_ring(const RingSpec& a, const RingSpec& b) {
  if (!(a == b)) throw InputError("ring mismatch: " + a.str() + " vs " + b.str());
}

// F_p product on plain residues; p < 2^31 so a*b < 2^62 and a few
// accumulations fit before reduction.
Matrix multiply_mod(const Matrix& a, const Matrix& b) {
  const std::uint64_t p = a.ring().modulus();
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  std::vector<std::uint64_t> bv(k * m);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) bv[i * m + j] = static_cast<std::uint64_t>(b(i, j).inline_value());
  Matrix out(n, m, a.ring());
  std::vector<std::uint64_t> acc(m);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t t = 0; t < k; ++t) {
      std::uint64_t av = static_cast<std::uint64_t>(a(i, t).inline_value());
      if (av == 0) continue;
      const std::uint64_t* row = &bv[t * m];
      for (std::size_t j = 0; j < m; ++j) {
        acc[j] += av * row[j];
        if (acc[j] >= (1ULL << 62)) acc[j] %= p;
      }
    }
    for (std::size_t j = 0; j < m; ++j) out(i, j) = Scalar(static_cast<std::int64_t>(acc[j] % p));
  }
  return out;
}

}  // namespace

Matrix Matrix::identity(std::size_t n, RingSpec ring) {
  Matrix m(n, n, ring);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Rational>>& rows, RingSpec ring) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Matrix m(r, c, ring);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw InputError("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& cols, std::size_t height, RingSpec ring) {
  Matrix m(height, cols.size(), ring);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != height) throw InputError("column length mismatch");
    for (std::size_t i = 0; i < height; ++i) m.set(i, j, cols[j][i]);
  }
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

Vector Matrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_, ring_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw InputError("block out of range");
  Matrix b(nr, nc, ring_);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw InputError("block out of range");
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

void Matrix::add_block(std::size_t r0, std::size_t c0, const Matrix& b, const Scalar& factor) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw InputError("block out of range");
  if (factor.is_zero()) return;
  const bool unit = factor.is_one();
  for (std::size_t i = 0; i < b.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      const Scalar& v = b(i, j);
      if (v.is_zero()) continue;
      Scalar& dst = (*this)(r0 + i, c0 + j);
      dst = ring_.add(dst, unit ? v : ring_.mul(factor, v));
    }
  }
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& cols) const {
  Matrix out(rows_, cols.size(), ring_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = (*this)(i, cols[j]);
  return out;
}

Matrix Matrix::as_ring(RingSpec ring) const {
  Matrix out(rows_, cols_, ring);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = ring.from_rational(data_[i]);
  return out;
}

bool Matrix::is_zero() const {
  for (const auto& v : data_)
    if (!v.is_zero()) return false;
  return true;
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const Scalar& v = (*this)(i, j);
      if (i == j ? !v.is_one() : !v.is_zero()) return false;
    }
  return true;
}

Vector Matrix::apply(const Vector& v) const {
  if (v.size() != cols_) throw InputError("vector length mismatch");
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Scalar acc;
    for (std::size_t j = 0; j < cols_; ++j) {
      const Scalar& a = (*this)(i, j);
      if (a.is_zero() || v[j].is_zero()) continue;
      acc = ring_.add(acc, ring_.mul(a, v[j]));
    }
    out[i] = acc;
  }
  return out;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  require_same_ring(ring_, rhs.ring_);
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InputError("shape mismatch in matrix addition");
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!rhs.data_[i].is_zero()) data_[i] = ring_.add(data_[i], rhs.data_[i]);
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  require_same_ring(ring_, rhs.ring_);
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InputError("shape mismatch in matrix subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!rhs.data_[i].is_zero()) data_[i] = ring_.sub(data_[i], rhs.data_[i]);
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_ring(a.ring_, b.ring_);
  if (a.cols_ != b.rows_) {
    throw InputError("shape mismatch in matrix product: " + std::to_string(a.rows_) + "x" +
                     std::to_string(a.cols_) + " * " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  }
  if (a.ring_.kind() == RingKind::PrimeField) return multiply_mod(a, b);
  Matrix out(a.rows_, b.cols_, a.ring_);
  const std::size_t m = b.cols_;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    Scalar* dst = &out.data_[i * m];
    for (std::size_t t = 0; t < a.cols_; ++t) {
      const Scalar& av = a(i, t);
      if (av.is_zero()) continue;
      const Scalar* row = &b.data_[t * m];
      if (av.is_one()) {
        for (std::size_t j = 0; j < m; ++j)
          if (!row[j].is_zero()) dst[j] += row[j];
      } else {
        for (std::size_t j = 0; j < m; ++j)
          if (!row[j].is_zero()) dst[j] += av * row[j];
      }
    }
  }
  return out;
}

Matrix Matrix::scaled(const Scalar& factor) const {
  Matrix out(rows_, cols_, ring_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = ring_.mul(factor, data_[i]);
  return out;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).str();
  }
  os << "]";
  return os.str();
}

Matrix vstack(const std::vector<Matrix>& parts, std::size_t cols, RingSpec ring) {
  std::size_t rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw InputError("vstack column mismatch");
    rows += p.rows();
  }
  Matrix out(rows, cols, ring);
  std::size_t r = 0;
  for (const auto& p : parts) {
    out.set_block(r, 0, p);
    r += p.rows();
  }
  return out;
}

Matrix hstack(const std::vector<Matrix>& parts, std::size_t rows, RingSpec ring) {
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw InputError("hstack row mismatch");
    cols += p.cols();
  }
  Matrix out(rows, cols, ring);
  std::size_t c = 0;
  for (const auto& p : parts) {
    out.set_block(0, c, p);
    c += p.cols();
  }
  return out;
}

}  // namespace catdim
