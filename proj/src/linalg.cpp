#include "catdim/linalg.hpp"

#include <algorithm>
#include <numeric>

#include "catdim/errors.hpp"

namespace catdim {

namespace {

// ---------------------------------------------------------------------------
// Field elimination kernels. The same RREF routine runs over Rationals and
// over plain F_p residues.

struct RationalOps {
  using T = Rational;
  static bool zero(const T& v) { return v.is_zero(); }
  static bool one(const T& v) { return v.is_one(); }
  static T inv(const T& v) { return Rational(1) / v; }
  static void scale(T& v, const T& f) { v *= f; }
  static void sub_mul(T& dst, const T& f, const T& src) { dst -= f * src; }
};

struct ModOps {
  using T = std::uint64_t;
  std::uint64_t p;
  static bool zero(T v) { return v == 0; }
  static bool one(T v) { return v == 1; }
  [[nodiscard]] T inv(T v) const { return inverse_mod(v, p); }
  void scale(T& v, T f) const { v = (v * f) % p; }
  void sub_mul(T& dst, T f, T src) const { dst = (dst + p - (f * src) % p) % p; }
};

template <class Ops>
struct Dense {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<typename Ops::T> a;
  typename Ops::T& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
};

// In-place RREF; pivots only in columns < col_limit.
template <class Ops>
std::vector<std::size_t> rref(Dense<Ops>& m, std::size_t col_limit, const Ops& ops) {
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> support;
  std::size_t prow = 0;
  for (std::size_t col = 0; col < col_limit && prow < m.rows; ++col) {
    std::size_t r = prow;
    while (r < m.rows && Ops::zero(m.at(r, col))) ++r;
    if (r == m.rows) continue;
    if (r != prow) {
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(prow, j));
    }
    if (!Ops::one(m.at(prow, col))) {
      auto inv = ops.inv(m.at(prow, col));
      for (std::size_t j = col; j < m.cols; ++j)
        if (!Ops::zero(m.at(prow, j))) ops.scale(m.at(prow, j), inv);
    }
    support.clear();
    for (std::size_t j = col; j < m.cols; ++j)
      if (!Ops::zero(m.at(prow, j))) support.push_back(j);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == prow || Ops::zero(m.at(i, col))) continue;
      auto f = m.at(i, col);
      for (std::size_t j : support) ops.sub_mul(m.at(i, j), f, m.at(prow, j));
    }
    pivots.push_back(col);
    ++prow;
  }
  return pivots;
}

Dense<RationalOps> to_rational_dense(const Matrix& m) {
  Dense<RationalOps> d{m.rows(), m.cols(), {}};
  d.a = m.data();
  return d;
}

Dense<ModOps> to_mod_dense(const Matrix& m) {
  Dense<ModOps> d{m.rows(), m.cols(), {}};
  d.a.reserve(m.rows() * m.cols());
  for (const auto& v : m.data()) d.a.push_back(static_cast<std::uint64_t>(v.inline_value()));
  return d;
}

// Field RREF of an arbitrary field matrix; returns reduced matrix + pivots.
Echelon field_rref(const Matrix& m, std::size_t col_limit) {
  const RingSpec& ring = m.ring();
  Echelon out{Matrix(m.rows(), m.cols(), ring), {}};
  if (ring.kind() == RingKind::PrimeField) {
    auto d = to_mod_dense(m);
    ModOps ops{ring.modulus()};
    out.pivots = rref(d, col_limit, ops);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out.reduced(i, j) = Scalar(static_cast<std::int64_t>(d.at(i, j)));
  } else {
    auto d = to_rational_dense(m);
    out.pivots = rref(d, col_limit, RationalOps{});
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out.reduced(i, j) = std::move(d.at(i, j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Integer Hermite machinery.

using ZMat = std::vector<std::vector<mpz_class>>;

mpz_class to_mpz(const Scalar& s) {
  if (!s.is_integer()) throw InputError("non-integer entry " + s.str() + " in integer matrix");
  return s.numerator();
}

void ext_gcd(const mpz_class& a, const mpz_class& b, mpz_class& g, mpz_class& s, mpz_class& t) {
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

ColumnHermite hermite_of(ZMat h, std::size_t rows, std::size_t cols) {
  ZMat u(cols, std::vector<mpz_class>(cols, 0));
  for (std::size_t i = 0; i < cols; ++i) u[i][i] = 1;

  auto col_combine = [&](std::size_t c1, std::size_t c2, const mpz_class& s, const mpz_class& t,
                         const mpz_class& x, const mpz_class& y) {
    // (col c1, col c2) <- (s*c1 + t*c2, x*c1 + y*c2)
    auto apply = [&](ZMat& m, std::size_t nrows) {
      for (std::size_t r = 0; r < nrows; ++r) {
        mpz_class a = m[r][c1], b = m[r][c2];
        if (a == 0 && b == 0) continue;
        m[r][c1] = s * a + t * b;
        m[r][c2] = x * a + y * b;
      }
    };
    apply(h, rows);
    apply(u, cols);
  };

  ColumnHermite out;
  std::size_t r = 0;
  for (std::size_t i = 0; i < rows && r < cols; ++i) {
    for (std::size_t j = r + 1; j < cols; ++j) {
      if (h[i][j] == 0) continue;
      if (h[i][r] == 0) {
        for (std::size_t k = 0; k < rows; ++k) std::swap(h[k][r], h[k][j]);
        for (std::size_t k = 0; k < cols; ++k) std::swap(u[k][r], u[k][j]);
        continue;
      }
      mpz_class g, s, t;
      ext_gcd(h[i][r], h[i][j], g, s, t);
      mpz_class a = h[i][r] / g;
      mpz_class b = h[i][j] / g;
      // det [[s, -b], [t, a]] = s*a + t*b = 1
      col_combine(r, j, s, t, mpz_class(-b), a);
    }
    if (h[i][r] == 0) continue;
    if (h[i][r] < 0) {
      for (std::size_t k = 0; k < rows; ++k) h[k][r] = -h[k][r];
      for (std::size_t k = 0; k < cols; ++k) u[k][r] = -u[k][r];
    }
    // Reduce earlier pivot columns modulo this pivot to limit entry growth.
    for (std::size_t c = 0; c < r; ++c) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), h[i][c].get_mpz_t(), h[i][r].get_mpz_t());
      if (q == 0) continue;
      for (std::size_t k = 0; k < rows; ++k) h[k][c] -= q * h[k][r];
      for (std::size_t k = 0; k < cols; ++k) u[k][c] -= q * u[k][r];
    }
    out.pivot_rows.push_back(i);
    ++r;
  }
  out.rank = r;
  out.h = std::move(h);
  out.u = std::move(u);
  return out;
}

ZMat to_zmat(const Matrix& m) {
  ZMat z(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) z[i][j] = to_mpz(m(i, j));
  return z;
}

// Integer solution of H y = b followed by x = U y, if any.
std::optional<Vector> solve_with_hermite(const ColumnHermite& ch, const std::vector<mpz_class>& b,
                                         std::size_t cols) {
  const std::size_t rows = b.size();
  std::vector<mpz_class> y(cols, 0);
  for (std::size_t k = 0; k < ch.rank; ++k) {
    std::size_t i = ch.pivot_rows[k];
    mpz_class acc = b[i];
    for (std::size_t c = 0; c < k; ++c) acc -= ch.h[i][c] * y[c];
    if (!mpz_divisible_p(acc.get_mpz_t(), ch.h[i][k].get_mpz_t())) return std::nullopt;
    mpz_divexact(y[k].get_mpz_t(), acc.get_mpz_t(), ch.h[i][k].get_mpz_t());
  }
  for (std::size_t i = 0; i < rows; ++i) {
    mpz_class acc = 0;
    for (std::size_t c = 0; c < ch.rank; ++c) acc += ch.h[i][c] * y[c];
    if (acc != b[i]) return std::nullopt;
  }
  Vector x(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    mpz_class acc = 0;
    for (std::size_t c = 0; c < ch.rank; ++c) acc += ch.u[j][c] * y[c];
    x[j] = Scalar(acc);
  }
  return x;
}

// ---------------------------------------------------------------------------

// Drops zero equations and duplicate equations from [a | b]. Returns false if
// a zero row carries a nonzero right-hand side.
bool compress_system(const Matrix& a, const Vector& b, Matrix& a_out, Vector& b_out) {
  const std::size_t n = a.cols();
  std::vector<std::size_t> keep;
  keep.reserve(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    bool zero_row = true;
    for (std::size_t j = 0; j < n && zero_row; ++j) zero_row = a(i, j).is_zero();
    if (zero_row) {
      if (!b[i].is_zero()) return false;
      continue;
    }
    keep.push_back(i);
  }
  auto less = [&](std::size_t x, std::size_t y) {
    for (std::size_t j = 0; j < n; ++j) {
      auto c = a(x, j) <=> a(y, j);
      if (c != 0) return c < 0;
    }
    return (b[x] <=> b[y]) < 0;
  };
  auto same = [&](std::size_t x, std::size_t y) {
    for (std::size_t j = 0; j < n; ++j)
      if (!(a(x, j) == a(y, j))) return false;
    return b[x] == b[y];
  };
  std::sort(keep.begin(), keep.end(), less);
  keep.erase(std::unique(keep.begin(), keep.end(), same), keep.end());
  a_out = Matrix(keep.size(), n, a.ring());
  b_out.assign(keep.size(), Scalar());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    for (std::size_t j = 0; j < n; ++j) a_out(k, j) = a(keep[k], j);
    b_out[k] = b[keep[k]];
  }
  return true;
}

std::optional<Vector> solve_field(const Matrix& a, const Vector& b) {
  const std::size_t n = a.cols();
  Matrix aug(a.rows(), n + 1, a.ring());
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < a.rows(); ++i) aug(i, n) = b[i];
  Echelon e = field_rref(aug, n);
  for (std::size_t i = e.pivots.size(); i < aug.rows(); ++i)
    if (!e.reduced(i, n).is_zero()) return std::nullopt;
  Vector x(n);
  for (std::size_t k = 0; k < e.pivots.size(); ++k) x[e.pivots[k]] = e.reduced(k, n);
  return x;
}

Matrix columns_matrix(const std::vector<Vector>& vs, std::size_t dim, const RingSpec& ring) {
  for (const auto& v : vs)
    if (v.size() != dim) throw InputError("vector length does not match ambient dimension");
  return Matrix::from_columns(vs, dim, ring);
}

}  // namespace

Echelon row_echelon(const Matrix& m) {
  if (!m.ring().is_field()) throw InputError("row_echelon requires a field");
  return field_rref(m, m.cols());
}

std::size_t rank(const Matrix& m) {
  if (m.ring().is_field()) return field_rref(m, m.cols()).pivots.size();
  return field_rref(m.as_ring(RingSpec::rationals()), m.cols()).pivots.size();
}

bool is_invertible(const Matrix& m) {
  if (!m.is_square()) return false;
  if (m.ring().kind() == RingKind::Integers) {
    ColumnHermite ch = column_hermite(m);
    if (ch.rank != m.rows()) return false;
    for (std::size_t k = 0; k < ch.rank; ++k)
      if (ch.h[ch.pivot_rows[k]][k] != 1) return false;
    return true;
  }
  return rank(m) == m.rows();
}

ColumnHermite column_hermite(const Matrix& a) {
  if (a.ring().kind() != RingKind::Integers) throw InputError("column_hermite requires Z");
  return hermite_of(to_zmat(a), a.rows(), a.cols());
}

std::optional<Vector> solve_linear(const Matrix& a, const Vector& b) {
  if (a.rows() != b.size()) throw InputError("solve_linear: matrix has " + std::to_string(a.rows()) +
                                             " rows but right-hand side has " + std::to_string(b.size()));
  const RingSpec& ring = a.ring();
  Vector rhs(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) rhs[i] = ring.from_rational(b[i]);

  Matrix ac;
  Vector bc;
  if (!compress_system(a, rhs, ac, bc)) return std::nullopt;
  if (ac.rows() == 0) return Vector(a.cols());

  if (ring.is_field()) return solve_field(ac, bc);

  // Over Z: a rational solution must exist first; often it is already integral.
  auto rational = solve_field(ac.as_ring(RingSpec::rationals()), bc);
  if (!rational) return std::nullopt;
  if (std::all_of(rational->begin(), rational->end(), [](const Scalar& s) { return s.is_integer(); })) {
    return rational;
  }
  ColumnHermite ch = column_hermite(ac);
  std::vector<mpz_class> bz;
  bz.reserve(bc.size());
  for (const auto& v : bc) bz.push_back(to_mpz(v));
  return solve_with_hermite(ch, bz, ac.cols());
}

std::optional<Vector> span_membership(const Matrix& target, const std::vector<Matrix>& gens) {
  const RingSpec& ring = target.ring();
  const std::size_t r = target.rows(), c = target.cols();
  for (const auto& g : gens) {
    if (g.rows() != r || g.cols() != c) throw InputError("span_membership: generator shape mismatch");
    if (!(g.ring() == ring)) throw InputError("span_membership: ring mismatch");
  }
  Matrix a(r * c, gens.size(), ring);
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) a(i * c + j, k) = gens[k](i, j);
  Vector b(target.data().begin(), target.data().end());
  return solve_linear(a, b);
}

EpiMono epi_mono_factor(const Matrix& m) {
  if (!m.ring().is_field()) throw InputError("epi_mono_factor requires a field (Q or F_p), got " + m.ring().str());
  Echelon e = row_echelon(m);
  const std::size_t r = e.pivots.size();
  return {m.select_columns(e.pivots), e.reduced.block(0, 0, r, m.cols())};
}

std::vector<Vector> kernel_basis(const Matrix& m) {
  const RingSpec& ring = m.ring();
  std::vector<Vector> basis;
  if (ring.kind() == RingKind::Integers) {
    ColumnHermite ch = column_hermite(m);
    for (std::size_t j = ch.rank; j < m.cols(); ++j) {
      Vector v(m.cols());
      for (std::size_t i = 0; i < m.cols(); ++i) v[i] = Scalar(ch.u[i][j]);
      basis.push_back(std::move(v));
    }
    return basis;
  }
  Echelon e = row_echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols());
    v[free] = Scalar(1);
    for (std::size_t k = 0; k < e.pivots.size(); ++k) v[e.pivots[k]] = ring.neg(e.reduced(k, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

bool submodule_contains(const std::vector<Vector>& outer, const std::vector<Vector>& inner, std::size_t dim,
                        const RingSpec& ring) {
  Matrix big = columns_matrix(outer, dim, ring);
  Matrix small = columns_matrix(inner, dim, ring);
  if (inner.empty()) return true;
  if (ring.is_field()) {
    std::vector<Vector> all = outer;
    all.insert(all.end(), inner.begin(), inner.end());
    return rank(big) == rank(columns_matrix(all, dim, ring));
  }
  ColumnHermite ch = column_hermite(big);
  for (const auto& v : inner) {
    std::vector<mpz_class> b;
    b.reserve(dim);
    for (const auto& s : v) b.push_back(to_mpz(s));
    if (!solve_with_hermite(ch, b, outer.size())) return false;
  }
  return true;
}

bool submodule_equal(const std::vector<Vector>& gens1, const std::vector<Vector>& gens2, std::size_t dim,
                     const RingSpec& ring) {
  return submodule_contains(gens1, gens2, dim, ring) && submodule_contains(gens2, gens1, dim, ring);
}

bool spans_everything(const std::vector<Vector>& gens, std::size_t dim, const RingSpec& ring) {
  if (dim == 0) return true;
  Matrix m = columns_matrix(gens, dim, ring);
  if (ring.is_field()) return rank(m) == dim;
  ColumnHermite ch = column_hermite(m);
  if (ch.rank != dim) return false;
  for (std::size_t k = 0; k < dim; ++k)
    if (ch.h[ch.pivot_rows[k]][k] != 1) return false;
  return true;
}

}  // namespace catdim
