#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "catdim/matrix.hpp"

namespace catdim {

/// Reduced row echelon form over a field. Pivots are chosen leftmost column
/// first, topmost available row, so the result is canonical.
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

Echelon row_echelon(const Matrix& m);

/// Rank over the fraction field (Z matrices are ranked over Q).
std::size_t rank(const Matrix& m);

bool is_invertible(const Matrix& m);

/// Column-style Hermite form over Z: a * u = h with u unimodular and h in
/// lower column echelon form. Columns [0, rank) of h carry the pivots,
/// the remaining columns are zero.
struct ColumnHermite {
  std::vector<std::vector<mpz_class>> h;  // rows x cols
  std::vector<std::vector<mpz_class>> u;  // cols x cols
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;
};

ColumnHermite column_hermite(const Matrix& a);

/// Some x with a * x = b exactly over a.ring(), or nullopt. Over Z the
/// solution is integral (Hermite form); over Q / F_p Gaussian elimination.
/// Free variables are set to zero.
std::optional<Vector> solve_linear(const Matrix& a, const Vector& b);

/// Coefficients c with sum_i c_i * gens[i] == target, or nullopt.
std::optional<Vector> span_membership(const Matrix& target, const std::vector<Matrix>& gens);

/// m = injection * surjection with the inner dimension equal to rank(m).
/// The injection is the pivot columns of m, the surjection the nonzero rows
/// of its reduced echelon form. Fields only.
struct EpiMono {
  Matrix injection;
  Matrix surjection;
};

EpiMono epi_mono_factor(const Matrix& m);

/// Basis of {v : m v = 0}; over Z a basis of the kernel lattice.
std::vector<Vector> kernel_basis(const Matrix& m);

/// Does span(outer) contain span(inner)? Vectors have length `dim`.
bool submodule_contains(const std::vector<Vector>& outer, const std::vector<Vector>& inner, std::size_t dim,
                        const RingSpec& ring);

/// Equality of the spanned submodules of ring^dim (subspaces over a field,
/// lattices over Z).
bool submodule_equal(const std::vector<Vector>& gens1, const std::vector<Vector>& gens2, std::size_t dim,
                     const RingSpec& ring);

/// Do the vectors span all of ring^dim?
bool spans_everything(const std::vector<Vector>& gens, std::size_t dim, const RingSpec& ring);

}  // namespace catdim
