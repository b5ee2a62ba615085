#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

namespace qhom {

/// Elimination kernels run either on the serial reference path or the
/// OpenMP row-parallel path.  Both perform identical arithmetic on
/// disjoint rows, so results are bit-identical; the serial path stays as
/// the testing reference.
enum class Backend { serial, parallel };

/// Column-compressed matrix over GF(p), 2 <= p <= 251.  Row indices are
/// ascending inside each column and values sit in 1..p-1.
struct SparseMatModP {
  int64_t rows = 0;
  int64_t cols = 0;
  int64_t p = 0;
  std::vector<int64_t> col_ptr;  // cols + 1 offsets
  std::vector<int32_t> row_idx;
  std::vector<uint8_t> val;

  static SparseMatModP zero(int64_t rows, int64_t cols, int64_t p);
  static SparseMatModP identity(int64_t n, int64_t p);

  /// Builds from (row, col, value) triplets; values are reduced mod p,
  /// zeros dropped, duplicates rejected.  Throws std::invalid_argument on
  /// bad shapes, indices, or p outside [2, 251].
  static SparseMatModP from_triplets(
      int64_t rows, int64_t cols, int64_t p,
      const std::vector<std::tuple<int64_t, int64_t, int64_t>>& entries);

  int64_t nnz() const { return static_cast<int64_t>(row_idx.size()); }
  bool operator==(const SparseMatModP&) const = default;
};

/// Row-major dense matrix over GF(p); scratch form for the elimination
/// kernels.
struct DenseMatModP {
  int64_t rows = 0;
  int64_t cols = 0;
  int64_t p = 0;
  std::vector<uint8_t> a;  // rows * cols entries

  uint8_t& at(int64_t r, int64_t c) { return a[r * cols + c]; }
  uint8_t at(int64_t r, int64_t c) const { return a[r * cols + c]; }
};

DenseMatModP to_dense(const SparseMatModP& m);
SparseMatModP transpose(const SparseMatModP& m);

/// Exact product a*b mod p; shapes and moduli must agree.
SparseMatModP multiply(const SparseMatModP& a, const SparseMatModP& b);

/// Matrix-vector product a*v mod p.
std::vector<uint8_t> apply(const SparseMatModP& a,
                           const std::vector<uint8_t>& v);

/// In-place Gaussian elimination with deterministic pivoting: columns are
/// scanned left to right and the first nonzero row (top to bottom) wins.
/// Pivot rows are normalized to 1.  With full_reduce the result is the
/// reduced row echelon form, otherwise entries above pivots are kept.
/// Returns the rank; pivot columns are appended to *pivot_cols when given.
int64_t eliminate(DenseMatModP& m, bool full_reduce, Backend backend,
                  std::vector<int64_t>* pivot_cols = nullptr);

/// Rank over GF(p).  Dense elimination for matrices up to 10^4 columns
/// (and at most ~2*10^8 dense cells); larger inputs go through sparse
/// elimination with Markowitz-style pivot choice.
int64_t rank_mod_p(const SparseMatModP& m, Backend backend = Backend::parallel);

/// Basis of the right kernel, one vector per free column in ascending
/// column order, each reduced against the pivot columns.  Dense path
/// only; throws std::runtime_error past the dense size guard.
std::vector<std::vector<uint8_t>> kernel_basis(
    const SparseMatModP& m, Backend backend = Backend::parallel);

/// Canonical basis of the row space: the nonzero rows of the reduced row
/// echelon form.  Dense path only.
std::vector<std::vector<uint8_t>> row_space_basis(
    const SparseMatModP& m, Backend backend = Backend::parallel);

/// Rank by sparse elimination with Markowitz-style pivoting (minimal
/// fill-in score, deterministic tie-break by column then row).
int64_t rank_sparse(const SparseMatModP& m);

/// Echelon data for a subquotient ker(cycles) / colspace(boundaries):
/// an echelon basis of the boundary space and representative rows
/// completing it to a basis of the cycle space.  All rows have leading
/// coefficient 1 and pairwise distinct pivots; representatives are
/// reduced against the boundary rows and each other.
struct QuotientRows {
  std::vector<std::vector<uint8_t>> image_rows;
  std::vector<std::vector<uint8_t>> rep_rows;
  std::vector<int64_t> image_pivots;
  std::vector<int64_t> rep_pivots;
};

/// Builds the quotient data for ker(cycles) modulo the column space of
/// boundaries.  `boundaries.rows` must equal `cycles.cols`; the caller
/// is responsible for the homological condition cycles*boundaries = 0.
QuotientRows quotient_rows(const SparseMatModP& cycles,
                           const SparseMatModP& boundaries,
                           Backend backend = Backend::parallel);

}  // namespace qhom
