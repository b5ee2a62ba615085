#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "qhom/linalg.hpp"
#include "qhom/qfield.hpp"

namespace qhom {

/// A k-dimensional subspace of GF(q)^n, stored as its unique reduced
/// row echelon basis matrix (row-major, k*n field elements).  Equal
/// subspaces compare equal because the representation is canonical.
struct Subspace {
  int64_t n = 0;
  int64_t k = 0;
  std::vector<uint32_t> rows;

  uint32_t at(int64_t r, int64_t c) const {
    return rows[static_cast<size_t>(r * n + c)];
  }
  bool operator==(const Subspace&) const = default;
};

/// Reduced row echelon form over GF(q), in place.  `a` holds rows*cols
/// elements row-major; returns the rank and moves the nonzero rows to
/// the top with pivots normalized to 1 and pivot columns cleared.
int64_t rref_gfq(std::vector<uint32_t>& a, int64_t rows, int64_t cols,
                 const Field& F, std::vector<int64_t>* pivot_cols = nullptr);

/// All k-subspaces of GF(q)^n in a fixed deterministic order: pivot
/// column sets ascending lexicographically, then free entries counted in
/// base q with the first free position (row-major scan) most significant.
/// Throws std::invalid_argument when the level size exceeds the
/// enumeration limit; the message carries the exact count.
std::vector<Subspace> enumerate_subspaces(int64_t n, int64_t k, const Field& F);

/// The codimension-1 subspaces of x, one per normalized linear
/// functional on x, in a fixed deterministic order.
std::vector<Subspace> covered_subspaces(const Subspace& x, const Field& F);

/// True when every basis row of a lies in the row space of b.
bool is_subspace_of(const Subspace& a, const Subspace& b, const Field& F);

/// Hash lookup from a subspace to its position in an enumeration.
class SubspaceIndex {
 public:
  explicit SubspaceIndex(const std::vector<Subspace>& level);
  /// Position of x in the indexed level; throws std::invalid_argument if
  /// x was not part of it.
  int64_t at(const Subspace& x) const;

 private:
  std::unordered_map<std::string, int64_t> map_;
};

/// Incidence boundary map from k-subspaces to (k-1)-subspaces over
/// GF(p): column x carries a 1 in the row of every subspace it covers.
/// Columns follow enumerate_subspaces(n, k), rows enumerate_subspaces(n, k-1).
SparseMatModP boundary_matrix(int64_t n, int64_t k, const Field& F, int64_t p,
                              Backend backend = Backend::parallel);

/// 0/1 matrix of the containment relation: rows are j-subspaces, columns
/// are k-subspaces, entry 1 when the row is contained in the column.
SparseMatModP containment_matrix(int64_t n, int64_t j, int64_t k,
                                 const Field& F, int64_t p);

/// Invertible n x n matrix over GF(q), row-major.
using GroupElement = std::vector<uint32_t>;

/// Image of x under g acting on row vectors, recanonicalized.  The
/// action composes as act(act(x, g), h) == act(x, gh).
Subspace act(const Subspace& x, const GroupElement& g, const Field& F);

GroupElement group_multiply(const GroupElement& g, const GroupElement& h,
                            int64_t n, const Field& F);

/// Uniformly sampled invertible matrix by rejection.
GroupElement random_invertible(int64_t n, const Field& F, std::mt19937& rng);

/// Number of subspaces in the level fixed by g.
int64_t count_fixed(const std::vector<Subspace>& level, const GroupElement& g,
                    const Field& F);

/// The permutation g induces on a level: result[i] is the index of
/// act(level[i], g).
std::vector<int64_t> permutation_of_level(const std::vector<Subspace>& level,
                                          const SubspaceIndex& idx,
                                          const GroupElement& g,
                                          const Field& F);

}  // namespace qhom
