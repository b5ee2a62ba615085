#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qhom/lattice.hpp"
#include "qhom/linalg.hpp"
#include "qhom/qcomb.hpp"
#include "qhom/qfield.hpp"

namespace qhom {

/// Dimension data of one homology module at position (k, i).
struct HomologyResult {
  IndexPair indices;
  int64_t kernel_dim = 0;  // nullity of the i-step map on level k
  int64_t image_dim = 0;   // rank of the (m-i)-step map into level k
  int64_t betti = 0;       // kernel_dim - image_dim
};

/// Exact homology of the subspace lattice of GF(q)^n with coefficients
/// in GF(p), p not dividing q.  Levels, boundary maps, iterated maps,
/// ranks, and quotient bases are computed on demand and cached, so one
/// engine instance amortizes work across many queries.
class HomologyEngine {
 public:
  /// When cache_dir is nonempty, single-step boundary matrices are
  /// loaded from that directory when present and written after being
  /// built otherwise.  A cached file whose key or shape disagrees with
  /// the request raises integrity_error.
  HomologyEngine(int64_t n, uint32_t q, int64_t p,
                 Backend backend = Backend::parallel,
                 std::string cache_dir = "");

  int64_t n() const { return n_; }
  uint32_t q() const { return q_; }
  int64_t p() const { return p_; }
  int64_t m() const { return m_; }
  Backend backend() const { return backend_; }
  const Field& field() const { return field_; }

  /// Number of k-subspaces; zero outside 0 <= k <= n.
  int64_t dim_level(int64_t k) const;

  const std::vector<Subspace>& level(int64_t k) const;
  const SubspaceIndex& level_index(int64_t k) const;

  /// Single-step boundary from level k to level k-1.
  const SparseMatModP& boundary(int64_t k) const;

  /// i-fold iterated boundary on level k (identity at i = 0; a map to
  /// the zero space when i > k).
  const SparseMatModP& boundary_power(int64_t k, int64_t i) const;

  /// Kernel, image, and quotient dimensions at (k, i), 0 <= i <= m.
  HomologyResult homology(int64_t k, int64_t i) const;

  /// Cycle representatives spanning the quotient, together with the
  /// image basis they are reduced against.
  using QuotientBasis = QuotientRows;
  const QuotientBasis& quotient_basis(int64_t k, int64_t i) const;

  /// Coordinates of the class of cycle v in the representative basis.
  /// Throws std::invalid_argument when v is not a cycle at (k, i).
  std::vector<uint8_t> class_of(int64_t k, int64_t i,
                                const std::vector<uint8_t>& v) const;

  /// Matrix of the map induced on homology by the t-fold boundary,
  /// from (k, i) to (k - t, i - t).  Degenerate endpoints give matrices
  /// with zero rows or columns rather than errors.
  SparseMatModP induced_boundary_map(int64_t k, int64_t i, int64_t t) const;

  /// Matrix of the map induced by inclusion of cycle spaces, from
  /// (k, i) to (k, j) for i <= j.
  SparseMatModP induced_inclusion_map(int64_t k, int64_t i, int64_t j) const;

  /// Number of k-subspaces fixed by g.
  int64_t fixed_points(int64_t k, const GroupElement& g) const;

  /// Trace of the action induced by g on the homology at (k, i),
  /// reduced into [0, p).
  int64_t homology_trace(int64_t k, int64_t i, const GroupElement& g) const;

  /// The homology modules of the alternating sequence through (k, i):
  /// positions congruent to k carry index i, positions congruent to
  /// k - i carry index m - i; ordered by level, restricted to [0, n].
  std::vector<HomologyResult> sequence_profile(int64_t k, int64_t i) const;

 private:
  using Key = std::pair<int64_t, int64_t>;

  void check_position(int64_t k, int64_t i) const;
  int64_t rank_of_power(int64_t k, int64_t i) const;

  int64_t n_;
  uint32_t q_;
  int64_t p_;
  int64_t m_;
  Backend backend_;
  std::string cache_dir_;
  Field field_;

  mutable std::map<int64_t, std::vector<Subspace>> levels_;
  mutable std::map<int64_t, SubspaceIndex> indexes_;
  mutable std::map<int64_t, SparseMatModP> boundaries_;
  mutable std::map<Key, SparseMatModP> powers_;
  mutable std::map<Key, int64_t> ranks_;
  mutable std::map<Key, QuotientBasis> quotients_;
};

}  // namespace qhom
