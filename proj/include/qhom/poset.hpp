#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qhom/linalg.hpp"

namespace qhom {

/// Finite ranked poset given by its cover relation.  Ranks are
/// normalized so the minimum is 0 and covers connect consecutive ranks.
struct RankedPoset {
  std::string name;
  std::vector<int64_t> rank;                 // one entry per element
  std::vector<std::vector<int64_t>> lower;   // elements covered by each element
  int64_t max_rank = 0;
  std::vector<std::vector<int64_t>> levels;  // element indices by rank

  int64_t size() const { return static_cast<int64_t>(rank.size()); }
  int64_t level_size(int64_t k) const {
    return (k < 0 || k > max_rank)
               ? 0
               : static_cast<int64_t>(levels[static_cast<size_t>(k)].size());
  }
};

/// Parses the text format: `poset <name>`, `elements <N>`, then `rank
/// <element> <value>` and `cover <upper> <lower>` lines in any order;
/// `#` starts a comment.  Throws std::invalid_argument with the line
/// number on malformed input, dangling references, duplicate or missing
/// ranks, and covers that skip ranks.
RankedPoset load_poset(std::istream& in);
RankedPoset load_poset_file(const std::string& path);

/// Subsets of {1..n} under inclusion; element index = bitmask value, so
/// each level lists its subsets in increasing bitmask order.
RankedPoset boolean_lattice(int64_t n, int64_t cap = 20);

/// The subspace poset of GF(q)^n with levels in enumeration order.
RankedPoset projective_poset(int64_t n, uint32_t q);

/// Covering-sum boundary from rank k to rank k-1 over GF(p), columns and
/// rows in level order.  Requires 1 <= k <= max rank.
SparseMatModP poset_boundary(const RankedPoset& P, int64_t k, int64_t p);

/// i-fold iterated boundary on rank k; empty levels give zero shapes.
SparseMatModP poset_boundary_power(const RankedPoset& P, int64_t k, int64_t i,
                                   int64_t p);

/// Least m > 1 with every m-fold composite of boundaries zero mod p.
/// Always at most max rank + 1.
int64_t nilpotency_exponent(const RankedPoset& P, int64_t p);

struct PosetHomology {
  int64_t kernel_dim = 0;
  int64_t image_dim = 0;
  int64_t dim = 0;
  std::vector<std::vector<uint8_t>> reps;  // filled when a basis is requested
};

/// Homology of the rank-k level with step i for nilpotency exponent m
/// over GF(p).  Rejects positions where the two iterated boundaries do
/// not compose to zero (the sequence would not be homological).
PosetHomology poset_homology(const RankedPoset& P, int64_t k, int64_t i,
                             int64_t m, int64_t p, bool want_basis = false,
                             Backend backend = Backend::parallel);

}  // namespace qhom
