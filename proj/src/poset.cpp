#include "qhom/poset.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qhom/lattice.hpp"
#include "qhom/qfield.hpp"

namespace qhom {
namespace {

[[noreturn]] void parse_fail(int64_t line, const std::string& what) {
  throw std::invalid_argument("line " + std::to_string(line) + ": " + what);
}

void finalize(RankedPoset& P) {
  int64_t lo = std::numeric_limits<int64_t>::max();
  for (int64_t r : P.rank) lo = std::min(lo, r);
  P.max_rank = 0;
  for (int64_t& r : P.rank) {
    r -= lo;
    P.max_rank = std::max(P.max_rank, r);
  }
  P.levels.assign(static_cast<size_t>(P.max_rank) + 1, {});
  for (int64_t e = 0; e < P.size(); ++e) {
    P.levels[static_cast<size_t>(P.rank[static_cast<size_t>(e)])].push_back(e);
  }
}

bool is_prime(int64_t p) {
  if (p < 2) return false;
  for (int64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

void check_prime(int64_t p) {
  if (!is_prime(p)) {
    throw std::invalid_argument("coefficient modulus must be prime");
  }
}

// Boundary from rank k to rank k-1 without range validation; levels
// outside the poset are empty.
SparseMatModP single_step(const RankedPoset& P, int64_t k, int64_t p) {
  int64_t rows = P.level_size(k - 1);
  int64_t cols = P.level_size(k);
  if (rows == 0 || cols == 0) return SparseMatModP::zero(rows, cols, p);
  std::vector<int64_t> pos(static_cast<size_t>(P.size()), -1);
  const auto& low = P.levels[static_cast<size_t>(k - 1)];
  for (size_t i = 0; i < low.size(); ++i) {
    pos[static_cast<size_t>(low[i])] = static_cast<int64_t>(i);
  }
  std::vector<std::tuple<int64_t, int64_t, int64_t>> trips;
  const auto& level = P.levels[static_cast<size_t>(k)];
  for (size_t c = 0; c < level.size(); ++c) {
    for (int64_t y : P.lower[static_cast<size_t>(level[c])]) {
      trips.emplace_back(pos[static_cast<size_t>(y)], static_cast<int64_t>(c),
                         1);
    }
  }
  return SparseMatModP::from_triplets(rows, cols, p, trips);
}

}  // namespace

RankedPoset load_poset(std::istream& in) {
  RankedPoset P;
  std::vector<char> has_rank;
  std::vector<std::tuple<int64_t, int64_t, int64_t>> covers;  // upper, lower, line
  bool saw_poset = false, saw_elements = false;
  int64_t nelem = 0;
  std::string raw;
  int64_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string text = raw.substr(0, raw.find('#'));
    std::istringstream ls(text);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "poset") {
      if (saw_poset) parse_fail(lineno, "duplicate poset header");
      if (!(ls >> P.name)) parse_fail(lineno, "poset header needs a name");
      saw_poset = true;
    } else if (word == "elements") {
      if (!saw_poset) parse_fail(lineno, "elements before the poset header");
      if (saw_elements) parse_fail(lineno, "duplicate elements line");
      if (!(ls >> nelem) || nelem <= 0) {
        parse_fail(lineno, "elements needs a positive count");
      }
      P.rank.assign(static_cast<size_t>(nelem), 0);
      P.lower.assign(static_cast<size_t>(nelem), {});
      has_rank.assign(static_cast<size_t>(nelem), 0);
      saw_elements = true;
    } else if (word == "rank") {
      if (!saw_elements) parse_fail(lineno, "rank before the elements line");
      int64_t e = 0, r = 0;
      if (!(ls >> e >> r)) parse_fail(lineno, "rank needs element and value");
      if (e < 0 || e >= nelem) {
        parse_fail(lineno, "element " + std::to_string(e) + " out of range");
      }
      if (has_rank[static_cast<size_t>(e)]) {
        parse_fail(lineno, "element " + std::to_string(e) + " ranked twice");
      }
      P.rank[static_cast<size_t>(e)] = r;
      has_rank[static_cast<size_t>(e)] = 1;
    } else if (word == "cover") {
      if (!saw_elements) parse_fail(lineno, "cover before the elements line");
      int64_t u = 0, l = 0;
      if (!(ls >> u >> l)) parse_fail(lineno, "cover needs upper and lower");
      if (u < 0 || u >= nelem || l < 0 || l >= nelem) {
        parse_fail(lineno, "cover references an element out of range");
      }
      covers.emplace_back(u, l, lineno);
    } else {
      parse_fail(lineno, "unknown directive '" + word + "'");
    }
    std::string extra;
    if (ls >> extra) parse_fail(lineno, "trailing tokens");
  }
  if (!saw_poset) {
    throw std::invalid_argument("poset description has no poset header");
  }
  if (!saw_elements) {
    throw std::invalid_argument("poset description has no elements line");
  }
  for (int64_t e = 0; e < nelem; ++e) {
    if (!has_rank[static_cast<size_t>(e)]) {
      throw std::invalid_argument("element " + std::to_string(e) +
                                  " has no rank");
    }
  }
  for (const auto& [u, l, line] : covers) {
    if (P.rank[static_cast<size_t>(l)] != P.rank[static_cast<size_t>(u)] - 1) {
      parse_fail(line, "cover joins non-consecutive ranks");
    }
    auto& low = P.lower[static_cast<size_t>(u)];
    if (std::find(low.begin(), low.end(), l) != low.end()) {
      parse_fail(line, "duplicate cover");
    }
    low.push_back(l);
  }
  finalize(P);
  return P;
}

RankedPoset load_poset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open poset file " + path);
  }
  return load_poset(in);
}

RankedPoset boolean_lattice(int64_t n, int64_t cap) {
  if (n < 0) throw std::invalid_argument("subset lattice needs n >= 0");
  if (n > cap) {
    throw std::invalid_argument("subset lattice size " + std::to_string(n) +
                                " exceeds the cap " + std::to_string(cap));
  }
  RankedPoset P;
  P.name = "B" + std::to_string(n);
  int64_t total = int64_t{1} << n;
  P.rank.resize(static_cast<size_t>(total));
  P.lower.resize(static_cast<size_t>(total));
  for (int64_t s = 0; s < total; ++s) {
    P.rank[static_cast<size_t>(s)] =
        static_cast<int64_t>(__builtin_popcountll(static_cast<uint64_t>(s)));
    for (int64_t b = 0; b < n; ++b) {
      if (s & (int64_t{1} << b)) {
        P.lower[static_cast<size_t>(s)].push_back(s & ~(int64_t{1} << b));
      }
    }
  }
  finalize(P);
  return P;
}

RankedPoset projective_poset(int64_t n, uint32_t q) {
  Field F(q);
  RankedPoset P;
  P.name = "P(" + std::to_string(n) + "," + std::to_string(q) + ")";
  std::vector<int64_t> offset(static_cast<size_t>(n) + 2, 0);
  std::vector<std::vector<Subspace>> levels;
  for (int64_t k = 0; k <= n; ++k) {
    levels.push_back(enumerate_subspaces(n, k, F));
    offset[static_cast<size_t>(k) + 1] =
        offset[static_cast<size_t>(k)] +
        static_cast<int64_t>(levels.back().size());
  }
  int64_t total = offset[static_cast<size_t>(n) + 1];
  P.rank.resize(static_cast<size_t>(total));
  P.lower.resize(static_cast<size_t>(total));
  for (int64_t k = 0; k <= n; ++k) {
    for (size_t c = 0; c < levels[static_cast<size_t>(k)].size(); ++c) {
      int64_t e = offset[static_cast<size_t>(k)] + static_cast<int64_t>(c);
      P.rank[static_cast<size_t>(e)] = k;
    }
    if (k == 0) continue;
    SubspaceIndex idx(levels[static_cast<size_t>(k - 1)]);
    for (size_t c = 0; c < levels[static_cast<size_t>(k)].size(); ++c) {
      int64_t e = offset[static_cast<size_t>(k)] + static_cast<int64_t>(c);
      for (const Subspace& y :
           covered_subspaces(levels[static_cast<size_t>(k)][c], F)) {
        P.lower[static_cast<size_t>(e)].push_back(
            offset[static_cast<size_t>(k - 1)] + idx.at(y));
      }
      std::sort(P.lower[static_cast<size_t>(e)].begin(),
                P.lower[static_cast<size_t>(e)].end());
    }
  }
  finalize(P);
  return P;
}

SparseMatModP poset_boundary(const RankedPoset& P, int64_t k, int64_t p) {
  check_prime(p);
  if (k < 1 || k > P.max_rank) {
    throw std::invalid_argument("boundary rank must lie in [1, max rank]");
  }
  return single_step(P, k, p);
}

SparseMatModP poset_boundary_power(const RankedPoset& P, int64_t k, int64_t i,
                                   int64_t p) {
  check_prime(p);
  if (i < 0) throw std::invalid_argument("iterated boundary needs i >= 0");
  if (i == 0) return SparseMatModP::identity(P.level_size(k), p);
  SparseMatModP acc = single_step(P, k, p);
  for (int64_t t = 1; t < i; ++t) {
    acc = multiply(single_step(P, k - t, p), acc);
  }
  return acc;
}

int64_t nilpotency_exponent(const RankedPoset& P, int64_t p) {
  check_prime(p);
  std::vector<SparseMatModP> singles;
  for (int64_t k = 0; k <= P.max_rank; ++k) {
    singles.push_back(single_step(P, k, p));
  }
  for (int64_t m = 2; m <= P.max_rank; ++m) {
    bool all_zero = true;
    for (int64_t k = m; k <= P.max_rank && all_zero; ++k) {
      SparseMatModP acc = singles[static_cast<size_t>(k)];
      for (int64_t t = 1; t < m; ++t) {
        acc = multiply(singles[static_cast<size_t>(k - t)], acc);
      }
      if (acc.nnz() != 0) all_zero = false;
    }
    if (all_zero) return m;
  }
  return std::max<int64_t>(2, P.max_rank + 1);
}

PosetHomology poset_homology(const RankedPoset& P, int64_t k, int64_t i,
                             int64_t m, int64_t p, bool want_basis,
                             Backend backend) {
  check_prime(p);
  if (m < 2) throw std::invalid_argument("nilpotency exponent must be >= 2");
  if (i <= 0 || i >= m) throw std::invalid_argument("need 0 < i < m");
  SparseMatModP cycles = poset_boundary_power(P, k, i, p);
  SparseMatModP bounds = poset_boundary_power(P, k + m - i, m - i, p);
  if (multiply(cycles, bounds).nnz() != 0) {
    throw std::invalid_argument(
        "the sequence is not homological at this position: the " +
        std::to_string(i) + "-step and " + std::to_string(m - i) +
        "-step boundaries do not compose to zero mod " + std::to_string(p));
  }
  PosetHomology h;
  h.kernel_dim = P.level_size(k) - rank_mod_p(cycles, backend);
  h.image_dim = rank_mod_p(bounds, backend);
  h.dim = h.kernel_dim - h.image_dim;
  if (want_basis) {
    QuotientRows qb = quotient_rows(cycles, bounds, backend);
    if (static_cast<int64_t>(qb.rep_rows.size()) != h.dim) {
      throw std::logic_error("quotient basis size disagrees with dimensions");
    }
    h.reps = std::move(qb.rep_rows);
  }
  return h;
}

}  // namespace qhom
