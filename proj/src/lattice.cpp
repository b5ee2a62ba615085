#include "qhom/lattice.hpp"

#include <algorithm>
#include <stdexcept>

#include "qhom/qcomb.hpp"

namespace qhom {
namespace {

constexpr int64_t kMaxLevelSize = 5000000;

std::vector<uint32_t> gfq_matmul(const std::vector<uint32_t>& a, int64_t ar,
                                 int64_t ac, const std::vector<uint32_t>& b,
                                 int64_t bc, const Field& F) {
  std::vector<uint32_t> out(static_cast<size_t>(ar * bc), 0);
  for (int64_t i = 0; i < ar; ++i) {
    for (int64_t k = 0; k < ac; ++k) {
      uint32_t av = a[static_cast<size_t>(i * ac + k)];
      if (av == 0) continue;
      for (int64_t j = 0; j < bc; ++j) {
        uint32_t bv = b[static_cast<size_t>(k * bc + j)];
        if (bv == 0) continue;
        size_t o = static_cast<size_t>(i * bc + j);
        out[o] = F.add(out[o], F.mul(av, bv));
      }
    }
  }
  return out;
}

std::string level_key(const Subspace& x) {
  std::string key;
  key.reserve(x.rows.size() * 2);
  for (uint32_t v : x.rows) {
    key.push_back(static_cast<char>(v & 0xff));
    key.push_back(static_cast<char>((v >> 8) & 0xff));
  }
  return key;
}

}  // namespace

int64_t rref_gfq(std::vector<uint32_t>& a, int64_t rows, int64_t cols,
                 const Field& F, std::vector<int64_t>* pivot_cols) {
  int64_t r = 0;
  for (int64_t c = 0; c < cols && r < rows; ++c) {
    int64_t piv = -1;
    for (int64_t i = r; i < rows; ++i) {
      if (a[static_cast<size_t>(i * cols + c)] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r) {
      for (int64_t x = 0; x < cols; ++x) {
        std::swap(a[static_cast<size_t>(r * cols + x)],
                  a[static_cast<size_t>(piv * cols + x)]);
      }
    }
    uint32_t pv = a[static_cast<size_t>(r * cols + c)];
    if (pv != 1) {
      uint32_t iv = F.inv(pv);
      for (int64_t x = c; x < cols; ++x) {
        size_t o = static_cast<size_t>(r * cols + x);
        a[o] = F.mul(a[o], iv);
      }
    }
    for (int64_t j = 0; j < rows; ++j) {
      if (j == r) continue;
      uint32_t f = a[static_cast<size_t>(j * cols + c)];
      if (f == 0) continue;
      for (int64_t x = c; x < cols; ++x) {
        size_t oj = static_cast<size_t>(j * cols + x);
        size_t orr = static_cast<size_t>(r * cols + x);
        a[oj] = F.sub(a[oj], F.mul(f, a[orr]));
      }
    }
    if (pivot_cols != nullptr) pivot_cols->push_back(c);
    ++r;
  }
  return r;
}

std::vector<Subspace> enumerate_subspaces(int64_t n, int64_t k,
                                          const Field& F) {
  if (n < 0 || k < 0 || k > n) {
    throw std::invalid_argument("subspace level requires 0 <= k <= n");
  }
  BigInt count = gauss_binomial(n, k, F.size());
  if (count > kMaxLevelSize) {
    throw std::invalid_argument("level size " + count.get_str() +
                                " exceeds the enumeration limit " +
                                std::to_string(kMaxLevelSize));
  }
  const uint32_t q = F.size();
  std::vector<Subspace> out;
  out.reserve(static_cast<size_t>(count.get_si()));

  std::vector<int64_t> comb(static_cast<size_t>(k));
  for (int64_t i = 0; i < k; ++i) comb[static_cast<size_t>(i)] = i;
  for (;;) {
    std::vector<char> is_pivot(static_cast<size_t>(n), 0);
    for (int64_t c : comb) is_pivot[static_cast<size_t>(c)] = 1;
    std::vector<std::pair<int64_t, int64_t>> free_pos;
    for (int64_t i = 0; i < k; ++i) {
      for (int64_t c = comb[static_cast<size_t>(i)] + 1; c < n; ++c) {
        if (!is_pivot[static_cast<size_t>(c)]) free_pos.emplace_back(i, c);
      }
    }
    std::vector<uint32_t> digits(free_pos.size(), 0);
    for (;;) {
      Subspace x;
      x.n = n;
      x.k = k;
      x.rows.assign(static_cast<size_t>(k * n), 0);
      for (int64_t i = 0; i < k; ++i) {
        x.rows[static_cast<size_t>(i * n + comb[static_cast<size_t>(i)])] = 1;
      }
      for (size_t t = 0; t < free_pos.size(); ++t) {
        x.rows[static_cast<size_t>(free_pos[t].first * n +
                                   free_pos[t].second)] = digits[t];
      }
      out.push_back(std::move(x));
      // Odometer with the last free position least significant.
      size_t t = digits.size();
      while (t > 0) {
        --t;
        if (++digits[t] < q) break;
        digits[t] = 0;
        if (t == 0) goto next_comb;
      }
      if (digits.empty()) break;
    }
  next_comb:
    int64_t i = k - 1;
    while (i >= 0 && comb[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++comb[static_cast<size_t>(i)];
    for (int64_t j = i + 1; j < k; ++j) {
      comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
    }
  }
  return out;
}

std::vector<Subspace> covered_subspaces(const Subspace& x, const Field& F) {
  const int64_t k = x.k;
  const int64_t n = x.n;
  const uint32_t q = F.size();
  std::vector<Subspace> out;
  if (k == 0) return out;
  // One hyperplane per functional with leading coefficient 1 at slot j
  // and free coefficients past it.
  for (int64_t j = 0; j < k; ++j) {
    std::vector<uint32_t> phi(static_cast<size_t>(k - j - 1), 0);
    for (;;) {
      std::vector<uint32_t> basis(static_cast<size_t>((k - 1) * k), 0);
      int64_t r = 0;
      for (int64_t t = 0; t < k; ++t) {
        if (t == j) continue;
        basis[static_cast<size_t>(r * k + t)] = 1;
        if (t > j) {
          uint32_t c = phi[static_cast<size_t>(t - j - 1)];
          if (c != 0) basis[static_cast<size_t>(r * k + j)] = F.neg(c);
        }
        ++r;
      }
      std::vector<uint32_t> ambient = gfq_matmul(basis, k - 1, k, x.rows, n, F);
      rref_gfq(ambient, k - 1, n, F);
      Subspace y;
      y.n = n;
      y.k = k - 1;
      y.rows = std::move(ambient);
      out.push_back(std::move(y));

      size_t t = phi.size();
      bool done = phi.empty();
      while (t > 0) {
        --t;
        if (++phi[t] < q) break;
        phi[t] = 0;
        if (t == 0) done = true;
      }
      if (done) break;
    }
  }
  return out;
}

bool is_subspace_of(const Subspace& a, const Subspace& b, const Field& F) {
  if (a.n != b.n) throw std::invalid_argument("ambient dimension mismatch");
  if (a.k > b.k) return false;
  // b is already canonical, so reduce each row of a against b's pivots.
  std::vector<int64_t> pivots(static_cast<size_t>(b.k));
  for (int64_t r = 0; r < b.k; ++r) {
    int64_t lead = -1;
    for (int64_t c = 0; c < b.n; ++c) {
      if (b.at(r, c) != 0) {
        lead = c;
        break;
      }
    }
    pivots[static_cast<size_t>(r)] = lead;
  }
  for (int64_t r = 0; r < a.k; ++r) {
    std::vector<uint32_t> v(a.rows.begin() + r * a.n,
                            a.rows.begin() + (r + 1) * a.n);
    for (int64_t br = 0; br < b.k; ++br) {
      uint32_t f = v[static_cast<size_t>(pivots[static_cast<size_t>(br)])];
      if (f == 0) continue;
      for (int64_t c = 0; c < a.n; ++c) {
        v[static_cast<size_t>(c)] =
            F.sub(v[static_cast<size_t>(c)], F.mul(f, b.at(br, c)));
      }
    }
    for (uint32_t x : v) {
      if (x != 0) return false;
    }
  }
  return true;
}

SubspaceIndex::SubspaceIndex(const std::vector<Subspace>& level) {
  map_.reserve(level.size() * 2);
  for (size_t i = 0; i < level.size(); ++i) {
    map_.emplace(level_key(level[i]), static_cast<int64_t>(i));
  }
}

int64_t SubspaceIndex::at(const Subspace& x) const {
  auto it = map_.find(level_key(x));
  if (it == map_.end()) {
    throw std::invalid_argument("subspace not present in the indexed level");
  }
  return it->second;
}

SparseMatModP boundary_matrix(int64_t n, int64_t k, const Field& F, int64_t p,
                              Backend backend) {
  if (k < 0 || k > n) {
    throw std::invalid_argument("boundary level requires 0 <= k <= n");
  }
  std::vector<Subspace> cols_level = enumerate_subspaces(n, k, F);
  if (k == 0) {
    return SparseMatModP::zero(0, static_cast<int64_t>(cols_level.size()), p);
  }
  std::vector<Subspace> rows_level = enumerate_subspaces(n, k - 1, F);
  SubspaceIndex idx(rows_level);

  const int64_t ncols = static_cast<int64_t>(cols_level.size());
  std::vector<std::vector<int32_t>> percol(static_cast<size_t>(ncols));
  if (backend == Backend::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (int64_t c = 0; c < ncols; ++c) {
      std::vector<Subspace> cov = covered_subspaces(cols_level[static_cast<size_t>(c)], F);
      std::vector<int32_t>& rows = percol[static_cast<size_t>(c)];
      rows.reserve(cov.size());
      for (const Subspace& y : cov) rows.push_back(static_cast<int32_t>(idx.at(y)));
      std::sort(rows.begin(), rows.end());
    }
  } else {
    for (int64_t c = 0; c < ncols; ++c) {
      std::vector<Subspace> cov = covered_subspaces(cols_level[static_cast<size_t>(c)], F);
      std::vector<int32_t>& rows = percol[static_cast<size_t>(c)];
      rows.reserve(cov.size());
      for (const Subspace& y : cov) rows.push_back(static_cast<int32_t>(idx.at(y)));
      std::sort(rows.begin(), rows.end());
    }
  }

  SparseMatModP m =
      SparseMatModP::zero(static_cast<int64_t>(rows_level.size()), ncols, p);
  int64_t nnz = 0;
  for (const auto& rows : percol) nnz += static_cast<int64_t>(rows.size());
  m.row_idx.reserve(static_cast<size_t>(nnz));
  m.val.assign(static_cast<size_t>(nnz), 1);
  for (int64_t c = 0; c < ncols; ++c) {
    for (int32_t r : percol[static_cast<size_t>(c)]) m.row_idx.push_back(r);
    m.col_ptr[static_cast<size_t>(c) + 1] =
        static_cast<int64_t>(m.row_idx.size());
  }
  return m;
}

SparseMatModP containment_matrix(int64_t n, int64_t j, int64_t k,
                                 const Field& F, int64_t p) {
  if (j < 0 || j > k || k > n) {
    throw std::invalid_argument("containment requires 0 <= j <= k <= n");
  }
  std::vector<Subspace> rows_level = enumerate_subspaces(n, j, F);
  std::vector<Subspace> cols_level = enumerate_subspaces(n, k, F);
  std::vector<std::tuple<int64_t, int64_t, int64_t>> trips;
  for (size_t c = 0; c < cols_level.size(); ++c) {
    for (size_t r = 0; r < rows_level.size(); ++r) {
      if (is_subspace_of(rows_level[r], cols_level[c], F)) {
        trips.emplace_back(static_cast<int64_t>(r), static_cast<int64_t>(c), 1);
      }
    }
  }
  return SparseMatModP::from_triplets(static_cast<int64_t>(rows_level.size()),
                                      static_cast<int64_t>(cols_level.size()),
                                      p, trips);
}

Subspace act(const Subspace& x, const GroupElement& g, const Field& F) {
  if (static_cast<int64_t>(g.size()) != x.n * x.n) {
    throw std::invalid_argument("group element shape mismatch");
  }
  std::vector<uint32_t> img = gfq_matmul(x.rows, x.k, x.n, g, x.n, F);
  int64_t r = rref_gfq(img, x.k, x.n, F);
  if (r != x.k) {
    throw std::invalid_argument("group element is singular");
  }
  Subspace y;
  y.n = x.n;
  y.k = x.k;
  y.rows = std::move(img);
  return y;
}

GroupElement group_multiply(const GroupElement& g, const GroupElement& h,
                            int64_t n, const Field& F) {
  if (static_cast<int64_t>(g.size()) != n * n ||
      static_cast<int64_t>(h.size()) != n * n) {
    throw std::invalid_argument("group element shape mismatch");
  }
  return gfq_matmul(g, n, n, h, n, F);
}

GroupElement random_invertible(int64_t n, const Field& F, std::mt19937& rng) {
  const uint32_t q = F.size();
  for (;;) {
    GroupElement g(static_cast<size_t>(n * n));
    for (uint32_t& v : g) v = rng() % q;
    std::vector<uint32_t> copy = g;
    if (rref_gfq(copy, n, n, F) == n) return g;
  }
}

int64_t count_fixed(const std::vector<Subspace>& level, const GroupElement& g,
                    const Field& F) {
  int64_t fixed = 0;
  for (const Subspace& x : level) {
    if (act(x, g, F) == x) ++fixed;
  }
  return fixed;
}

std::vector<int64_t> permutation_of_level(const std::vector<Subspace>& level,
                                          const SubspaceIndex& idx,
                                          const GroupElement& g,
                                          const Field& F) {
  std::vector<int64_t> perm(level.size());
  for (size_t i = 0; i < level.size(); ++i) {
    perm[i] = idx.at(act(level[i], g, F));
  }
  return perm;
}

}  // namespace qhom
