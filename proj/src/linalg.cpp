#include "qhom/linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qhom {
namespace {

constexpr int64_t kDenseColLimit = 10000;
constexpr int64_t kDenseCellLimit = 200000000;

void check_modulus(int64_t p) {
  if (p < 2 || p > 251) {
    throw std::invalid_argument("modulus must lie in [2, 251], got " +
                                std::to_string(p));
  }
}

void check_shape(int64_t rows, int64_t cols) {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("matrix dimensions must be nonnegative");
  }
}

uint8_t inv_mod(uint8_t a, int64_t p) {
  // p is small, so a linear scan is fine and has no edge cases.
  for (int64_t x = 1; x < p; ++x) {
    if (a * x % p == 1) return static_cast<uint8_t>(x);
  }
  throw std::invalid_argument("element has no inverse mod " + std::to_string(p));
}

bool dense_fits(const SparseMatModP& m) {
  return m.cols <= kDenseColLimit && m.rows * m.cols <= kDenseCellLimit;
}

}  // namespace

SparseMatModP SparseMatModP::zero(int64_t rows, int64_t cols, int64_t p) {
  check_shape(rows, cols);
  check_modulus(p);
  SparseMatModP m;
  m.rows = rows;
  m.cols = cols;
  m.p = p;
  m.col_ptr.assign(static_cast<size_t>(cols) + 1, 0);
  return m;
}

SparseMatModP SparseMatModP::identity(int64_t n, int64_t p) {
  SparseMatModP m = zero(n, n, p);
  m.row_idx.resize(static_cast<size_t>(n));
  m.val.assign(static_cast<size_t>(n), 1);
  for (int64_t i = 0; i < n; ++i) {
    m.col_ptr[static_cast<size_t>(i) + 1] = i + 1;
    m.row_idx[static_cast<size_t>(i)] = static_cast<int32_t>(i);
  }
  return m;
}

SparseMatModP SparseMatModP::from_triplets(
    int64_t rows, int64_t cols, int64_t p,
    const std::vector<std::tuple<int64_t, int64_t, int64_t>>& entries) {
  SparseMatModP m = zero(rows, cols, p);
  std::vector<std::tuple<int64_t, int64_t, uint8_t>> kept;
  kept.reserve(entries.size());
  for (const auto& [r, c, v] : entries) {
    if (r < 0 || r >= rows || c < 0 || c >= cols) {
      throw std::invalid_argument("triplet index out of range");
    }
    int64_t vv = v % p;
    if (vv < 0) vv += p;
    if (vv == 0) continue;
    kept.emplace_back(r, c, static_cast<uint8_t>(vv));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
    return std::get<0>(a) < std::get<0>(b);
  });
  for (size_t i = 1; i < kept.size(); ++i) {
    if (std::get<0>(kept[i]) == std::get<0>(kept[i - 1]) &&
        std::get<1>(kept[i]) == std::get<1>(kept[i - 1])) {
      throw std::invalid_argument("duplicate triplet at row " +
                                  std::to_string(std::get<0>(kept[i])) +
                                  ", col " +
                                  std::to_string(std::get<1>(kept[i])));
    }
  }
  m.row_idx.reserve(kept.size());
  m.val.reserve(kept.size());
  for (const auto& [r, c, v] : kept) {
    m.row_idx.push_back(static_cast<int32_t>(r));
    m.val.push_back(v);
    ++m.col_ptr[static_cast<size_t>(c) + 1];
  }
  for (int64_t c = 0; c < cols; ++c) {
    m.col_ptr[static_cast<size_t>(c) + 1] += m.col_ptr[static_cast<size_t>(c)];
  }
  return m;
}

DenseMatModP to_dense(const SparseMatModP& m) {
  DenseMatModP d;
  d.rows = m.rows;
  d.cols = m.cols;
  d.p = m.p;
  d.a.assign(static_cast<size_t>(m.rows) * static_cast<size_t>(m.cols), 0);
  for (int64_t c = 0; c < m.cols; ++c) {
    for (int64_t k = m.col_ptr[static_cast<size_t>(c)];
         k < m.col_ptr[static_cast<size_t>(c) + 1]; ++k) {
      d.at(m.row_idx[static_cast<size_t>(k)], c) = m.val[static_cast<size_t>(k)];
    }
  }
  return d;
}

SparseMatModP transpose(const SparseMatModP& m) {
  SparseMatModP t = SparseMatModP::zero(m.cols, m.rows, m.p);
  t.row_idx.resize(m.row_idx.size());
  t.val.resize(m.val.size());
  for (size_t k = 0; k < m.row_idx.size(); ++k) {
    ++t.col_ptr[static_cast<size_t>(m.row_idx[k]) + 1];
  }
  for (int64_t c = 0; c < t.cols; ++c) {
    t.col_ptr[static_cast<size_t>(c) + 1] += t.col_ptr[static_cast<size_t>(c)];
  }
  std::vector<int64_t> next(t.col_ptr.begin(), t.col_ptr.end() - 1);
  for (int64_t c = 0; c < m.cols; ++c) {
    for (int64_t k = m.col_ptr[static_cast<size_t>(c)];
         k < m.col_ptr[static_cast<size_t>(c) + 1]; ++k) {
      int64_t r = m.row_idx[static_cast<size_t>(k)];
      int64_t slot = next[static_cast<size_t>(r)]++;
      t.row_idx[static_cast<size_t>(slot)] = static_cast<int32_t>(c);
      t.val[static_cast<size_t>(slot)] = m.val[static_cast<size_t>(k)];
    }
  }
  return t;
}

SparseMatModP multiply(const SparseMatModP& a, const SparseMatModP& b) {
  if (a.cols != b.rows) throw std::invalid_argument("shape mismatch in product");
  if (a.p != b.p) throw std::invalid_argument("modulus mismatch in product");
  SparseMatModP out = SparseMatModP::zero(a.rows, b.cols, a.p);
  std::vector<uint64_t> acc(static_cast<size_t>(a.rows), 0);
  std::vector<int32_t> touched;
  for (int64_t j = 0; j < b.cols; ++j) {
    touched.clear();
    for (int64_t kb = b.col_ptr[static_cast<size_t>(j)];
         kb < b.col_ptr[static_cast<size_t>(j) + 1]; ++kb) {
      int64_t k = b.row_idx[static_cast<size_t>(kb)];
      uint64_t bv = b.val[static_cast<size_t>(kb)];
      for (int64_t ka = a.col_ptr[static_cast<size_t>(k)];
           ka < a.col_ptr[static_cast<size_t>(k) + 1]; ++ka) {
        int32_t i = a.row_idx[static_cast<size_t>(ka)];
        if (acc[static_cast<size_t>(i)] == 0) touched.push_back(i);
        acc[static_cast<size_t>(i)] += a.val[static_cast<size_t>(ka)] * bv;
        // Keep the accumulator small so "was zero" stays a valid marker.
        acc[static_cast<size_t>(i)] %= static_cast<uint64_t>(a.p);
        if (acc[static_cast<size_t>(i)] == 0)
          acc[static_cast<size_t>(i)] = static_cast<uint64_t>(a.p);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int32_t i : touched) {
      uint64_t v = acc[static_cast<size_t>(i)] % static_cast<uint64_t>(a.p);
      acc[static_cast<size_t>(i)] = 0;
      if (v != 0) {
        out.row_idx.push_back(i);
        out.val.push_back(static_cast<uint8_t>(v));
      }
    }
    out.col_ptr[static_cast<size_t>(j) + 1] =
        static_cast<int64_t>(out.row_idx.size());
  }
  return out;
}

std::vector<uint8_t> apply(const SparseMatModP& a,
                           const std::vector<uint8_t>& v) {
  if (static_cast<int64_t>(v.size()) != a.cols) {
    throw std::invalid_argument("vector length mismatch in apply");
  }
  std::vector<uint64_t> acc(static_cast<size_t>(a.rows), 0);
  for (int64_t c = 0; c < a.cols; ++c) {
    if (v[static_cast<size_t>(c)] == 0) continue;
    uint64_t s = v[static_cast<size_t>(c)] % a.p;
    for (int64_t k = a.col_ptr[static_cast<size_t>(c)];
         k < a.col_ptr[static_cast<size_t>(c) + 1]; ++k) {
      size_t i = static_cast<size_t>(a.row_idx[static_cast<size_t>(k)]);
      acc[i] = (acc[i] + a.val[static_cast<size_t>(k)] * s) %
               static_cast<uint64_t>(a.p);
    }
  }
  std::vector<uint8_t> w(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) w[i] = static_cast<uint8_t>(acc[i]);
  return w;
}

int64_t eliminate(DenseMatModP& m, bool full_reduce, Backend backend,
                  std::vector<int64_t>* pivot_cols) {
  check_modulus(m.p);
  const int64_t rows = m.rows;
  const int64_t cols = m.cols;
  const int64_t p = m.p;
  uint8_t* a = m.a.data();

  // For p <= 13 the update a + f*b stays below 256, so a byte-sized
  // remainder table replaces the division.
  uint8_t redtab[256];
  const bool small_p = (p - 1) * p <= 255;
  if (small_p) {
    for (int i = 0; i < 256; ++i) redtab[i] = static_cast<uint8_t>(i % p);
  }

  int64_t r = 0;
  for (int64_t c = 0; c < cols && r < rows; ++c) {
    int64_t piv = -1;
    for (int64_t i = r; i < rows; ++i) {
      if (a[i * cols + c] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r) {
      for (int64_t x = c; x < cols; ++x) {
        std::swap(a[r * cols + x], a[piv * cols + x]);
      }
    }
    uint8_t pv = a[r * cols + c];
    if (pv != 1) {
      uint32_t iv = inv_mod(pv, p);
      for (int64_t x = c; x < cols; ++x) {
        a[r * cols + x] = static_cast<uint8_t>(a[r * cols + x] * iv % p);
      }
    }
    const uint8_t* prow = a + r * cols;
    auto update_row = [&](int64_t j) {
      uint8_t f = a[j * cols + c];
      if (f == 0) return;
      uint8_t* row = a + j * cols;
      const uint32_t f2 = static_cast<uint32_t>(p - f);
      if (small_p) {
        for (int64_t x = c; x < cols; ++x) {
          row[x] = redtab[row[x] + f2 * prow[x]];
        }
      } else {
        for (int64_t x = c; x < cols; ++x) {
          row[x] = static_cast<uint8_t>((row[x] + f2 * prow[x]) % p);
        }
      }
    };
    const int64_t lo = full_reduce ? 0 : r + 1;
    if (backend == Backend::parallel) {
#pragma omp parallel for schedule(static)
      for (int64_t j = lo; j < rows; ++j) {
        if (j != r) update_row(j);
      }
    } else {
      for (int64_t j = lo; j < rows; ++j) {
        if (j != r) update_row(j);
      }
    }
    if (pivot_cols != nullptr) pivot_cols->push_back(c);
    ++r;
  }
  return r;
}

int64_t rank_mod_p(const SparseMatModP& m, Backend backend) {
  if (!dense_fits(m)) return rank_sparse(m);
  DenseMatModP d = to_dense(m);
  return eliminate(d, false, backend);
}

std::vector<std::vector<uint8_t>> kernel_basis(const SparseMatModP& m,
                                               Backend backend) {
  if (!dense_fits(m)) {
    throw std::runtime_error("matrix too large for dense kernel extraction");
  }
  DenseMatModP d = to_dense(m);
  std::vector<int64_t> pivots;
  int64_t rank = eliminate(d, true, backend, &pivots);
  std::vector<char> is_pivot(static_cast<size_t>(m.cols), 0);
  for (int64_t c : pivots) is_pivot[static_cast<size_t>(c)] = 1;
  std::vector<std::vector<uint8_t>> basis;
  basis.reserve(static_cast<size_t>(m.cols - rank));
  for (int64_t fc = 0; fc < m.cols; ++fc) {
    if (is_pivot[static_cast<size_t>(fc)]) continue;
    std::vector<uint8_t> v(static_cast<size_t>(m.cols), 0);
    v[static_cast<size_t>(fc)] = 1;
    for (int64_t t = 0; t < rank; ++t) {
      uint8_t x = d.at(t, fc);
      if (x != 0) {
        v[static_cast<size_t>(pivots[static_cast<size_t>(t)])] =
            static_cast<uint8_t>(m.p - x);
      }
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::vector<uint8_t>> row_space_basis(const SparseMatModP& m,
                                                  Backend backend) {
  if (!dense_fits(m)) {
    throw std::runtime_error("matrix too large for dense row reduction");
  }
  DenseMatModP d = to_dense(m);
  int64_t rank = eliminate(d, true, backend);
  std::vector<std::vector<uint8_t>> rows;
  rows.reserve(static_cast<size_t>(rank));
  for (int64_t t = 0; t < rank; ++t) {
    rows.emplace_back(d.a.begin() + t * m.cols, d.a.begin() + (t + 1) * m.cols);
  }
  return rows;
}

namespace {

// Clears v column by column against echelon rows with unit leading
// coefficients; returns false at the first leading column no row owns.
bool reduce_vector(std::vector<uint8_t>& v, const QuotientRows& qb, int64_t p) {
  for (;;) {
    int64_t lead = -1;
    for (size_t c = 0; c < v.size(); ++c) {
      if (v[c] != 0) {
        lead = static_cast<int64_t>(c);
        break;
      }
    }
    if (lead < 0) return true;
    const std::vector<uint8_t>* row = nullptr;
    for (size_t t = 0; t < qb.image_pivots.size(); ++t) {
      if (qb.image_pivots[t] == lead) {
        row = &qb.image_rows[t];
        break;
      }
    }
    if (row == nullptr) {
      for (size_t t = 0; t < qb.rep_pivots.size(); ++t) {
        if (qb.rep_pivots[t] == lead) {
          row = &qb.rep_rows[t];
          break;
        }
      }
    }
    if (row == nullptr) return false;
    uint32_t f = v[static_cast<size_t>(lead)];
    for (size_t c = static_cast<size_t>(lead); c < v.size(); ++c) {
      uint32_t sub = f * (*row)[c] % static_cast<uint32_t>(p);
      v[c] = static_cast<uint8_t>((v[c] + static_cast<uint32_t>(p) - sub) %
                                  static_cast<uint32_t>(p));
    }
  }
}

}  // namespace

QuotientRows quotient_rows(const SparseMatModP& cycles,
                           const SparseMatModP& boundaries, Backend backend) {
  if (cycles.p != boundaries.p) {
    throw std::invalid_argument("modulus mismatch in quotient");
  }
  if (cycles.cols != boundaries.rows) {
    throw std::invalid_argument("quotient shapes do not line up");
  }
  QuotientRows qb;
  qb.image_rows = row_space_basis(transpose(boundaries), backend);
  for (const auto& row : qb.image_rows) {
    int64_t lead = 0;
    while (row[static_cast<size_t>(lead)] == 0) ++lead;
    qb.image_pivots.push_back(lead);
  }
  for (auto& v : kernel_basis(cycles, backend)) {
    if (reduce_vector(v, qb, cycles.p)) continue;
    int64_t lead = 0;
    while (v[static_cast<size_t>(lead)] == 0) ++lead;
    if (v[static_cast<size_t>(lead)] != 1) {
      uint32_t iv = inv_mod(v[static_cast<size_t>(lead)], cycles.p);
      for (auto& x : v) x = static_cast<uint8_t>(x * iv % cycles.p);
    }
    qb.rep_pivots.push_back(lead);
    qb.rep_rows.push_back(std::move(v));
  }
  return qb;
}

int64_t rank_sparse(const SparseMatModP& m) {
  using Entry = std::pair<int32_t, uint8_t>;
  std::vector<std::vector<Entry>> rows(static_cast<size_t>(m.rows));
  std::vector<int64_t> col_count(static_cast<size_t>(m.cols), 0);
  for (int64_t c = 0; c < m.cols; ++c) {
    for (int64_t k = m.col_ptr[static_cast<size_t>(c)];
         k < m.col_ptr[static_cast<size_t>(c) + 1]; ++k) {
      rows[static_cast<size_t>(m.row_idx[static_cast<size_t>(k)])].emplace_back(
          static_cast<int32_t>(c), m.val[static_cast<size_t>(k)]);
      ++col_count[static_cast<size_t>(c)];
    }
  }
  std::vector<char> active(static_cast<size_t>(m.rows), 1);
  int64_t rank = 0;
  for (;;) {
    int64_t best_r = -1, best_c = -1;
    int64_t best_score = -1;
    for (int64_t i = 0; i < m.rows; ++i) {
      if (!active[static_cast<size_t>(i)] || rows[static_cast<size_t>(i)].empty())
        continue;
      int64_t rscore = static_cast<int64_t>(rows[static_cast<size_t>(i)].size()) - 1;
      for (const Entry& e : rows[static_cast<size_t>(i)]) {
        int64_t score = rscore * (col_count[static_cast<size_t>(e.first)] - 1);
        if (best_score < 0 || score < best_score ||
            (score == best_score && (e.first < best_c ||
                                     (e.first == best_c && i < best_r)))) {
          best_score = score;
          best_r = i;
          best_c = e.first;
        }
      }
    }
    if (best_r < 0) break;

    std::vector<Entry> prow = std::move(rows[static_cast<size_t>(best_r)]);
    active[static_cast<size_t>(best_r)] = 0;
    for (const Entry& e : prow) --col_count[static_cast<size_t>(e.first)];
    uint8_t pv = 0;
    for (const Entry& e : prow) {
      if (e.first == best_c) {
        pv = e.second;
        break;
      }
    }
    uint32_t ipv = inv_mod(pv, m.p);

    for (int64_t j = 0; j < m.rows; ++j) {
      if (!active[static_cast<size_t>(j)]) continue;
      std::vector<Entry>& row = rows[static_cast<size_t>(j)];
      auto it = std::lower_bound(
          row.begin(), row.end(), best_c,
          [](const Entry& e, int32_t c) { return e.first < c; });
      if (it == row.end() || it->first != best_c) continue;
      uint32_t factor =
          static_cast<uint32_t>(it->second) * ipv % static_cast<uint32_t>(m.p);
      std::vector<Entry> merged;
      merged.reserve(row.size() + prow.size());
      size_t ai = 0, bi = 0;
      while (ai < row.size() || bi < prow.size()) {
        if (bi == prow.size() ||
            (ai < row.size() && row[ai].first < prow[bi].first)) {
          merged.push_back(row[ai++]);
        } else if (ai == row.size() || prow[bi].first < row[ai].first) {
          uint32_t v = (static_cast<uint32_t>(m.p) -
                        factor * prow[bi].second % static_cast<uint32_t>(m.p)) %
                       static_cast<uint32_t>(m.p);
          if (v != 0) merged.emplace_back(prow[bi].first, static_cast<uint8_t>(v));
          ++bi;
        } else {
          uint32_t v = (row[ai].second +
                        (static_cast<uint32_t>(m.p) -
                         factor * prow[bi].second % static_cast<uint32_t>(m.p))) %
                       static_cast<uint32_t>(m.p);
          if (v != 0) merged.emplace_back(row[ai].first, static_cast<uint8_t>(v));
          ++ai;
          ++bi;
        }
      }
      for (const Entry& e : row) --col_count[static_cast<size_t>(e.first)];
      for (const Entry& e : merged) ++col_count[static_cast<size_t>(e.first)];
      row = std::move(merged);
    }
    ++rank;
  }
  return rank;
}

}  // namespace qhom
