#include "qhom/homology.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>

#include "qhom/cache.hpp"

namespace qhom {

HomologyEngine::HomologyEngine(int64_t n, uint32_t q, int64_t p,
                               Backend backend, std::string cache_dir)
    : n_(n),
      q_(q),
      p_(p),
      m_(quantum_characteristic(p, static_cast<int64_t>(q))),
      backend_(backend),
      cache_dir_(std::move(cache_dir)),
      field_(q) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (p > 251) {
    throw std::invalid_argument("coefficient primes above 251 are not supported");
  }
}

void HomologyEngine::check_position(int64_t k, int64_t i) const {
  if (k < 0 || k > n_) {
    throw std::invalid_argument("level " + std::to_string(k) +
                                " outside [0, " + std::to_string(n_) + "]");
  }
  if (i < 0 || i > m_) {
    throw std::invalid_argument("index " + std::to_string(i) +
                                " outside [0, " + std::to_string(m_) + "]");
  }
}

int64_t HomologyEngine::dim_level(int64_t k) const {
  if (k < 0 || k > n_) return 0;
  return static_cast<int64_t>(level(k).size());
}

const std::vector<Subspace>& HomologyEngine::level(int64_t k) const {
  auto it = levels_.find(k);
  if (it == levels_.end()) {
    it = levels_.emplace(k, enumerate_subspaces(n_, k, field_)).first;
  }
  return it->second;
}

const SubspaceIndex& HomologyEngine::level_index(int64_t k) const {
  auto it = indexes_.find(k);
  if (it == indexes_.end()) {
    it = indexes_.emplace(k, SubspaceIndex(level(k))).first;
  }
  return it->second;
}

const SparseMatModP& HomologyEngine::boundary(int64_t k) const {
  check_position(k, 0);
  auto it = boundaries_.find(k);
  if (it != boundaries_.end()) return it->second;

  if (!cache_dir_.empty()) {
    auto path = cache_path(cache_dir_, q_, n_, k, p_);
    if (std::filesystem::exists(path)) {
      CachedMatrix cached = read_matrix_cache(path);
      if (cached.q != q_ || cached.n != n_ || cached.k != k ||
          cached.p != p_) {
        throw integrity_error("matrix cache: " + path +
                              " describes a different boundary map");
      }
      if (cached.matrix.rows != dim_level(k - 1) ||
          cached.matrix.cols != dim_level(k)) {
        throw integrity_error("matrix cache: " + path +
                              " has the wrong shape");
      }
      return boundaries_.emplace(k, std::move(cached.matrix)).first->second;
    }
    const SparseMatModP& built =
        boundaries_.emplace(k, boundary_matrix(n_, k, field_, p_, backend_))
            .first->second;
    write_matrix_cache(path, CachedMatrix{q_, n_, k, p_, built});
    return built;
  }

  return boundaries_
      .emplace(k, boundary_matrix(n_, k, field_, p_, backend_))
      .first->second;
}

const SparseMatModP& HomologyEngine::boundary_power(int64_t k,
                                                    int64_t i) const {
  check_position(k, 0);
  if (i < 0) throw std::invalid_argument("iterated boundary needs i >= 0");
  Key key{k, i};
  auto it = powers_.find(key);
  if (it != powers_.end()) return it->second;

  SparseMatModP value;
  if (i == 0) {
    value = SparseMatModP::identity(dim_level(k), p_);
  } else if (k - i < 0) {
    value = SparseMatModP::zero(0, dim_level(k), p_);
  } else if (i == 1) {
    value = boundary(k);
  } else {
    value = multiply(boundary(k - i + 1), boundary_power(k, i - 1));
  }
  return powers_.emplace(key, std::move(value)).first->second;
}

int64_t HomologyEngine::rank_of_power(int64_t k, int64_t i) const {
  Key key{k, i};
  auto it = ranks_.find(key);
  if (it == ranks_.end()) {
    it = ranks_.emplace(key, rank_mod_p(boundary_power(k, i), backend_)).first;
  }
  return it->second;
}

HomologyResult HomologyEngine::homology(int64_t k, int64_t i) const {
  check_position(k, i);
  HomologyResult r;
  r.indices = IndexPair::make(n_, k, i, p_, static_cast<int64_t>(q_));
  r.kernel_dim = dim_level(k) - rank_of_power(k, i);
  r.image_dim = (k + m_ - i <= n_) ? rank_of_power(k + m_ - i, m_ - i) : 0;
  r.betti = r.kernel_dim - r.image_dim;
  return r;
}

const HomologyEngine::QuotientBasis& HomologyEngine::quotient_basis(
    int64_t k, int64_t i) const {
  check_position(k, i);
  Key key{k, i};
  auto it = quotients_.find(key);
  if (it != quotients_.end()) return it->second;

  const SparseMatModP& cycles = boundary_power(k, i);
  SparseMatModP img = (k + m_ - i <= n_)
                          ? boundary_power(k + m_ - i, m_ - i)
                          : SparseMatModP::zero(dim_level(k), 0, p_);
  // Boundaries must be cycles for the quotient to make sense.
  if (multiply(cycles, img).nnz() != 0) {
    throw std::logic_error("iterated boundaries failed to compose to zero");
  }
  QuotientBasis qb = quotient_rows(cycles, img, backend_);
  if (static_cast<int64_t>(qb.rep_rows.size()) != homology(k, i).betti) {
    throw std::logic_error("quotient basis size disagrees with dimensions");
  }
  return quotients_.emplace(key, std::move(qb)).first->second;
}

std::vector<uint8_t> HomologyEngine::class_of(
    int64_t k, int64_t i, const std::vector<uint8_t>& v) const {
  const QuotientBasis& qb = quotient_basis(k, i);
  if (static_cast<int64_t>(v.size()) != dim_level(k)) {
    throw std::invalid_argument("vector length does not match the level");
  }
  for (uint8_t x : apply(boundary_power(k, i), v)) {
    if (x != 0) throw std::invalid_argument("vector is not a cycle");
  }
  std::vector<uint8_t> coeffs(qb.rep_rows.size(), 0);
  std::vector<uint8_t> w = v;
  for (;;) {
    int64_t lead = -1;
    for (size_t c = 0; c < w.size(); ++c) {
      if (w[c] != 0) {
        lead = static_cast<int64_t>(c);
        break;
      }
    }
    if (lead < 0) break;
    const std::vector<uint8_t>* row = nullptr;
    uint32_t f = w[static_cast<size_t>(lead)];
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
          coeffs[t] = static_cast<uint8_t>(f);
          break;
        }
      }
    }
    if (row == nullptr) {
      throw std::logic_error("cycle escapes the image and representative span");
    }
    for (size_t c = static_cast<size_t>(lead); c < w.size(); ++c) {
      uint32_t sub = f * (*row)[c] % static_cast<uint32_t>(p_);
      w[c] = static_cast<uint8_t>((w[c] + static_cast<uint32_t>(p_) - sub) %
                                  static_cast<uint32_t>(p_));
    }
  }
  return coeffs;
}

SparseMatModP HomologyEngine::induced_boundary_map(int64_t k, int64_t i,
                                                   int64_t t) const {
  if (t < 0 || t > i) {
    throw std::invalid_argument("boundary steps must satisfy 0 <= t <= i");
  }
  int64_t src_dim = homology(k, i).betti;
  bool target_exists = (k - t >= 0);
  int64_t dst_dim = target_exists ? homology(k - t, i - t).betti : 0;
  if (src_dim == 0 || dst_dim == 0) {
    return SparseMatModP::zero(dst_dim, src_dim, p_);
  }
  const QuotientBasis& src = quotient_basis(k, i);
  std::vector<std::tuple<int64_t, int64_t, int64_t>> trips;
  for (size_t j = 0; j < src.rep_rows.size(); ++j) {
    std::vector<uint8_t> img = apply(boundary_power(k, t), src.rep_rows[j]);
    std::vector<uint8_t> coeffs = class_of(k - t, i - t, img);
    for (size_t r = 0; r < coeffs.size(); ++r) {
      if (coeffs[r] != 0) {
        trips.emplace_back(static_cast<int64_t>(r), static_cast<int64_t>(j),
                           coeffs[r]);
      }
    }
  }
  return SparseMatModP::from_triplets(dst_dim, src_dim, p_, trips);
}

SparseMatModP HomologyEngine::induced_inclusion_map(int64_t k, int64_t i,
                                                    int64_t j) const {
  if (j < i) {
    throw std::invalid_argument("inclusion needs i <= j");
  }
  check_position(k, j);
  int64_t src_dim = homology(k, i).betti;
  int64_t dst_dim = homology(k, j).betti;
  if (src_dim == 0 || dst_dim == 0) {
    return SparseMatModP::zero(dst_dim, src_dim, p_);
  }
  const QuotientBasis& src = quotient_basis(k, i);
  std::vector<std::tuple<int64_t, int64_t, int64_t>> trips;
  for (size_t c = 0; c < src.rep_rows.size(); ++c) {
    std::vector<uint8_t> coeffs = class_of(k, j, src.rep_rows[c]);
    for (size_t r = 0; r < coeffs.size(); ++r) {
      if (coeffs[r] != 0) {
        trips.emplace_back(static_cast<int64_t>(r), static_cast<int64_t>(c),
                           coeffs[r]);
      }
    }
  }
  return SparseMatModP::from_triplets(dst_dim, src_dim, p_, trips);
}

int64_t HomologyEngine::fixed_points(int64_t k, const GroupElement& g) const {
  check_position(k, 0);
  return count_fixed(level(k), g, field_);
}

int64_t HomologyEngine::homology_trace(int64_t k, int64_t i,
                                       const GroupElement& g) const {
  const QuotientBasis& qb = quotient_basis(k, i);
  if (qb.rep_rows.empty()) return 0;
  std::vector<int64_t> perm =
      permutation_of_level(level(k), level_index(k), g, field_);
  int64_t trace = 0;
  for (size_t j = 0; j < qb.rep_rows.size(); ++j) {
    const std::vector<uint8_t>& rep = qb.rep_rows[j];
    std::vector<uint8_t> moved(rep.size(), 0);
    for (size_t t = 0; t < rep.size(); ++t) {
      if (rep[t] != 0) moved[static_cast<size_t>(perm[t])] = rep[t];
    }
    std::vector<uint8_t> coeffs = class_of(k, i, moved);
    trace = (trace + coeffs[j]) % p_;
  }
  return trace;
}

std::vector<HomologyResult> HomologyEngine::sequence_profile(int64_t k,
                                                             int64_t i) const {
  if (i <= 0 || i >= m_) {
    throw std::invalid_argument("sequence profile needs 0 < i < m");
  }
  auto mod_floor = [](int64_t a, int64_t m) { return ((a % m) + m) % m; };
  std::vector<HomologyResult> out;
  for (int64_t j = 0; j <= n_; ++j) {
    if (mod_floor(j - k, m_) == 0) {
      out.push_back(homology(j, i));
    } else if (mod_floor(j - (k - i), m_) == 0) {
      out.push_back(homology(j, m_ - i));
    }
  }
  return out;
}

}  // namespace qhom
