#include "qhom/verifier.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qhom/homology.hpp"
#include "qhom/lattice.hpp"
#include "qhom/poset.hpp"
#include "qhom/qcomb.hpp"

namespace qhom {

namespace {

std::string point(int64_t q, int64_t p, int64_t n_max, bool exact_n = false) {
  std::ostringstream os;
  os << "q=" << q << " p=" << p << (exact_n ? " n=" : " n<=") << n_max;
  return os.str();
}

std::vector<std::unique_ptr<HomologyEngine>> engines_up_to(
    int64_t n_max, int64_t q, int64_t p, Backend backend,
    const std::string& cache_dir) {
  if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  std::vector<std::unique_ptr<HomologyEngine>> out;
  for (int64_t n = 0; n <= n_max; ++n) {
    out.push_back(std::make_unique<HomologyEngine>(
        n, static_cast<uint32_t>(q), p, backend, cache_dir));
  }
  return out;
}

// Dimension with the usual zero conventions outside 0<=k<=n, 0<i<m.
int64_t betti_safe(const HomologyEngine& e, int64_t k, int64_t i) {
  if (k < 0 || k > e.n() || i <= 0 || i >= e.m()) return 0;
  return e.homology(k, i).betti;
}

int64_t int_pow(int64_t b, int64_t e) {
  int64_t r = 1;
  for (int64_t s = 0; s < e; ++s) r *= b;
  return r;
}

GroupElement identity_element(int64_t n) {
  GroupElement g(static_cast<size_t>(n * n), 0);
  for (int64_t t = 0; t < n; ++t) g[static_cast<size_t>(t * n + t)] = 1;
  return g;
}

GroupElement scalar_element(int64_t n, uint32_t c) {
  GroupElement g(static_cast<size_t>(n * n), 0);
  for (int64_t t = 0; t < n; ++t) g[static_cast<size_t>(t * n + t)] = c;
  return g;
}

GroupElement permutation_element(int64_t n, std::mt19937& rng) {
  std::vector<int64_t> perm(static_cast<size_t>(n));
  for (int64_t t = 0; t < n; ++t) perm[static_cast<size_t>(t)] = t;
  std::shuffle(perm.begin(), perm.end(), rng);
  GroupElement g(static_cast<size_t>(n * n), 0);
  for (int64_t r = 0; r < n; ++r) {
    g[static_cast<size_t>(r * n + perm[static_cast<size_t>(r)])] = 1;
  }
  return g;
}

}  // namespace

void VerificationReport::record(const std::string& params,
                                const std::string& expected,
                                const std::string& computed, bool ok) {
  ++checked;
  if (!ok) failures.push_back({params, expected, computed, false});
}

void VerificationReport::record(const std::string& params, int64_t expected,
                                int64_t computed) {
  record(params, std::to_string(expected), std::to_string(computed),
         expected == computed);
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : failures) {
    fails.push_back({{"params", f.params},
                     {"expected", f.expected},
                     {"computed", f.computed}});
  }
  return {{"property", property}, {"grid", grid},     {"checked", checked},
          {"failed", failed()},   {"pass", pass()},   {"notices", notices},
          {"failures", fails}};
}

int64_t IrreducibleDimTable::dim(int64_t t) const {
  if (t > n) return 0;
  auto it = dims.find(t);
  if (it == dims.end()) {
    throw std::out_of_range("no derived dimension for t=" +
                            std::to_string(t));
  }
  return it->second.dim;
}

nlohmann::json IrreducibleDimTable::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [t, e] : dims) {
    entries.push_back({{"t", t},
                       {"dim", e.dim},
                       {"k", e.k},
                       {"i", e.i},
                       {"source", e.source}});
  }
  return {{"n", n},          {"q", q},    {"p", p},
          {"m", m},          {"dims", entries}, {"gaps", gaps}};
}

VerificationReport verify_middle_index(int64_t n_max, int64_t p, int64_t q,
                                       Backend backend,
                                       const std::string& cache_dir) {
  VerificationReport rep{"middle-index", point(q, p, n_max), 0, {}, {}};
  auto engines = engines_up_to(n_max, q, p, backend, cache_dir);
  for (int64_t n = 0; n <= n_max; ++n) {
    const HomologyEngine& e = *engines[static_cast<size_t>(n)];
    for (int64_t k = 0; k <= n; ++k) {
      for (int64_t i = 1; i < e.m(); ++i) {
        bool middle = is_middle_index(IndexPair::make(n, k, i, p, q));
        int64_t b = e.homology(k, i).betti;
        std::ostringstream ps;
        ps << "n=" << n << " k=" << k << " i=" << i;
        rep.record(ps.str(), middle ? "nonzero" : "zero",
                   "dim=" + std::to_string(b), (b > 0) == middle);
      }
    }
  }
  return rep;
}

VerificationReport verify_almost_exact(int64_t n_max, int64_t p, int64_t q,
                                       Backend backend,
                                       const std::string& cache_dir) {
  VerificationReport rep{"almost-exact", point(q, p, n_max), 0, {}, {}};
  auto engines = engines_up_to(n_max, q, p, backend, cache_dir);
  for (int64_t n = 0; n <= n_max; ++n) {
    const HomologyEngine& e = *engines[static_cast<size_t>(n)];
    for (int64_t k = 0; k <= n; ++k) {
      for (int64_t i = 1; i < e.m(); ++i) {
        int64_t nonzero = 0;
        for (const HomologyResult& h : e.sequence_profile(k, i)) {
          if (h.betti > 0) ++nonzero;
        }
        std::ostringstream ps;
        ps << "n=" << n << " k=" << k << " i=" << i;
        rep.record(ps.str(), "at most one nonzero position",
                   std::to_string(nonzero) + " nonzero", nonzero <= 1);
      }
    }
  }
  return rep;
}

VerificationReport verify_closed_form(int64_t n_max, int64_t p, int64_t q,
                                      Backend backend,
                                      const std::string& cache_dir) {
  VerificationReport rep{"closed-form", point(q, p, n_max), 0, {}, {}};
  auto engines = engines_up_to(n_max, q, p, backend, cache_dir);
  for (int64_t n = 0; n <= n_max; ++n) {
    const HomologyEngine& e = *engines[static_cast<size_t>(n)];
    for (int64_t k = 0; k <= n; ++k) {
      for (int64_t i = 1; i < e.m(); ++i) {
        BigInt want = betti_closed_form(IndexPair::make(n, k, i, p, q));
        int64_t got = e.homology(k, i).betti;
        std::ostringstream ps;
        ps << "n=" << n << " k=" << k << " i=" << i;
        rep.record(ps.str(), want.get_str(), std::to_string(got),
                   want == got);
      }
    }
  }
  return rep;
}

VerificationReport verify_branching(int64_t n_max, int64_t p, int64_t q,
                                    Backend backend,
                                    const std::string& cache_dir) {
  VerificationReport rep{"branching", point(q, p, n_max), 0, {}, {}};
  auto engines = engines_up_to(n_max, q, p, backend, cache_dir);
  for (int64_t n = 2; n <= n_max; ++n) {
    const HomologyEngine& e = *engines[static_cast<size_t>(n)];
    const HomologyEngine& e1 = *engines[static_cast<size_t>(n - 1)];
    const HomologyEngine& e2 = *engines[static_cast<size_t>(n - 2)];
    int64_t singer = int_pow(q, n - 1) - 1;
    for (int64_t k = 0; k <= n; ++k) {
      for (int64_t i = 1; i < e.m(); ++i) {
        int64_t lhs = betti_safe(e, k, i);
        int64_t rhs = betti_safe(e1, k, i + 1) + betti_safe(e1, k - 1, i - 1) +
                      singer * betti_safe(e2, k - 1, i);
        std::ostringstream ps;
        ps << "n=" << n << " k=" << k << " i=" << i;
        rep.record(ps.str(), lhs, rhs);
      }
    }
  }
  return rep;
}

VerificationReport verify_duality(int64_t n_max, int64_t p, int64_t q,
                                  Backend backend,
                                  const std::string& cache_dir) {
  VerificationReport rep{"duality", point(q, p, n_max), 0, {}, {}};
  auto engines = engines_up_to(n_max, q, p, backend, cache_dir);
  for (int64_t n = 0; n <= n_max; ++n) {
    const HomologyEngine& e = *engines[static_cast<size_t>(n)];
    for (int64_t k = 0; k <= n; ++k) {
      for (int64_t i = 1; i < e.m(); ++i) {
        int64_t b = betti_safe(e, k, i);
        std::ostringstream ps;
        ps << "n=" << n << " k=" << k << " i=" << i;
        rep.record(ps.str() + " level-flip", b,
                   betti_safe(e, n - k, e.m() - i));
        if (is_middle_index(IndexPair::make(n, k, i, p, q))) {
          int64_t j = 2 * k - n + e.m() - i;
          rep.record(ps.str() + " step-flip", b, betti_safe(e, k, j));
          rep.record(ps.str() + " both-flip", b,
                     betti_safe(e, n - k, e.m() - j));
        }
      }
    }
  }
  return rep;
}

VerificationReport verify_injectivity(int64_t n_max, int64_t p, int64_t q,
                                      Backend backend,
                                      const std::string& cache_dir) {
  VerificationReport rep{"injectivity", point(q, p, n_max), 0, {}, {}};
  auto engines = engines_up_to(n_max, q, p, backend, cache_dir);
  for (int64_t n = 0; n <= n_max; ++n) {
    const HomologyEngine& e = *engines[static_cast<size_t>(n)];
    int64_t m = e.m();
    for (int64_t k = 0; k <= n; ++k) {
      for (int64_t i = 2; i < m; ++i) {
        for (int64_t t = 1; t < i; ++t) {
          if (2 * k - t < n) continue;
          SparseMatModP f = e.induced_boundary_map(k, i, t);
          int64_t r = rank_mod_p(f, backend);
          std::ostringstream ps;
          ps << "n=" << n << " map=" << t << "-fold (" << k << "," << i
             << ")->(" << k - t << "," << i - t << ")";
          rep.record(ps.str(), "rank " + std::to_string(f.cols),
                     "rank " + std::to_string(r), r == f.cols);
        }
        for (int64_t j = i + 1; j < m; ++j) {
          if (2 * k + m - i - j < n) continue;
          SparseMatModP f = e.induced_inclusion_map(k, i, j);
          int64_t r = rank_mod_p(f, backend);
          std::ostringstream ps;
          ps << "n=" << n << " map=inclusion (" << k << "," << i << ")->("
             << k << "," << j << ")";
          rep.record(ps.str(), "rank " + std::to_string(f.cols),
                     "rank " + std::to_string(r), r == f.cols);
        }
      }
    }
  }
  return rep;
}

VerificationReport verify_trace_formula(int64_t n_max, int64_t p, int64_t q,
                                        int64_t samples, uint64_t seed,
                                        Backend backend,
                                        const std::string& cache_dir) {
  VerificationReport rep{"trace-formula", point(q, p, n_max), 0, {}, {}};
  auto engines = engines_up_to(n_max, q, p, backend, cache_dir);
  std::mt19937 rng(static_cast<uint32_t>(seed));
  for (int64_t n = 0; n <= n_max; ++n) {
    const HomologyEngine& e = *engines[static_cast<size_t>(n)];
    int64_t m = e.m();
    std::vector<std::pair<std::string, GroupElement>> els;
    els.emplace_back("identity", identity_element(n));
    for (uint32_t c = 2; c < static_cast<uint32_t>(q); ++c) {
      els.emplace_back("scalar " + std::to_string(c), scalar_element(n, c));
    }
    for (int64_t s = 0; s < 2 && n > 0; ++s) {
      els.emplace_back("perm " + std::to_string(s),
                       permutation_element(n, rng));
    }
    for (int64_t s = 0; s < samples; ++s) {
      els.emplace_back("random " + std::to_string(s),
                       random_invertible(n, e.field(), rng));
    }
    for (int64_t k = 0; k <= n; ++k) {
      for (int64_t i = 1; i < m; ++i) {
        if (!is_middle_index(IndexPair::make(n, k, i, p, q))) continue;
        for (const auto& [name, g] : els) {
          int64_t chi = 0;
          for (int64_t j = ((k % m) + m) % m; j <= n; j += m) {
            chi += e.fixed_points(j, g);
          }
          for (int64_t j = (((k - i) % m) + m) % m; j <= n; j += m) {
            chi -= e.fixed_points(j, g);
          }
          chi = ((chi % p) + p) % p;
          std::ostringstream ps;
          ps << "n=" << n << " k=" << k << " i=" << i << " g=" << name;
          rep.record(ps.str(), chi, e.homology_trace(k, i, g));
        }
      }
    }
  }
  return rep;
}

IrreducibleDimTable derive_irreducible_dims(int64_t n, int64_t p, int64_t q,
                                            Backend backend,
                                            const std::string& cache_dir) {
  HomologyEngine e(n, static_cast<uint32_t>(q), p, backend, cache_dir);
  IrreducibleDimTable table;
  table.n = n;
  table.q = q;
  table.p = p;
  table.m = e.m();
  table.dims[0] = {0, 1, -1, -1, "trivial summand"};
  for (int64_t t = 1; t <= (n + e.m() - 2) / 2; ++t) {
    if (t > n) {
      table.dims[t] = {t, 0, -1, -1, "vanishing composition"};
      continue;
    }
    int64_t i = 2 * t - n + 1;
    if (i <= 0 || i >= e.m()) {
      table.gaps.push_back(t);
      continue;
    }
    table.dims[t] = {t, e.homology(t, i).betti, t, i, "maximal middle index"};
  }
  return table;
}

VerificationReport verify_composition(int64_t n, int64_t p, int64_t q,
                                      Backend backend,
                                      const std::string& cache_dir) {
  VerificationReport rep{"composition", point(q, p, n, true), 0, {}, {}};
  HomologyEngine e(n, static_cast<uint32_t>(q), p, backend, cache_dir);
  IrreducibleDimTable table =
      derive_irreducible_dims(n, p, q, backend, cache_dir);
  for (int64_t g : table.gaps) {
    rep.notices.push_back("no maximal middle index supplies t=" +
                          std::to_string(g));
  }
  int64_t m = e.m();
  for (int64_t k = 0; k <= n; ++k) {
    for (int64_t i = 1; i < m; ++i) {
      IndexPair pr = IndexPair::make(n, k, i, p, q);
      if (!is_middle_index(pr)) continue;
      std::ostringstream ps;
      ps << "n=" << n << " k=" << k << " i=" << i;
      bool gap = false;
      int64_t sum = 0;
      for (const TIntervalEntry& entry : t_interval(pr)) {
        if (entry.zero_module) continue;
        if (!table.has(entry.t)) {
          rep.notices.push_back(ps.str() + " skipped: no dim for t=" +
                                std::to_string(entry.t));
          gap = true;
          break;
        }
        sum += table.dim(entry.t);
      }
      if (gap) continue;
      rep.record(ps.str() + " interval-sum", e.homology(k, i).betti, sum);
    }
  }
  // Ladder identity above each maximal middle index.
  for (int64_t k = 0; k <= n; ++k) {
    int64_t i = 2 * k - n + 1;
    if (i <= 0 || i >= m) continue;
    for (int64_t j = i + 1; j < m && 2 * j <= m + 2 * k - n; ++j) {
      std::ostringstream ps;
      ps << "n=" << n << " k=" << k << " i=" << i << " j=" << j;
      rep.record(ps.str() + " ladder", betti_safe(e, k, j),
                 betti_safe(e, k, i) + betti_safe(e, k + 1, j + 1));
    }
  }
  return rep;
}

VerificationReport verify_q1_limit(int64_t n_max, int64_t p) {
  VerificationReport rep{"q1-limit", point(1, p, n_max), 0, {}, {}};
  if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  // dims[n][k][i] over the subset lattices, zero-extended by bz.
  std::vector<std::vector<std::vector<int64_t>>> dims;
  for (int64_t n = 0; n <= n_max; ++n) {
    RankedPoset b = boolean_lattice(n);
    std::vector<std::vector<int64_t>> grid(
        static_cast<size_t>(n + 1), std::vector<int64_t>(static_cast<size_t>(p), 0));
    for (int64_t k = 0; k <= n; ++k) {
      for (int64_t i = 1; i < p; ++i) {
        grid[static_cast<size_t>(k)][static_cast<size_t>(i)] =
            poset_homology(b, k, i, p, p).dim;
      }
    }
    dims.push_back(std::move(grid));
  }
  auto bz = [&](int64_t n, int64_t k, int64_t i) -> int64_t {
    if (n < 0 || k < 0 || k > n || i <= 0 || i >= p) return 0;
    return dims[static_cast<size_t>(n)][static_cast<size_t>(k)]
               [static_cast<size_t>(i)];
  };
  for (int64_t n = 0; n <= n_max; ++n) {
    for (int64_t k = 0; k <= n; ++k) {
      for (int64_t i = 1; i < p; ++i) {
        IndexPair pr = IndexPair::make(n, k, i, p, 1);
        int64_t b = bz(n, k, i);
        std::ostringstream ps;
        ps << "n=" << n << " k=" << k << " i=" << i;
        if (b > 0) {
          rep.record(ps.str() + " support", "middle index",
                     "dim=" + std::to_string(b), is_middle_index(pr));
        }
        BigInt want = betti_closed_form(pr);
        rep.record(ps.str() + " closed-form", want.get_str(),
                   std::to_string(b), want == b);
        rep.record(ps.str() + " level-flip", b, bz(n, n - k, p - i));
        if (is_middle_index(pr)) {
          rep.record(ps.str() + " step-flip", b,
                     bz(n, k, 2 * k - n + p - i));
        }
        if (n >= 1) {
          rep.record(ps.str() + " branching", b,
                     bz(n - 1, k, i + 1) + bz(n - 1, k - 1, i - 1));
        }
      }
    }
  }
  return rep;
}

VerificationReport verify_operator_law(int64_t n_max, int64_t p, int64_t q,
                                       Backend backend,
                                       const std::string& cache_dir) {
  VerificationReport rep{"operator-law", point(q, p, n_max), 0, {}, {}};
  auto engines = engines_up_to(n_max, q, p, backend, cache_dir);
  for (int64_t n = 0; n <= n_max; ++n) {
    const HomologyEngine& e = *engines[static_cast<size_t>(n)];
    for (int64_t k = 0; k <= n; ++k) {
      for (int64_t i = 0; i <= std::min(k, e.m()); ++i) {
        mpz_class factor_z = q_factorial(i, q) % p;
        int64_t factor = factor_z.get_si();
        DenseMatModP got = to_dense(e.boundary_power(k, i));
        DenseMatModP want =
            to_dense(containment_matrix(n, k - i, k, e.field(), p));
        for (uint8_t& v : want.a) {
          v = static_cast<uint8_t>((v * factor) % p);
        }
        int64_t bad = 0;
        for (size_t t = 0; t < want.a.size(); ++t) {
          if (want.a[t] != got.a[t]) ++bad;
        }
        std::ostringstream ps;
        ps << "n=" << n << " k=" << k << " i=" << i;
        rep.record(ps.str(), "0 mismatched entries",
                   std::to_string(bad) + " mismatched entries", bad == 0);
      }
    }
  }
  return rep;
}

std::vector<GridPoint> default_grid() {
  std::vector<GridPoint> grid;
  for (int64_t q : {2, 3}) {
    for (int64_t p : {2, 3, 5, 7, 11, 13}) {
      if (p == q) continue;
      grid.push_back({q, p, 5});
    }
  }
  grid.push_back({2, 3, 6});
  grid.push_back({2, 7, 6});
  return grid;
}

}  // namespace qhom
