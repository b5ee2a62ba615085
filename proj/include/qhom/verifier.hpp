#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qhom/linalg.hpp"

namespace qhom {

/// One checked identity: rendered parameters plus both sides.
struct VerifyInstance {
  std::string params;
  std::string expected;
  std::string computed;
  bool pass = false;
};

/// Outcome of one property sweep.  The summary passes exactly when the
/// failure list is empty; skipped instances land in notices.
struct VerificationReport {
  std::string property;
  std::string grid;
  int64_t checked = 0;
  std::vector<VerifyInstance> failures;
  std::vector<std::string> notices;

  bool pass() const { return failures.empty(); }
  int64_t failed() const { return static_cast<int64_t>(failures.size()); }

  /// Counts the instance and keeps it only when the check failed.
  void record(const std::string& params, const std::string& expected,
              const std::string& computed, bool ok);
  void record(const std::string& params, int64_t expected, int64_t computed);

  nlohmann::json to_json() const;
};

/// Dimensions of the irreducible summands D^(n-t,t), keyed by t, read
/// off the engine at maximal middle indices.
struct IrreducibleDimTable {
  struct Entry {
    int64_t t = 0;
    int64_t dim = 0;
    int64_t k = -1;  // supplying position, -1 when none is involved
    int64_t i = -1;
    std::string source;
  };

  int64_t n = 0;
  int64_t q = 0;
  int64_t p = 0;
  int64_t m = 0;
  std::map<int64_t, Entry> dims;
  std::vector<int64_t> gaps;

  bool has(int64_t t) const { return t > n || dims.count(t) > 0; }
  int64_t dim(int64_t t) const;  // 0 for t > n; throws on a gap

  nlohmann::json to_json() const;
};

/// Nonzero homology exactly at middle indices, over all n <= n_max.
VerificationReport verify_middle_index(int64_t n_max, int64_t p, int64_t q,
                                       Backend backend = Backend::parallel,
                                       const std::string& cache_dir = "");

/// Every alternating sequence carries at most one nonzero homology.
VerificationReport verify_almost_exact(int64_t n_max, int64_t p, int64_t q,
                                       Backend backend = Backend::parallel,
                                       const std::string& cache_dir = "");

/// Engine dimensions equal the alternating Gaussian-binomial sum.
VerificationReport verify_closed_form(int64_t n_max, int64_t p, int64_t q,
                                      Backend backend = Backend::parallel,
                                      const std::string& cache_dir = "");

/// Three-term dimension recursion
///   b(n,k,i) = b(n-1,k,i+1) + b(n-1,k-1,i-1) + (q^(n-1)-1) b(n-2,k-1,i)
/// on engine values for 2 <= n <= n_max.
VerificationReport verify_branching(int64_t n_max, int64_t p, int64_t q,
                                    Backend backend = Backend::parallel,
                                    const std::string& cache_dir = "");

/// Equal dimensions across each four-element orbit
///   (k,i), (n-k,m-i), (k,j), (n-k,m-j) with j = 2k-n+m-i.
VerificationReport verify_duality(int64_t n_max, int64_t p, int64_t q,
                                  Backend backend = Backend::parallel,
                                  const std::string& cache_dir = "");

/// Induced maps have full column rank on their guaranteed domains:
/// t-fold boundaries when 1 <= t < i < m and 2k-t >= n, inclusions when
/// 1 < i < j < m and 2k+m-i-j >= n.
VerificationReport verify_injectivity(int64_t n_max, int64_t p, int64_t q,
                                      Backend backend = Backend::parallel,
                                      const std::string& cache_dir = "");

/// Trace of g on homology equals the alternating fixed-point sum
///   sum_t fix(k+tm, g) - fix(k-i+tm, g)  (mod p)
/// for the identity, scalars, permutation matrices, and seeded random
/// invertibles, at every middle index with n <= n_max.
VerificationReport verify_trace_formula(int64_t n_max, int64_t p, int64_t q,
                                        int64_t samples, uint64_t seed,
                                        Backend backend = Backend::parallel,
                                        const std::string& cache_dir = "");

/// Reads dim D^(n-t,t) = betti(t, 2t-n+1) off the maximal middle
/// indices; t = 0 is the one-dimensional trivial summand, t > n gives 0.
/// Values of t in range with no valid supplying index are listed as
/// gaps.
IrreducibleDimTable derive_irreducible_dims(int64_t n, int64_t p, int64_t q,
                                            Backend backend = Backend::parallel,
                                            const std::string& cache_dir = "");

/// Middle-index dimensions decompose as sums of irreducible dimensions
/// over the interval T(k,i), and the two-term ladder identity
///   b(k,j) = b(k,i) + b(k+1,j+1)
/// holds above each maximal middle index (k,i) while 2j <= m+2k-n.
VerificationReport verify_composition(int64_t n, int64_t p, int64_t q,
                                      Backend backend = Backend::parallel,
                                      const std::string& cache_dir = "");

/// Subset-lattice (q = 1) limit via the generic poset engine with
/// exponent m = p: nonzero dimensions only at middle indices, equality
/// with the binomial closed form, dualities, and the two-term branching
/// with the vanished q-power term.
VerificationReport verify_q1_limit(int64_t n_max, int64_t p);

/// The i-fold map equals the i-th q-factorial (mod p) times the 0/1
/// containment matrix of codimension i, entry by entry; at i = m the
/// factor vanishes and the map is zero.
VerificationReport verify_operator_law(int64_t n_max, int64_t p, int64_t q,
                                       Backend backend = Backend::parallel,
                                       const std::string& cache_dir = "");

/// Parameter points covered by the default verification sweep.
struct GridPoint {
  int64_t q = 0;
  int64_t p = 0;
  int64_t n_max = 0;
};

/// q in {2,3} with every prime p <= 13 coprime to q at n <= 5, plus the
/// two larger q = 2, n = 6 points.
std::vector<GridPoint> default_grid();

}  // namespace qhom
