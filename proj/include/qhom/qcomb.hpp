#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace qhom {

/// Exact nonnegative integer; Gaussian binomials exceed 64 bits well
/// inside the supported parameter range.
using BigInt = mpz_class;

/// One homology position: level k and step i inside P(n,q) with
/// coefficients mod p, where m is the quantum characteristic of (p,q).
struct IndexPair {
  int64_t n = 0;
  int64_t k = 0;
  int64_t i = 0;
  int64_t m = 0;
  int64_t p = 0;
  int64_t q = 0;

  /// Fills in m from (p,q).  Throws std::invalid_argument if p is not a
  /// prime coprime to q, or q < 1, or n < 0.
  static IndexPair make(int64_t n, int64_t k, int64_t i, int64_t p, int64_t q);

  IndexPair with(int64_t k2, int64_t i2) const {
    IndexPair c = *this;
    c.k = k2;
    c.i = i2;
    return c;
  }
};

/// [i]_q = 1 + q + ... + q^(i-1); [0]_q = 0.  Requires i >= 0, q >= 1.
BigInt q_int(int64_t i, int64_t q);

/// [i]_q! = [1]_q [2]_q ... [i]_q with [0]_q! = 1.
BigInt q_factorial(int64_t i, int64_t q);

/// Gaussian binomial: the number of k-dimensional subspaces of GF(q)^n.
/// Zero for k < 0 or k > n; ordinary binomial at q = 1.
BigInt gauss_binomial(int64_t n, int64_t k, int64_t q);

/// Minimal i > 1 with [i]_q divisible by p (p prime, p coprime to q,
/// q >= 1).  Equals p when p | q-1 and the order of q mod p otherwise.
int64_t quantum_characteristic(int64_t p, int64_t q);

/// True iff 0 <= k <= n, 0 < i < m and n < 2k + m - i < n + m, the exact
/// criterion for a nonzero homology at (k,i).
bool is_middle_index(const IndexPair& pair);

/// True iff middle and 2k - i = n - 1 (the largest i for its diagonal).
bool is_maximal_middle_index(const IndexPair& pair);

/// Canonical representative (k', i') of the sequence through (k,i):
/// positions (k,i), (k-i, m-i) and all shifts (k +- m, i) share one
/// alternating sequence.  Returns the unique member with
/// 0 <= k'-i' < k' <= m-1.
std::pair<int64_t, int64_t> sequence_key(int64_t k, int64_t i, int64_t m);

/// The two duality partners of a middle index: level-flip (n-k, m-i) and
/// step-flip (k, 2k-n+m-i).  Throws std::invalid_argument off middle
/// indices, where the partner step would leave (0, m).
std::pair<std::pair<int64_t, int64_t>, std::pair<int64_t, int64_t>>
dual_indices(const IndexPair& pair);

struct TIntervalEntry {
  int64_t t;
  bool zero_module;  // true when n - t < 0, so the summand vanishes
};

/// The consecutive interval T of diagonal labels whose irreducible
/// summands D^(n-t,t) compose the homology at a middle index; throws
/// std::invalid_argument off middle indices.
std::vector<TIntervalEntry> t_interval(const IndexPair& pair);

/// Alternating sum of Gaussian binomials:
///   sum_t C(n, k+tm) - C(n, k-i+tm)
/// over all t keeping the argument in [0, n].  Zero off the valid window
/// (k < 0, k > n, i <= 0, i >= m).
BigInt betti_closed_form(const IndexPair& pair);

/// Same value through the three-term recursion
///   b(n,k,i) = b(n-1,k,i+1) + b(n-1,k-1,i-1) + (q^(n-1)-1) b(n-2,k-1,i)
/// with closed-form base at n <= 1.
BigInt betti_recurrence(const IndexPair& pair);

/// Small-m closed forms: for m = 2 the product
/// (q^(n-1)-1)(q^(n-3)-1)...(q-1) at even n and 0 at odd n; for m = 3 the
/// two-term recursion b^n = b^(n-1) + (q^(n-1)-1) b^(n-2), b^0 = b^1 = 1.
/// Throws std::invalid_argument unless quantum_characteristic(p,q) = m
/// and m is 2 or 3.
BigInt betti_special(int64_t m, int64_t n, int64_t p, int64_t q);

/// Numeric check of the dominant-term statement: with
/// P = (q^(n-1)-1)(q^(n-3)-1)...(q^eps-1), eps = 2 for odd n and 1 for
/// even n, and D = (n-1) + (n-3) + ... + eps, tests
/// P - q^D <= betti < P + q^D.  Requires q >= 2.
bool leading_term_check(const IndexPair& pair);

}  // namespace qhom
