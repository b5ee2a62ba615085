#include "qhom/qcomb.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

namespace qhom {

namespace {

bool is_prime(int64_t p) {
  if (p < 2) return false;
  for (int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

int64_t mod_floor(int64_t a, int64_t m) { return ((a % m) + m) % m; }

BigInt int_pow(int64_t base, int64_t e) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(e));
  return out;
}

void check_q(int64_t q) {
  if (q < 1) throw std::invalid_argument("q must be >= 1");
}

void check_pair(const IndexPair& pr) {
  if (pr.n < 0) throw std::invalid_argument("n must be >= 0");
  if (pr.m < 2) throw std::invalid_argument("m must be >= 2");
  check_q(pr.q);
}

}  // namespace

IndexPair IndexPair::make(int64_t n, int64_t k, int64_t i, int64_t p,
                          int64_t q) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  IndexPair pr;
  pr.n = n;
  pr.k = k;
  pr.i = i;
  pr.p = p;
  pr.q = q;
  pr.m = quantum_characteristic(p, q);
  return pr;
}

BigInt q_int(int64_t i, int64_t q) {
  if (i < 0) throw std::invalid_argument("q_int needs i >= 0");
  check_q(q);
  BigInt acc = 0, pw = 1;
  for (int64_t j = 0; j < i; ++j) {
    acc += pw;
    pw *= q;
  }
  return acc;
}

BigInt q_factorial(int64_t i, int64_t q) {
  if (i < 0) throw std::invalid_argument("q_factorial needs i >= 0");
  check_q(q);
  BigInt acc = 1;
  for (int64_t j = 2; j <= i; ++j) acc *= q_int(j, q);
  return acc;
}

BigInt gauss_binomial(int64_t n, int64_t k, int64_t q) {
  check_q(q);
  if (k < 0 || k > n || n < 0) return 0;
  k = std::min(k, n - k);
  // After step j the accumulator is C(n-k+j, j)_q, so every division is
  // exact.
  BigInt acc = 1;
  for (int64_t j = 1; j <= k; ++j) {
    acc *= q_int(n - k + j, q);
    BigInt d = q_int(j, q);
    mpz_divexact(acc.get_mpz_t(), acc.get_mpz_t(), d.get_mpz_t());
  }
  return acc;
}

int64_t quantum_characteristic(int64_t p, int64_t q) {
  check_q(q);
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (q % p == 0) throw std::invalid_argument("p must not divide q");
  int64_t r = 1 % p;
  for (int64_t i = 2; i <= p + 1; ++i) {
    r = (r * (q % p) + 1) % p;
    if (r == 0) return i;
  }
  throw std::logic_error("no quantum characteristic below p + 1");
}

bool is_middle_index(const IndexPair& pr) {
  check_pair(pr);
  if (pr.k < 0 || pr.k > pr.n || pr.i <= 0 || pr.i >= pr.m) return false;
  int64_t s = 2 * pr.k + pr.m - pr.i;
  return pr.n < s && s < pr.n + pr.m;
}

bool is_maximal_middle_index(const IndexPair& pr) {
  return is_middle_index(pr) && 2 * pr.k - pr.i == pr.n - 1;
}

std::pair<int64_t, int64_t> sequence_key(int64_t k, int64_t i, int64_t m) {
  if (m < 2) throw std::invalid_argument("m must be >= 2");
  if (i <= 0 || i >= m) throw std::invalid_argument("need 0 < i < m");
  int64_t r = mod_floor(k, m);
  int64_t s = mod_floor(k - i, m);
  int64_t a = std::min(r, s), b = std::max(r, s);
  return {b, b - a};
}

std::pair<std::pair<int64_t, int64_t>, std::pair<int64_t, int64_t>>
dual_indices(const IndexPair& pr) {
  if (!is_middle_index(pr))
    throw std::invalid_argument("dual_indices needs a middle index");
  return {{pr.n - pr.k, pr.m - pr.i},
          {pr.k, 2 * pr.k - pr.n + pr.m - pr.i}};
}

std::vector<TIntervalEntry> t_interval(const IndexPair& pr) {
  if (!is_middle_index(pr))
    throw std::invalid_argument("t_interval needs a middle index");
  int64_t lo = (2 * pr.k >= pr.n) ? pr.k : pr.n - pr.k;
  int64_t hi = (2 * pr.i <= pr.m - pr.n + 2 * pr.k) ? pr.n - pr.k + pr.i - 1
                                                    : pr.k + pr.m - pr.i - 1;
  std::vector<TIntervalEntry> out;
  for (int64_t t = lo; t <= hi; ++t) out.push_back({t, pr.n - t < 0});
  return out;
}

BigInt betti_closed_form(const IndexPair& pr) {
  check_pair(pr);
  // Off middle indices the homology vanishes; the alternating sum below
  // would instead report the Euler characteristic of the whole sequence,
  // which is the Betti number of the sequence's unique middle position.
  if (!is_middle_index(pr)) return 0;
  int64_t plus = mod_floor(pr.k, pr.m);
  int64_t minus = mod_floor(pr.k - pr.i, pr.m);
  BigInt acc = 0;
  for (int64_t j = 0; j <= pr.n; ++j) {
    int64_t r = j % pr.m;
    if (r == plus)
      acc += gauss_binomial(pr.n, j, pr.q);
    else if (r == minus)
      acc -= gauss_binomial(pr.n, j, pr.q);
  }
  return acc;
}

BigInt betti_recurrence(const IndexPair& pr) {
  check_pair(pr);
  std::map<std::tuple<int64_t, int64_t, int64_t>, BigInt> memo;
  auto rec = [&](auto&& self, int64_t n, int64_t k, int64_t i) -> BigInt {
    if (i <= 0 || i >= pr.m || k < 0 || k > n || n < 0) return 0;
    if (n <= 1) {
      IndexPair base = pr.with(k, i);
      base.n = n;
      return betti_closed_form(base);
    }
    auto key = std::make_tuple(n, k, i);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    BigInt b = self(self, n - 1, k, i + 1) + self(self, n - 1, k - 1, i - 1) +
               (int_pow(pr.q, n - 1) - 1) * self(self, n - 2, k - 1, i);
    memo.emplace(key, b);
    return b;
  };
  return rec(rec, pr.n, pr.k, pr.i);
}

BigInt betti_special(int64_t m, int64_t n, int64_t p, int64_t q) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (m != 2 && m != 3)
    throw std::invalid_argument("betti_special supports m = 2 or 3 only");
  if (quantum_characteristic(p, q) != m)
    throw std::invalid_argument(
        "quantum characteristic of (p,q) differs from requested m");
  if (m == 2) {
    if (n % 2 == 1) return 0;
    BigInt prod = 1;
    for (int64_t e = n - 1; e >= 1; e -= 2) prod *= int_pow(q, e) - 1;
    return prod;
  }
  if (n <= 1) return 1;
  BigInt prev = 1, curr = 1;
  for (int64_t l = 2; l <= n; ++l) {
    BigInt next = curr + (int_pow(q, l - 1) - 1) * prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

bool leading_term_check(const IndexPair& pr) {
  check_pair(pr);
  if (pr.q < 2)
    throw std::invalid_argument("leading_term_check needs q >= 2");
  BigInt beta = betti_closed_form(pr);
  int64_t eps = (pr.n % 2 != 0) ? 2 : 1;
  BigInt prod = 1;
  int64_t deg = 0;
  for (int64_t e = pr.n - 1; e >= eps; e -= 2) {
    prod *= int_pow(pr.q, e) - 1;
    deg += e;
  }
  BigInt slack = int_pow(pr.q, deg);
  return beta >= prod - slack && beta < prod + slack;
}

}  // namespace qhom
