#include "qhom/qfield.hpp"

#include <stdexcept>
#include <string>

namespace qhom {

namespace {

// Smallest prime factor by trial division; input >= 2.
uint32_t smallest_prime_factor(uint32_t n) {
  for (uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return d;
  return n;
}

std::vector<uint32_t> prime_factors(uint32_t n) {
  std::vector<uint32_t> out;
  while (n > 1) {
    uint32_t d = smallest_prime_factor(n);
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  return out;
}

// Remainder of a mod b over GF(q0); coefficient vectors ascending, b monic.
std::vector<uint32_t> poly_rem(std::vector<uint32_t> a,
                               const std::vector<uint32_t>& b, uint32_t q0) {
  size_t db = b.size() - 1;
  while (a.size() > db) {
    uint32_t lead = a.back();
    if (lead != 0) {
      size_t shift = a.size() - 1 - db;
      for (size_t j = 0; j <= db; ++j) {
        uint32_t sub = (lead * b[j]) % q0;
        a[shift + j] = (a[shift + j] + q0 - sub % q0) % q0;
      }
    }
    a.pop_back();
  }
  return a;
}

bool poly_is_zero(const std::vector<uint32_t>& a) {
  for (uint32_t c : a)
    if (c != 0) return false;
  return true;
}

// Monic polynomial of degree d whose non-leading coefficients are the
// base-q0 digits of idx read constant-term first, most significant first
// in the lexicographic enumeration.
std::vector<uint32_t> monic_by_index(uint64_t idx, uint32_t d, uint32_t q0) {
  std::vector<uint32_t> c(d + 1, 0);
  c[d] = 1;
  for (uint32_t j = 0; j < d; ++j) {
    uint64_t weight = 1;
    for (uint32_t l = j + 1; l < d; ++l) weight *= q0;
    c[j] = static_cast<uint32_t>(idx / weight);
    idx %= weight;
  }
  return c;
}

bool is_irreducible(const std::vector<uint32_t>& f, uint32_t q0) {
  uint32_t e = static_cast<uint32_t>(f.size()) - 1;
  for (uint32_t d = 1; 2 * d <= e; ++d) {
    uint64_t count = 1;
    for (uint32_t j = 0; j < d; ++j) count *= q0;
    for (uint64_t idx = 0; idx < count; ++idx) {
      std::vector<uint32_t> g = monic_by_index(idx, d, q0);
      if (poly_is_zero(poly_rem(f, g, q0))) return false;
    }
  }
  return true;
}

}  // namespace

Field::Field(uint32_t q) {
  if (q < 2 || q > 65536)
    throw std::invalid_argument("field order out of range [2, 65536]: " +
                                std::to_string(q));
  q_ = q;
  q0_ = smallest_prime_factor(q);
  e_ = 0;
  uint64_t acc = 1;
  while (acc < q) {
    acc *= q0_;
    ++e_;
  }
  if (acc != q)
    throw std::invalid_argument("field order is not a prime power: " +
                                std::to_string(q));

  if (e_ == 1) {
    poly_ = {0, 1};
  } else {
    uint64_t count = 1;
    for (uint32_t j = 0; j < e_; ++j) count *= q0_;
    for (uint64_t idx = 0; idx < count; ++idx) {
      std::vector<uint32_t> f = monic_by_index(idx, e_, q0_);
      if (is_irreducible(f, q0_)) {
        poly_ = f;
        break;
      }
    }
  }

  // Generator search: the unit group is cyclic of order q-1; an element g
  // generates iff g^((q-1)/r) != 1 for every prime r | q-1.
  std::vector<uint32_t> rads = prime_factors(q_ - 1);
  uint32_t gen = 1;
  for (uint32_t g = 1; g < q_; ++g) {
    bool ok = true;
    for (uint32_t r : rads)
      if (pow_slow(g, (q_ - 1) / r) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      gen = g;
      break;
    }
  }

  exp_.assign(q_ - 1, 1);
  log_.assign(q_, 0);
  for (uint32_t i = 1; i < q_ - 1; ++i) exp_[i] = mul_slow(exp_[i - 1], gen);
  for (uint32_t i = 0; i < q_ - 1; ++i) log_[exp_[i]] = i;
}

std::vector<uint32_t> Field::decode(uint32_t a) const {
  std::vector<uint32_t> d(e_);
  for (uint32_t j = 0; j < e_; ++j) {
    d[j] = a % q0_;
    a /= q0_;
  }
  return d;
}

uint32_t Field::encode(const std::vector<uint32_t>& digits) const {
  uint32_t a = 0;
  for (uint32_t j = e_; j-- > 0;) a = a * q0_ + digits[j];
  return a;
}

uint32_t Field::mul_slow(uint32_t a, uint32_t b) const {
  std::vector<uint32_t> da = decode(a), db = decode(b);
  std::vector<uint32_t> prod(2 * e_ - 1, 0);
  for (uint32_t i = 0; i < e_; ++i) {
    if (da[i] == 0) continue;
    for (uint32_t j = 0; j < e_; ++j)
      prod[i + j] = (prod[i + j] + da[i] * db[j]) % q0_;
  }
  std::vector<uint32_t> r = poly_rem(prod, poly_, q0_);
  r.resize(e_, 0);
  return encode(r);
}

uint32_t Field::pow_slow(uint32_t a, uint64_t n) const {
  uint32_t acc = 1;
  uint32_t base = a;
  while (n > 0) {
    if (n & 1) acc = mul_slow(acc, base);
    base = mul_slow(base, base);
    n >>= 1;
  }
  return acc;
}

uint32_t Field::add(uint32_t a, uint32_t b) const {
  if (e_ == 1) return (a + b) % q0_;
  uint32_t out = 0, weight = 1;
  for (uint32_t j = 0; j < e_; ++j) {
    out += weight * ((a % q0_ + b % q0_) % q0_);
    a /= q0_;
    b /= q0_;
    weight *= q0_;
  }
  return out;
}

uint32_t Field::neg(uint32_t a) const {
  if (e_ == 1) return (q0_ - a) % q0_;
  uint32_t out = 0, weight = 1;
  for (uint32_t j = 0; j < e_; ++j) {
    out += weight * ((q0_ - a % q0_) % q0_);
    a /= q0_;
    weight *= q0_;
  }
  return out;
}

uint32_t Field::sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

uint32_t Field::mul(uint32_t a, uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  uint32_t s = log_[a] + log_[b];
  if (s >= q_ - 1) s -= q_ - 1;
  return exp_[s];
}

uint32_t Field::inv(uint32_t a) const {
  if (a == 0) throw std::invalid_argument("inverse of zero");
  uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : q_ - 1 - l];
}

uint32_t Field::pow(uint32_t a, uint64_t n) const {
  if (n == 0) return 1;
  if (a == 0) return 0;
  uint64_t l = (static_cast<uint64_t>(log_[a]) * (n % (q_ - 1))) % (q_ - 1);
  return exp_[l];
}

}  // namespace qhom
