#pragma once

#include <cstdint>
#include <vector>

namespace qhom {

/// Arithmetic for the finite field GF(q), q = q0^e a prime power.
///
/// Elements are encoded as the integers 0..q-1.  The base-q0 digits of an
/// encoding are the coordinates of the element in the power basis
/// {1, x, ..., x^(e-1)}, constant term in the least significant digit.
/// For e > 1 the structure constants come from the first monic irreducible
/// polynomial of degree e, where candidates are ordered by ascending
/// coefficient vector compared constant-term first; GF(4) gets x^2 + x + 1.
///
/// Multiplication and inversion run through log/antilog tables built on a
/// fixed generator (the smallest encoding that generates the unit group),
/// so all operations after construction are table lookups plus O(e) digit
/// work for addition.
class Field {
public:
  /// Builds GF(q).  Throws std::invalid_argument unless q is a prime
  /// power with 2 <= q <= 65536.
  explicit Field(uint32_t q);

  uint32_t size() const { return q_; }
  uint32_t characteristic() const { return q0_; }
  uint32_t degree() const { return e_; }

  /// Coefficients c[0..e] of the defining polynomial, c[e] = 1 and c[0]
  /// the constant term.  For e = 1 this is x itself.
  const std::vector<uint32_t>& modulus() const { return poly_; }

  uint32_t add(uint32_t a, uint32_t b) const;
  uint32_t sub(uint32_t a, uint32_t b) const;
  uint32_t neg(uint32_t a) const;
  uint32_t mul(uint32_t a, uint32_t b) const;

  /// Multiplicative inverse; throws std::invalid_argument for a = 0.
  uint32_t inv(uint32_t a) const;

  /// a^n with a^0 = 1, including 0^0 = 1.
  uint32_t pow(uint32_t a, uint64_t n) const;

private:
  uint32_t q0_ = 0;
  uint32_t e_ = 0;
  uint32_t q_ = 0;
  std::vector<uint32_t> poly_;
  std::vector<uint32_t> exp_;  // exp_[i] = g^i for 0 <= i < q-1
  std::vector<uint32_t> log_;  // log_[exp_[i]] = i; log_[0] unused

  std::vector<uint32_t> decode(uint32_t a) const;
  uint32_t encode(const std::vector<uint32_t>& digits) const;
  uint32_t mul_slow(uint32_t a, uint32_t b) const;
  uint32_t pow_slow(uint32_t a, uint64_t n) const;
};

}  // namespace qhom
