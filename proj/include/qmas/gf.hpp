#pragma once

#include <cstdint>

#include "qmas/errors.hpp"

namespace qmas {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

// Least prime >= m. Always terminates (Bertrand).
inline std::uint32_t smallest_prime_geq(std::uint32_t m) {
  std::uint32_t p = m < 2 ? 2 : m;
  while (!is_prime(p)) ++p;
  return p;
}

namespace detail {

inline std::uint32_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t q) {
  std::uint64_t r = 1 % q;
  base %= q;
  while (exp) {
    if (exp & 1) r = r * base % q;
    base = base * base % q;
    exp >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

} // namespace detail

// Residue arithmetic mod a prime q. Values always stay in [0, q-1].
inline std::uint32_t gf_add(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  std::uint32_t s = a + b;
  return s >= q ? s - q : s;
}

inline std::uint32_t gf_sub(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  return a >= b ? a - b : a + q - b;
}

inline std::uint32_t gf_neg(std::uint32_t a, std::uint32_t q) {
  return a == 0 ? 0 : q - a;
}

inline std::uint32_t gf_mul(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % q);
}

inline std::uint32_t gf_inv(std::uint32_t a, std::uint32_t q) {
  if (a == 0) throw DivisionByZero();
  // Fermat: a^(q-2) mod q for prime q.
  return detail::mod_pow(a, q - 2, q);
}

inline std::uint32_t gf_div(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  return gf_mul(a, gf_inv(b, q), q);
}

// A single element of GF(q) tagged with its modulus. Mixed-modulus
// operations throw ModulusMismatch.
class FieldElement {
public:
  FieldElement(std::uint32_t value, std::uint32_t q) : v_(value % q), q_(q) {
    if (!is_prime(q)) throw ParameterViolation("field modulus must be prime");
  }

  std::uint32_t value() const noexcept { return v_; }
  std::uint32_t modulus() const noexcept { return q_; }

  friend FieldElement operator+(FieldElement a, FieldElement b) {
    check(a, b);
    return FieldElement(gf_add(a.v_, b.v_, a.q_), a.q_);
  }
  friend FieldElement operator-(FieldElement a, FieldElement b) {
    check(a, b);
    return FieldElement(gf_sub(a.v_, b.v_, a.q_), a.q_);
  }
  friend FieldElement operator*(FieldElement a, FieldElement b) {
    check(a, b);
    return FieldElement(gf_mul(a.v_, b.v_, a.q_), a.q_);
  }
  friend FieldElement operator/(FieldElement a, FieldElement b) {
    check(a, b);
    return FieldElement(gf_div(a.v_, b.v_, a.q_), a.q_);
  }
  FieldElement inverse() const { return FieldElement(gf_inv(v_, q_), q_); }

  friend bool operator==(FieldElement a, FieldElement b) {
    return a.v_ == b.v_ && a.q_ == b.q_;
  }

private:
  static void check(FieldElement a, FieldElement b) {
    if (a.q_ != b.q_) throw ModulusMismatch();
  }
  std::uint32_t v_;
  std::uint32_t q_;
};

} // namespace qmas
