#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "khlab/error.hpp"

namespace khlab::exactalg {

// Deterministic Miller-Rabin, valid for all n < 3'215'031'751 (covers p < 2^31).
inline bool is_prime_word(long long n) {
  if (n < 2) return false;
  for (long long q : {2, 3, 5, 7}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  long long d = n - 1;
  int r = 0;
  while (d % 2 == 0) { d /= 2; ++r; }
  auto pow_mod = [n](long long b, long long e) {
    unsigned long long acc = 1, base = static_cast<unsigned long long>(b % n);
    while (e > 0) {
      if (e & 1) acc = acc * base % static_cast<unsigned long long>(n);
      base = base * base % static_cast<unsigned long long>(n);
      e >>= 1;
    }
    return static_cast<long long>(acc);
  };
  for (long long a : {2, 3, 5, 7}) {
    long long x = pow_mod(a, d);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i + 1 < r; ++i) {
      x = pow_mod(x, 2);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

enum class RingKind { rationals, prime_field, integers };

// Runtime descriptor of the coefficient ring; the concrete arithmetic lives in
// RationalField / PrimeField / IntegerRing below.
struct CoefficientRing {
  RingKind kind = RingKind::rationals;
  long long p = 0;

  static CoefficientRing rationals() { return {RingKind::rationals, 0}; }
  static CoefficientRing integers() { return {RingKind::integers, 0}; }
  static CoefficientRing prime_field(long long p) {
    if (p < 2 || p >= (1LL << 31) || !is_prime_word(p))
      fail(ErrorCode::bad_ring, "prime field modulus must be a prime < 2^31, got " + std::to_string(p));
    return {RingKind::prime_field, p};
  }

  bool operator==(const CoefficientRing&) const = default;
  bool is_field() const { return kind != RingKind::integers; }
  long long characteristic() const { return kind == RingKind::prime_field ? p : 0; }
  std::string name() const {
    switch (kind) {
      case RingKind::rationals: return "q";
      case RingKind::integers: return "z";
      case RingKind::prime_field: return "fp:" + std::to_string(p);
    }
    return "?";
  }
};

struct RationalField {
  using Elem = mpq_class;
  static constexpr bool is_field = true;

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  Elem from_int(long long v) const { return Elem(static_cast<long>(v)); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool is_unit(const Elem& a) const { return sgn(a) != 0; }
  Elem inv(const Elem& a) const {
    if (sgn(a) == 0) fail(ErrorCode::internal, "division by zero in Q");
    return Elem(1) / a;
  }
  long long characteristic() const { return 0; }
  // Pivot-size heuristic: combined bit length of numerator and denominator.
  std::size_t size_measure(const Elem& a) const {
    return mpz_sizeinbase(a.get_num().get_mpz_t(), 2) + mpz_sizeinbase(a.get_den().get_mpz_t(), 2);
  }
  std::string to_string(const Elem& a) const { return a.get_str(); }
  CoefficientRing descriptor() const { return CoefficientRing::rationals(); }
};

struct PrimeField {
  using Elem = long long;  // stored in [0, p)
  static constexpr bool is_field = true;

  long long p = 2;

  Elem zero() const { return 0; }
  Elem one() const { return 1 % p; }
  Elem from_int(long long v) const {
    long long r = v % p;
    return r < 0 ? r + p : r;
  }
  Elem add(Elem a, Elem b) const { long long s = a + b; return s >= p ? s - p : s; }
  Elem sub(Elem a, Elem b) const { long long s = a - b; return s < 0 ? s + p : s; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<long long>(static_cast<unsigned long long>(a) * static_cast<unsigned long long>(b) %
                                  static_cast<unsigned long long>(p));
  }
  Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
  bool is_zero(Elem a) const { return a == 0; }
  bool is_unit(Elem a) const { return a != 0; }
  Elem inv(Elem a) const {
    if (a == 0) fail(ErrorCode::internal, "division by zero in F_p");
    // extended Euclid
    long long t = 0, new_t = 1, r = p, new_r = a;
    while (new_r != 0) {
      long long q = r / new_r;
      t -= q * new_t; std::swap(t, new_t);
      r -= q * new_r; std::swap(r, new_r);
    }
    return t < 0 ? t + p : t;
  }
  long long characteristic() const { return p; }
  std::size_t size_measure(Elem) const { return 1; }
  std::string to_string(Elem a) const { return std::to_string(a); }
  CoefficientRing descriptor() const { return CoefficientRing::prime_field(p); }
};

struct IntegerRing {
  using Elem = mpz_class;
  static constexpr bool is_field = false;

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  Elem from_int(long long v) const { return Elem(static_cast<long>(v)); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool is_unit(const Elem& a) const { return a == 1 || a == -1; }
  Elem inv(const Elem& a) const {
    if (!is_unit(a)) fail(ErrorCode::internal, "non-unit inverse over Z");
    return a;
  }
  long long characteristic() const { return 0; }
  std::size_t size_measure(const Elem& a) const { return mpz_sizeinbase(a.get_mpz_t(), 2); }
  std::string to_string(const Elem& a) const { return a.get_str(); }
  CoefficientRing descriptor() const { return CoefficientRing::integers(); }
};

template <class F>
auto with_ring(const CoefficientRing& r, F&& f) {
  switch (r.kind) {
    case RingKind::rationals: return f(RationalField{});
    case RingKind::prime_field: return f(PrimeField{r.p});
    case RingKind::integers: return f(IntegerRing{});
  }
  fail(ErrorCode::internal, "bad ring kind");
}

// Square root of a mod p (Tonelli-Shanks); nullopt when a is a non-residue.
inline std::optional<long long> sqrt_mod(long long a, long long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  if (p == 2) return a;
  PrimeField f{p};
  auto pow_mod = [&](long long b, long long e) {
    long long acc = 1;
    while (e > 0) {
      if (e & 1) acc = f.mul(acc, b);
      b = f.mul(b, b);
      e >>= 1;
    }
    return acc;
  };
  if (pow_mod(a, (p - 1) / 2) != 1) return std::nullopt;
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4);
  // write p-1 = q * 2^s with q odd
  long long q = p - 1;
  int s = 0;
  while (q % 2 == 0) { q /= 2; ++s; }
  long long z = 2;
  while (pow_mod(z, (p - 1) / 2) == 1) ++z;
  long long m = s, c = pow_mod(z, q), t = pow_mod(a, q), r = pow_mod(a, (q + 1) / 2);
  while (t != 1) {
    long long i = 0, tt = t;
    while (tt != 1) { tt = f.mul(tt, tt); ++i; }
    long long b = c;
    for (long long j = 0; j < m - i - 1; ++j) b = f.mul(b, b);
    m = i;
    c = f.mul(b, b);
    t = f.mul(t, c);
    r = f.mul(r, b);
  }
  return r;
}

// Exact integer square root; nullopt when v is negative or not a perfect square.
inline std::optional<long long> perfect_sqrt(long long v) {
  if (v < 0) return std::nullopt;
  mpz_class z(static_cast<long>(v));
  if (!mpz_perfect_square_p(z.get_mpz_t())) return std::nullopt;
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
  return r.get_si();
}

}  // namespace khlab::exactalg
