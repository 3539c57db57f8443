#ifndef UEQ_FP_HPP
#define UEQ_FP_HPP

#include <Eigen/Core>
#include <cassert>
#include <cstdint>
#include <ostream>

#include "ueq/bigint.hpp"
#include "ueq/errors.hpp"

namespace ueq {

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/**
 * A residue modulo a runtime prime, usable as an Eigen scalar.
 *
 * Eigen (and generic code) materializes zeros and small integer literals
 * through Scalar(int); those carry no modulus yet. Such field-free values
 * adopt the other operand's modulus on first contact, the same pattern
 * arbitrary-precision scalars with ambient precision use. Mixing residues
 * from two different primes is a programming error and asserts.
 */
class Fp {
public:
  Fp() : value_(0), modulus_(0) {}
  Fp(long long v) : value_(v), modulus_(0) {}  // NOLINT: implicit by design
  Fp(int v) : value_(v), modulus_(0) {}        // NOLINT
  Fp(std::uint64_t v, std::uint64_t p) : value_(0), modulus_(p) {
    assert(p > 0);
    value_ = static_cast<long long>(v % p);
  }
  static Fp from_bigint(const BigInt& v, std::uint64_t p);

  std::uint64_t value() const { return static_cast<std::uint64_t>(value_); }
  std::uint64_t modulus() const { return modulus_; }

  friend Fp operator+(const Fp& a, const Fp& b) {
    std::uint64_t p = merged(a, b);
    if (p == 0) return Fp(a.value_ + b.value_);
    return Fp(reduce(a.value_, p) + reduce(b.value_, p), p);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    std::uint64_t p = merged(a, b);
    if (p == 0) return Fp(a.value_ - b.value_);
    return Fp(reduce(a.value_, p) + p - reduce(b.value_, p), p);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    std::uint64_t p = merged(a, b);
    if (p == 0) return Fp(a.value_ * b.value_);
    using u128 = unsigned __int128;
    return Fp(static_cast<std::uint64_t>(
                  u128(reduce(a.value_, p)) * reduce(b.value_, p) % p),
              p);
  }
  Fp operator-() const { return Fp(0) - *this; }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }

  friend bool operator==(const Fp& a, const Fp& b) {
    std::uint64_t p = merged(a, b);
    if (p == 0) return a.value_ == b.value_;
    return reduce(a.value_, p) == reduce(b.value_, p);
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Fp& x) {
    return os << x.value_;
  }

private:
  static std::uint64_t merged(const Fp& a, const Fp& b) {
    assert(a.modulus_ == 0 || b.modulus_ == 0 || a.modulus_ == b.modulus_);
    return a.modulus_ ? a.modulus_ : b.modulus_;
  }
  static std::uint64_t reduce(long long v, std::uint64_t p) {
    long long r = v % static_cast<long long>(p);
    if (r < 0) r += static_cast<long long>(p);
    return static_cast<std::uint64_t>(r);
  }

  long long value_;  // normalized to [0, modulus) when modulus_ != 0
  std::uint64_t modulus_;
};

inline Fp Fp::from_bigint(const BigInt& v, std::uint64_t p) {
  BigInt r = v % p;
  if (r < 0) r += p;
  return Fp(r.convert_to<std::uint64_t>(), p);
}

}  // namespace ueq

namespace Eigen {

template <>
struct NumTraits<ueq::Fp> : GenericNumTraits<ueq::Fp> {
  typedef ueq::Fp Real;
  typedef ueq::Fp NonInteger;
  typedef ueq::Fp Nested;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 6,
  };
};

}  // namespace Eigen

#endif  // UEQ_FP_HPP
