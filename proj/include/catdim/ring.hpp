#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "catdim/rational.hpp"

namespace catdim {

/// Scalars are Rationals; the ambient ring decides which values are legal
/// and how results are normalized (F_p values live in [0, p)).
using Scalar = Rational;

enum class RingKind { Rationals, PrimeField, Integers };

/// One of Q, F_p (p prime, p < 2^31) or Z.
class RingSpec {
 public:
  RingSpec() = default;

  static RingSpec rationals() { return RingSpec(RingKind::Rationals, 0); }
  static RingSpec integers() { return RingSpec(RingKind::Integers, 0); }
  /// Throws InputError unless p is a prime below 2^31.
  static RingSpec prime_field(std::uint64_t p);
  /// "Q", "Z" or "Fp:<p>".
  static RingSpec parse(std::string_view text);

  [[nodiscard]] RingKind kind() const { return kind_; }
  [[nodiscard]] std::uint32_t modulus() const { return p_; }
  [[nodiscard]] bool is_field() const { return kind_ != RingKind::Integers; }
  [[nodiscard]] std::string str() const;

  /// Maps an arbitrary rational into the ring's canonical representative.
  /// Throws InputError for non-integers over Z, or for denominators
  /// divisible by p over F_p.
  [[nodiscard]] Scalar from_rational(const Rational& q) const;
  [[nodiscard]] bool contains(const Scalar& s) const;

  [[nodiscard]] Scalar add(const Scalar& a, const Scalar& b) const;
  [[nodiscard]] Scalar sub(const Scalar& a, const Scalar& b) const;
  [[nodiscard]] Scalar mul(const Scalar& a, const Scalar& b) const;
  [[nodiscard]] Scalar neg(const Scalar& a) const;
  /// Multiplicative inverse; over Z only the units +-1 are invertible.
  [[nodiscard]] Scalar inv(const Scalar& a) const;
  [[nodiscard]] bool is_unit(const Scalar& a) const;

  friend bool operator==(const RingSpec&, const RingSpec&) = default;

 private:
  RingSpec(RingKind kind, std::uint32_t p) : kind_(kind), p_(p) {}

  [[nodiscard]] std::uint64_t residue(const Scalar& a) const;

  RingKind kind_ = RingKind::Rationals;
  std::uint32_t p_ = 0;
};

bool is_prime(std::uint64_t n);

/// Modular inverse of a mod p (a != 0 mod p).
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p);

}  // namespace catdim
