#include "catdim/ring.hpp"

#include <charconv>

#include "catdim/errors.hpp"

namespace catdim {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a % p);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw std::domain_error("element not invertible mod p");
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

RingSpec RingSpec::prime_field(std::uint64_t p) {
  if (p >= (1ULL << 31)) throw InputError("prime modulus must be below 2^31");
  if (!is_prime(p)) throw InputError("modulus " + std::to_string(p) + " is not prime");
  return RingSpec(RingKind::PrimeField, static_cast<std::uint32_t>(p));
}

RingSpec RingSpec::parse(std::string_view text) {
  if (text == "Q") return rationals();
  if (text == "Z") return integers();
  if (text.starts_with("Fp:")) {
    std::string_view digits = text.substr(3);
    std::uint64_t p = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      throw InputError("malformed ring '" + std::string(text) + "'");
    }
    return prime_field(p);
  }
  throw InputError("unknown ring '" + std::string(text) + "' (expected Q, Z or Fp:<p>)");
}

std::string RingSpec::str() const {
  switch (kind_) {
    case RingKind::Rationals:
      return "Q";
    case RingKind::Integers:
      return "Z";
    case RingKind::PrimeField:
      return "Fp:" + std::to_string(p_);
  }
  return "?";
}

std::uint64_t RingSpec::residue(const Scalar& a) const {
  // Canonical F_p values are inline integers in [0, p).
  return static_cast<std::uint64_t>(a.inline_value());
}

Scalar RingSpec::from_rational(const Rational& q) const {
  switch (kind_) {
    case RingKind::Rationals:
      return q;
    case RingKind::Integers:
      if (!q.is_integer()) throw InputError("value " + q.str() + " is not an integer");
      return q;
    case RingKind::PrimeField: {
      mpz_class num = q.numerator();
      mpz_class den = q.denominator();
      mpz_class pz(static_cast<unsigned long>(p_));
      mpz_class n = num % pz;
      if (n < 0) n += pz;
      mpz_class d = den % pz;
      if (d == 0) throw InputError("denominator of " + q.str() + " vanishes mod " + std::to_string(p_));
      std::uint64_t nv = n.get_ui();
      std::uint64_t dv = d.get_ui();
      std::uint64_t v = (nv * inverse_mod(dv, p_)) % p_;
      return Scalar(static_cast<std::int64_t>(v));
    }
  }
  return q;
}

bool RingSpec::contains(const Scalar& s) const {
  switch (kind_) {
    case RingKind::Rationals:
      return true;
    case RingKind::Integers:
      return s.is_integer();
    case RingKind::PrimeField:
      return s.is_inline() && s.is_integer() && s.inline_value() >= 0 &&
             s.inline_value() < static_cast<std::int64_t>(p_);
  }
  return false;
}

Scalar RingSpec::add(const Scalar& a, const Scalar& b) const {
  if (kind_ == RingKind::PrimeField) {
    std::uint64_t v = residue(a) + residue(b);
    if (v >= p_) v -= p_;
    return Scalar(static_cast<std::int64_t>(v));
  }
  return a + b;
}

Scalar RingSpec::sub(const Scalar& a, const Scalar& b) const {
  if (kind_ == RingKind::PrimeField) {
    std::uint64_t v = residue(a) + p_ - residue(b);
    if (v >= p_) v -= p_;
    return Scalar(static_cast<std::int64_t>(v));
  }
  return a - b;
}

Scalar RingSpec::mul(const Scalar& a, const Scalar& b) const {
  if (kind_ == RingKind::PrimeField) {
    return Scalar(static_cast<std::int64_t>((residue(a) * residue(b)) % p_));
  }
  return a * b;
}

Scalar RingSpec::neg(const Scalar& a) const {
  if (kind_ == RingKind::PrimeField) {
    std::uint64_t v = residue(a);
    return Scalar(static_cast<std::int64_t>(v == 0 ? 0 : p_ - v));
  }
  return -a;
}

bool RingSpec::is_unit(const Scalar& a) const {
  if (a.is_zero()) return false;
  if (kind_ == RingKind::Integers) return a == Scalar(1) || a == Scalar(-1);
  return true;
}

Scalar RingSpec::inv(const Scalar& a) const {
  if (!is_unit(a)) throw std::domain_error("element " + a.str() + " is not a unit in " + str());
  switch (kind_) {
    case RingKind::Rationals:
      return Scalar(1) / a;
    case RingKind::Integers:
      return a;
    case RingKind::PrimeField:
      return Scalar(static_cast<std::int64_t>(inverse_mod(residue(a), p_)));
  }
  return a;
}

}  // namespace catdim
