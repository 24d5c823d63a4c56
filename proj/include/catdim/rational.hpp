#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace catdim {

/// Exact rational number.
///
/// Values whose reduced numerator and denominator fit in 64 bits are kept
/// inline; anything larger is promoted to a GMP rational and demoted again as
/// soon as it fits. Invariant: den_ > 0 and gcd(num_, den_) == 1 on the
/// inline path, big_ canonical otherwise.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(int value) : num_(value) {}           // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(const mpq_class& q) { assign(q); }
  explicit Rational(const mpz_class& z) { assign(mpq_class(z)); }

  Rational(const Rational& other);
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& other);
  Rational& operator=(Rational&&) noexcept = default;
  ~Rational() = default;

  /// Accepts "n", "-n", "n/d" with arbitrary-size decimal integers.
  static Rational parse(std::string_view text);

  [[nodiscard]] std::string str() const;
  [[nodiscard]] mpq_class to_mpq() const;
  [[nodiscard]] mpz_class numerator() const;
  [[nodiscard]] mpz_class denominator() const;

  [[nodiscard]] bool is_zero() const { return !big_ && num_ == 0; }
  [[nodiscard]] bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  [[nodiscard]] bool is_integer() const;
  [[nodiscard]] int sign() const;
  [[nodiscard]] bool is_inline() const { return !big_; }
  /// Only meaningful when is_inline() and is_integer().
  [[nodiscard]] std::int64_t inline_value() const { return num_; }

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  void assign(const mpq_class& q);
  void set_from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

}  // namespace catdim
