#include "catdim/rational.hpp"

#include <limits>

#include "catdim/errors.hpp"

namespace catdim {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr i128 kMax64 = std::numeric_limits<std::int64_t>::max();
constexpr i128 kMin64 = std::numeric_limits<std::int64_t>::min();

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    if ((a >> 64) == 0 && (b >> 64) == 0) {
      std::uint64_t x = static_cast<std::uint64_t>(a);
      std::uint64_t y = static_cast<std::uint64_t>(b);
      while (y != 0) {
        std::uint64_t t = x % y;
        x = y;
        y = t;
      }
      return x;
    }
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class mpz_from_wide(i128 value) {
  bool negative = value < 0;
  u128 mag = negative ? static_cast<u128>(-(value + 1)) + 1 : static_cast<u128>(value);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
  mpz_class out = (hi << 64) + lo;
  if (negative) out = -out;
  return out;
}

bool fits_long(const mpz_class& z) { return mpz_fits_slong_p(z.get_mpz_t()) != 0; }

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InputError("rational with zero denominator");
  set_from_wide(num, den);
}

Rational::Rational(const Rational& other)
    : num_(other.num_), den_(other.den_),
      big_(other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr) {}

Rational& Rational::operator=(const Rational& other) {
  if (this == &other) return *this;
  num_ = other.num_;
  den_ = other.den_;
  big_ = other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr;
  return *this;
}

void Rational::assign(const mpq_class& q) {
  if (fits_long(q.get_num()) && fits_long(q.get_den())) {
    num_ = q.get_num().get_si();
    den_ = q.get_den().get_si();
    big_.reset();
  } else {
    big_ = std::make_unique<mpq_class>(q);
    big_->canonicalize();
    num_ = 0;
    den_ = 1;
  }
}

void Rational::set_from_wide(i128 num, i128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) {
    num_ = 0;
    den_ = 1;
    big_.reset();
    return;
  }
  if (den != 1) {
    u128 g = gcd128(static_cast<u128>(num < 0 ? -num : num), static_cast<u128>(den));
    if (g > 1) {
      num /= static_cast<i128>(g);
      den /= static_cast<i128>(g);
    }
  }
  if (num >= kMin64 && num <= kMax64 && den <= kMax64) {
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
    big_.reset();
    return;
  }
  mpq_class q(mpz_from_wide(num), mpz_from_wide(den));
  q.canonicalize();
  assign(q);
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InputError("empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw InputError("malformed rational literal '" + s + "'");
  if (q.get_den() == 0) throw InputError("rational with zero denominator '" + s + "'");
  q.canonicalize();
  return Rational(q);
}

std::string Rational::str() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

mpz_class Rational::numerator() const {
  return big_ ? mpz_class(big_->get_num()) : mpz_class(static_cast<long>(num_));
}

mpz_class Rational::denominator() const {
  return big_ ? mpz_class(big_->get_den()) : mpz_class(static_cast<long>(den_));
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

Rational Rational::operator-() const {
  if (big_ || num_ == std::numeric_limits<std::int64_t>::min()) return Rational(mpq_class(-to_mpq()));
  Rational out;
  out.num_ = -num_;
  out.den_ = den_;
  return out;
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == 1 && rhs.den_ == 1) {
      std::int64_t r;
      if (!__builtin_add_overflow(num_, rhs.num_, &r)) {
        num_ = r;
        return *this;
      }
      set_from_wide(static_cast<i128>(num_) + rhs.num_, 1);
      return *this;
    }
    i128 n = static_cast<i128>(num_) * rhs.den_ + static_cast<i128>(rhs.num_) * den_;
    i128 d = static_cast<i128>(den_) * rhs.den_;
    set_from_wide(n, d);
    return *this;
  }
  assign(to_mpq() + rhs.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == 1 && rhs.den_ == 1) {
      std::int64_t r;
      if (!__builtin_sub_overflow(num_, rhs.num_, &r)) {
        num_ = r;
        return *this;
      }
      set_from_wide(static_cast<i128>(num_) - rhs.num_, 1);
      return *this;
    }
    i128 n = static_cast<i128>(num_) * rhs.den_ - static_cast<i128>(rhs.num_) * den_;
    i128 d = static_cast<i128>(den_) * rhs.den_;
    set_from_wide(n, d);
    return *this;
  }
  assign(to_mpq() - rhs.to_mpq());
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == 1 && rhs.den_ == 1) {
      std::int64_t r;
      if (!__builtin_mul_overflow(num_, rhs.num_, &r)) {
        num_ = r;
        return *this;
      }
    }
    set_from_wide(static_cast<i128>(num_) * rhs.num_, static_cast<i128>(den_) * rhs.den_);
    return *this;
  }
  assign(to_mpq() * rhs.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("division by zero");
  if (!big_ && !rhs.big_) {
    set_from_wide(static_cast<i128>(num_) * rhs.den_, static_cast<i128>(den_) * rhs.num_);
    return *this;
  }
  assign(to_mpq() / rhs.to_mpq());
  return *this;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  // Canonical forms: a promoted value never fits inline.
  if (!a.big_ || !b.big_) return false;
  return *a.big_ == *b.big_;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    i128 lhs = static_cast<i128>(a.num_) * b.den_;
    i128 rhs = static_cast<i128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

}  // namespace catdim
