#include "atspp/rational.hpp"

#include <numeric>
#include <stdexcept>

namespace atspp {
namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kLimit = std::int64_t{1} << 62;

u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
  while (a > UINT64_MAX || b > UINT64_MAX) {
    if (b == 0) return a;
    u128 r = a % b;
    a = b;
    b = r;
  }
  return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
}

mpz_class to_mpz(i128 v) {
  const bool negative = v < 0;
  u128 mag = uabs(v);
  mpz_class hi(static_cast<unsigned long>(mag >> 64));
  mpz_class out = hi << 64;
  out += static_cast<unsigned long>(mag & UINT64_MAX);
  return negative ? mpz_class(-out) : out;
}

bool fits_small(const mpz_class& z) { return mpz_sizeinbase(z.get_mpz_t(), 2) <= 62; }

}  // namespace

Rational::Rational(long long value) {
  if (value > -kLimit && value < kLimit) {
    num_ = value;
  } else {
    assign_big(mpq_class(mpz_class(static_cast<long>(value))));
  }
}

Rational::Rational(long long num, long long den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  set_small(static_cast<i128>(num), static_cast<i128>(den));
}

Rational::Rational(const mpq_class& value) {
  mpq_class v = value;
  v.canonicalize();
  assign_big(std::move(v));
}

Rational::Rational(const Rational& other) : num_(other.num_), den_(other.den_) {
  if (other.big_) big_ = std::make_unique<mpq_class>(*other.big_);
}

Rational& Rational::operator=(const Rational& other) {
  if (this == &other) return *this;
  num_ = other.num_;
  den_ = other.den_;
  if (other.big_) {
    big_ = std::make_unique<mpq_class>(*other.big_);
  } else {
    big_.reset();
  }
  return *this;
}

void Rational::assign_big(mpq_class value) {
  if (fits_small(value.get_num()) && fits_small(value.get_den())) {
    num_ = value.get_num().get_si();
    den_ = value.get_den().get_si();
    big_.reset();
    return;
  }
  num_ = 0;
  den_ = 1;
  big_ = std::make_unique<mpq_class>(std::move(value));
}

void Rational::set_small(i128 num, i128 den) {
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
  u128 g = gcd128(uabs(num), static_cast<u128>(den));
  if (g > 1) {
    num /= static_cast<i128>(g);
    den /= static_cast<i128>(g);
  }
  if (num > -kLimit && num < kLimit && den < kLimit) {
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
    big_.reset();
    return;
  }
  mpq_class q(to_mpz(num), to_mpz(den));
  num_ = 0;
  den_ = 1;
  big_ = std::make_unique<mpq_class>(std::move(q));
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto bad = [&]() { return std::invalid_argument("cannot parse rational: '" + s + "'"); };
  if (s.empty()) throw bad();
  if (auto dot = s.find('.'); dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw bad();
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    mpz_class num;
    if (digits.empty() || digits == "-" || num.set_str(digits, 10) != 0) throw bad();
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(q);
  }
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw bad();
  if (q.get_den() == 0) throw bad();
  q.canonicalize();
  return Rational(q);
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

double Rational::to_double() const {
  if (big_) return big_->get_d();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

long long Rational::floor() const {
  if (!big_) {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
  if (!q.fits_slong_p()) throw std::overflow_error("Rational::floor out of range");
  return q.get_si();
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw std::domain_error("Rational: reciprocal of zero");
  if (!big_) {
    Rational r;
    r.set_small(den_, num_);
    return r;
  }
  return Rational(mpq_class(1) / *big_);
}

Rational Rational::operator-() const {
  Rational r;
  if (big_) {
    r.assign_big(-*big_);
  } else {
    r.num_ = -num_;
    r.den_ = den_;
  }
  return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (rhs.num_ == 0) return *this;
    if (num_ == 0) return *this = rhs;
    if (den_ == rhs.den_) {
      set_small(static_cast<i128>(num_) + rhs.num_, den_);
      return *this;
    }
    std::int64_t g = std::gcd(den_, rhs.den_);
    i128 num = static_cast<i128>(num_) * (rhs.den_ / g) + static_cast<i128>(rhs.num_) * (den_ / g);
    i128 den = static_cast<i128>(den_ / g) * rhs.den_;
    set_small(num, den);
    return *this;
  }
  assign_big(to_mpq() + rhs.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  if (!rhs.big_) {
    if (rhs.num_ == 0) return *this;
    Rational neg;
    neg.num_ = -rhs.num_;
    neg.den_ = rhs.den_;
    return *this += neg;
  }
  assign_big(to_mpq() - rhs.to_mpq());
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (num_ == 0) return *this;
    if (rhs.num_ == 0) return *this = Rational();
    std::int64_t g1 = std::gcd(num_, rhs.den_);
    std::int64_t g2 = std::gcd(rhs.num_, den_);
    i128 num = static_cast<i128>(num_ / g1) * (rhs.num_ / g2);
    i128 den = static_cast<i128>(den_ / g2) * (rhs.den_ / g1);
    if (num > -kLimit && num < kLimit && den < kLimit) {
      num_ = static_cast<std::int64_t>(num);
      den_ = static_cast<std::int64_t>(den);
    } else {
      set_small(num, den);
    }
    return *this;
  }
  assign_big(to_mpq() * rhs.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("Rational: division by zero");
  return *this *= rhs.reciprocal();
}

void Rational::sub_mul(const Rational& factor, const Rational& other) {
  if (factor.is_zero() || other.is_zero()) return;
  Rational product = factor;
  product *= other;
  *this -= product;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical form: a big value never equals an inline one
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    i128 lhs = static_cast<i128>(a.num_) * b.den_;
    i128 rhs = static_cast<i128>(b.num_) * a.den_;
    return lhs < rhs ? std::strong_ordering::less
                     : (lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational pow2(int e) {
  if (e < 0) throw std::domain_error("pow2: negative exponent");
  if (e < 62) return Rational(static_cast<long long>(1) << e);
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return Rational(mpq_class(z));
}

int ceil_log2(long long n) {
  if (n < 1) throw std::domain_error("ceil_log2: argument must be positive");
  int c = 0;
  while ((1LL << c) < n) ++c;
  return c;
}

}  // namespace atspp
