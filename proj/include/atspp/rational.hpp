#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>

namespace atspp {

// Exact rational number. Values whose reduced numerator and denominator fit
// in 62 bits are stored inline and use 128-bit intermediate arithmetic; larger
// values spill to a GMP rational. The representation is always canonical:
// reduced, positive denominator, and inline whenever the value fits.
class Rational {
 public:
  Rational() = default;
  Rational(long long value);  // NOLINT(google-explicit-constructor)
  Rational(int value) : Rational(static_cast<long long>(value)) {}  // NOLINT
  Rational(long long num, long long den);
  explicit Rational(const mpq_class& value);

  Rational(const Rational& other);
  Rational(Rational&& other) noexcept = default;
  Rational& operator=(const Rational& other);
  Rational& operator=(Rational&& other) noexcept = default;
  ~Rational() = default;

  // Accepts "p", "p/q", and decimal literals such as "0.75".
  static Rational parse(std::string_view text);

  bool is_zero() const { return !big_ && num_ == 0; }
  int sign() const;
  bool is_integer() const;
  bool is_small() const { return !big_; }

  mpq_class to_mpq() const;
  double to_double() const;
  std::string str() const;  // "p" or "p/q"

  // Largest integer not exceeding the value; throws if it does not fit.
  long long floor() const;

  Rational reciprocal() const;
  Rational abs() const { return sign() < 0 ? -*this : *this; }

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  // this -= factor * other, without a temporary for the product when inline.
  void sub_mul(const Rational& factor, const Rational& other);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  void assign_big(mpq_class value);
  void set_small(__int128 num, __int128 den);  // den > 0, reduces

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

// 2^e for e >= 0.
Rational pow2(int e);

// Smallest c with 2^c >= n ("log n" throughout this library); n >= 1.
int ceil_log2(long long n);

}  // namespace atspp
