#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace vcsp {

/// Exact rational number.
///
/// Values whose reduced numerator and denominator fit in 64 bits are kept
/// inline; anything larger is promoted to a GMP rational and demoted again as
/// soon as a result fits. The representation is always canonical: reduced,
/// positive denominator, zero is 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT: integers convert implicitly
  Rational(std::int64_t n, std::int64_t d);
  explicit Rational(const mpq_class& q);

  Rational(const Rational& other);
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& other);
  Rational& operator=(Rational&&) noexcept = default;
  ~Rational() = default;

  /// Parses `p`, `-p` or `p/q`. Throws InputError on malformed text or q = 0.
  static Rational parse(std::string_view text);

  bool is_zero() const { return !big_ && num_ == 0; }
  int sign() const;
  bool is_integer() const;
  bool is_small() const { return !big_; }

  mpz_class numerator() const;
  mpz_class denominator() const;
  mpq_class to_mpq() const;
  std::string str() const;
  double to_double() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  /// Fused `*this -= a * b`, the inner update of a simplex pivot.
  void sub_mul(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// Smallest integer not below the value.
  mpz_class ceil() const;

 private:
  void assign(const mpq_class& q);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// A rational number or +infinity. The codomain of weighted relations.
class ExtRat {
 public:
  ExtRat() = default;
  ExtRat(Rational v) : value_(std::move(v)) {}  // NOLINT
  ExtRat(std::int64_t v) : value_(v) {}          // NOLINT

  static ExtRat infinity() {
    ExtRat e;
    e.inf_ = true;
    return e;
  }
  /// Parses a rational or the token `inf`.
  static ExtRat parse(std::string_view text);

  bool is_inf() const { return inf_; }
  bool is_finite() const { return !inf_; }
  /// The finite value; throws std::logic_error on infinity.
  const Rational& value() const;
  std::string str() const;

  ExtRat& operator+=(const ExtRat& rhs);
  friend ExtRat operator+(ExtRat lhs, const ExtRat& rhs) { return lhs += rhs; }
  /// Scales by a non-negative rational; inf * 0 is 0 (an unused infeasible term).
  ExtRat scaled(const Rational& factor) const;

  friend bool operator==(const ExtRat& a, const ExtRat& b);
  friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b);

 private:
  bool inf_ = false;
  Rational value_;
};

std::ostream& operator<<(std::ostream& os, const ExtRat& r);

}  // namespace vcsp
