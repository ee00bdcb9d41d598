#include "vcsp/rational.hpp"

#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "vcsp/error.hpp"

namespace vcsp {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

// Small values keep |num| <= kMax so negation never overflows.
bool fits(i128 v) { return v <= kMax && v >= -kMax; }

std::uint64_t uabs(std::int64_t v) { return v < 0 ? std::uint64_t(0) - std::uint64_t(v) : std::uint64_t(v); }

u128 uabs128(i128 v) { return v < 0 ? u128(-v) : u128(v); }

mpz_class to_mpz(std::int64_t v) {
  mpz_class z;
  const std::uint64_t mag = uabs(v);
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0, &mag);
  if (v < 0) z = -z;
  return z;
}

bool mpz_to_small(const mpz_class& z, std::int64_t& out) {
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > 63) return false;
  std::uint64_t mag = 0;
  std::size_t count = 0;
  mpz_export(&mag, &count, 1, sizeof(std::uint64_t), 0, 0, z.get_mpz_t());
  out = sgn(z) < 0 ? -std::int64_t(mag) : std::int64_t(mag);
  return true;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw InputError("rational with zero denominator");
  if (n == std::numeric_limits<std::int64_t>::min() || d == std::numeric_limits<std::int64_t>::min()) {
    assign(mpq_class(to_mpz(n), to_mpz(d)));
    return;
  }
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n, d);
  num_ = n / g;
  den_ = d / g;
}

Rational::Rational(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  assign(c);
}

Rational::Rational(const Rational& other)
    : num_(other.num_), den_(other.den_),
      big_(other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr) {}

Rational& Rational::operator=(const Rational& other) {
  if (this == &other) return *this;
  num_ = other.num_;
  den_ = other.den_;
  if (other.big_) {
    if (big_)
      *big_ = *other.big_;
    else
      big_ = std::make_unique<mpq_class>(*other.big_);
  } else {
    big_.reset();
  }
  return *this;
}

void Rational::assign(const mpq_class& q) {
  std::int64_t n = 0;
  std::int64_t d = 1;
  if (mpz_to_small(q.get_num(), n) && mpz_to_small(q.get_den(), d)) {
    num_ = n;
    den_ = d;
    big_.reset();
    return;
  }
  if (big_)
    *big_ = q;
  else
    big_ = std::make_unique<mpq_class>(q);
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InputError("empty rational literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool seen_slash = false;
  bool digit_before = false;
  bool digit_after = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/') {
      if (seen_slash) throw InputError("malformed rational '" + s + "'");
      seen_slash = true;
    } else if (c >= '0' && c <= '9') {
      (seen_slash ? digit_after : digit_before) = true;
    } else {
      throw InputError("malformed rational '" + s + "'");
    }
  }
  if (!digit_before || (seen_slash && !digit_after)) throw InputError("malformed rational '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw InputError("malformed rational '" + s + "'");
  if (sgn(q.get_den()) == 0) throw InputError("rational with zero denominator '" + s + "'");
  q.canonicalize();
  Rational r;
  r.assign(q);
  return r;
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const {
  if (big_) return big_->get_den() == 1;
  return den_ == 1;
}

mpz_class Rational::numerator() const { return big_ ? mpz_class(big_->get_num()) : to_mpz(num_); }
mpz_class Rational::denominator() const { return big_ ? mpz_class(big_->get_den()) : to_mpz(den_); }

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(to_mpz(num_), to_mpz(den_));
}

std::string Rational::str() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

double Rational::to_double() const { return big_ ? big_->get_d() : double(num_) / double(den_); }

mpz_class Rational::ceil() const {
  mpz_class n = numerator();
  mpz_class d = denominator();
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

Rational Rational::operator-() const {
  Rational r(*this);
  if (r.big_)
    *r.big_ = -*r.big_;
  else
    r.num_ = -r.num_;
  return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (rhs.num_ == 0) return *this;
    if (num_ == 0) return *this = rhs;
    const std::int64_t a = num_, b = den_, c = rhs.num_, d = rhs.den_;
    if (b == 1 && d == 1) {
      i128 s = i128(a) + c;
      if (fits(s)) {
        num_ = std::int64_t(s);
        return *this;
      }
    } else {
      std::uint64_t g = std::gcd(std::uint64_t(b), std::uint64_t(d));
      i128 t;
      u128 den;
      if (g == 1) {
        t = i128(a) * d + i128(c) * b;
        den = u128(b) * u128(d);
      } else {
        std::int64_t b1 = b / std::int64_t(g);
        std::int64_t d1 = d / std::int64_t(g);
        t = i128(a) * d1 + i128(c) * b1;
        std::uint64_t g2 = std::gcd(std::uint64_t(uabs128(t) % g), g);
        if (g2 > 1) t /= i128(g2);
        den = u128(b1) * u128(d / std::int64_t(g2));
      }
      if (t == 0) {
        num_ = 0;
        den_ = 1;
        return *this;
      }
      if (fits(t) && den <= u128(kMax)) {
        num_ = std::int64_t(t);
        den_ = std::int64_t(den);
        return *this;
      }
    }
  }
  assign(to_mpq() + rhs.to_mpq());
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
  return *this += -rhs;
}

Rational& Rational::operator*=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (num_ == 0) return *this;
    if (rhs.num_ == 0) {
      num_ = 0;
      den_ = 1;
      return *this;
    }
    std::int64_t g1 = std::int64_t(std::gcd(uabs(num_), std::uint64_t(rhs.den_)));
    std::int64_t g2 = std::int64_t(std::gcd(uabs(rhs.num_), std::uint64_t(den_)));
    i128 n = i128(num_ / g1) * (rhs.num_ / g2);
    i128 d = i128(den_ / g2) * (rhs.den_ / g1);
    if (fits(n) && d <= kMax) {
      num_ = std::int64_t(n);
      den_ = std::int64_t(d);
      return *this;
    }
  }
  assign(to_mpq() * rhs.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("rational division by zero");
  if (!rhs.big_) {
    Rational inv;
    inv.num_ = rhs.num_ < 0 ? -rhs.den_ : rhs.den_;
    inv.den_ = rhs.num_ < 0 ? -rhs.num_ : rhs.num_;
    return *this *= inv;
  }
  assign(to_mpq() / rhs.to_mpq());
  return *this;
}

void Rational::sub_mul(const Rational& a, const Rational& b) {
  if (!big_ && !a.big_ && !b.big_ && den_ == 1 && a.den_ == 1 && b.den_ == 1) {
    i128 v = i128(num_) - i128(a.num_) * b.num_;
    if (fits(v)) {
      num_ = std::int64_t(v);
      return;
    }
  }
  *this -= a * b;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical forms: a value is big only if it does not fit
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    i128 l = i128(a.num_) * b.den_;
    i128 r = i128(b.num_) * a.den_;
    return l <=> r;
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

ExtRat ExtRat::parse(std::string_view text) {
  if (text == "inf") return infinity();
  return ExtRat(Rational::parse(text));
}

const Rational& ExtRat::value() const {
  if (inf_) throw std::logic_error("value() of infinite ExtRat");
  return value_;
}

std::string ExtRat::str() const { return inf_ ? "inf" : value_.str(); }

ExtRat& ExtRat::operator+=(const ExtRat& rhs) {
  if (inf_) return *this;
  if (rhs.inf_) {
    *this = infinity();
    return *this;
  }
  value_ += rhs.value_;
  return *this;
}

ExtRat ExtRat::scaled(const Rational& factor) const {
  if (factor.sign() < 0) throw std::domain_error("ExtRat scaled by a negative factor");
  if (inf_) return factor.is_zero() ? ExtRat(0) : *this;
  return ExtRat(value_ * factor);
}

bool operator==(const ExtRat& a, const ExtRat& b) {
  if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
  if (a.inf_ || b.inf_) return int(a.inf_) <=> int(b.inf_);
  return a.value_ <=> b.value_;
}

std::ostream& operator<<(std::ostream& os, const ExtRat& r) { return os << r.str(); }

}  // namespace vcsp
