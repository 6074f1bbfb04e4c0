#include "splitbound/scalar.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace splitbound {

namespace {

using i128 = __int128;

long long checked_narrow(i128 v) {
  if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
    throw std::overflow_error("rational overflow");
  return static_cast<long long>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Scalar make_rat(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Scalar::rational(checked_narrow(num), checked_narrow(den));
}

}  // namespace

Scalar Scalar::rational(long long num, long long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  Scalar s;
  s.exact_ = true;
  s.num_ = num;
  s.den_ = den;
  s.real_ = double(num) / double(den);
  return s;
}

int Scalar::sign() const {
  if (exact_) return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
  return real_ > 0 ? 1 : (real_ < 0 ? -1 : 0);
}

Scalar Scalar::operator-() const {
  if (exact_) return rational(-num_, den_);
  return real(-real_);
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_)
    return make_rat(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                    i128(a.den_) * b.den_);
  return Scalar::real(a.value() + b.value());
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_)
    return make_rat(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  return Scalar::real(a.value() * b.value());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) {
    if (b.num_ == 0) throw std::domain_error("division by zero scalar");
    return make_rat(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  return Scalar::real(a.value() / b.value());
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return a.num_ == b.num_ && a.den_ == b.den_;
  return a.value() == b.value();
}

bool operator<(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_)
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  return a.value() < b.value();
}

Scalar Scalar::abs() const {
  if (exact_) return rational(num_ < 0 ? -num_ : num_, den_);
  return real(std::fabs(real_));
}

Scalar Scalar::inverse() const {
  if (exact_) {
    if (num_ == 0) throw std::domain_error("inverse of zero scalar");
    return rational(den_, num_);
  }
  return real(1.0 / real_);
}

Scalar Scalar::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  Scalar r(1), base = *this;
  while (e > 0) {
    if (e & 1) r *= base;
    base = (e > 1) ? base * base : base;
    e >>= 1;
  }
  return r;
}

std::string Scalar::str() const {
  std::ostringstream os;
  if (exact_) {
    os << num_;
    if (den_ != 1) os << "/" << den_;
  } else {
    os.precision(17);
    os << real_;
  }
  return os.str();
}

Scalar factorial(int n) {
  if (n < 0 || n > 20) throw std::domain_error("factorial out of range");
  long long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return Scalar(f);
}

}  // namespace splitbound
