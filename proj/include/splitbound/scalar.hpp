#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace splitbound {

/// Coefficient scalar: an exact rational (lowest terms, positive
/// denominator) or a double. Exact op exact stays exact; anything
/// involving a real yields a real.
class Scalar {
 public:
  Scalar() : exact_(true), num_(0), den_(1), real_(0.0) {}
  Scalar(long long n) : exact_(true), num_(n), den_(1), real_(double(n)) {}
  Scalar(int n) : Scalar(static_cast<long long>(n)) {}

  static Scalar rational(long long num, long long den);
  static Scalar real(double x) {
    Scalar s;
    s.exact_ = false;
    s.real_ = x;
    return s;
  }

  bool exact() const { return exact_; }
  long long num() const { return num_; }
  long long den() const { return den_; }
  double value() const { return exact_ ? double(num_) / double(den_) : real_; }

  bool is_zero() const { return exact_ ? num_ == 0 : real_ == 0.0; }
  int sign() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator<(const Scalar& a, const Scalar& b);
  friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return !(a < b); }

  Scalar abs() const;
  Scalar pow(int e) const;  // integer exponent, e < 0 inverts
  Scalar inverse() const;

  std::string str() const;

 private:
  bool exact_;
  long long num_, den_;
  double real_;
};

/// n! as an exact scalar (n <= 20).
Scalar factorial(int n);

}  // namespace splitbound
