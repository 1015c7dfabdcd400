#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gcx {

using Rational = mpq_class;

/// Exact Gaussian rational a + b·i.
class Gaussian {
 public:
  Gaussian() = default;
  Gaussian(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  Gaussian(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
  Gaussian(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static Gaussian i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  Gaussian conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }

  /// Throws DomainError when inverting zero with a negative exponent.
  Gaussian pow(long n) const;

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  std::string str() const;

  friend Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
  friend Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
  friend Gaussian operator-(const Gaussian& a) { return {-a.re_, -a.im_}; }
  friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend Gaussian operator/(const Gaussian& a, const Gaussian& b);
  Gaussian& operator+=(const Gaussian& o) { return *this = *this + o; }
  Gaussian& operator*=(const Gaussian& o) { return *this = *this * o; }
  friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

  /// Lexicographic on (re, im); only used for canonical ordering.
  friend int compare(const Gaussian& a, const Gaussian& b) {
    if (int c = cmp(a.re_, b.re_)) return c < 0 ? -1 : 1;
    if (int c = cmp(a.im_, b.im_)) return c < 0 ? -1 : 1;
    return 0;
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

/// Parses "3", "-2/5", "0.75", "1e-3" into an exact rational.
std::optional<Rational> parse_rational(std::string_view text);

std::string to_string(const Rational& q);

/// Exact square root of a non-negative rational when it is a perfect square.
std::optional<Rational> exact_sqrt(const Rational& q);

}  // namespace gcx
