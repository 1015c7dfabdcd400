#include "gcx/exterior/number.hpp"

#include <cctype>

#include "gcx/exterior/errors.hpp"

namespace gcx {

Gaussian Gaussian::pow(long n) const {
  if (n < 0) {
    if (is_zero()) throw DomainError("division by zero constant");
    return Gaussian(1) / pow(-n);
  }
  Gaussian result(1);
  Gaussian base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

Gaussian operator/(const Gaussian& a, const Gaussian& b) {
  if (b.is_zero()) throw DomainError("division by zero constant");
  Rational n = b.norm();
  Gaussian num = a * b.conj();
  return {Rational(num.re_ / n), Rational(num.im_ / n)};
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string Gaussian::str() const {
  if (sgn(im_) == 0) return to_string(re_);
  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else {
    imag = to_string(im_) + "*i";
  }
  if (sgn(re_) == 0) return imag;
  if (sgn(im_) < 0) {
    Rational mag = -im_;
    return "(" + to_string(re_) + " - " + (mag == 1 ? std::string("i") : to_string(mag) + "*i") + ")";
  }
  return "(" + to_string(re_) + " + " + imag + ")";
}

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++pos;
  }
  auto slash = text.find('/', pos);
  if (slash != std::string_view::npos) {
    auto num = parse_rational(text.substr(pos, slash - pos));
    auto den = parse_rational(text.substr(slash + 1));
    if (!num || !den || sgn(*den) == 0) return std::nullopt;
    Rational q = *num / *den;
    return negative ? Rational(-q) : q;
  }
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) --scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      try {
        scale += std::stol(std::string(text.substr(pos + 1)));
      } catch (...) {
        return std::nullopt;
      }
      pos = text.size();
      break;
    } else {
      return std::nullopt;
    }
  }
  if (!any_digit) return std::nullopt;
  mpz_class n(digits, 10);
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational q = scale < 0 ? Rational(n, ten_pow) : Rational(n * ten_pow);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  mpz_class rn, rd;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return std::nullopt;
  mpz_sqrt(rn.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), q.get_den_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

}  // namespace gcx
