#ifndef STARINV_RATIONAL_HPP
#define STARINV_RATIONAL_HPP

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace starinv {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using RVector = std::vector<Rational>;

/// Parses `p`, `-p`, `p/q` or a finite decimal `a.b`; throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// `p` for integers, `p/q` otherwise.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Exact element of Q(i).
struct QComplex {
  Rational re;
  Rational im;

  QComplex() = default;
  QComplex(Rational r) : re(std::move(r)) {}  // NOLINT: implicit on purpose
  QComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  QComplex(long r) : re(r) {}  // NOLINT

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  QComplex conj() const { return {re, -im}; }
  Rational norm_squared() const { return re * re + im * im; }
  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  QComplex& operator+=(const QComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  QComplex& operator-=(const QComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  QComplex& operator*=(const QComplex& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  QComplex& operator/=(const QComplex& o);

  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
  friend QComplex operator/(QComplex a, const QComplex& b) { return a /= b; }
  friend QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const QComplex& a, const QComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// `a`, `bi`, `a+bi` with rational parts in `p/q` form.
std::string to_string(const QComplex& z);

}  // namespace starinv

#endif
