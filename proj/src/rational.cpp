#include "starinv/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace starinv {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    Integer d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value = Rational(Integer(std::string(num)), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer w = whole.empty() ? Integer(0) : Integer(std::string(whole));
    value = Rational(w * scale + Integer(std::string(frac)), scale);
  } else {
    if (!all_digits(s)) throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
    value = Rational(Integer(std::string(s)));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

QComplex& QComplex::operator/=(const QComplex& o) {
  Rational n = o.norm_squared();
  if (n == 0) throw std::domain_error("division by zero in Q(i)");
  Rational r = (re * o.re + im * o.im) / n;
  im = (im * o.re - re * o.im) / n;
  re = std::move(r);
  return *this;
}

std::string to_string(const QComplex& z) {
  if (z.im == 0) return to_string(z.re);
  std::string imag;
  if (z.im == 1)
    imag = "i";
  else if (z.im == -1)
    imag = "-i";
  else
    imag = to_string(z.im) + "i";
  if (z.re == 0) return imag;
  if (imag.front() == '-') return to_string(z.re) + imag;
  return to_string(z.re) + "+" + imag;
}

}  // namespace starinv
