#include "causalteam/rational.hpp"

#include <stdexcept>

namespace ct {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string to_decimal(const Rational& r, int digits) {
  std::int64_t num = r.numerator(), den = r.denominator();
  std::string out;
  if (num < 0) {
    out = "-";
    num = -num;
  }
  out += std::to_string(num / den);
  num %= den;
  if (digits > 0) {
    out += '.';
    for (int i = 0; i < digits; ++i) {
      num *= 10;
      out += static_cast<char>('0' + num / den);
      num %= den;
    }
  }
  return out;
}

Probability::Probability(Rational r) : r_(r) {
  if (r < 0 || r > 1) throw std::domain_error("probability outside [0,1]: " + ct::to_string(r));
}

}  // namespace ct
