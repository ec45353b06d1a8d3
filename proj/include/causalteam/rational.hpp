#pragma once

#include <boost/rational.hpp>
#include <compare>
#include <cstdint>
#include <string>

namespace ct {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);                 // "3/4", "1", "0"
std::string to_decimal(const Rational& r, int digits = 6);

// Exact probability, always within [0,1].
class Probability {
 public:
  Probability() = default;
  explicit Probability(Rational r);  // throws std::domain_error outside [0,1]
  Probability(std::int64_t num, std::int64_t den) : Probability(Rational(num, den)) {}

  const Rational& value() const { return r_; }
  std::string to_string() const { return ct::to_string(r_); }

  friend bool operator==(const Probability& a, const Probability& b) { return a.r_ == b.r_; }
  friend std::strong_ordering operator<=>(const Probability& a, const Probability& b) {
    if (a.r_ < b.r_) return std::strong_ordering::less;
    if (b.r_ < a.r_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Rational r_{0};
};

}  // namespace ct
