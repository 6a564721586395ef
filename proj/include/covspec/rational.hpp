#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

// Boost 1.74's mixed rational/integer operator== recurses forever under
// C++20 reversed-candidate lookup. Exact non-template overloads win
// overload resolution and break the cycle.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, int b) { return a.denominator() == 1 && a.numerator() == b; }
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
  return a.denominator() == 1 && a.numerator() == b;
}
}  // namespace boost

namespace covspec {

using Rational = boost::rational<std::int64_t>;

class RationalSyntaxError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Accepts "a/b", "a" and finite decimals such as "2.9".
Rational parse_rational(const std::string& text);

// Always "num/den", the persisted form.
std::string format_rational(const Rational& value);

// Compact human form: "3" for integers, "7/2" otherwise.
std::string pretty_rational(const Rational& value);

double to_double(const Rational& value);

std::int64_t checked_lcm(std::int64_t a, std::int64_t b);

}  // namespace covspec
