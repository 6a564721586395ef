#include "covspec/rational.hpp"

#include <cctype>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace covspec {

namespace {

std::int64_t parse_int(const std::string& s, const std::string& whole) {
  if (s.empty()) throw RationalSyntaxError("malformed rational: '" + whole + "'");
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw RationalSyntaxError("malformed rational: '" + whole + "'");
  }
  if (pos != s.size()) throw RationalSyntaxError("malformed rational: '" + whole + "'");
  return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::int64_t num = parse_int(s.substr(0, slash), text);
    std::int64_t den = parse_int(s.substr(slash + 1), text);
    if (den == 0) throw RationalSyntaxError("zero denominator: '" + text + "'");
    return Rational(num, den);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(parse_int(s, text));
  std::string ip = s.substr(0, dot);
  std::string fp = s.substr(dot + 1);
  if (fp.empty() || fp.size() > 15) throw RationalSyntaxError("malformed rational: '" + text + "'");
  for (char c : fp)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw RationalSyntaxError("malformed rational: '" + text + "'");
  bool neg = !ip.empty() && ip[0] == '-';
  if (ip.empty() || ip == "-" || ip == "+") ip += "0";
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
  std::int64_t whole = parse_int(ip, text);
  std::int64_t frac = parse_int(fp, text);
  Rational r(whole);
  Rational f(frac, scale);
  return neg ? r - f : r + f;
}

std::string format_rational(const Rational& value) {
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

std::string pretty_rational(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return format_rational(value);
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  std::int64_t g = std::gcd(a, b);
  std::int64_t q = a / g;
  std::int64_t out = 0;
  if (__builtin_mul_overflow(q, b, &out)) throw std::overflow_error("length scale overflow");
  return out < 0 ? -out : out;
}

}  // namespace covspec
