#include "qprelax/rational.hpp"

#include <cctype>

namespace qprelax {

double to_double(const Rat& r) { return r.convert_to<double>(); }

Rat parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  const std::size_t n = text.size();
  auto fail = [&]() -> Rat {
    throw Error("malformed decimal literal: '" + std::string(text) + "'");
  };
  if (n == 0) fail();
  bool neg = false;
  if (text[pos] == '+' || text[pos] == '-') {
    neg = text[pos] == '-';
    ++pos;
  }
  BigInt mantissa = 0;
  long frac_digits = 0;
  bool any_digit = false;
  while (pos < n && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    mantissa = mantissa * 10 + (text[pos] - '0');
    any_digit = true;
    ++pos;
  }
  if (pos < n && text[pos] == '.') {
    ++pos;
    while (pos < n && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      mantissa = mantissa * 10 + (text[pos] - '0');
      ++frac_digits;
      any_digit = true;
      ++pos;
    }
  }
  if (!any_digit) fail();
  long exp10 = 0;
  if (pos < n && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool eneg = false;
    if (pos < n && (text[pos] == '+' || text[pos] == '-')) {
      eneg = text[pos] == '-';
      ++pos;
    }
    if (pos >= n || !std::isdigit(static_cast<unsigned char>(text[pos]))) fail();
    long e = 0;
    while (pos < n && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      e = e * 10 + (text[pos] - '0');
      if (e > 1000000) fail();
      ++pos;
    }
    exp10 = eneg ? -e : e;
  }
  if (pos != n) fail();

  BigInt num = mantissa;
  BigInt den = 1;
  long net = exp10 - frac_digits;
  if (net >= 0) {
    for (long i = 0; i < net; ++i) num *= 10;
  } else {
    for (long i = 0; i < -net; ++i) den *= 10;
  }
  if (neg) num = -num;
  return Rat(num, den);
}

std::string decimal_string(const Rat& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  // strip factors of 2 and 5 from the denominator
  BigInt d = den;
  long twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return fraction_string(r);
  long k = std::max(twos, fives);
  BigInt scaled = num;
  for (long i = 0; i < k - twos; ++i) scaled *= 2;
  for (long i = 0; i < k - fives; ++i) scaled *= 5;
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string digits = scaled.str();
  std::string out;
  if (k == 0) {
    out = digits;
  } else {
    while (static_cast<long>(digits.size()) <= k) digits.insert(digits.begin(), '0');
    out = digits.substr(0, digits.size() - k) + "." + digits.substr(digits.size() - k);
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  if (neg && out != "0") out.insert(out.begin(), '-');
  return out;
}

std::string fraction_string(const Rat& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace qprelax
