#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qprelax {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact rational scalar. Coefficients stay rational through instance
// parsing, graph construction and RLT algebra; floats appear only at the
// SDP solver boundary.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

double to_double(const Rat& r);

// Parses a decimal literal ([+-]?digits[.digits][(e|E)[+-]digits]) into an
// exact rational. Throws Error on malformed input.
Rat parse_decimal(std::string_view text);

// Exact decimal rendering when the reduced denominator is of the form
// 2^a 5^b; falls back to "p/q" otherwise.
std::string decimal_string(const Rat& r);

// "p" or "p/q".
std::string fraction_string(const Rat& r);

}  // namespace qprelax
