#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tld {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Base error for invalid input to any operation of the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an invariant that the mathematics guarantees is found broken.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Parses "p/q", "p" or a finite decimal such as "0.125" into an exact rational.
Rational parse_rational(std::string_view text);

/// Formats as "p/q" (denominator always present, "0/1" for zero).
std::string format_rational(const Rational& r);

double to_double(const Rational& r);

/// Reduces r into [0,1).
Rational wrap_unit(const Rational& r);

/// Length of the arc from a rightward to b on the unit torus, in [0,1).
Rational forward_distance(const Rational& a, const Rational& b);

/// Dyadic rational k / 2^53 with k drawn from the low 53 bits of `bits`.
Rational dyadic_from_bits(std::uint64_t bits);

std::vector<std::string> format_rationals(const std::vector<Rational>& values);
std::vector<Rational> parse_rationals(const std::vector<std::string>& text);

}  // namespace tld
