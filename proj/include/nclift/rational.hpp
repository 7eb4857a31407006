#pragma once

#include <gmpxx.h>

#include <string>

namespace nclift {

/// Exact rational scalar used throughout the library.
using Rational = mpq_class;

/// Builds a canonical rational from an integer pair. Throws on zero denominator.
Rational make_rational(long numerator, long denominator = 1);

/// Parses "n" or "n/d" with optional leading '-'. Throws std::invalid_argument
/// on malformed text or zero denominator. The result is in lowest terms with a
/// positive denominator.
Rational rational_from_string(const std::string& text);

/// Canonical text form: "n" when the denominator is 1, otherwise "n/d".
std::string rational_to_string(const Rational& value);

}  // namespace nclift
