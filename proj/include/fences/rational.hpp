#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fences {

/// Exact rational number. All statistics, certificates and labelings use it.
using Rational = mpq_class;

/// "p" when the denominator is 1, "p/q" otherwise.
std::string to_string(const Rational& q);

/// Always "p/q", including "p/1". Used by the trace format.
std::string to_fraction_string(const Rational& q);

/// Parses "p", "-p", "p/q". Throws std::invalid_argument on malformed input
/// or a zero denominator. The result is canonical.
Rational parse_rational(std::string_view text);

/// True if q has denominator 1.
bool is_integer(const Rational& q);

}  // namespace fences
