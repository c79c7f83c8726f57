#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace mlspec {

/// Exact rational number. All probabilities, thresholds and feature values
/// are carried in this type.
using Rational = mpq_class;

/// Parses "3", "-0.25", "1e-3", "2.5E2" or "3/4" exactly. Throws
/// Error(ParseError) on anything else.
Rational parse_rational(std::string_view text);

/// Non-throwing variant of parse_rational.
std::optional<Rational> try_parse_rational(std::string_view text);

/// "4/5", "-3", "0".
std::string to_exact_string(const Rational& value);

/// Exact decimal expansion if the reduced denominator is of the form
/// 2^a * 5^b, nullopt otherwise.
std::optional<std::string> to_finite_decimal(const Rational& value);

/// Finite decimal when exact, else "p/q". Always parseable by parse_rational.
std::string to_literal(const Rational& value);

/// Decimal rendering rounded to `significant` significant digits.
std::string to_decimal(const Rational& value, int significant = 12);

/// value^exponent for a non-negative integer exponent.
Rational pow(const Rational& value, unsigned exponent);

}  // namespace mlspec
