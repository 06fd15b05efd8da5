#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ehc {

/// Exact rational arithmetic for every model coefficient.
using Rational = mpq_class;

/// Resource limit; nullopt means unbounded (no constraint row is generated).
using Budget = std::optional<Rational>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Physical dimension of a parsed quantity. All values are kept in SI base
/// units: seconds, watts, joules, bits, bytes, bits/second, joules/bit.
enum class Dimension { Time, Power, Energy, DataBits, Bytes, Bandwidth, EnergyPerBit, Dimensionless };

/// Parses "12.5", "-3e-2" or "7/3" into an exact rational.
Rational parse_decimal(std::string_view text);

/// Parses a number with an optional unit suffix ("120ms", "2 GiB",
/// "0.70uJ/bit") and converts it to the SI base unit of `dim`.
Rational parse_quantity(std::string_view text, Dimension dim);

/// Scale factor of `unit` relative to the SI base unit of `dim`.
Rational unit_factor(std::string_view unit, Dimension dim);

/// Exact decimal rendering when the denominator is of the form 2^a 5^b,
/// otherwise the exact fraction "num/den".
std::string format_decimal(const Rational& value);

/// `value` (SI) expressed in `unit`, e.g. format_quantity(0.12, "ms") == "120ms".
std::string format_quantity(const Rational& value, std::string_view unit, Dimension dim);

/// Shortest round-trip decimal for a double, parsed exactly.
Rational rational_from_double(double value);

/// Round to the nearest multiple of `step` (ties away from zero).
Rational quantize(const Rational& value, const Rational& step);

/// Nearest double (ties to even); mpq_class::get_d truncates instead.
double to_double(const Rational& r);

}  // namespace ehc
