#include "ehc/units.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <utility>

namespace ehc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

Rational pow10(long exponent) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent >= 0) return Rational(p);
    Rational r(mpz_class(1), p);
    r.canonicalize();
    return r;
}

// Length of the leading numeric literal (decimal with exponent, or a/b).
std::size_t numeric_prefix(std::string_view s) {
    std::size_t i = 0;
    auto digits = [&] {
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        return i - start;
    };
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t n = digits();
    if (i < s.size() && s[i] == '.') {
        ++i;
        n += digits();
    }
    if (n == 0) return 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t save = i++;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        if (digits() == 0) i = save;
    } else if (i < s.size() && s[i] == '/') {
        std::size_t save = i++;
        if (digits() == 0) i = save;
    }
    return i;
}

using UnitEntry = std::pair<std::string_view, const char*>;

// Factor strings are parsed with parse_decimal, so they stay exact.
constexpr std::array kTimeUnits{
    UnitEntry{"s", "1"}, UnitEntry{"ms", "1e-3"}, UnitEntry{"us", "1e-6"}, UnitEntry{"µs", "1e-6"},
    UnitEntry{"μs", "1e-6"}, UnitEntry{"ns", "1e-9"}, UnitEntry{"min", "60"}, UnitEntry{"h", "3600"}};
constexpr std::array kPowerUnits{UnitEntry{"W", "1"}, UnitEntry{"mW", "1e-3"}, UnitEntry{"uW", "1e-6"},
                                 UnitEntry{"µW", "1e-6"}, UnitEntry{"kW", "1e3"}};
constexpr std::array kEnergyUnits{UnitEntry{"J", "1"},       UnitEntry{"mJ", "1e-3"}, UnitEntry{"uJ", "1e-6"},
                                  UnitEntry{"µJ", "1e-6"},   UnitEntry{"μJ", "1e-6"}, UnitEntry{"kJ", "1e3"},
                                  UnitEntry{"Wh", "3600"},   UnitEntry{"mWh", "3.6"}, UnitEntry{"kWh", "3.6e6"}};
constexpr std::array kBitUnits{UnitEntry{"bit", "1"},         UnitEntry{"kbit", "1e3"},
                               UnitEntry{"Mbit", "1e6"},      UnitEntry{"Gbit", "1e9"},
                               UnitEntry{"B", "8"},           UnitEntry{"kB", "8e3"},
                               UnitEntry{"MB", "8e6"},        UnitEntry{"GB", "8e9"},
                               UnitEntry{"KiB", "8192"},      UnitEntry{"MiB", "8388608"},
                               UnitEntry{"GiB", "8589934592"}};
constexpr std::array kByteUnits{UnitEntry{"B", "1"},
                                UnitEntry{"kB", "1e3"},
                                UnitEntry{"MB", "1e6"},
                                UnitEntry{"GB", "1e9"},
                                UnitEntry{"TB", "1e12"},
                                UnitEntry{"KiB", "1024"},
                                UnitEntry{"MiB", "1048576"},
                                UnitEntry{"GiB", "1073741824"},
                                UnitEntry{"TiB", "1099511627776"},
                                UnitEntry{"bit", "1/8"}};
constexpr std::array kBandwidthUnits{UnitEntry{"bit/s", "1"},  UnitEntry{"bps", "1"},
                                     UnitEntry{"kbit/s", "1e3"}, UnitEntry{"kbps", "1e3"},
                                     UnitEntry{"Mbit/s", "1e6"}, UnitEntry{"Mbps", "1e6"},
                                     UnitEntry{"Gbit/s", "1e9"}, UnitEntry{"Gbps", "1e9"}};
constexpr std::array kEnergyPerBitUnits{UnitEntry{"J/bit", "1"},     UnitEntry{"mJ/bit", "1e-3"},
                                        UnitEntry{"uJ/bit", "1e-6"}, UnitEntry{"µJ/bit", "1e-6"},
                                        UnitEntry{"μJ/bit", "1e-6"}, UnitEntry{"nJ/bit", "1e-9"}};

template <std::size_t N>
const char* lookup(const std::array<UnitEntry, N>& table, std::string_view unit) {
    for (const auto& [name, factor] : table)
        if (name == unit) return factor;
    return nullptr;
}

const char* dimension_name(Dimension dim) {
    switch (dim) {
        case Dimension::Time: return "time";
        case Dimension::Power: return "power";
        case Dimension::Energy: return "energy";
        case Dimension::DataBits: return "data size";
        case Dimension::Bytes: return "memory/storage size";
        case Dimension::Bandwidth: return "bandwidth";
        case Dimension::EnergyPerBit: return "energy per bit";
        case Dimension::Dimensionless: return "dimensionless";
    }
    return "?";
}

}  // namespace

Rational parse_decimal(std::string_view text) {
    text = trim(text);
    if (numeric_prefix(text) != text.size() || text.empty())
        throw ParseError("not a number: '" + std::string(text) + "'");

    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        mpz_class num(std::string(text.substr(0, slash)), 10);
        mpz_class den(std::string(text.substr(slash + 1)), 10);
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        Rational r(num, den);
        r.canonicalize();
        return negative ? Rational(-r) : r;
    }

    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp = text.substr(e + 1);
        if (!exp.empty() && exp.front() == '+') exp.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), exponent);
        if (ec != std::errc{} || ptr != exp.data() + exp.size())
            throw ParseError("bad exponent in '" + std::string(text) + "'");
        text = text.substr(0, e);
    }
    std::string digits;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
        exponent -= static_cast<long>(text.size() - dot - 1);
    } else {
        digits = std::string(text);
    }
    if (digits.empty()) digits = "0";
    Rational r{mpz_class(digits, 10)};
    r *= pow10(exponent);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

Rational unit_factor(std::string_view unit, Dimension dim) {
    unit = trim(unit);
    if (unit.empty()) return Rational(1);
    const char* factor = nullptr;
    switch (dim) {
        case Dimension::Time: factor = lookup(kTimeUnits, unit); break;
        case Dimension::Power: factor = lookup(kPowerUnits, unit); break;
        case Dimension::Energy: factor = lookup(kEnergyUnits, unit); break;
        case Dimension::DataBits: factor = lookup(kBitUnits, unit); break;
        case Dimension::Bytes: factor = lookup(kByteUnits, unit); break;
        case Dimension::Bandwidth: factor = lookup(kBandwidthUnits, unit); break;
        case Dimension::EnergyPerBit: factor = lookup(kEnergyPerBitUnits, unit); break;
        case Dimension::Dimensionless: break;
    }
    if (!factor)
        throw ParseError("unknown " + std::string(dimension_name(dim)) + " unit '" + std::string(unit) + "'");
    return parse_decimal(factor);
}

Rational parse_quantity(std::string_view text, Dimension dim) {
    text = trim(text);
    std::size_t n = numeric_prefix(text);
    if (n == 0) throw ParseError("expected a number in '" + std::string(text) + "'");
    Rational value = parse_decimal(text.substr(0, n));
    value *= unit_factor(text.substr(n), dim);
    value.canonicalize();
    return value;
}

std::string format_decimal(const Rational& value) {
    mpz_class den = value.get_den();
    unsigned long twos = mpz_scan1(den.get_mpz_t(), 0);
    mpz_class rest = den >> twos;
    unsigned long fives = 0;
    while (rest % 5 == 0) {
        rest /= 5;
        ++fives;
    }
    if (rest != 1) return value.get_str();
    unsigned long places = std::max(twos, fives);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    mpz_class scaled = value.get_num() * (scale / den);
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.get_str();
    if (places > 0) {
        if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
        digits.insert(digits.size() - places, ".");
    }
    return negative ? "-" + digits : digits;
}

std::string format_quantity(const Rational& value, std::string_view unit, Dimension dim) {
    Rational scaled = value / unit_factor(unit, dim);
    return format_decimal(scaled) + std::string(unit);
}

Rational rational_from_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw ParseError("cannot represent number");
    return parse_decimal(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

double to_double(const Rational& r) {
    double lo = r.get_d();
    double hi = std::nextafter(lo, r < 0 ? -HUGE_VAL : HUGE_VAL);
    if (!std::isfinite(hi) || Rational(lo) == r) return lo;
    Rational dl = abs(r - Rational(lo)), dh = abs(Rational(hi) - r);
    if (dl != dh) return dl < dh ? lo : hi;
    std::uint64_t bits;
    std::memcpy(&bits, &lo, sizeof bits);
    return bits & 1 ? hi : lo;
}

Rational quantize(const Rational& value, const Rational& step) {
    Rational units = value / step;
    mpz_class num = units.get_num();
    mpz_class den = units.get_den();
    mpz_class twice = 2 * abs(num) + den;
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), mpz_class(2 * den).get_mpz_t());
    if (num < 0) q = -q;
    Rational result(q);
    result *= step;
    result.canonicalize();
    return result;
}

}  // namespace ehc
