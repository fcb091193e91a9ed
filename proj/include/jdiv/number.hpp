#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace jdiv {

using cpp_int = boost::multiprecision::cpp_int;

/// Integral value outside the signed 64-bit range.
struct BigInteger {
    cpp_int value;
};

/// Arbitrary-precision decimal, value = unscaled * 10^exponent.
///
/// The pair is kept unnormalized so that "1.50" still renders with its
/// scale; comparisons go through ExactDecimal.
struct BigDecimal {
    cpp_int unscaled;
    cpp_int exponent;
};

/// A numeric token held verbatim. The lexeme always matches the RFC 8259
/// number grammar.
struct RawNumber {
    std::string lexeme;
};

enum class NumberKind { int64, big_integer, float64, big_decimal, raw_lexeme };

std::string_view to_string(NumberKind kind);

class JsonNumber {
public:
    using Storage = std::variant<std::int64_t, BigInteger, double, BigDecimal, RawNumber>;

    JsonNumber(std::int64_t v) : data_(v) {}
    JsonNumber(BigInteger v) : data_(std::move(v)) {}
    JsonNumber(double v) : data_(v) {}
    JsonNumber(BigDecimal v) : data_(std::move(v)) {}
    JsonNumber(RawNumber v) : data_(std::move(v)) {}

    NumberKind kind() const { return static_cast<NumberKind>(data_.index()); }
    const Storage& storage() const { return data_; }

    template <class T> const T* get_if() const { return std::get_if<T>(&data_); }

private:
    Storage data_;
};

/// Normalized exact decimal: coefficient has no trailing zeros (or is zero,
/// with exponent zero). Two numbers denote the same rational value iff their
/// ExactDecimals compare equal.
struct ExactDecimal {
    cpp_int coefficient;
    cpp_int exponent;

    friend bool operator==(const ExactDecimal&, const ExactDecimal&) = default;
};

ExactDecimal normalize(cpp_int coefficient, cpp_int exponent);

/// Parses a lexeme matching the RFC 8259 number grammar. Returns nullopt for
/// anything else.
std::optional<ExactDecimal> exact_from_lexeme(std::string_view lexeme);

/// Like exact_from_lexeme but keeps the written scale ("1.50" stays 150e-2).
std::optional<BigDecimal> decimal_from_lexeme(std::string_view lexeme);

/// True when `lexeme` matches the RFC 8259 number grammar exactly.
bool is_rfc_number(std::string_view lexeme);

/// Exact value of any JsonNumber variant. Float64 values convert via their
/// shortest round-trip decimal rendering.
ExactDecimal exact_value(const JsonNumber& n);

/// Same variant and equal value; Float64 uses IEEE equality so -0 == 0.
bool same_number(const JsonNumber& a, const JsonNumber& b);

/// Decimal rendering of an integer.
std::string to_decimal_string(const cpp_int& v);

/// Shortest decimal that reads back to the same double, forced to carry a
/// fraction or exponent so it never re-reads as an integer. "-0" is the one
/// exception: it keeps the plain form.
std::string render_float64(double v, char exponent_marker);

/// Scientific-or-plain rendering in the style of java.math.BigDecimal, except
/// that a zero exponent prints as "5.0" rather than "5" so the text never
/// re-reads as an integer.
std::string render_big_decimal(const BigDecimal& d, char exponent_marker);

}  // namespace jdiv
