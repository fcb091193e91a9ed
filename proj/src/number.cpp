#include "jdiv/number.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace jdiv {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// cpp_int's string constructor reads a leading zero as an octal prefix.
cpp_int from_digits(std::string_view digits) {
    std::size_t first = digits.find_first_not_of('0');
    if (first == std::string_view::npos) return cpp_int(0);
    return cpp_int(std::string(digits.substr(first)));
}

struct LexemeParts {
    bool negative = false;
    std::string_view int_digits;
    std::string_view frac_digits;
    bool exponent_negative = false;
    std::string_view exponent_digits;
};

std::optional<LexemeParts> split_lexeme(std::string_view s) {
    LexemeParts p;
    std::size_t i = 0;
    if (i < s.size() && s[i] == '-') {
        p.negative = true;
        ++i;
    }
    std::size_t start = i;
    if (i >= s.size()) return std::nullopt;
    if (s[i] == '0') {
        ++i;
    } else if (s[i] >= '1' && s[i] <= '9') {
        while (i < s.size() && is_digit(s[i])) ++i;
    } else {
        return std::nullopt;
    }
    p.int_digits = s.substr(start, i - start);
    if (i < s.size() && s[i] == '.') {
        ++i;
        start = i;
        while (i < s.size() && is_digit(s[i])) ++i;
        if (i == start) return std::nullopt;
        p.frac_digits = s.substr(start, i - start);
    }
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            p.exponent_negative = s[i] == '-';
            ++i;
        }
        start = i;
        while (i < s.size() && is_digit(s[i])) ++i;
        if (i == start) return std::nullopt;
        p.exponent_digits = s.substr(start, i - start);
    }
    if (i != s.size()) return std::nullopt;
    return p;
}

std::string shortest_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(NumberKind kind) {
    switch (kind) {
    case NumberKind::int64: return "Int64";
    case NumberKind::big_integer: return "BigInt";
    case NumberKind::float64: return "Float64";
    case NumberKind::big_decimal: return "BigDecimal";
    case NumberKind::raw_lexeme: return "RawLexeme";
    }
    return "?";
}

ExactDecimal normalize(cpp_int coefficient, cpp_int exponent) {
    if (coefficient == 0) return {cpp_int(0), cpp_int(0)};
    while (coefficient % 10 == 0) {
        coefficient /= 10;
        ++exponent;
    }
    return {std::move(coefficient), std::move(exponent)};
}

bool is_rfc_number(std::string_view lexeme) { return split_lexeme(lexeme).has_value(); }

std::optional<ExactDecimal> exact_from_lexeme(std::string_view lexeme) {
    auto d = decimal_from_lexeme(lexeme);
    if (!d) return std::nullopt;
    return normalize(std::move(d->unscaled), std::move(d->exponent));
}

std::optional<BigDecimal> decimal_from_lexeme(std::string_view lexeme) {
    auto parts = split_lexeme(lexeme);
    if (!parts) return std::nullopt;
    std::string digits(parts->int_digits);
    digits.append(parts->frac_digits);
    cpp_int coefficient = from_digits(digits);
    if (parts->negative) coefficient = -coefficient;
    cpp_int exponent = from_digits(parts->exponent_digits);
    if (parts->exponent_negative) exponent = -exponent;
    exponent -= static_cast<long>(parts->frac_digits.size());
    return BigDecimal{std::move(coefficient), std::move(exponent)};
}

ExactDecimal exact_value(const JsonNumber& n) {
    return std::visit(
        [](const auto& v) -> ExactDecimal {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::int64_t>) {
                return normalize(cpp_int(v), 0);
            } else if constexpr (std::is_same_v<T, BigInteger>) {
                return normalize(v.value, 0);
            } else if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) throw std::domain_error("non-finite Float64");
                return *exact_from_lexeme(shortest_double(v));
            } else if constexpr (std::is_same_v<T, BigDecimal>) {
                return normalize(v.unscaled, v.exponent);
            } else {
                auto e = exact_from_lexeme(v.lexeme);
                if (!e) throw std::domain_error("malformed raw lexeme: " + v.lexeme);
                return *e;
            }
        },
        n.storage());
}

bool same_number(const JsonNumber& a, const JsonNumber& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case NumberKind::int64: return *a.get_if<std::int64_t>() == *b.get_if<std::int64_t>();
    case NumberKind::big_integer: return a.get_if<BigInteger>()->value == b.get_if<BigInteger>()->value;
    case NumberKind::float64: return *a.get_if<double>() == *b.get_if<double>();
    case NumberKind::big_decimal:
    case NumberKind::raw_lexeme: return exact_value(a) == exact_value(b);
    }
    return false;
}

std::string to_decimal_string(const cpp_int& v) { return v.str(); }

std::string render_float64(double v, char exponent_marker) {
    if (!std::isfinite(v)) throw std::domain_error("non-finite Float64 has no JSON form");
    std::string s = shortest_double(v);
    bool has_marker = false;
    for (char& c : s) {
        if (c == 'e') {
            c = exponent_marker;
            has_marker = true;
        }
    }
    if (!has_marker && s.find('.') == std::string::npos && s != "-0") s += ".0";
    return s;
}

std::string render_big_decimal(const BigDecimal& d, char exponent_marker) {
    std::string out;
    if (d.unscaled < 0) out += '-';
    std::string coeff = to_decimal_string(boost::multiprecision::abs(d.unscaled));
    const auto len = static_cast<long>(coeff.size());
    const cpp_int adjusted = d.exponent + (len - 1);

    if (d.exponent <= 0 && adjusted >= -6) {
        // Bounded by the guard above: scale <= len + 5.
        const long scale = static_cast<long>(-d.exponent);
        if (scale == 0) {
            // A bare integer would re-read as Int64/BigInt.
            out += coeff;
            out += ".0";
        } else if (len > scale) {
            out += coeff.substr(0, static_cast<std::size_t>(len - scale));
            out += '.';
            out += coeff.substr(static_cast<std::size_t>(len - scale));
        } else {
            out += "0.";
            out.append(static_cast<std::size_t>(scale - len), '0');
            out += coeff;
        }
        return out;
    }

    out += coeff[0];
    if (len > 1) {
        out += '.';
        out.append(coeff, 1);
    }
    out += exponent_marker;
    if (adjusted > 0) out += '+';
    out += to_decimal_string(adjusted);
    return out;
}

}  // namespace jdiv
