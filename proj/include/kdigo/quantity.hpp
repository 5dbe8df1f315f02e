#pragma once

// Fixed-point physical quantities. Every measurement is held as a signed
// 64-bit count of micro-units (1e-6) so that clinical thresholds are
// compared as exact integers.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "kdigo/errors.hpp"

namespace kdigo {

inline constexpr std::int64_t kMicro = 1'000'000;

/// Molar mass ratio for creatinine: 1 mg/dL == 88.4 umol/L.
inline constexpr std::int64_t kCreatinineUmolPerMgTenths = 884;

enum class Unit : std::uint8_t {
    mL,
    mg_dL,
    umol_L,
    mL_kg_h,
    mL_min,
    kg,
    cm,
    years,
};

inline std::string_view unit_name(Unit u) {
    switch (u) {
    case Unit::mL: return "mL";
    case Unit::mg_dL: return "mg/dL";
    case Unit::umol_L: return "umol/L";
    case Unit::mL_kg_h: return "mL/kg/h";
    case Unit::mL_min: return "mL/min";
    case Unit::kg: return "kg";
    case Unit::cm: return "cm";
    case Unit::years: return "years";
    }
    return "?";
}

inline std::optional<Unit> parse_unit(std::string_view s) {
    if (s == "mg/dL" || s == "mg_dL" || s == "mgdl") return Unit::mg_dL;
    if (s == "umol/L" || s == "µmol/L" || s == "umol_L" || s == "umoll") return Unit::umol_L;
    if (s == "mL") return Unit::mL;
    if (s == "mL/kg/h") return Unit::mL_kg_h;
    if (s == "mL/min") return Unit::mL_min;
    if (s == "kg") return Unit::kg;
    if (s == "cm") return Unit::cm;
    if (s == "years") return Unit::years;
    return std::nullopt;
}

namespace detail {

/// num / den rounded half away from zero; den must be positive.
constexpr __int128 div_round(__int128 num, __int128 den) {
    if (num >= 0) return (num + den / 2) / den;
    return -((-num + den / 2) / den);
}

constexpr __int128 div_floor(__int128 num, __int128 den) {
    __int128 q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}

} // namespace detail

/// Parses a decimal literal ("12", "-0.25", "1.5e-3") into micro-units,
/// rounding half away from zero beyond the sixth fractional digit.
inline std::optional<std::int64_t> parse_micro(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    int frac_digits = 0;
    bool seen_point = false;
    bool any_digit = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            any_digit = true;
            if (!(digits.empty() && c == '0')) digits.push_back(c);
            if (seen_point) ++frac_digits;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit) return std::nullopt;
    long exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            exp_negative = text[i] == '-';
            ++i;
        }
        if (i == text.size()) return std::nullopt;
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c < '0' || c > '9') return std::nullopt;
            exponent = exponent * 10 + (c - '0');
            if (exponent > 400) return std::nullopt;
        }
        if (exp_negative) exponent = -exponent;
    }
    if (i != text.size()) return std::nullopt;

    // Leading zeros of the fraction were dropped from `digits`, which keeps
    // the scale correct because the value is digits * 10^(shift - 6).
    long shift = exponent - frac_digits + 6;
    if (shift >= 0) {
        if (digits.size() + static_cast<std::size_t>(shift) > 19) {
            if (digits.empty()) return 0;
            return std::nullopt;
        }
        digits.append(static_cast<std::size_t>(shift), '0');
    } else {
        std::size_t drop = static_cast<std::size_t>(-shift);
        bool round_up = false;
        if (drop <= digits.size()) {
            round_up = digits[digits.size() - drop] >= '5';
            digits.resize(digits.size() - drop);
        } else {
            digits.clear();
        }
        if (round_up) {
            // increment the decimal string
            int pos = static_cast<int>(digits.size()) - 1;
            while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == '9') {
                digits[static_cast<std::size_t>(pos)] = '0';
                --pos;
            }
            if (pos < 0) digits.insert(digits.begin(), '1');
            else ++digits[static_cast<std::size_t>(pos)];
        }
    }
    if (digits.size() > 19) return std::nullopt;
    __int128 value = 0;
    for (char c : digits) value = value * 10 + (c - '0');
    if (value > INT64_MAX) return std::nullopt;
    auto raw = static_cast<std::int64_t>(value);
    return negative ? -raw : raw;
}

/// Shortest decimal rendering of a micro-unit count ("1.037037", "2", "-0.5").
inline std::string format_micro(std::int64_t raw) {
    __int128 v = raw;
    bool negative = v < 0;
    if (negative) v = -v;
    auto whole = static_cast<unsigned long long>(v / kMicro);
    auto frac = static_cast<unsigned long long>(v % kMicro);
    std::string out = negative ? "-" : "";
    out += std::to_string(whole);
    if (frac != 0) {
        std::string f = std::to_string(frac);
        f.insert(f.begin(), 6 - f.size(), '0');
        while (f.back() == '0') f.pop_back();
        out += '.';
        out += f;
    }
    return out;
}

struct Quantity {
    std::int64_t raw = 0;
    Unit unit = Unit::mL;

    static constexpr Quantity micro(std::int64_t raw, Unit unit) { return {raw, unit}; }

    static constexpr Quantity whole(std::int64_t value, Unit unit) { return {value * kMicro, unit}; }

    /// Throws ParseError on malformed input.
    static Quantity parse(std::string_view text, Unit unit) {
        auto raw = parse_micro(text);
        if (!raw) throw ParseError("not a decimal number: '" + std::string(text) + "'");
        return {*raw, unit};
    }

    double to_double() const { return static_cast<double>(raw) / static_cast<double>(kMicro); }

    std::string to_string() const { return format_micro(raw); }

    friend constexpr bool operator==(const Quantity&, const Quantity&) = default;
};

/// Ordering only makes sense within one unit; mixing units is a logic error
/// the caller must avoid, so the comparison looks at the raw count alone.
constexpr std::strong_ordering compare(const Quantity& a, const Quantity& b) { return a.raw <=> b.raw; }

inline Quantity convert_unit(const Quantity& q, Unit target) {
    if (q.unit == target) return q;
    if (q.unit == Unit::umol_L && target == Unit::mg_dL) {
        auto raw = detail::div_round(static_cast<__int128>(q.raw) * 10, kCreatinineUmolPerMgTenths);
        return {static_cast<std::int64_t>(raw), target};
    }
    if (q.unit == Unit::mg_dL && target == Unit::umol_L) {
        auto raw = detail::div_round(static_cast<__int128>(q.raw) * kCreatinineUmolPerMgTenths, 10);
        return {static_cast<std::int64_t>(raw), target};
    }
    throw UndefinedConversion("no conversion from " + std::string(unit_name(q.unit)) + " to " +
                              std::string(unit_name(target)));
}

} // namespace kdigo
