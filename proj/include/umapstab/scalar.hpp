#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "umapstab/errors.hpp"

namespace umapstab {

/// Exact rational scalar for the rational arithmetic mode.  Expression
/// templates are switched off so that generic code always sees plain values.
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

/// Per-scalar policy: comparison tolerance, parsing and text formatting.
/// Floating mode compares with an absolute tolerance; rational mode is exact.
template <typename S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;

    static const char* name() { return "float"; }

    static double tolerance() { return 1e-9; }

    static double abs(double v) { return std::fabs(v); }

    static double ratio(long num, long den) { return static_cast<double>(num) / static_cast<double>(den); }

    // 12 significant decimal digits, fixed across platforms for a given value.
    static std::string format(double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return buf;
    }

    static double parse(const std::string& text) {
        if (text.find('/') != std::string::npos) {
            auto slash = text.find('/');
            double num = parse(text.substr(0, slash));
            double den = parse(text.substr(slash + 1));
            if (den == 0.0) throw ParameterError("zero denominator in '" + text + "'");
            return num / den;
        }
        const char* begin = text.c_str();
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0' || !std::isfinite(v))
            throw ParameterError("not a finite number: '" + text + "'");
        return v;
    }
};

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;

    static const char* name() { return "rational"; }

    static Rational tolerance() { return Rational(0); }

    static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }

    static Rational ratio(long num, long den) { return Rational(num) / Rational(den); }

    static std::string format(const Rational& v) { return v.str(); }

    // Accepts "p/q", plain integers, and decimal notation (optionally with a
    // base-10 exponent), all converted exactly.
    static Rational parse(const std::string& text) {
        if (text.empty()) throw ParameterError("empty numeric token");
        if (text.find('.') == std::string::npos && text.find('e') == std::string::npos &&
            text.find('E') == std::string::npos) {
            try {
                return Rational(text);  // handles "p/q" and integers
            } catch (const std::exception&) {
                throw ParameterError("not a rational number: '" + text + "'");
            }
        }
        return parse_decimal(text);
    }

private:
    static Rational parse_decimal(const std::string& text) {
        using boost::multiprecision::cpp_int;
        std::size_t pos = 0;
        bool negative = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            negative = text[pos] == '-';
            ++pos;
        }
        std::string digits;
        long frac_len = 0;
        bool seen_dot = false, seen_digit = false;
        for (; pos < text.size(); ++pos) {
            char c = text[pos];
            if (c >= '0' && c <= '9') {
                digits.push_back(c);
                seen_digit = true;
                if (seen_dot) ++frac_len;
            } else if (c == '.' && !seen_dot) {
                seen_dot = true;
            } else {
                break;
            }
        }
        long exp10 = 0;
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            ++pos;
            bool exp_neg = false;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
                exp_neg = text[pos] == '-';
                ++pos;
            }
            if (pos >= text.size()) throw ParameterError("bad exponent in '" + text + "'");
            long e = 0;
            for (; pos < text.size(); ++pos) {
                if (text[pos] < '0' || text[pos] > '9') break;
                e = e * 10 + (text[pos] - '0');
                if (e > 100000) throw ParameterError("exponent out of range in '" + text + "'");
            }
            exp10 = exp_neg ? -e : e;
        }
        if (!seen_digit || pos != text.size())
            throw ParameterError("not a decimal number: '" + text + "'");

        cpp_int numerator(digits.empty() ? "0" : digits);
        cpp_int denominator = 1;
        long shift = exp10 - frac_len;
        for (long i = 0; i < shift; ++i) numerator *= 10;
        for (long i = 0; i < -shift; ++i) denominator *= 10;
        Rational r(numerator, denominator);
        return negative ? Rational(-r) : r;
    }
};

/// |a - b| <= tol
template <typename S>
bool approx_eq(const S& a, const S& b) {
    return ScalarTraits<S>::abs(S(a - b)) <= ScalarTraits<S>::tolerance();
}

/// a <= b + tol
template <typename S>
bool approx_leq(const S& a, const S& b) {
    return a <= S(b + ScalarTraits<S>::tolerance());
}

/// a < b beyond tolerance
template <typename S>
bool definitely_less(const S& a, const S& b) {
    return !approx_leq(b, a);
}

}  // namespace umapstab
