#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "bfdr/errors.hpp"

namespace bfdr {

// All decision rules in this library compare points of the form l/(n+1) - k*slope
// where l, k are small integers and slope is a rational built from the level alpha.
// Comparisons are done on cleared-denominator integers (Int) so that argmin ties
// resolve exactly; user-facing rationals (levels, pi0 estimates, lfdr values) are
// carried as Rat.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// max(r, 0), the clipped adjusted levels of the conformal procedures.
inline Rat positive_part(const Rat& r) { return r > 0 ? r : Rat(0); }

namespace detail {

/// cpp_int's string constructor treats a leading 0 as octal; force base 10.
inline Int int_from_digits(const std::string& digits) {
    std::size_t first = digits.find_first_not_of('0');
    if (first == std::string::npos) return Int(0);
    return Int(digits.substr(first));
}

}  // namespace detail

/// Target level alpha, kept as the exact rational value of its decimal
/// representation so that grid comparisons downstream are exact.
class Level {
  public:
    /// Parses a plain decimal in (0,1), e.g. "0.25" or ".05".
    static Level parse(std::string_view text) {
        std::string s(text);
        std::size_t dot = s.find('.');
        std::string digits;
        int frac_digits = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i == dot) continue;
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                throw ConfigError("alpha must be a plain decimal in (0,1): '" + s + "'");
            digits.push_back(s[i]);
            if (dot != std::string::npos && i > dot) ++frac_digits;
        }
        if (digits.empty())
            throw ConfigError("alpha must be a plain decimal in (0,1): '" + s + "'");
        Int num = detail::int_from_digits(digits);
        Int den = 1;
        for (int i = 0; i < frac_digits; ++i) den *= 10;
        Rat value(num, den);
        if (!(value > 0 && value < 1))
            throw ConfigError("alpha must lie strictly in (0,1), got '" + s + "'");
        return Level(value, s);
    }

    static Level from_rational(const Rat& value) {
        if (!(value > 0 && value < 1))
            throw ConfigError("alpha must lie strictly in (0,1)");
        return Level(value, value.str());
    }

    const Rat& value() const { return rational_; }
    Int num() const { return rat_num(rational_); }
    Int den() const { return rat_den(rational_); }
    const std::string& text() const { return text_; }
    double as_double() const { return to_double(rational_); }

  private:
    Level(Rat value, std::string text) : rational_(std::move(value)), text_(std::move(text)) {}

    Rat rational_;
    std::string text_;
};

}  // namespace bfdr
