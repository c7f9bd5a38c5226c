#pragma once

#include <string>
#include <string_view>

#include "bfdr/exact.hpp"

namespace bfdr {

/// Parses "a/b" (integer ratio) or a plain nonnegative decimal into an exact
/// rational. Used for gamma/rho style tuning parameters.
inline Rat parse_rational(std::string_view text) {
    std::string s(text);
    std::size_t slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (num.empty() || den.empty())
            throw ConfigError("bad rational '" + s + "'");
        for (char c : num + den)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ConfigError("bad rational '" + s + "'");
        Int d = detail::int_from_digits(den);
        if (d == 0) throw ConfigError("zero denominator in '" + s + "'");
        return Rat(detail::int_from_digits(num), d);
    }
    std::size_t dot = s.find('.');
    std::string digits;
    int frac_digits = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == dot) continue;
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw ConfigError("bad rational '" + s + "'");
        digits.push_back(s[i]);
        if (dot != std::string::npos && i > dot) ++frac_digits;
    }
    if (digits.empty()) throw ConfigError("bad rational '" + s + "'");
    Int den = 1;
    for (int i = 0; i < frac_digits; ++i) den *= 10;
    return Rat(detail::int_from_digits(digits), den);
}

}  // namespace bfdr
