// Exact rational arithmetic used by the conservation machinery.
//
// Thin layer over boost::multiprecision::cpp_rational: parsing and printing
// in the "p/q" form used by the file formats and the CLI JSON output.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "sca/errors.hpp"

namespace sca {

using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

// "3", "-7/2", "0" -> rational. Rejects empty strings, zero denominators
// and anything with stray characters.
inline rational parse_rational(const std::string& text)
{
    const auto bad = [&]() -> parse_error {
        return parse_error("not a rational number: '" + text + "'");
    };
    if (text.empty())
        throw bad();
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            return rational(bigint(text));
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty())
            throw bad();
        bigint d(den);
        if (d == 0)
            throw parse_error("zero denominator in '" + text + "'");
        return rational(bigint(num), d);
    } catch (const std::runtime_error&) {
        throw bad();
    }
}

// Canonical "p/q" (or plain "p" for integers); cpp_rational keeps
// numerator/denominator coprime with positive denominator.
inline std::string rational_to_string(const rational& r)
{
    if (denominator(r) == 1)
        return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const rational& r)
{
    return r.convert_to<double>();
}

} // namespace sca
