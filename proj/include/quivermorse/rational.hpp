#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace qm {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Parses "p", "p/q" or a finite decimal such as "-1.25".
Rational parse_rational(const std::string& text);

} // namespace qm
