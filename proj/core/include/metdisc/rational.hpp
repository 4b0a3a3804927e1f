#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace metdisc {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline std::string to_string(const Rational& q) { return q.str(); }

// Parses "p/q", "p" or a decimal literal. Decimal literals are converted
// exactly from their binary double value.
Rational parse_rational(const std::string& text);

}  // namespace metdisc
