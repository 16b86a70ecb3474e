#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace cfl {

// With Boost <= 1.74 under C++20, rational == int recurses forever through the reversed
// operator; always compare against a Rational.
using Rational = boost::rational<std::int64_t>;

// "p/q" in lowest terms with the sign on p; integers print without a denominator.
inline std::string to_string(const Rational& q)
{
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

inline Rational parse_rational(const std::string& s)
{
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

} // namespace cfl
