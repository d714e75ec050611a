#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace dlforge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Which field the coefficients of a polynomial ring live in. Torsion-free
// rings such as Z[v3]/(v3^2) are modelled by their rational span; see
// PolynomialRing::integral().
enum class ScalarRing { F2, Rationals };

const char* to_string(ScalarRing s);

// Thrown when a quantity that must lie in the integral lattice acquires a
// denominator.
class IntegralityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

// Parses "3", "-7", "1/2", "-127/4".
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

}  // namespace dlforge
