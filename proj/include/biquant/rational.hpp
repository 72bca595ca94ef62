#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace bq {

using Rational = mpq_class;
using Integer = mpz_class;

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Canonical "p/q" with q > 0 and gcd(p,q) = 1; integers print without a denominator.
std::string to_string(const Rational& r);

// Accepts "p", "-p", "p/q". Anything else (decimals, exponents, zero denominators) throws NumericError.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

}  // namespace bq
