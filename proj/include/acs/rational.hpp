#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace acs {

using Rational = mpq_class;
using BigInt = mpz_class;

// "0.7426" -> 3713/5000 exactly. Accepts an optional sign and fraction "a/b".
Rational parse_decimal(std::string_view text);

// Exact decimal rendering when the denominator divides a power of ten, else "p/q".
std::string to_decimal(const Rational& q);

// D^n as a big integer.
BigInt big_pow(unsigned long base, unsigned long exp);

}  // namespace acs
