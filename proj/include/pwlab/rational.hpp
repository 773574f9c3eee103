#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace pwlab {

using Integer = mpz_class;
using Rational = mpq_class;

/// Canonical "num/den" text form; integers keep the "/1" suffix so the
/// format is uniform in reports.
std::string to_fraction_string(const Rational& value);

/// Parses "num/den" or a bare integer. Throws std::invalid_argument.
Rational parse_fraction(std::string_view text);

/// gmpxx has no long long overloads; long is 64-bit on the supported targets.
inline Rational rational(long long v)
{
    static_assert(sizeof(long) == sizeof(long long));
    return Rational(static_cast<long>(v));
}

inline Rational make_rational(long num, long den = 1)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
bool rational_sqrt(const Rational& value, Rational& root);

}  // namespace pwlab
