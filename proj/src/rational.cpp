#include "pwlab/rational.hpp"

#include <stdexcept>

namespace pwlab {

std::string to_fraction_string(const Rational& value)
{
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational parse_fraction(std::string_view text)
{
    if (text.empty())
        throw std::invalid_argument("empty rational");
    auto slash = text.find('/');
    try {
        Integer num(std::string(text.substr(0, slash)), 10);
        Integer den = 1;
        if (slash != std::string_view::npos)
            den = Integer(std::string(text.substr(slash + 1)), 10);
        if (den == 0)
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        Rational r(num, den);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
}

bool rational_sqrt(const Rational& value, Rational& root)
{
    if (sgn(value) < 0)
        return false;
    const Integer& num = value.get_num();
    const Integer& den = value.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return false;
    root = Rational(sqrt(num), sqrt(den));
    return true;
}

}  // namespace pwlab
