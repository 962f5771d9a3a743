#include "tropell/rational.hpp"

#include <cctype>

namespace tropell {

Rational parse_rational(const std::string& text, std::size_t position_offset) {
    std::size_t i = 0;
    auto fail = [&](const std::string& msg) -> Rational {
        throw ParseError(msg, position_offset + i);
    };
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
    }
    std::size_t num_start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == num_start) return fail("expected a number");
    Integer num(text.substr(num_start, i - num_start));
    Integer den(1);
    if (i < text.size() && text[i] == '/') {
        ++i;
        std::size_t den_start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == den_start) return fail("expected a denominator");
        den = Integer(text.substr(den_start, i - den_start));
        if (den == 0) return fail("zero denominator");
    }
    if (i != text.size()) return fail("trailing characters in rational");
    Rational q(num, den);
    q.canonicalize();
    if (neg) q = -q;
    return q;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    if (q == 0) return Rational(0);
    const Integer num = q.get_num();
    const Integer den = q.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    Integer rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

long to_long_checked(const Integer& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in long: " + z.get_str());
    return z.get_si();
}

}  // namespace tropell
