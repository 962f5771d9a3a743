#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "tropell/errors.hpp"

namespace tropell {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Integer numerator(const Rational& q) { return q.get_num(); }
inline Integer denominator(const Rational& q) { return q.get_den(); }

// Canonical "p/q" form, "/q" omitted when q = 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

// Parses "p", "-p", "p/q"; throws ParseError otherwise.
Rational parse_rational(const std::string& text, std::size_t position_offset = 0);

// Exact square root in Q, or nullopt when the argument is not the
// square of a rational.
std::optional<Rational> rational_sqrt(const Rational& q);

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

long to_long_checked(const Integer& z);

// Largest integer n with n <= q.
inline Integer floor(const Rational& q) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
}

inline Integer ceil(const Rational& q) {
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return c;
}

// Q together with +infinity; used for valuations (v(0) = +inf) and for
// precision cutoffs (an exact series has infinite precision).
class ExtRat {
public:
    ExtRat() : inf_(false), v_(0) {}
    ExtRat(const Rational& v) : inf_(false), v_(v) {}  // NOLINT: implicit by design
    ExtRat(long v) : inf_(false), v_(rat(v)) {}        // NOLINT

    static ExtRat infinity() {
        ExtRat e;
        e.inf_ = true;
        return e;
    }

    bool is_infinite() const { return inf_; }
    const Rational& finite() const {
        if (inf_) throw std::logic_error("ExtRat: finite() on +infinity");
        return v_;
    }

    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        if (a.inf_ || b.inf_) return a.inf_ && b.inf_;
        return a.v_ == b.v_;
    }
    friend bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }
    friend bool operator<(const ExtRat& a, const ExtRat& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator<=(const ExtRat& a, const ExtRat& b) { return !(b < a); }
    friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
    friend bool operator>=(const ExtRat& a, const ExtRat& b) { return !(a < b); }

    friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
        if (a.inf_ || b.inf_) return infinity();
        return ExtRat(a.v_ + b.v_);
    }
    friend ExtRat operator-(const ExtRat& a, const Rational& b) {
        if (a.inf_) return infinity();
        return ExtRat(a.v_ - b);
    }

    friend ExtRat min(const ExtRat& a, const ExtRat& b) { return a < b ? a : b; }
    friend ExtRat max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

    std::string str() const { return inf_ ? "inf" : to_string(v_); }

private:
    bool inf_;
    Rational v_;
};

}  // namespace tropell
