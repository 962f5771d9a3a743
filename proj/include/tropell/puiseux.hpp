#pragma once

#include <map>
#include <optional>
#include <string>

#include "tropell/rational.hpp"

namespace tropell {

// Global truncation cutoff used by invert/sqrt when no explicit target is
// given. Measured relative to the valuation of the result, so a series with
// negative valuation still carries default_precision() known terms' worth
// of exponent range.
Rational default_precision();
void set_default_precision(const Rational& p);

// Truncated formal sum  sum c_e t^e  with rational exponents and rational
// coefficients. Terms with exponent >= precision() are unknown ("+ O(t^N)").
// The exact zero series has empty terms and infinite precision; an empty
// term map with finite precision is a truncation of a possibly-nonzero
// series and has indeterminate valuation.
class PuiseuxSeries {
public:
    using TermMap = std::map<Rational, Rational>;

    PuiseuxSeries() : prec_(ExtRat::infinity()), ram_(1) {}  // exact zero

    static PuiseuxSeries zero() { return PuiseuxSeries(); }
    static PuiseuxSeries constant(const Rational& c);
    static PuiseuxSeries monomial(const Rational& c, const Rational& e);
    static PuiseuxSeries t(const Rational& e = Rational(1)) { return monomial(1, e); }
    static PuiseuxSeries from_terms(TermMap terms, const ExtRat& precision);
    // The pure truncation O(t^p): no known terms.
    static PuiseuxSeries unknown(const Rational& p) { return from_terms({}, ExtRat(p)); }

    const TermMap& terms() const { return terms_; }
    const ExtRat& precision() const { return prec_; }
    long ramification() const { return ram_; }

    bool is_exact_zero() const { return terms_.empty() && prec_.is_infinite(); }
    bool is_truncated_zero() const { return terms_.empty() && !prec_.is_infinite(); }
    bool has_determinate_valuation() const { return !terms_.empty() || prec_.is_infinite(); }

    // Least stored exponent; +inf for the exact zero series. Throws
    // IndeterminateValuation when the series is an empty truncation.
    ExtRat valuation() const;
    // valuation() for series known to be nonzero.
    const Rational& finite_valuation() const;
    const Rational& leading_coefficient() const;

    // Lower bound for the valuation that is always available: the least
    // stored exponent, or the precision when no term is known.
    ExtRat valuation_lower_bound() const;

    // Coefficient of t^e. Returns 0 for an absent exponent that is still
    // below the precision cutoff; throws IndeterminateValuation when e is
    // at or beyond the cutoff.
    Rational coefficient(const Rational& e) const;

    PuiseuxSeries truncated(const ExtRat& new_precision) const;
    // Same terms with precision forced down to new_precision (no-op if the
    // current precision is already tighter).
    PuiseuxSeries with_precision_at_most(const ExtRat& p) const { return truncated(min(prec_, p)); }

    PuiseuxSeries operator-() const;
    friend PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b);
    friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b);
    friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b);
    PuiseuxSeries& operator+=(const PuiseuxSeries& o) { return *this = *this + o; }
    PuiseuxSeries& operator-=(const PuiseuxSeries& o) { return *this = *this - o; }
    PuiseuxSeries& operator*=(const PuiseuxSeries& o) { return *this = *this * o; }

    friend PuiseuxSeries operator*(const Rational& c, const PuiseuxSeries& s);
    friend PuiseuxSeries operator*(const PuiseuxSeries& s, const Rational& c) { return c * s; }
    friend PuiseuxSeries operator+(const PuiseuxSeries& s, const Rational& c) { return s + constant(c); }
    friend PuiseuxSeries operator-(const PuiseuxSeries& s, const Rational& c) { return s - constant(c); }

    PuiseuxSeries pow(long n) const;

    // Structural equality: identical term maps and identical precision.
    friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b) {
        return a.terms_ == b.terms_ && a.prec_ == b.prec_;
    }
    friend bool operator!=(const PuiseuxSeries& a, const PuiseuxSeries& b) { return !(a == b); }

    // True when a - b has no stored term, i.e. the two series agree on
    // every exponent below the combined precision.
    bool agrees_with(const PuiseuxSeries& o) const { return (*this - o).terms_.empty(); }

    // Deterministic total order (ramification, then term list compared
    // entry by entry, then precision); used for tie-breaking choices.
    static int compare(const PuiseuxSeries& a, const PuiseuxSeries& b);

    std::string str() const;

private:
    TermMap terms_;
    ExtRat prec_;
    long ram_;

    void normalize();
};

// Multiplicative inverse, expanded to absolute precision target (default:
// v(s^-1) + default_precision(), capped by what the input's own precision
// can support). Exact monomials invert exactly.
PuiseuxSeries invert(const PuiseuxSeries& s, std::optional<ExtRat> target = std::nullopt);

// Square root branch with positive rational leading coefficient. The
// exponent side always works (the result may ramify); throws
// NonSquareLeadingCoefficient when the leading coefficient has no rational
// square root.
PuiseuxSeries sqrt(const PuiseuxSeries& s, std::optional<ExtRat> target = std::nullopt);

// Image in the residue field: the t^0 coefficient. Requires v(s) >= 0.
Rational residue(const PuiseuxSeries& s);

// Series literal syntax, e.g. "1 - 2*t^(1/2) + t^3 + O(t^24)".
// parse_puiseux(s.str()) == s holds bit-exactly.
PuiseuxSeries parse_puiseux(const std::string& text);

}  // namespace tropell
