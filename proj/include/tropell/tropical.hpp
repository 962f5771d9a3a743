#pragma once

#include <set>
#include <string>
#include <vector>

#include "tropell/puiseux.hpp"

#include "json.hpp"

namespace tropell {

// Min-plus semiring on Q u {+inf}: a (+) b = min{a,b}, a (.) b = a + b,
// +inf is the additive identity and multiplicatively absorbing.
using TropicalValue = ExtRat;
inline TropicalValue trop_add(const TropicalValue& a, const TropicalValue& b) { return min(a, b); }
inline TropicalValue trop_mul(const TropicalValue& a, const TropicalValue& b) { return a + b; }
inline TropicalValue trop_zero() { return ExtRat::infinity(); }
inline TropicalValue trop_one() { return ExtRat(Rational(0)); }

using ExpVec = std::vector<long>;

// Laurent polynomial over the Puiseux field: finite map exponent vector ->
// nonzero coefficient.
struct LaurentPolynomial {
    std::vector<std::string> vars;  // sorted, unique; size = arity
    std::map<ExpVec, PuiseuxSeries> terms;

    std::size_t arity() const { return vars.size(); }
    std::string str() const;
};

// Tropical Laurent polynomial: finite map exponent vector -> rational
// coefficient (no +inf coefficient is ever stored).
struct TropicalPolynomial {
    std::vector<std::string> vars;
    std::map<ExpVec, Rational> terms;

    std::size_t arity() const { return vars.empty() && !terms.empty() ? terms.begin()->first.size() : vars.size(); }
};

// Coefficient-wise valuation; support is preserved.
TropicalPolynomial tropicalize(const LaurentPolynomial& f);

// min over terms of coefficient + <exponent, point>.
Rational evaluate(const TropicalPolynomial& F, const std::vector<Rational>& point);

// All exponent vectors attaining the minimum; the point lies on the
// tropical hypersurface iff the result has size >= 2.
std::set<ExpVec> argmin_terms(const TropicalPolynomial& F, const std::vector<Rational>& point);

// Laurent literal in named variables with Puiseux monomial coefficients,
// e.g. "x^2*y + x*y + x*y^2 + t^3". Variables are collected and sorted
// alphabetically; "t" and "O" are reserved.
LaurentPolynomial parse_laurent(const std::string& text);

nlohmann::ordered_json to_json(const TropicalPolynomial& F);

}  // namespace tropell
