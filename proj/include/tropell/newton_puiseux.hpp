#pragma once

#include <utility>
#include <vector>

#include "tropell/puiseux.hpp"

namespace tropell {

// Univariate polynomial over the Puiseux field; coefficient index = degree
// in the unknown.
struct UnivariatePolynomial {
    std::vector<PuiseuxSeries> coeffs;

    UnivariatePolynomial() = default;
    explicit UnivariatePolynomial(std::vector<PuiseuxSeries> c) : coeffs(std::move(c)) { trim(); }

    long degree() const { return static_cast<long>(coeffs.size()) - 1; }
    PuiseuxSeries evaluate(const PuiseuxSeries& y) const;
    UnivariatePolynomial scaled(const PuiseuxSeries& s) const;

    // Drops leading coefficients that are exactly zero.
    void trim();
};

// An edge of the Newton polygon: all roots with valuation `slope`, counted
// with multiplicity, number `length`. Listed with slope increasing.
struct NewtonPolygonEdge {
    Rational slope;
    long length;
};

// Lower convex hull of the points (i, v(c_i)). Coefficients whose valuation
// is indeterminate but provably above the hull are tolerated; otherwise
// IndeterminateValuation.
std::vector<NewtonPolygonEdge> newton_polygon(const UnivariatePolynomial& p);

struct RootSolution {
    PuiseuxSeries root;
    long multiplicity;
    // v(p(root)) >= certified_precision; for exactly-known roots this is the
    // requested target even though the true residual is zero.
    Rational certified_precision;
};

// A branch whose next coefficient lies outside Q (irrational residue root).
struct UnresolvedBranch {
    PuiseuxSeries prefix;  // partial expansion up to the failure point
    long degree;           // number of roots (with multiplicity) in the branch
};

struct RootsResult {
    std::vector<RootSolution> roots;
    std::vector<UnresolvedBranch> unresolved;

    long resolved_degree() const {
        long d = 0;
        for (const auto& r : roots) d += r.multiplicity;
        return d;
    }
    long unresolved_degree() const {
        long d = 0;
        for (const auto& u : unresolved) d += u.degree;
        return d;
    }
};

// Newton-Puiseux descent. Every returned root satisfies the residual
// certificate v(p(root)) >= target_precision; branches that would need
// irrational residue arithmetic are reported in `unresolved`.
RootsResult roots(const UnivariatePolynomial& p, const Rational& target_precision);

// All rational roots (with multiplicities) of a polynomial with rational
// coefficients, index = degree. Exact: divisor candidates of the integer
// normalization, verified by evaluation.
std::vector<std::pair<Rational, long>> rational_roots(const std::vector<Rational>& coeffs);

}  // namespace tropell
