#include "tropell/newton_puiseux.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace tropell {

void UnivariatePolynomial::trim() {
    while (!coeffs.empty() && coeffs.back().is_exact_zero()) coeffs.pop_back();
}

PuiseuxSeries UnivariatePolynomial::evaluate(const PuiseuxSeries& y) const {
    PuiseuxSeries acc = PuiseuxSeries::zero();
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * y + *it;
    return acc;
}

UnivariatePolynomial UnivariatePolynomial::scaled(const PuiseuxSeries& s) const {
    UnivariatePolynomial q = *this;
    for (auto& c : q.coeffs) c = c * s;
    return q;
}

// ---------------------------------------------------------------------------
// Newton polygon

namespace {

struct HullPoint {
    long i;
    Rational v;
};

// cross(O,A,B) > 0 means B lies to the left of O->A.
Rational cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
    return Rational(a.i - o.i) * (b.v - o.v) - (a.v - o.v) * Rational(b.i - o.i);
}

std::vector<HullPoint> lower_hull(const std::vector<HullPoint>& pts) {
    std::vector<HullPoint> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
        hull.push_back(p);
    }
    return hull;
}

// Height of the hull's piecewise-linear function at abscissa i, extended to
// the left along the first edge; +inf to the right of the span.
ExtRat hull_height_extended(const std::vector<HullPoint>& hull, long i) {
    if (hull.empty()) return ExtRat::infinity();
    if (hull.size() == 1) return i == hull[0].i ? ExtRat(hull[0].v) : ExtRat::infinity();
    if (i < hull[0].i) {
        Rational s = (hull[1].v - hull[0].v) / Rational(hull[1].i - hull[0].i);
        return ExtRat(hull[0].v + s * Rational(i - hull[0].i));
    }
    for (std::size_t k = 0; k + 1 < hull.size(); ++k)
        if (hull[k].i <= i && i <= hull[k + 1].i) {
            Rational t = Rational(i - hull[k].i) / Rational(hull[k + 1].i - hull[k].i);
            return ExtRat(hull[k].v + t * (hull[k + 1].v - hull[k].v));
        }
    return ExtRat::infinity();
}

std::vector<NewtonPolygonEdge> polygon_of_points(const std::vector<HullPoint>& pts) {
    std::vector<HullPoint> hull = lower_hull(pts);
    std::vector<NewtonPolygonEdge> edges;
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        Rational geo = (hull[k + 1].v - hull[k].v) / Rational(hull[k + 1].i - hull[k].i);
        edges.push_back({-geo, hull[k + 1].i - hull[k].i});
    }
    std::sort(edges.begin(), edges.end(),
              [](const NewtonPolygonEdge& a, const NewtonPolygonEdge& b) { return a.slope < b.slope; });
    return edges;
}

}  // namespace

std::vector<NewtonPolygonEdge> newton_polygon(const UnivariatePolynomial& p) {
    std::vector<HullPoint> pts;
    std::vector<std::pair<long, Rational>> unknown;  // (index, precision bound)
    for (long i = 0; i < static_cast<long>(p.coeffs.size()); ++i) {
        const PuiseuxSeries& c = p.coeffs[i];
        if (c.is_exact_zero()) continue;
        if (c.is_truncated_zero())
            unknown.emplace_back(i, c.precision().finite());
        else
            pts.push_back({i, c.finite_valuation()});
    }
    if (pts.size() < 2)
        throw IndeterminateValuation("newton polygon needs at least two coefficients with determinate valuation");
    std::vector<HullPoint> hull = lower_hull(pts);
    for (const auto& [i, bound] : unknown) {
        // v(c_i) >= bound; harmless only if even the bound clears the hull
        // (to the left of the hull: its leftward extension).
        if (!(hull_height_extended(hull, i) < ExtRat(bound)))
            throw IndeterminateValuation("coefficient of degree " + std::to_string(i) +
                                         " is indeterminate at the newton polygon");
    }
    return polygon_of_points(pts);
}

// ---------------------------------------------------------------------------
// Rational root search

namespace {

std::vector<Integer> prime_factors(Integer n) {
    std::vector<Integer> fs;
    for (Integer p(2); p * p <= n && p < 65536; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            fs.push_back(p);
            n /= p;
        }
    }
    // Brent-style Pollard rho for the (rare) large remainder.
    std::vector<Integer> stack;
    if (n > 1) stack.push_back(n);
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xda7a5eedUL);
    while (!stack.empty()) {
        Integer m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (mpz_probab_prime_p(m.get_mpz_t(), 32)) {
            fs.push_back(m);
            continue;
        }
        Integer d = m;
        while (d == m) {
            Integer x = rng.get_z_range(m - 2) + 2;
            Integer y = x, c = rng.get_z_range(m - 1) + 1;
            d = 1;
            while (d == 1) {
                x = (x * x + c) % m;
                y = (y * y + c) % m;
                y = (y * y + c) % m;
                d = gcd(abs(x - y), m);
            }
        }
        stack.push_back(d);
        stack.push_back(m / d);
    }
    std::sort(fs.begin(), fs.end());
    return fs;
}

std::vector<Integer> divisors(const Integer& n) {
    std::vector<Integer> divs{Integer(1)};
    Integer prev(0);
    std::size_t block = 1;
    for (const Integer& p : prime_factors(n)) {
        if (p == prev) {
            std::size_t start = divs.size() - block;
            for (std::size_t k = start; k < start + block; ++k) divs.push_back(divs[k] * p);
        } else {
            block = divs.size();
            for (std::size_t k = 0; k < block; ++k) divs.push_back(divs[k] * p);
            prev = p;
        }
    }
    std::sort(divs.begin(), divs.end());
    divs.erase(std::unique(divs.begin(), divs.end()), divs.end());
    return divs;
}

Rational eval_rational_poly(const std::vector<Rational>& coeffs, const Rational& x) {
    Rational acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// coeffs / (x - r), exact when r is a root.
std::vector<Rational> deflate(const std::vector<Rational>& coeffs, const Rational& r) {
    std::vector<Rational> q(coeffs.size() - 1);
    Rational carry(0);
    for (long i = static_cast<long>(coeffs.size()) - 1; i >= 1; --i) {
        carry = coeffs[i] + carry * r;
        q[i - 1] = carry;
    }
    return q;
}

}  // namespace

std::vector<std::pair<Rational, long>> rational_roots(const std::vector<Rational>& coeffs_in) {
    std::vector<Rational> coeffs = coeffs_in;
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    std::vector<std::pair<Rational, long>> out;
    if (coeffs.size() <= 1) return out;

    long zero_mult = 0;
    while (!coeffs.empty() && coeffs.front() == 0) {
        coeffs.erase(coeffs.begin());
        ++zero_mult;
    }
    if (zero_mult > 0) out.emplace_back(Rational(0), zero_mult);
    if (coeffs.size() <= 1) return out;

    Integer den(1);
    for (const Rational& c : coeffs) den = lcm(den, denominator(c));
    std::vector<Integer> ic;
    ic.reserve(coeffs.size());
    Integer content(0);
    for (const Rational& c : coeffs) {
        Rational scaled = c * Rational(den);
        ic.push_back(numerator(scaled));
        content = gcd(content, ic.back());
    }
    for (Integer& z : ic) z /= content;

    const std::vector<Integer> ps = divisors(abs(ic.front()));
    const std::vector<Integer> qs = divisors(abs(ic.back()));
    for (const Integer& pnum : ps)
        for (const Integer& qden : qs) {
            if (gcd(pnum, qden) != 1) continue;
            for (int sign : {1, -1}) {
                Rational cand(sign * pnum, qden);
                cand.canonicalize();
                long mult = 0;
                while (coeffs.size() > 1 && eval_rational_poly(coeffs, cand) == 0) {
                    coeffs = deflate(coeffs, cand);
                    ++mult;
                }
                if (mult > 0) out.emplace_back(cand, mult);
            }
        }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

// ---------------------------------------------------------------------------
// Newton-Puiseux descent

namespace {

struct Descent {
    Rational target;
    long max_iterations;
    RootsResult out;

    // q(u) = p(partial + u); roots of q with valuation strictly above
    // floor_mu extend partial. branch_count is how many of them there are
    // (with multiplicity); at the top level floor_mu is unset and
    // branch_count = deg(q).
    void expand(const UnivariatePolynomial& q, const std::optional<Rational>& floor_mu,
                const PuiseuxSeries& partial, long branch_count, long iterations) {
        if (iterations > max_iterations)
            throw PrecisionExhausted("newton-puiseux iteration bound hit before reaching precision " +
                                     to_string(target));

        const PuiseuxSeries& c0 = q.coeffs.front();

        if (c0.is_exact_zero()) {
            // partial is an exact root; its multiplicity is the number of
            // leading exactly-zero coefficients.
            long ord = 0;
            while (ord < static_cast<long>(q.coeffs.size()) && q.coeffs[ord].is_exact_zero()) ++ord;
            out.roots.push_back({partial, ord, target});
            if (ord >= q.degree()) return;
            UnivariatePolynomial rest;
            rest.coeffs.assign(q.coeffs.begin() + ord, q.coeffs.end());
            node(rest, floor_mu, partial, branch_count - ord, iterations);
            return;
        }
        node(q, floor_mu, partial, branch_count, iterations);
    }

    // Handles a node whose constant coefficient is not exactly zero.
    void node(const UnivariatePolynomial& q, const std::optional<Rational>& floor_mu,
              const PuiseuxSeries& partial, long branch_count, long iterations) {
        const PuiseuxSeries& c0 = q.coeffs.front();

        if (c0.is_truncated_zero()) {
            // The residual at `partial` is O(t^P): certify if P reaches the
            // target, otherwise the expansion cannot continue.
            const Rational bound = c0.precision().finite();
            if (bound < target)
                throw PrecisionExhausted("residual known only to O(t^" + to_string(bound) +
                                         "), target " + to_string(target));
            if (floor_mu) {
                out.roots.push_back({cluster_stamp(q, partial, branch_count, bound), branch_count, bound});
                return;
            }
            // Top level: the roots clustering at `partial` are the ones the
            // leftmost determinate coefficient accounts for; the remaining
            // roots come from the determinate part of the polygon.
            long i1 = 1;
            while (i1 < static_cast<long>(q.coeffs.size()) && !is_determinate_nonzero(q.coeffs[i1])) {
                if (q.coeffs[i1].is_truncated_zero())
                    throw PrecisionExhausted("coefficient of degree " + std::to_string(i1) +
                                             " is an empty truncation");
                ++i1;
            }
            out.roots.push_back({cluster_stamp(q, partial, i1, bound), i1, bound});
            if (i1 < q.degree()) {
                UnivariatePolynomial rest;
                rest.coeffs.assign(q.coeffs.begin() + i1, q.coeffs.end());
                descend_edges(rest, floor_mu, partial, iterations);
            }
            return;
        }

        // Residual certificate reached: stop refining this branch. Only
        // valid below the top level, where branch_count roots are known to
        // extend `partial`.
        if (floor_mu && c0.finite_valuation() >= target) {
            out.roots.push_back(
                {cluster_stamp(q, partial, branch_count, c0.finite_valuation()), branch_count,
                 c0.finite_valuation()});
            return;
        }
        descend_edges(q, floor_mu, partial, iterations);
    }

    static bool is_determinate_nonzero(const PuiseuxSeries& s) {
        return !s.terms().empty();
    }

    // The m roots represented by `partial` differ from it from exponent
    // (v(residual) - v(c_m)) / m on; record that as the root's precision.
    static PuiseuxSeries cluster_stamp(const UnivariatePolynomial& q, const PuiseuxSeries& partial,
                                       long m, const Rational& residual_valuation) {
        if (m >= 1 && m < static_cast<long>(q.coeffs.size()) && is_determinate_nonzero(q.coeffs[m])) {
            Rational eps = (residual_valuation - q.coeffs[m].finite_valuation()) / Rational(m);
            return partial.with_precision_at_most(ExtRat(eps));
        }
        return partial;
    }

    void descend_edges(const UnivariatePolynomial& q, const std::optional<Rational>& floor_mu,
                       const PuiseuxSeries& partial, long iterations) {
        std::vector<NewtonPolygonEdge> edges;
        try {
            edges = newton_polygon(q);
        } catch (const IndeterminateValuation& e) {
            throw PrecisionExhausted(std::string("newton polygon indeterminate: ") + e.what());
        }
        for (const auto& edge : edges) {
            if (floor_mu && !(edge.slope > *floor_mu)) continue;
            descend_edge(q, edge, partial, iterations);
        }
    }

    void descend_edge(const UnivariatePolynomial& q, const NewtonPolygonEdge& edge,
                      const PuiseuxSeries& partial, long iterations) {
        const Rational& mu = edge.slope;
        // residue polynomial: indices whose point lies on the edge
        ExtRat minval = ExtRat::infinity();
        for (long i = 0; i < static_cast<long>(q.coeffs.size()); ++i) {
            const PuiseuxSeries& c = q.coeffs[i];
            if (!is_determinate_nonzero(c)) continue;
            minval = min(minval, ExtRat(c.finite_valuation() + Rational(i) * mu));
        }
        long i0 = -1;
        std::vector<Rational> psi;
        for (long i = 0; i < static_cast<long>(q.coeffs.size()); ++i) {
            const PuiseuxSeries& c = q.coeffs[i];
            if (!is_determinate_nonzero(c)) continue;
            if (ExtRat(c.finite_valuation() + Rational(i) * mu) != minval) continue;
            if (i0 < 0) i0 = i;
            if (static_cast<long>(psi.size()) < i - i0 + 1) psi.resize(i - i0 + 1, Rational(0));
            psi[i - i0] = c.leading_coefficient();
        }

        auto residue_roots = rational_roots(psi);
        long resolved = 0;
        for (const auto& [z, m] : residue_roots) {
            if (z == 0) continue;
            resolved += m;
            PuiseuxSeries term = PuiseuxSeries::monomial(z, mu);
            expand(shift_by(q, term), mu, partial + term, m, iterations + 1);
        }
        const long remainder = static_cast<long>(psi.size()) - 1 - resolved;
        if (remainder > 0) out.unresolved.push_back({partial, remainder});
    }

    // q(s + u) by binomial expansion.
    static UnivariatePolynomial shift_by(const UnivariatePolynomial& q, const PuiseuxSeries& s) {
        const long n = q.degree();
        UnivariatePolynomial r;
        r.coeffs.assign(n + 1, PuiseuxSeries::zero());
        std::vector<PuiseuxSeries> sp(n + 1, PuiseuxSeries::constant(1));
        for (long k = 1; k <= n; ++k) sp[k] = sp[k - 1] * s;
        std::vector<std::vector<Integer>> binom(n + 1, std::vector<Integer>(n + 1, Integer(0)));
        for (long i = 0; i <= n; ++i) {
            binom[i][0] = 1;
            for (long j = 1; j <= i; ++j)
                binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : Integer(0));
        }
        for (long i = 0; i <= n; ++i) {
            if (q.coeffs[i].is_exact_zero()) continue;
            for (long j = 0; j <= i; ++j)
                r.coeffs[j] += Rational(binom[i][j]) * (q.coeffs[i] * sp[i - j]);
        }
        r.trim();
        return r;
    }
};

}  // namespace

RootsResult roots(const UnivariatePolynomial& p, const Rational& target_precision) {
    UnivariatePolynomial q = p;
    q.trim();
    if (q.degree() < 1) throw std::invalid_argument("roots: polynomial must have degree >= 1");
    if (q.coeffs.back().is_truncated_zero())
        throw PrecisionExhausted("leading coefficient has indeterminate valuation");

    // Iteration budget: each descent step adds a term and exponents grow in
    // steps of at least 1/ram, with ramification bounded by deg * input ram.
    Integer ram(1);
    for (const auto& c : q.coeffs) ram = lcm(ram, Integer(c.ramification()));
    long bound = to_long_checked(ceil(Rational(ram) * target_precision * (q.degree() + 1))) + 32;

    Descent d{target_precision, bound, {}};
    d.expand(q, std::nullopt, PuiseuxSeries::zero(), q.degree(), 0);

    std::sort(d.out.roots.begin(), d.out.roots.end(), [](const RootSolution& a, const RootSolution& b) {
        return PuiseuxSeries::compare(a.root, b.root) < 0;
    });
    return d.out;
}

}  // namespace tropell
