#include "tropell/weierstrass.hpp"

#include <algorithm>

namespace tropell {

namespace {

using PS = PuiseuxSeries;

// v(s) == 0, decided from the certifiable lower bound.
bool valuation_is_zero(const PS& s) {
    if (!s.terms().empty()) return s.finite_valuation() == 0;
    if (s.is_exact_zero()) return false;
    if (s.precision().finite() > 0) return false;  // v >= prec > 0
    throw IndeterminateValuation("valuation sign undecidable at O(t^" + s.precision().str() + ")");
}

ExtRat certified_nonnegative_valuation(const PS& s, const char* what) {
    ExtRat lo = s.valuation_lower_bound();
    if (!s.terms().empty() || s.is_exact_zero()) return lo;
    if (lo >= ExtRat(Rational(0))) return lo;
    throw IndeterminateValuation(std::string(what) + " has undecidable valuation sign");
}

}  // namespace

std::string WeierstrassModel::str() const {
    return "[" + a1.str() + "," + a2.str() + "," + a3.str() + "," + a4.str() + "," + a6.str() + "]";
}

std::string reduction_name(Reduction r) {
    switch (r) {
        case Reduction::Good: return "good";
        case Reduction::Multiplicative: return "mult";
        case Reduction::Additive: return "add";
    }
    return "?";
}

StandardInvariants invariants(const WeierstrassModel& W) {
    StandardInvariants I;
    I.b2 = W.a1 * W.a1 + Rational(4) * W.a2;
    I.b4 = Rational(2) * W.a4 + W.a1 * W.a3;
    I.b6 = W.a3 * W.a3 + Rational(4) * W.a6;
    I.b8 = Rational(1, 4) * (I.b2 * I.b6 - I.b4 * I.b4);
    I.c4 = I.b2 * I.b2 - Rational(24) * I.b4;
    I.c6 = -(I.b2.pow(3)) + Rational(36) * (I.b2 * I.b4) - Rational(216) * I.b6;
    I.delta = -(I.b2 * I.b2 * I.b8) - Rational(8) * I.b4.pow(3) - Rational(27) * (I.b6 * I.b6) +
              Rational(9) * (I.b2 * I.b4 * I.b6);
    if (I.delta.is_exact_zero()) throw SingularModel();
    if (I.delta.is_truncated_zero())
        throw IndeterminateValuation("discriminant is zero to precision O(t^" + I.delta.precision().str() +
                                     ")");
    PS identity = I.c4.pow(3) - I.c6 * I.c6 - Rational(1728) * I.delta;
    if (!identity.terms().empty())
        throw std::logic_error("invariant identity c4^3 - c6^2 = 1728 delta violated");
    I.j = I.c4.pow(3) * invert(I.delta);
    return I;
}

bool is_integral(const WeierstrassModel& W) {
    for (const PS* a : {&W.a1, &W.a2, &W.a3, &W.a4, &W.a6}) {
        if (a->is_exact_zero()) continue;
        if (!a->terms().empty()) {
            if (a->finite_valuation() < 0) return false;
        } else if (a->precision().finite() < 0) {
            throw IndeterminateValuation("integrality undecidable at O(t^" + a->precision().str() + ")");
        }
    }
    return true;
}

bool is_minimal(const WeierstrassModel& W) {
    if (!is_integral(W)) throw NonIntegralInput();
    StandardInvariants I = invariants(W);
    return valuation_is_zero(I.c4) || valuation_is_zero(I.c6);
}

CoordinateChange CoordinateChange::then(const CoordinateChange& next) const {
    CoordinateChange c;
    c.u = u * next.u;
    c.r = (u * u) * next.r + r;
    c.s = u * next.s + s;
    c.t = u.pow(3) * next.t + (u * u) * (s * next.r) + t;
    return c;
}

WeierstrassModel apply_change(const WeierstrassModel& W, const CoordinateChange& c) {
    if (c.u.is_exact_zero()) throw ZeroScaling();
    if (c.u.is_truncated_zero()) throw IndeterminateValuation("scaling unit is an empty truncation");
    const PS iu = invert(c.u);
    const PS iu2 = iu * iu;
    const PS iu3 = iu2 * iu;
    const PS iu4 = iu2 * iu2;
    const PS iu6 = iu3 * iu3;
    const PS &r = c.r, &s = c.s, &t = c.t;

    WeierstrassModel V;
    V.a1 = (W.a1 + Rational(2) * s) * iu;
    V.a2 = (W.a2 - s * W.a1 + Rational(3) * r - s * s) * iu2;
    V.a3 = (W.a3 + r * W.a1 + Rational(2) * t) * iu3;
    V.a4 = (W.a4 - s * W.a3 + Rational(2) * (r * W.a2) - (t + r * s) * W.a1 + Rational(3) * (r * r) -
            Rational(2) * (s * t)) *
           iu4;
    V.a6 = (W.a6 + r * W.a4 + (r * r) * W.a2 + r.pow(3) - t * W.a3 - t * t - (r * t) * W.a1) * iu6;

    PS residual = c.u.pow(12) * invariants(V).delta - invariants(W).delta;
    if (!residual.terms().empty()) throw std::logic_error("u^12 delta' = delta violated by apply_change");
    return V;
}

std::pair<WeierstrassModel, CoordinateChange> minimalize(const WeierstrassModel& W) {
    if (!is_integral(W)) throw NonIntegralInput();
    if (is_minimal(W)) return {W, CoordinateChange::identity()};
    StandardInvariants I = invariants(W);

    ExtRat m = ExtRat::infinity();
    if (!I.c4.is_exact_zero()) {
        if (I.c4.terms().empty()) throw IndeterminateValuation("v(c4) needed for minimalization");
        m = min(m, ExtRat(I.c4.finite_valuation() / 4));
    }
    if (!I.c6.is_exact_zero()) {
        if (I.c6.terms().empty()) throw IndeterminateValuation("v(c6) needed for minimalization");
        m = min(m, ExtRat(I.c6.finite_valuation() / 6));
    }
    const Rational mv = m.finite();

    CoordinateChange change;
    const std::array<std::pair<const PS*, long>, 5> weighted{
        std::pair<const PS*, long>{&W.a1, 1}, {&W.a2, 2}, {&W.a3, 3}, {&W.a4, 4}, {&W.a6, 6}};
    bool direct = true;
    for (const auto& [a, w] : weighted)
        if (!(a->valuation_lower_bound() >= ExtRat(Rational(w) * mv))) direct = false;

    const CoordinateChange scale{PS::t(mv), PS::zero(), PS::zero(), PS::zero()};
    if (direct) {
        change = scale;
    } else {
        // normalize to y^2 = x^3 - 27 c4 x - 54 c6 first; those coefficients
        // scale by definition of m.
        CoordinateChange to_short;
        to_short.u = PS::constant(Rational(1, 6));
        to_short.r = Rational(-1, 12) * I.b2;
        to_short.s = Rational(-1, 2) * W.a1;
        to_short.t = Rational(1, 24) * (W.a1 * I.b2) - Rational(1, 2) * W.a3;
        change = to_short.then(scale);
    }

    WeierstrassModel M = apply_change(W, change);
    if (!is_integral(M)) throw std::logic_error("minimalization produced a non-integral model");
    if (!is_minimal(M)) throw std::logic_error("minimalization produced a non-minimal model");
    return {M, change};
}

// ---------------------------------------------------------------------------
// Reduction

namespace {

// gcd of two polynomials over Q, monic; index = degree.
std::vector<Rational> poly_gcd(std::vector<Rational> a, std::vector<Rational> b) {
    auto trim = [](std::vector<Rational>& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        while (a.size() >= b.size() && !a.empty()) {
            Rational q = a.back() / b.back();
            for (std::size_t k = 0; k < b.size(); ++k)
                a[a.size() - b.size() + k] -= q * b[k];
            trim(a);
            if (a.size() < b.size()) break;
        }
        std::swap(a, b);
        trim(b);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

}  // namespace

ReductionInfo classify_reduction(const WeierstrassModel& W) {
    if (!is_minimal(W)) throw NotMinimal();
    StandardInvariants I = invariants(W);
    if (valuation_is_zero(I.delta)) return {Reduction::Good, std::nullopt};

    const Rational rc4 = residue(I.c4);
    const Reduction type = rc4 != 0 ? Reduction::Multiplicative : Reduction::Additive;

    // singular point of the reduced curve: with eta = y + (a1 x + a3)/2 the
    // equation becomes eta^2 = x^3 + (b2/4) x^2 + (b4/2) x + b6/4 and the
    // singularity sits at (x0, -(a1 x0 + a3)/2) for the repeated root x0.
    const Rational b2 = residue(I.b2), b4 = residue(I.b4), b6 = residue(I.b6);
    std::vector<Rational> cubic{b6 / 4, b4 / 2, b2 / 4, Rational(1)};
    std::vector<Rational> deriv{b4 / 2, b2 / 2, Rational(3)};
    std::vector<Rational> g = poly_gcd(cubic, deriv);
    Rational x0;
    if (g.size() == 2) {
        x0 = -g[0];
    } else if (g.size() == 3) {
        // triple root: gcd is (x - x0)^2
        x0 = -g[1] / 2;
        if (g[1] * g[1] - 4 * g[0] != 0) throw std::logic_error("repeated-root extraction failed");
    } else {
        throw std::logic_error("singular reduced cubic without a repeated root");
    }
    const Rational y0 = -(residue(W.a1) * x0 + residue(W.a3)) / 2;
    return {type, std::array<Rational, 2>{x0, y0}};
}

bool reduction_consistency(const WeierstrassModel& W) {
    const ReductionInfo info = classify_reduction(W);
    const ExtRat vj = valuation_of_j(W);
    const bool good_iff = (info.type == Reduction::Good) == (vj >= ExtRat(Rational(0)));
    const bool mult_iff = (info.type == Reduction::Multiplicative) == (vj < ExtRat(Rational(0)));
    return good_iff && mult_iff && info.type != Reduction::Additive;
}

ExtRat valuation_of_j(const WeierstrassModel& W) {
    StandardInvariants I = invariants(W);
    if (I.c4.is_exact_zero()) return ExtRat::infinity();
    if (I.c4.terms().empty()) throw IndeterminateValuation("v(c4) indeterminate");
    return ExtRat(Rational(3) * I.c4.finite_valuation() - I.delta.finite_valuation());
}

ReducedPoint reduce_point(const ProjectivePoint& P, const WeierstrassModel& W) {
    if (P.X.is_exact_zero() && P.Y.is_exact_zero() && P.Z.is_exact_zero())
        throw std::invalid_argument("projective point with all coordinates zero");

    const PS& X = P.X;
    const PS& Y = P.Y;
    const PS& Z = P.Z;
    PS residual = Y * Y * Z + W.a1 * (X * Y * Z) + W.a3 * (Y * Z * Z) - X.pow(3) - W.a2 * (X * X * Z) -
                  W.a4 * (X * Z * Z) - W.a6 * Z.pow(3);
    if (!residual.terms().empty())
        throw NotOnCurve("curve equation residual is " + residual.str());

    ExtRat m = ExtRat::infinity();
    bool min_determinate = false;
    for (const PS* c : {&X, &Y, &Z}) {
        if (c->is_exact_zero()) continue;
        ExtRat lo = c->valuation_lower_bound();
        if (lo < m) {
            m = lo;
            min_determinate = !c->terms().empty();
        } else if (lo == m && !c->terms().empty()) {
            min_determinate = true;
        }
    }
    if (!min_determinate)
        throw IndeterminateValuation("minimum coordinate valuation attained only by truncations");

    const PS scale = PS::t(-m.finite());
    ReducedPoint out;
    out.xyz = {residue(X * scale), residue(Y * scale), residue(Z * scale)};

    if (out.xyz[0] == 0 && out.xyz[2] == 0) {
        out.kind = ReducedKind::Identity;
        return out;
    }
    out.kind = ReducedKind::Smooth;
    const ReductionInfo info = classify_reduction(W);
    if (info.singular_point && out.xyz[2] != 0) {
        const Rational x = out.xyz[0] / out.xyz[2];
        const Rational y = out.xyz[1] / out.xyz[2];
        if (x == (*info.singular_point)[0] && y == (*info.singular_point)[1])
            out.kind = ReducedKind::Singular;
    }
    return out;
}

WeierstrassModel parse_model(const std::string& text) {
    std::size_t i = 0, n = text.size();
    auto ws = [&] {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    ws();
    if (i >= n || text[i] != '[') throw ParseError("model literal must start with '['", i);
    ++i;
    std::vector<std::string> parts;
    std::size_t start = i;
    int depth = 0;
    for (; i < n; ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')') --depth;
        if (depth == 0 && (text[i] == ',' || text[i] == ']')) {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
            if (text[i] == ']') break;
        }
    }
    if (i >= n || text[i] != ']') throw ParseError("model literal must end with ']'", i);
    ++i;
    ws();
    if (i != n) throw ParseError("trailing characters after model literal", i);
    if (parts.size() != 5) throw ParseError("model literal needs 5 entries, got " + std::to_string(parts.size()), 0);
    WeierstrassModel W;
    PS* slots[5] = {&W.a1, &W.a2, &W.a3, &W.a4, &W.a6};
    for (int k = 0; k < 5; ++k) *slots[k] = parse_puiseux(parts[k]);
    return W;
}

nlohmann::ordered_json reduction_report(const WeierstrassModel& input) {
    nlohmann::ordered_json j;
    j["minimal"] = is_minimal(input);
    auto [M, change] = minimalize(input);
    const ReductionInfo info = classify_reduction(M);
    j["reduction"] = reduction_name(info.type);
    j["vDelta"] = to_string(invariants(M).delta.finite_valuation());
    const ExtRat vj = valuation_of_j(M);
    j["vj"] = vj.str();
    if (info.singular_point)
        j["singular_point"] = {to_string((*info.singular_point)[0]), to_string((*info.singular_point)[1])};
    else
        j["singular_point"] = nullptr;
    return j;
}

}  // namespace tropell
