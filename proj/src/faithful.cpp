#include "tropell/faithful.hpp"

#include <algorithm>
#include <random>

namespace tropell {

namespace {
using PS = PuiseuxSeries;

bool valuation_is_unit(const PS& s) {
    return !s.terms().empty() && s.finite_valuation() == 0;
}

}  // namespace

UnivariatePolynomial three_division_polynomial(const WeierstrassModel& W) {
    StandardInvariants I = invariants(W);
    return UnivariatePolynomial{{I.b8, Rational(3) * I.b6, Rational(3) * I.b4, I.b2, PS::constant(3)}};
}

ProjectivePoint find_three_torsion(const WeierstrassModel& W, const Rational& precision) {
    const ReductionInfo info = classify_reduction(W);
    if (info.type != Reduction::Multiplicative)
        throw std::invalid_argument("find_three_torsion requires multiplicative reduction");

    RootsResult xs = roots(three_division_polynomial(W), precision);

    bool saw_candidate = false;
    for (const auto& sol : xs.roots) {
        const PS& x0 = sol.root;
        // points with v(x) < 0 reduce to the identity and E_1(K)[3] = 0
        if (!x0.is_exact_zero() && !x0.terms().empty() && x0.finite_valuation() < 0) continue;
        // y^2 + (a1 x0 + a3) y = rhs
        const PS h = W.a1 * x0 + W.a3;
        const PS rhs = x0.pow(3) + W.a2 * (x0 * x0) + W.a4 * x0 + W.a6;
        PS s;
        try {
            s = sqrt(h * h + Rational(4) * rhs);
        } catch (const NonSquareLeadingCoefficient&) {
            continue;  // this torsion point lives outside Q-coefficients
        }
        for (int branch = 0; branch < 2; ++branch) {
            const PS y0 = Rational(1, 2) * (branch == 0 ? s - h : -s - h);
            ProjectivePoint P = ProjectivePoint::affine(x0, y0);
            saw_candidate = true;
            ReducedPoint red = reduce_point(P, W);
            if (red.kind == ReducedKind::Identity)
                throw std::logic_error("3-torsion candidate reduced to the identity");
            if (red.kind == ReducedKind::Singular) return P;
        }
    }
    (void)saw_candidate;
    throw NoRationalBranch("no rational 3-torsion point reduces to the node (" +
                           std::to_string(xs.unresolved_degree()) + " unresolved branches)");
}

FamilyForm shift_to_family(const WeierstrassModel& W, const ProjectivePoint& P,
                           WeierstrassModel* shifted_out) {
    if (!W.a1.agrees_with(PS::zero()) || !W.a3.agrees_with(PS::zero()))
        throw std::invalid_argument("shift_to_family expects a model with a1 = a3 = 0");
    if (!P.Z.agrees_with(PS::constant(1)))
        throw std::invalid_argument("shift_to_family expects an affine point");
    if (!P.X.is_exact_zero() && !P.X.terms().empty() && P.X.finite_valuation() < 0)
        throw std::invalid_argument("shift_to_family needs v(x(P)) >= 0");

    WeierstrassModel S = W;
    PS y0 = P.Y;
    if (!P.X.agrees_with(PS::zero())) {
        CoordinateChange shift{PS::constant(1), P.X, PS::zero(), PS::zero()};
        S = apply_change(W, shift);
    }
    if (shifted_out) *shifted_out = S;

    // quadratic part a2 x^2 + a4 x + a6 must be a (x - b)^2
    PS disc = S.a4 * S.a4 - Rational(4) * (S.a2 * S.a6);
    if (!disc.terms().empty())
        throw DiscriminantNotZero("b4^2 - 4 b2 b6 = " + disc.str() + "; the marked point is not the inflection point");

    FamilyForm fam;
    fam.provenance = FamilyForm::Provenance::Derived;
    fam.a = S.a2;
    if (!valuation_is_unit(fam.a))
        throw DiscriminantNotZero("family parameter a must have valuation 0, got " + fam.a.str());
    fam.b = Rational(-1, 2) * (S.a4 * invert(fam.a));
    if (fam.b.terms().empty())
        throw IndeterminateValuation("family parameter b has no determinate term");
    if (!(fam.b.finite_valuation() > 0))
        throw DiscriminantNotZero("family parameter b must have positive valuation, got " + fam.b.str());
    if (!S.a6.agrees_with(fam.a * fam.b * fam.b))
        throw std::logic_error("family extraction failed: a6 != a b^2");

    // a_sqrt = y(P)/b makes P = (0, a_sqrt b) hold by construction
    fam.a_sqrt = y0 * invert(fam.b);
    if (!(fam.a_sqrt * fam.a_sqrt).agrees_with(fam.a))
        throw std::logic_error("family extraction failed: (y(P)/b)^2 != a");
    return fam;
}

LaurentPolynomial embedding_equation(const FamilyForm& fam) {
    LaurentPolynomial L;
    L.vars = {"f", "g"};
    L.terms[{2, 1}] = PS::constant(1);
    L.terms[{1, 1}] = Rational(2) * fam.a_sqrt;
    L.terms[{1, 2}] = PS::constant(-1);
    L.terms[{0, 0}] = Rational(-2) * (fam.a_sqrt * fam.b);
    return L;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

// v(-256 a (a+6b)^3) - v(4 a b^3 + 27 b^4), the j-valuation of the family.
ExtRat family_vj(const FamilyForm& fam) {
    PS numer = Rational(-256) * (fam.a * (fam.a + Rational(6) * fam.b).pow(3));
    PS denom = Rational(4) * (fam.a * fam.b.pow(3)) + Rational(27) * fam.b.pow(4);
    ExtRat vn = numer.valuation();
    ExtRat vd = denom.valuation();
    if (vn.is_infinite() || vd.is_infinite()) throw SingularModel("family j-invariant undefined");
    return ExtRat(vn.finite() - vd.finite());
}

bool cells_unimodular(const DualSubdivision& sub) {
    if (sub.dimension != 2) return false;
    for (const auto& cell : sub.cells) {
        if (cell.polygon.size() != 3) return false;
        const auto& p = cell.polygon;
        long det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]);
        if (det != 1 && det != -1) return false;
    }
    return true;
}

// Temporarily raises the global truncation cutoff.
class PrecisionScope {
public:
    explicit PrecisionScope(const Rational& p) : saved_(default_precision()) { set_default_precision(p); }
    ~PrecisionScope() { set_default_precision(saved_); }

private:
    Rational saved_;
};

// Runs the pipeline after reduction type is known to be multiplicative.
// W_family is a minimal model with a1 = a3 = 0; P its marked 3-torsion point.
void finish_certificate(FaithfulReport& rep, const WeierstrassModel& W_family, const ProjectivePoint& P,
                        std::optional<FamilyForm> user_family, const char** stage) {
    *stage = "torsion-check";
    ReducedPoint red = reduce_point(P, W_family);
    if (red.kind == ReducedKind::Identity)
        throw std::logic_error("marked point reduces to the identity; E_1(K)[3] = 0 forbids this");
    if (red.kind != ReducedKind::Singular)
        throw std::logic_error("marked point does not reduce to the node");
    rep.torsion = P;

    *stage = "shift";
    FamilyForm fam;
    WeierstrassModel shifted;
    if (user_family) {
        fam = *user_family;
        shifted = W_family;
    } else {
        fam = shift_to_family(W_family, P, &shifted);
    }
    rep.family = fam;

    // inflection certificate: (y - a'(x-b))(y + a'(x-b)) = x^3 on the
    // shifted model, i.e. y^2 - a(x-b)^2 - x^3 = 0 coefficientwise
    *stage = "inflection-certificate";
    {
        const PS& a = fam.a;
        const PS& b = fam.b;
        PS q2 = shifted.a2 - a;
        PS q1 = shifted.a4 + Rational(2) * (a * b);
        PS q0 = shifted.a6 - a * (b * b);
        if (!q2.terms().empty() || !q1.terms().empty() || !q0.terms().empty())
            throw std::logic_error("shifted model is not y^2 = x^3 + a(x-b)^2");
        if (!(fam.a_sqrt * fam.a_sqrt).agrees_with(a))
            throw std::logic_error("a_sqrt^2 != a");
    }

    // j-invariance across the transformations, as full truncated series
    *stage = "j-invariance";
    {
        PS j_in = invariants(rep.input).j;
        PS j_shift = invariants(shifted).j;
        if (!j_in.agrees_with(j_shift)) throw std::logic_error("j changed under coordinate changes");
        if (rep.minimal) {
            PS j_min = invariants(*rep.minimal).j;
            if (!j_in.agrees_with(j_min)) throw std::logic_error("j changed under minimalization");
        }
    }

    *stage = "embedding";
    rep.embedding = embedding_equation(fam);
    *stage = "tropicalize";
    rep.trop = tropicalize(*rep.embedding);
    *stage = "curve";
    rep.curve = curve_of(*rep.trop);
    rep.subdivision_unimodular = cells_unimodular(rep.curve->subdivision);
    *stage = "cycle";
    rep.cycle = find_cycle(*rep.curve);
    if (!rep.cycle) throw std::logic_error("multiplicative certification produced no cycle");

    *stage = "j-valuation";
    const ExtRat vj_formula = family_vj(fam);
    if (rep.v_j != vj_formula)
        throw std::logic_error("v(j) from invariants (" + rep.v_j.str() + ") and from the family formula (" +
                               vj_formula.str() + ") disagree");
    rep.v_b = fam.b.finite_valuation();
    const Rational cycle_len = rep.cycle->total_lattice_length;
    if (cycle_len != Rational(3) * *rep.v_b)
        throw std::logic_error("cycle length != 3 v(b)");
    rep.verdict = !rep.v_j.is_infinite() && cycle_len == -rep.v_j.finite();
}

FaithfulReport certify_attempt(const WeierstrassModel& W, const Rational& precision) {
    PrecisionScope scope(precision);
    const char* stage = "setup";
    try {
        FaithfulReport rep;
        rep.mode = "general";
        rep.input = W;

        stage = "integrality";
        if (!is_integral(W)) throw NonIntegralInput();

        stage = "invariants";
        rep.v_j = valuation_of_j(W);

        stage = "minimalize";
        auto [M, change] = minimalize(W);

        stage = "normalize";
        // complete the square so the torsion machinery sees y^2 = x^3 + ...
        WeierstrassModel M2 = M;
        if (!M.a1.agrees_with(PS::zero()) || !M.a3.agrees_with(PS::zero())) {
            CoordinateChange cc{PS::constant(1), PS::zero(), Rational(-1, 2) * M.a1,
                                Rational(-1, 2) * M.a3};
            M2 = apply_change(M, cc);
        }
        rep.minimal = M2;

        stage = "classify";
        const ReductionInfo info = classify_reduction(M2);
        rep.reduction = info.type;
        rep.node = info.singular_point;
        if (info.type == Reduction::Additive)
            throw std::logic_error("additive reduction for a minimal model over this field");
        if (info.type != Reduction::Multiplicative) return rep;  // good reduction: nothing to certify

        stage = "torsion";
        ProjectivePoint P = find_three_torsion(M2, precision);

        finish_certificate(rep, M2, P, std::nullopt, &stage);
        return rep;
    } catch (const IndeterminateValuation&) {
        throw;
    } catch (const PrecisionExhausted&) {
        throw;
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(stage, e.what());
    }
}

FaithfulReport certify_family_attempt(const PS& a, const PS& b, const Rational& precision) {
    PrecisionScope scope(precision);
    const char* stage = "family-setup";
    try {
        if (!valuation_is_unit(a))
            throw std::invalid_argument("family parameter a must have v(a) = 0");
        if (b.terms().empty())
            throw std::invalid_argument("family parameter b must be a nonzero series");
        if (!(b.finite_valuation() > 0))
            throw std::invalid_argument("family parameter b must have v(b) > 0");

        FamilyForm fam;
        fam.provenance = FamilyForm::Provenance::UserSupplied;
        fam.a = a;
        fam.a_sqrt = sqrt(a);  // positive-leading branch; may throw NonSquareLeadingCoefficient
        fam.b = b;

        FaithfulReport rep;
        rep.mode = "family";
        rep.input = WeierstrassModel{PS::zero(), a, PS::zero(), Rational(-2) * (a * b), a * (b * b)};

        stage = "invariants";
        rep.v_j = valuation_of_j(rep.input);
        stage = "minimality";
        if (!is_minimal(rep.input)) throw std::logic_error("family model should be minimal");
        rep.minimal = rep.input;
        stage = "classify";
        const ReductionInfo info = classify_reduction(rep.input);
        rep.reduction = info.type;
        rep.node = info.singular_point;
        if (info.type != Reduction::Multiplicative) return rep;

        ProjectivePoint P = ProjectivePoint::affine(PS::zero(), fam.a_sqrt * fam.b);
        finish_certificate(rep, rep.input, P, fam, &stage);
        return rep;
    } catch (const IndeterminateValuation&) {
        throw;
    } catch (const PrecisionExhausted&) {
        throw;
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(stage, e.what());
    }
}

template <typename Attempt>
FaithfulReport with_precision_retry(const Rational& precision, Attempt attempt) {
    Rational p = precision;
    for (int tries = 0;; ++tries) {
        try {
            return attempt(p);
        } catch (const IndeterminateValuation&) {
            if (tries >= 3) throw;
        } catch (const PrecisionExhausted&) {
            if (tries >= 3) throw;
        }
        p *= 2;
    }
}

}  // namespace

FaithfulReport certify(const WeierstrassModel& W, const Rational& precision) {
    return with_precision_retry(precision, [&](const Rational& p) { return certify_attempt(W, p); });
}

FaithfulReport certify_family(const PS& a, const PS& b, const Rational& precision) {
    return with_precision_retry(precision,
                                [&](const Rational& p) { return certify_family_attempt(a, b, p); });
}

SampleStats sample_check(FaithfulReport& report, int num_samples, std::uint64_t seed) {
    if (!report.family || !report.curve || !report.embedding)
        throw std::invalid_argument("sample_check needs a completed certificate");
    SampleStats st;
    st.requested = num_samples;
    std::mt19937_64 rng(seed);
    auto draw = [&](long lo, long hi) {  // inclusive
        return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    const Rational vb = *report.v_b;
    const long window_num = to_long_checked(ceil(vb)) + 3;

    for (int it = 0; it < num_samples; ++it) {
        const long den = draw(1, 4);
        Rational q(draw(-3 * den, window_num * den), den);
        q.canonicalize();
        long cn = 0;
        while (cn == 0) cn = draw(-6, 6);
        Rational c(cn, draw(1, 3));
        c.canonicalize();
        const PS f = PS::monomial(c, q);

        // embedding equation as a polynomial in g
        std::vector<PS> coeffs;
        for (const auto& [e, coef] : report.embedding->terms) {
            const long gdeg = e[1];
            if (static_cast<long>(coeffs.size()) <= gdeg) coeffs.resize(gdeg + 1, PS::zero());
            coeffs[gdeg] += coef * f.pow(e[0]);
        }
        try {
            RootsResult rs = roots(UnivariatePolynomial{coeffs}, default_precision());
            for (const auto& sol : rs.roots) {
                ++st.resolved;
                const PlanePoint pt{q, sol.root.finite_valuation()};
                if (contains_point(*report.curve, pt))
                    ++st.passed;
                else
                    st.ok = false;
            }
            st.unresolved += static_cast<int>(rs.unresolved_degree());
        } catch (const PrecisionExhausted&) {
            st.unresolved += 2;  // quadratic in g: the whole sample is unresolved
        }
    }
    report.samples = st;
    return st;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::ordered_json series_json(const PS& s) {
    nlohmann::ordered_json j;
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [e, c] : s.terms()) terms.push_back({to_string(e), to_string(c)});
    j["terms"] = std::move(terms);
    j["precision"] = s.precision().is_infinite() ? nlohmann::ordered_json(nullptr)
                                                 : nlohmann::ordered_json(to_string(s.precision().finite()));
    return j;
}

nlohmann::ordered_json model_json(const WeierstrassModel& W) {
    nlohmann::ordered_json j;
    j["a1"] = series_json(W.a1);
    j["a2"] = series_json(W.a2);
    j["a3"] = series_json(W.a3);
    j["a4"] = series_json(W.a4);
    j["a6"] = series_json(W.a6);
    return j;
}

}  // namespace

nlohmann::ordered_json to_json(const FaithfulReport& rep) {
    nlohmann::ordered_json j;
    j["mode"] = rep.mode;
    j["input_model"] = model_json(rep.input);
    j["v_j"] = rep.v_j.str();
    j["minimal_model"] = rep.minimal ? model_json(*rep.minimal) : nlohmann::ordered_json(nullptr);
    j["reduction"] = reduction_name(rep.reduction);
    j["node"] = rep.node ? nlohmann::ordered_json({to_string((*rep.node)[0]), to_string((*rep.node)[1])})
                         : nlohmann::ordered_json(nullptr);
    if (rep.torsion) {
        nlohmann::ordered_json p;
        p["x"] = series_json(rep.torsion->X);
        p["y"] = series_json(rep.torsion->Y);
        j["torsion_point"] = std::move(p);
    } else {
        j["torsion_point"] = nullptr;
    }
    if (rep.family) {
        nlohmann::ordered_json fj;
        fj["a"] = series_json(rep.family->a);
        fj["a_sqrt"] = series_json(rep.family->a_sqrt);
        fj["b"] = series_json(rep.family->b);
        fj["provenance"] =
            rep.family->provenance == FamilyForm::Provenance::UserSupplied ? "user" : "derived";
        j["family"] = std::move(fj);
    } else {
        j["family"] = nullptr;
    }
    if (rep.embedding) {
        nlohmann::ordered_json ej;
        ej["vars"] = rep.embedding->vars;
        auto terms = nlohmann::ordered_json::array();
        for (const auto& [e, c] : rep.embedding->terms) terms.push_back({e, series_json(c)});
        ej["terms"] = std::move(terms);
        j["embedding"] = std::move(ej);
    } else {
        j["embedding"] = nullptr;
    }
    j["tropical"] = rep.trop ? to_json(*rep.trop) : nlohmann::ordered_json(nullptr);
    j["curve"] = rep.curve ? to_json(*rep.curve) : nlohmann::ordered_json(nullptr);
    if (rep.cycle) {
        nlohmann::ordered_json cj;
        cj["edges"] = rep.cycle->edges;
        cj["length"] = to_string(rep.cycle->total_lattice_length);
        j["cycle"] = std::move(cj);
    } else {
        j["cycle"] = nullptr;
    }
    j["v_b"] = rep.v_b ? nlohmann::ordered_json(to_string(*rep.v_b)) : nlohmann::ordered_json(nullptr);
    j["minus_v_j"] = rep.v_j.is_infinite() ? nlohmann::ordered_json(nullptr)
                                           : nlohmann::ordered_json(to_string(-rep.v_j.finite()));
    j["cycle_length"] = rep.cycle ? nlohmann::ordered_json(to_string(rep.cycle->total_lattice_length))
                                  : nlohmann::ordered_json(nullptr);
    j["verdict"] = rep.verdict;
    j["subdivision_unimodular"] = rep.subdivision_unimodular;
    if (rep.samples) {
        nlohmann::ordered_json sj;
        sj["requested"] = rep.samples->requested;
        sj["resolved"] = rep.samples->resolved;
        sj["passed"] = rep.samples->passed;
        sj["unresolved"] = rep.samples->unresolved;
        sj["ok"] = rep.samples->ok;
        j["samples"] = std::move(sj);
    } else {
        j["samples"] = nullptr;
    }
    return j;
}

}  // namespace tropell
