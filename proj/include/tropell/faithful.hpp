#pragma once

#include <cstdint>
#include <optional>

#include "tropell/newton_puiseux.hpp"
#include "tropell/plane_curve.hpp"
#include "tropell/weierstrass.hpp"

namespace tropell {

// y^2 = x^3 + a (x - b)^2 with v(a) = 0 and v(b) > 0; a_sqrt^2 = a and the
// marked torsion point is P = (0, a_sqrt * b).
struct FamilyForm {
    PuiseuxSeries a, a_sqrt, b;
    enum class Provenance { UserSupplied, Derived } provenance = Provenance::UserSupplied;
};

struct SampleStats {
    int requested = 0;
    int resolved = 0;
    int passed = 0;
    int unresolved = 0;
    bool ok = true;  // every resolved sample lies on the curve
};

// End-to-end certificate of the numerically faithful tropicalization.
struct FaithfulReport {
    std::string mode;  // "family" | "general"
    WeierstrassModel input;
    ExtRat v_j;  // of the input model
    std::optional<WeierstrassModel> minimal;
    Reduction reduction = Reduction::Good;
    std::optional<std::array<Rational, 2>> node;
    std::optional<ProjectivePoint> torsion;
    std::optional<FamilyForm> family;
    std::optional<LaurentPolynomial> embedding;
    std::optional<TropicalPolynomial> trop;
    std::optional<TropicalPlaneCurve> curve;
    std::optional<CycleReport> cycle;
    std::optional<Rational> v_b;
    bool verdict = false;  // cycle lattice length == -v(j)
    bool subdivision_unimodular = false;
    std::optional<SampleStats> samples;

    bool multiplicative() const { return reduction == Reduction::Multiplicative; }
};

// The x-coordinates of nontrivial 3-torsion points are the roots of
// psi3 = 3 x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8.
UnivariatePolynomial three_division_polynomial(const WeierstrassModel& W);

// A 3-torsion point of the minimal model W reducing to the node. Among the
// qualifying psi3 roots the one with smallest ramification, then smallest
// term order, is chosen; the y branch with positive leading coefficient is
// preferred. Throws NoRationalBranch when every qualifying root needs
// irrational residue arithmetic.
ProjectivePoint find_three_torsion(const WeierstrassModel& W, const Rational& precision);

// Shifts x by x(P), checks b4^2 - 4 b2 b6 = 0 and extracts (a, b); if
// shifted_out is non-null the shifted model is stored there.
FamilyForm shift_to_family(const WeierstrassModel& W, const ProjectivePoint& P,
                           WeierstrassModel* shifted_out = nullptr);

// f^2 g + 2 a' f g - f g^2 - 2 a' b in the variables f, g.
LaurentPolynomial embedding_equation(const FamilyForm& fam);

// Full pipeline on an integral model; retries internally with doubled
// precision when a stage runs out of terms.
FaithfulReport certify(const WeierstrassModel& W, const Rational& precision);

// Family mode: the model y^2 = x^3 + a (x - b)^2 built from user (a, b).
FaithfulReport certify_family(const PuiseuxSeries& a, const PuiseuxSeries& b, const Rational& precision);

// Fundamental-theorem sampling: solves the embedding equation at f = c t^q
// for seeded random (c, q) and checks val-images against the curve. Stores
// the statistics in the report as well.
SampleStats sample_check(FaithfulReport& report, int num_samples, std::uint64_t seed);

nlohmann::ordered_json to_json(const FaithfulReport& report);

}  // namespace tropell
