#pragma once

#include <array>
#include <optional>

#include "tropell/puiseux.hpp"

#include "json.hpp"

namespace tropell {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over the Puiseux field.
struct WeierstrassModel {
    PuiseuxSeries a1, a2, a3, a4, a6;

    static WeierstrassModel short_form(const PuiseuxSeries& A, const PuiseuxSeries& B) {
        return {PuiseuxSeries::zero(), PuiseuxSeries::zero(), PuiseuxSeries::zero(), A, B};
    }
    std::string str() const;
};

struct StandardInvariants {
    PuiseuxSeries b2, b4, b6, b8, c4, c6, delta, j;
};

// x = u^2 x' + r,  y = u^3 y' + u^2 s x' + t.
struct CoordinateChange {
    PuiseuxSeries u, r, s, t;

    static CoordinateChange identity() {
        return {PuiseuxSeries::constant(1), PuiseuxSeries::zero(), PuiseuxSeries::zero(),
                PuiseuxSeries::zero()};
    }
    // first `this`, then `next` (applied to the primed coordinates).
    CoordinateChange then(const CoordinateChange& next) const;
};

enum class Reduction { Good, Multiplicative, Additive };

std::string reduction_name(Reduction r);  // "good" | "mult" | "add"

struct ReductionInfo {
    Reduction type;
    std::optional<std::array<Rational, 2>> singular_point;  // absent iff Good
};

struct ProjectivePoint {
    PuiseuxSeries X, Y, Z;

    static ProjectivePoint affine(const PuiseuxSeries& x, const PuiseuxSeries& y) {
        return {x, y, PuiseuxSeries::constant(1)};
    }
    static ProjectivePoint infinity() {
        return {PuiseuxSeries::zero(), PuiseuxSeries::constant(1), PuiseuxSeries::zero()};
    }
};

enum class ReducedKind { Identity, Singular, Smooth };

struct ReducedPoint {
    std::array<Rational, 3> xyz;  // scaled so the minimum coordinate valuation is 0
    ReducedKind kind;
};

// b2 = a1^2 + 4 a2, b4 = 2 a4 + a1 a3, b6 = a3^2 + 4 a6,
// b8 = (b2 b6 - b4^2)/4, c4 = b2^2 - 24 b4, c6 = -b2^3 + 36 b2 b4 - 216 b6,
// delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6, j = c4^3 / delta.
// The identity c4^3 - c6^2 = 1728 delta is asserted on every call.
StandardInvariants invariants(const WeierstrassModel& W);

bool is_integral(const WeierstrassModel& W);

// Criterion: min{v(c4), v(c6)} = 0.
bool is_minimal(const WeierstrassModel& W);

// Returns a minimal integral model together with the coordinate change that
// produced it. Prefers scaling the input model directly by u = t^m with
// m = min{v(c4)/4, v(c6)/6}; falls back to the short-form normalization
// y^2 = x^3 - 27 c4 x - 54 c6 when direct scaling would break integrality.
std::pair<WeierstrassModel, CoordinateChange> minimalize(const WeierstrassModel& W);

// Transformed coefficients per the standard tables; u^12 delta' = delta is
// asserted.
WeierstrassModel apply_change(const WeierstrassModel& W, const CoordinateChange& c);

// Good / Multiplicative / Additive with the singular point of the reduced
// curve when not Good. Requires a minimal model.
ReductionInfo classify_reduction(const WeierstrassModel& W);

// Checks the equivalences (Good <=> v(j) >= 0), (Multiplicative <=> v(j) < 0)
// and that the verdict is never Additive.
bool reduction_consistency(const WeierstrassModel& W);

// Scales the coordinates so the minimum valuation is 0 and reduces them.
// Requires P to satisfy the curve equation (to the available precision).
ReducedPoint reduce_point(const ProjectivePoint& P, const WeierstrassModel& W);

// valuation of j = 3 v(c4) - v(delta), computed without series inversion;
// +inf when c4 = 0 exactly (j = 0).
ExtRat valuation_of_j(const WeierstrassModel& W);

// Model literal "[a1,a2,a3,a4,a6]" with Puiseux entries.
WeierstrassModel parse_model(const std::string& text);

nlohmann::ordered_json reduction_report(const WeierstrassModel& input);

}  // namespace tropell
