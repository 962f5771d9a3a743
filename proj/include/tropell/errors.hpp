#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tropell {

struct IndeterminateValuation : std::runtime_error {
    explicit IndeterminateValuation(const std::string& what = "valuation indeterminate: precision exhausted")
        : std::runtime_error(what) {}
};

struct DivisionByZero : std::runtime_error {
    explicit DivisionByZero(const std::string& what = "division by the exact zero series")
        : std::runtime_error(what) {}
};

struct NonSquareLeadingCoefficient : std::runtime_error {
    explicit NonSquareLeadingCoefficient(const std::string& what)
        : std::runtime_error(what) {}
};

struct NegativeValuation : std::runtime_error {
    explicit NegativeValuation(const std::string& what = "residue of a series with negative valuation")
        : std::runtime_error(what) {}
};

struct PrecisionExhausted : std::runtime_error {
    explicit PrecisionExhausted(const std::string& what)
        : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct SingularModel : std::runtime_error {
    explicit SingularModel(const std::string& what = "discriminant is exactly zero")
        : std::runtime_error(what) {}
};

struct NonIntegralInput : std::runtime_error {
    explicit NonIntegralInput(const std::string& what = "model coefficients must have nonnegative valuation")
        : std::runtime_error(what) {}
};

struct ZeroScaling : std::runtime_error {
    explicit ZeroScaling(const std::string& what = "coordinate change with u = 0")
        : std::runtime_error(what) {}
};

struct NotMinimal : std::runtime_error {
    explicit NotMinimal(const std::string& what = "operation requires a minimal model")
        : std::runtime_error(what) {}
};

struct NotOnCurve : std::runtime_error {
    explicit NotOnCurve(const std::string& what = "point does not satisfy the curve equation")
        : std::runtime_error(what) {}
};

struct DiscriminantNotZero : std::runtime_error {
    explicit DiscriminantNotZero(const std::string& what)
        : std::runtime_error(what) {}
};

struct NoRationalBranch : std::runtime_error {
    explicit NoRationalBranch(const std::string& what)
        : std::runtime_error(what) {}
};

struct DegenerateInput : std::runtime_error {
    explicit DegenerateInput(const std::string& what)
        : std::runtime_error(what) {}
};

struct ZeroLengthEdge : std::runtime_error {
    explicit ZeroLengthEdge(const std::string& what = "edge endpoints coincide")
        : std::runtime_error(what) {}
};

struct MultipleCycles : std::runtime_error {
    explicit MultipleCycles(const std::string& what = "bounded subgraph has first Betti number >= 2")
        : std::runtime_error(what) {}
};

// Wraps a failure from one stage of the certification pipeline so the CLI
// can say where it happened.
struct PipelineError : std::runtime_error {
    std::string stage;
    PipelineError(const std::string& stage_, const std::string& what)
        : std::runtime_error("[" + stage_ + "] " + what), stage(stage_) {}
};

}  // namespace tropell
