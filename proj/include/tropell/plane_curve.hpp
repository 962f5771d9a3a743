#pragma once

#include <array>
#include <optional>

#include "tropell/tropical.hpp"

namespace tropell {

using LatticePoint = std::array<long, 2>;
using PlanePoint = std::array<Rational, 2>;

// One cell of the regular subdivision of the Newton polygon induced by the
// lower hull of the lifted points (exponent, coefficient).
struct SubdivisionCell {
    std::vector<LatticePoint> polygon;  // extreme points, counterclockwise;
                                        // size 1: point, 2: segment, >=3: 2-cell
    std::vector<LatticePoint> terms;    // all support points lying on the cell's lift
    std::array<Rational, 3> plane;      // lift = a*x + b*y + c over the cell (2-cells)
};

struct DualSubdivision {
    std::vector<SubdivisionCell> cells;
    std::vector<LatticePoint> support;
    std::vector<LatticePoint> newton_polygon;  // hull of the support, ccw
    int dimension;                             // affine dimension of the support: 0, 1, 2
};

// Regular subdivision dual to the tropical curve. Ties in the lower hull
// are kept as polygonal cells, never triangulated.
DualSubdivision dual_subdivision(const TropicalPolynomial& F);

struct CurveEdge {
    int v0, v1;
    std::array<long, 2> dir;  // primitive, points from v0 to v1
    Rational length;          // lattice length
    long weight;              // lattice length of the dual subdivision edge
    std::array<LatticePoint, 2> dual;
};

struct CurveRay {
    int vertex;
    std::array<long, 2> dir;  // primitive
    long weight;
    std::array<LatticePoint, 2> dual;  // boundary edge of the Newton polygon
};

// Corner locus of a bivariate min-plus polynomial as a Gamma-rational
// one-dimensional polyhedral complex. For one-dimensional Newton polygons
// the locus is a union of full lines; each is emitted as two opposite rays
// from a synthetic base vertex (flagged in vertex_synthetic).
struct TropicalPlaneCurve {
    std::vector<PlanePoint> vertices;
    std::vector<CurveEdge> bounded_edges;
    std::vector<CurveRay> rays;
    std::vector<bool> vertex_synthetic;
    DualSubdivision subdivision;
};

TropicalPlaneCurve curve_of(const TropicalPolynomial& F);

// lambda > 0 with q - p = lambda * (primitive integer vector).
Rational lattice_length(const PlanePoint& p, const PlanePoint& q);

struct CycleReport {
    std::vector<int> edges;  // indices into bounded_edges, in cycle order
    Rational total_lattice_length;
};

// Prunes leaves from the bounded part; returns the remaining cycle, none
// for a tree, throws MultipleCycles when the Betti number is >= 2.
std::optional<CycleReport> find_cycle(const TropicalPlaneCurve& C);

// Exact incidence test against vertices, bounded edges and rays.
bool contains_point(const TropicalPlaneCurve& C, const PlanePoint& p);

nlohmann::ordered_json to_json(const TropicalPlaneCurve& C);

}  // namespace tropell
