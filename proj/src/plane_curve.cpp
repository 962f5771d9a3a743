#include "tropell/plane_curve.hpp"

#include <algorithm>
#include <map>

namespace tropell {

namespace {

long cross2(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Counterclockwise convex hull, extreme points only (collinear points dropped).
std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<LatticePoint> lo, hi;
    for (const auto& p : pts) {
        while (lo.size() >= 2 && cross2(lo[lo.size() - 2], lo.back(), p) <= 0) lo.pop_back();
        lo.push_back(p);
    }
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (hi.size() >= 2 && cross2(hi[hi.size() - 2], hi.back(), *it) <= 0) hi.pop_back();
        hi.push_back(*it);
    }
    lo.pop_back();
    hi.pop_back();
    lo.insert(lo.end(), hi.begin(), hi.end());
    return lo;  // ccw
}

int affine_dimension(const std::vector<LatticePoint>& pts) {
    if (pts.size() <= 1) return 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (cross2(pts[0], pts[i], pts[j]) != 0) return 2;
    return 1;
}

long lgcd(long a, long b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::array<long, 2> primitive(long dx, long dy) {
    long g = lgcd(dx, dy);
    if (g == 0) throw ZeroLengthEdge();
    return {dx / g, dy / g};
}

long segment_lattice_length(const LatticePoint& a, const LatticePoint& b) {
    return lgcd(b[0] - a[0], b[1] - a[1]);
}

}  // namespace

DualSubdivision dual_subdivision(const TropicalPolynomial& F) {
    if (F.terms.empty()) throw DegenerateInput("dual_subdivision: no terms");
    if (!F.terms.empty() && F.terms.begin()->first.size() != 2)
        throw DegenerateInput("dual_subdivision: polynomial must be bivariate");

    DualSubdivision sub;
    std::map<LatticePoint, Rational> lift;
    for (const auto& [e, c] : F.terms) {
        LatticePoint p{e[0], e[1]};
        sub.support.push_back(p);
        lift.emplace(p, c);
    }
    sub.newton_polygon = convex_hull(sub.support);
    sub.dimension = affine_dimension(sub.support);

    if (sub.dimension == 0) {
        sub.cells.push_back({{sub.support[0]}, {sub.support[0]}, {}});
        return sub;
    }

    if (sub.dimension == 1) {
        // project the support onto its line and take the 1D lower hull
        LatticePoint base = *std::min_element(sub.support.begin(), sub.support.end());
        LatticePoint far = *std::max_element(sub.support.begin(), sub.support.end());
        auto dir = primitive(far[0] - base[0], far[1] - base[1]);
        std::vector<std::pair<long, LatticePoint>> param;  // (k, point) with point = base + k*dir
        for (const auto& p : sub.support) {
            long k = dir[0] != 0 ? (p[0] - base[0]) / dir[0] : (p[1] - base[1]) / dir[1];
            param.emplace_back(k, p);
        }
        std::sort(param.begin(), param.end());
        // lower hull of (k, lift)
        std::vector<std::pair<long, LatticePoint>> hull;
        auto above = [&](const std::pair<long, LatticePoint>& a, const std::pair<long, LatticePoint>& b,
                         const std::pair<long, LatticePoint>& c) {
            // true iff c is on or below the line ab
            return Rational(b.first - a.first) * (lift.at(c.second) - lift.at(a.second)) -
                       (lift.at(b.second) - lift.at(a.second)) * Rational(c.first - a.first) <=
                   0;
        };
        for (const auto& p : param) {
            while (hull.size() >= 2 && above(hull[hull.size() - 2], hull.back(), p)) hull.pop_back();
            hull.push_back(p);
        }
        for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
            SubdivisionCell cell;
            cell.polygon = {hull[k].second, hull[k + 1].second};
            for (const auto& [kk, p] : param) {
                if (kk < hull[k].first || kk > hull[k + 1].first) continue;
                Rational t = Rational(kk - hull[k].first) / Rational(hull[k + 1].first - hull[k].first);
                Rational on = lift.at(hull[k].second) +
                              t * (lift.at(hull[k + 1].second) - lift.at(hull[k].second));
                if (lift.at(p) == on) cell.terms.push_back(p);
            }
            sub.cells.push_back(std::move(cell));
        }
        return sub;
    }

    // Full-dimensional case: every 2-cell's supporting plane passes through
    // three non-collinear lifted points, so enumerating triples finds all
    // lower faces. Supports are small; O(n^4) is fine.
    const auto& pts = sub.support;
    std::map<std::vector<LatticePoint>, SubdivisionCell> cells;
    const long n = static_cast<long>(pts.size());
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j)
            for (long k = j + 1; k < n; ++k) {
                Rational det = Rational(cross2(pts[i], pts[j], pts[k]));
                if (det == 0) continue;
                // plane z = a x + b y + c through the three lifted points
                const Rational zi = lift.at(pts[i]), zj = lift.at(pts[j]), zk = lift.at(pts[k]);
                Rational a = ((zj - zi) * Rational(pts[k][1] - pts[i][1]) -
                              (zk - zi) * Rational(pts[j][1] - pts[i][1])) /
                             det;
                Rational b = (Rational(pts[j][0] - pts[i][0]) * (zk - zi) -
                              Rational(pts[k][0] - pts[i][0]) * (zj - zi)) /
                             det;
                Rational c = zi - a * Rational(pts[i][0]) - b * Rational(pts[i][1]);
                bool lower = true;
                std::vector<LatticePoint> on;
                for (long m = 0; m < n && lower; ++m) {
                    Rational h = a * Rational(pts[m][0]) + b * Rational(pts[m][1]) + c;
                    if (lift.at(pts[m]) < h)
                        lower = false;
                    else if (lift.at(pts[m]) == h)
                        on.push_back(pts[m]);
                }
                if (!lower) continue;
                std::sort(on.begin(), on.end());
                if (cells.count(on)) continue;
                SubdivisionCell cell;
                cell.terms = on;
                cell.polygon = convex_hull(on);
                cell.plane = {a, b, c};
                cells.emplace(std::move(on), std::move(cell));
            }
    for (auto& [key, cell] : cells) sub.cells.push_back(std::move(cell));
    return sub;
}

namespace {

// Solves for the point where all of the cell's terms are minimal
// simultaneously; the system is overdetermined for cells with more than
// three terms and consistency is asserted.
PlanePoint cell_vertex(const SubdivisionCell& cell, const TropicalPolynomial& F) {
    const auto coeff = [&](const LatticePoint& p) {
        return F.terms.at(ExpVec{p[0], p[1]});
    };
    const LatticePoint& t0 = cell.terms.front();
    // rows: <t - t0, p> = c(t0) - c(t)
    std::vector<std::array<Rational, 3>> rows;
    for (std::size_t i = 1; i < cell.terms.size(); ++i) {
        const LatticePoint& t = cell.terms[i];
        rows.push_back({Rational(t[0] - t0[0]), Rational(t[1] - t0[1]), coeff(t0) - coeff(t)});
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            Rational det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0];
            if (det == 0) continue;
            Rational x = (rows[i][2] * rows[j][1] - rows[i][1] * rows[j][2]) / det;
            Rational y = (rows[i][0] * rows[j][2] - rows[j][0] * rows[i][2]) / det;
            for (const auto& r : rows)
                if (r[0] * x + r[1] * y != r[2])
                    throw std::logic_error("cell vertex system is inconsistent");
            return {x, y};
        }
    throw std::logic_error("cell terms do not span two dimensions");
}

bool on_segment(const PlanePoint& p, const PlanePoint& a, const PlanePoint& b) {
    const Rational dx = b[0] - a[0], dy = b[1] - a[1];
    const Rational px = p[0] - a[0], py = p[1] - a[1];
    if (dx * py - dy * px != 0) return false;
    const Rational dot = px * dx + py * dy;
    return dot >= 0 && dot <= dx * dx + dy * dy;
}

bool on_ray(const PlanePoint& p, const PlanePoint& base, const std::array<long, 2>& dir) {
    const Rational px = p[0] - base[0], py = p[1] - base[1];
    if (Rational(dir[0]) * py - Rational(dir[1]) * px != 0) return false;
    return px * Rational(dir[0]) + py * Rational(dir[1]) >= 0;
}

}  // namespace

TropicalPlaneCurve curve_of(const TropicalPolynomial& F) {
    if (F.terms.size() < 2) throw DegenerateInput("curve_of: needs at least two terms");
    TropicalPlaneCurve C;
    C.subdivision = dual_subdivision(F);
    const DualSubdivision& sub = C.subdivision;

    if (sub.dimension == 1) {
        // Each 1-cell is dual to a full line; represent it as two opposite
        // rays from a synthetic base point on the line.
        for (const auto& cell : sub.cells) {
            const LatticePoint& e0 = cell.polygon[0];
            const LatticePoint& e1 = cell.polygon[1];
            const long wx = e1[0] - e0[0], wy = e1[1] - e0[1];
            const Rational h = F.terms.at(ExpVec{e0[0], e0[1]}) - F.terms.at(ExpVec{e1[0], e1[1]});
            // line <w, p> = h
            PlanePoint base = wy != 0 ? PlanePoint{Rational(0), h / Rational(wy)}
                                      : PlanePoint{h / Rational(wx), Rational(0)};
            auto d = primitive(-wy, wx);
            const long weight = segment_lattice_length(e0, e1);
            const int v = static_cast<int>(C.vertices.size());
            C.vertices.push_back(base);
            C.vertex_synthetic.push_back(true);
            C.rays.push_back({v, d, weight, {e0, e1}});
            C.rays.push_back({v, {-d[0], -d[1]}, weight, {e0, e1}});
        }
        return C;
    }

    // vertices dual to 2-cells
    for (const auto& cell : sub.cells) {
        C.vertices.push_back(cell_vertex(cell, F));
        C.vertex_synthetic.push_back(false);
    }

    // subdivision edges: cell boundary segments, keyed canonically
    std::map<std::array<LatticePoint, 2>, std::vector<int>> edge_cells;
    for (std::size_t ci = 0; ci < sub.cells.size(); ++ci) {
        const auto& poly = sub.cells[ci].polygon;
        for (std::size_t k = 0; k < poly.size(); ++k) {
            LatticePoint a = poly[k], b = poly[(k + 1) % poly.size()];
            std::array<LatticePoint, 2> key = a < b ? std::array<LatticePoint, 2>{a, b}
                                                    : std::array<LatticePoint, 2>{b, a};
            edge_cells[key].push_back(static_cast<int>(ci));
        }
    }

    // interior reference point for orienting ray directions
    Rational rx(0), ry(0);
    for (const auto& p : sub.support) {
        rx += Rational(p[0]);
        ry += Rational(p[1]);
    }
    rx /= Rational(static_cast<long>(sub.support.size()));
    ry /= Rational(static_cast<long>(sub.support.size()));

    for (const auto& [seg, owners] : edge_cells) {
        const long weight = segment_lattice_length(seg[0], seg[1]);
        if (owners.size() == 2) {
            int i = std::min(owners[0], owners[1]);
            int j = std::max(owners[0], owners[1]);
            const PlanePoint& p = C.vertices[i];
            const PlanePoint& q = C.vertices[j];
            const Rational len = lattice_length(p, q);
            // primitive direction from p to q
            Rational dx = q[0] - p[0], dy = q[1] - p[1];
            Integer den = lcm(denominator(dx), denominator(dy));
            long ix = to_long_checked(numerator(dx * Rational(den)));
            long iy = to_long_checked(numerator(dy * Rational(den)));
            auto dir = primitive(ix, iy);
            // dual edge is perpendicular to the curve edge
            if (Rational(dir[0]) * Rational(seg[1][0] - seg[0][0]) +
                    Rational(dir[1]) * Rational(seg[1][1] - seg[0][1]) !=
                0)
                throw std::logic_error("curve edge not orthogonal to its dual subdivision edge");
            C.bounded_edges.push_back({i, j, dir, len, weight, seg});
        } else if (owners.size() == 1) {
            // boundary edge: ray in the direction of the inward normal
            auto w = primitive(seg[1][0] - seg[0][0], seg[1][1] - seg[0][1]);
            std::array<long, 2> nrm{w[1], -w[0]};
            const Rational side = Rational(nrm[0]) * (rx - Rational(seg[0][0])) +
                                  Rational(nrm[1]) * (ry - Rational(seg[0][1]));
            if (side == 0) throw std::logic_error("degenerate newton polygon reference point");
            if (side < 0) nrm = {-nrm[0], -nrm[1]};
            C.rays.push_back({owners[0], nrm, weight, seg});
        } else {
            throw std::logic_error("subdivision edge shared by more than two cells");
        }
    }

    std::sort(C.bounded_edges.begin(), C.bounded_edges.end(), [](const CurveEdge& a, const CurveEdge& b) {
        return std::tie(a.v0, a.v1, a.dual) < std::tie(b.v0, b.v1, b.dual);
    });
    std::sort(C.rays.begin(), C.rays.end(), [](const CurveRay& a, const CurveRay& b) {
        return std::tie(a.vertex, a.dir, a.dual) < std::tie(b.vertex, b.dir, b.dual);
    });
    return C;
}

Rational lattice_length(const PlanePoint& p, const PlanePoint& q) {
    const Rational dx = q[0] - p[0], dy = q[1] - p[1];
    if (dx == 0 && dy == 0) throw ZeroLengthEdge();
    const Integer den = lcm(denominator(dx), denominator(dy));
    const Integer ix = numerator(dx * Rational(den));
    const Integer iy = numerator(dy * Rational(den));
    Rational g(gcd(abs(ix), abs(iy)), den);
    g.canonicalize();
    return g;
}

std::optional<CycleReport> find_cycle(const TropicalPlaneCurve& C) {
    const int nv = static_cast<int>(C.vertices.size());
    std::vector<bool> alive(C.bounded_edges.size(), true);
    std::vector<int> degree(nv, 0);
    for (const auto& e : C.bounded_edges) {
        ++degree[e.v0];
        ++degree[e.v1];
    }
    // prune leaves
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < C.bounded_edges.size(); ++i) {
            if (!alive[i]) continue;
            const auto& e = C.bounded_edges[i];
            if (degree[e.v0] == 1 || degree[e.v1] == 1) {
                alive[i] = false;
                --degree[e.v0];
                --degree[e.v1];
                changed = true;
            }
        }
    }
    std::vector<int> remaining;
    for (std::size_t i = 0; i < alive.size(); ++i)
        if (alive[i]) remaining.push_back(static_cast<int>(i));
    if (remaining.empty()) return std::nullopt;

    // component count on the used vertices
    std::vector<int> parent(nv);
    for (int i = 0; i < nv; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::set<int> used;
    for (int i : remaining) {
        const auto& e = C.bounded_edges[i];
        used.insert(e.v0);
        used.insert(e.v1);
        parent[find(e.v0)] = find(e.v1);
    }
    std::set<int> comps;
    for (int v : used) comps.insert(find(v));
    const long betti = static_cast<long>(remaining.size()) - static_cast<long>(used.size()) +
                       static_cast<long>(comps.size());
    if (betti >= 2 || comps.size() >= 2)
        throw MultipleCycles("pruned bounded subgraph has betti number " + std::to_string(betti));
    if (betti == 0) return std::nullopt;  // cannot occur after pruning; kept for safety

    // walk the cycle in order, starting from its smallest vertex
    std::map<int, std::vector<int>> incident;
    for (int i : remaining) {
        incident[C.bounded_edges[i].v0].push_back(i);
        incident[C.bounded_edges[i].v1].push_back(i);
    }
    const int start = *used.begin();
    CycleReport rep;
    rep.total_lattice_length = 0;
    int at = start;
    int prev_edge = -1;
    do {
        const auto& inc = incident.at(at);
        int next_edge = -1;
        for (int i : inc)
            if (i != prev_edge && (next_edge == -1 || i < next_edge)) next_edge = i;
        rep.edges.push_back(next_edge);
        rep.total_lattice_length += C.bounded_edges[next_edge].length;
        const auto& e = C.bounded_edges[next_edge];
        at = e.v0 == at ? e.v1 : e.v0;
        prev_edge = next_edge;
    } while (at != start);
    return rep;
}

bool contains_point(const TropicalPlaneCurve& C, const PlanePoint& p) {
    for (const auto& v : C.vertices)
        if (v == p) return true;
    for (const auto& e : C.bounded_edges)
        if (on_segment(p, C.vertices[e.v0], C.vertices[e.v1])) return true;
    for (const auto& r : C.rays)
        if (on_ray(p, C.vertices[r.vertex], r.dir)) return true;
    return false;
}

nlohmann::ordered_json to_json(const TropicalPlaneCurve& C) {
    nlohmann::ordered_json j;
    auto vertices = nlohmann::ordered_json::array();
    for (const auto& v : C.vertices) vertices.push_back({to_string(v[0]), to_string(v[1])});
    j["vertices"] = std::move(vertices);
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : C.bounded_edges) {
        nlohmann::ordered_json je;
        je["v"] = {e.v0, e.v1};
        je["dir"] = {e.dir[0], e.dir[1]};
        je["len"] = to_string(e.length);
        je["weight"] = e.weight;
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    auto rays = nlohmann::ordered_json::array();
    for (const auto& r : C.rays) {
        nlohmann::ordered_json jr;
        jr["v"] = r.vertex;
        jr["dir"] = {r.dir[0], r.dir[1]};
        jr["weight"] = r.weight;
        rays.push_back(std::move(jr));
    }
    j["rays"] = std::move(rays);
    return j;
}

}  // namespace tropell
