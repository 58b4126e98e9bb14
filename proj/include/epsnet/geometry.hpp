#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "number.hpp"

namespace epsnet {

template <int D>
using Point = std::array<Coord, D>;

template <int D>
using PointSet = std::vector<Point<D>>;

template <int D>
using RationalPoint = std::array<Rational, D>;

enum class Orientation { negative = -1, zero = 0, positive = 1 };

/// Which closed side of a plane, measured along the last coordinate axis.
enum class Side { lower = 0, upper = 1 };

inline const char* to_string(Side s) { return s == Side::lower ? "lower" : "upper"; }

enum class Location { inside_strict, on_boundary, outside };

namespace detail {

template <typename T>
T det2(const T& a, const T& b, const T& c, const T& d) {
    return a * d - b * c;
}

template <typename T>
T det3(const std::array<std::array<T, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <int D>
bool in_range(const Point<D>& p) {
    return std::all_of(p.begin(), p.end(), [](Coord c) { return c >= -kMaxCoord && c <= kMaxCoord; });
}

template <typename T, int D>
int orientation_sign(std::span<const Point<D>, D + 1> pts) {
    if constexpr (D == 2) {
        T ax = T(pts[1][0]) - T(pts[0][0]), ay = T(pts[1][1]) - T(pts[0][1]);
        T bx = T(pts[2][0]) - T(pts[0][0]), by = T(pts[2][1]) - T(pts[0][1]);
        return sign_of(T(det2<T>(ax, ay, bx, by)));
    } else {
        std::array<std::array<T, 3>, 3> m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m[r][c] = T(pts[r + 1][c]) - T(pts[0][c]);
        return sign_of(T(det3<T>(m)));
    }
}

}  // namespace detail

/// Sign of the affine orientation determinant of D+1 points.
template <int D>
Orientation orientation(std::span<const Point<D>, D + 1> pts) {
    static_assert(D == 2 || D == 3);
    bool small = std::all_of(pts.begin(), pts.end(), [](const Point<D>& p) { return detail::in_range<D>(p); });
    int s = small ? detail::orientation_sign<Wide, D>(pts) : detail::orientation_sign<BigInt, D>(pts);
    return static_cast<Orientation>(s);
}

template <int D>
Orientation orientation(const std::array<Point<D>, D + 1>& pts) {
    return orientation<D>(std::span<const Point<D>, D + 1>(pts));
}

/// Runtime-dimension entry used by file-driven callers.
inline Orientation orientation(const std::vector<std::vector<Coord>>& pts) {
    if (pts.empty()) throw InvalidArgument("orientation: no points");
    const std::size_t d = pts.front().size();
    if (d != 2 && d != 3) throw InvalidArgument("orientation: dimension must be 2 or 3");
    if (pts.size() != d + 1) throw InvalidArgument("orientation: need d+1 points");
    for (const auto& p : pts)
        if (p.size() != d) throw InvalidArgument("orientation: dimension mismatch");
    if (d == 2) {
        std::array<Point<2>, 3> a;
        for (int i = 0; i < 3; ++i) a[i] = {pts[i][0], pts[i][1]};
        return orientation<2>(a);
    }
    std::array<Point<3>, 4> a;
    for (int i = 0; i < 4; ++i) a[i] = {pts[i][0], pts[i][1], pts[i][2]};
    return orientation<3>(a);
}

/// a . x = c with exact rational coefficients.
template <int D>
struct Hyperplane {
    std::array<Rational, D> normal;
    Rational offset;

    Hyperplane() = default;
    Hyperplane(std::array<Rational, D> a, Rational c) : normal(std::move(a)), offset(std::move(c)) {
        if (std::all_of(normal.begin(), normal.end(), [](const Rational& v) { return v == 0; }))
            throw InvalidArgument("hyperplane normal is zero");
    }

    bool is_vertical() const { return normal[D - 1] == 0; }

    /// x_d = sum slopes_i x_i + intercept
    static Hyperplane from_graph(const std::array<Rational, D - 1>& slopes, const Rational& intercept) {
        std::array<Rational, D> a;
        for (int i = 0; i < D - 1; ++i) a[i] = -slopes[i];
        a[D - 1] = 1;
        return Hyperplane(a, intercept);
    }

    std::array<Rational, D - 1> slopes() const {
        if (is_vertical()) throw DegenerateInput("vertical plane has no graph form");
        std::array<Rational, D - 1> s;
        for (int i = 0; i < D - 1; ++i) s[i] = -normal[i] / normal[D - 1];
        return s;
    }
    Rational intercept() const {
        if (is_vertical()) throw DegenerateInput("vertical plane has no graph form");
        return offset / normal[D - 1];
    }

    template <typename P>
    Rational eval(const P& p) const {
        Rational s = -offset;
        for (int i = 0; i < D; ++i) s += normal[i] * Rational(p[i]);
        return s;
    }
};

/// Closed halfspace. For a non-vertical plane, `lower` is the side below the
/// plane along the last axis; for a vertical plane it is {a . x <= c}.
template <int D>
struct Halfspace {
    Hyperplane<D> plane;
    Side side = Side::lower;

    /// Signed value that is <= 0 exactly on the halfspace.
    template <typename P>
    Rational signed_value(const P& p) const {
        Rational v = plane.eval(p);
        int orient = plane.is_vertical() ? 1 : sign_of(plane.normal[D - 1]);
        if (side == Side::upper) orient = -orient;
        return orient > 0 ? v : Rational(-v);
    }
};

template <int D, typename P>
Location side_of(const Halfspace<D>& h, const P& p) {
    int s = sign_of(h.signed_value(p));
    return s < 0 ? Location::inside_strict : (s == 0 ? Location::on_boundary : Location::outside);
}

template <int D>
bool contains(const Halfspace<D>& h, const Point<D>& p) {
    return side_of(h, p) != Location::outside;
}

/// Integer plane through D input points, normal oriented so that the last
/// component is positive. eval < 0 means strictly below.
template <int D>
struct IntPlane {
    std::array<Coord, D> normal{};
    Wide offset = 0;

    Wide eval(const Point<D>& p) const {
        Wide s = -offset;
        for (int i = 0; i < D; ++i) s += Wide(normal[i]) * Wide(p[i]);
        return s;
    }

    Hyperplane<D> to_hyperplane() const {
        std::array<Rational, D> a;
        for (int i = 0; i < D; ++i) a[i] = Rational(normal[i]);
        return Hyperplane<D>(a, Rational(to_big(offset)));
    }
};

/// Non-vertical plane through D points in range, or nullopt if the points do not
/// span a non-vertical plane.
template <int D>
std::optional<IntPlane<D>> canonical_plane(const std::array<Point<D>, D>& c) {
    IntPlane<D> pl;
    if constexpr (D == 2) {
        Coord dx = c[1][0] - c[0][0], dy = c[1][1] - c[0][1];
        if (dx == 0) return std::nullopt;
        pl.normal = {-dy, dx};
        if (dx < 0) pl.normal = {dy, -dx};
    } else {
        Coord ux = c[1][0] - c[0][0], uy = c[1][1] - c[0][1], uz = c[1][2] - c[0][2];
        Coord vx = c[2][0] - c[0][0], vy = c[2][1] - c[0][1], vz = c[2][2] - c[0][2];
        // |u|,|v| <= 2^29 per component, so each cross-product term fits in 59 bits.
        Coord nx = uy * vz - uz * vy;
        Coord ny = uz * vx - ux * vz;
        Coord nz = ux * vy - uy * vx;
        if (nz == 0) return std::nullopt;
        if (nz < 0) {
            nx = -nx;
            ny = -ny;
            nz = -nz;
        }
        pl.normal = {nx, ny, nz};
    }
    pl.offset = 0;
    for (int i = 0; i < D; ++i) pl.offset += Wide(pl.normal[i]) * Wide(c[0][i]);
    return pl;
}

template <int D>
PointSet<D> reflect_last_axis(const PointSet<D>& pts) {
    PointSet<D> out = pts;
    for (auto& p : out) p[D - 1] = -p[D - 1];
    return out;
}

// ---------------------------------------------------------------------------
// Duality.  Point p maps to the plane x_d = -p_1 x_1 - ... - p_{d-1} x_{d-1} + p_d;
// the non-vertical plane x_d = a . x' + g maps to the point (a, g).  With this
// convention p lies in the lower halfspace of a plane exactly when the plane's
// dual point lies on or above p's dual plane.

template <int D>
struct DualPlane {
    std::array<Rational, D - 1> slopes;
    Rational intercept;

    Rational height_at(const std::array<Rational, D - 1>& x) const {
        Rational z = intercept;
        for (int i = 0; i < D - 1; ++i) z += slopes[i] * x[i];
        return z;
    }
    friend bool operator==(const DualPlane&, const DualPlane&) = default;
};

template <int D>
struct DualPoint {
    RationalPoint<D> coords;
    friend bool operator==(const DualPoint&, const DualPoint&) = default;
};

enum class DualSide { above, on, below };

template <int D>
DualPlane<D> dualize(const Point<D>& p) {
    DualPlane<D> out;
    for (int i = 0; i < D - 1; ++i) out.slopes[i] = Rational(-p[i]);
    out.intercept = Rational(p[D - 1]);
    return out;
}

/// Inverse of dualize(Point): recovers the primal point.
template <int D>
RationalPoint<D> dualize(const DualPlane<D>& pl) {
    RationalPoint<D> p;
    for (int i = 0; i < D - 1; ++i) p[i] = -pl.slopes[i];
    p[D - 1] = pl.intercept;
    return p;
}

/// Dual point of the halfspace's bounding plane. The side is not encoded:
/// lower and upper halfspaces of one plane share a dual point.
template <int D>
DualPoint<D> dualize(const Halfspace<D>& h) {
    if (h.plane.is_vertical()) throw DegenerateInput("cannot dualize a vertical halfspace");
    DualPoint<D> q;
    auto s = h.plane.slopes();
    for (int i = 0; i < D - 1; ++i) q.coords[i] = s[i];
    q.coords[D - 1] = h.plane.intercept();
    return q;
}

/// Inverse of dualize(Halfspace): the lower halfspace of the primal plane.
template <int D>
Halfspace<D> dualize(const DualPoint<D>& q) {
    std::array<Rational, D - 1> slopes;
    for (int i = 0; i < D - 1; ++i) slopes[i] = q.coords[i];
    return Halfspace<D>{Hyperplane<D>::from_graph(slopes, q.coords[D - 1]), Side::lower};
}

template <int D>
DualSide dual_side(const DualPoint<D>& q, const DualPlane<D>& pl) {
    std::array<Rational, D - 1> x;
    for (int i = 0; i < D - 1; ++i) x[i] = q.coords[i];
    int s = sign_of(Rational(q.coords[D - 1] - pl.height_at(x)));
    return s > 0 ? DualSide::above : (s == 0 ? DualSide::on : DualSide::below);
}

/// Membership decided entirely in dual space.
template <int D>
bool contains_via_dual(const Halfspace<D>& h, const Point<D>& p) {
    DualSide s = dual_side<D>(dualize<D>(h), dualize<D>(p));
    if (s == DualSide::on) return true;
    return (h.side == Side::lower) == (s == DualSide::above);
}

// ---------------------------------------------------------------------------
// General position.

enum class ViolationKind { out_of_range, shared_vertical_line, collinear, coplanar, flat_projection };

inline const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::out_of_range: return "out_of_range";
        case ViolationKind::shared_vertical_line: return "shared_vertical_line";
        case ViolationKind::collinear: return "collinear";
        case ViolationKind::coplanar: return "coplanar";
        case ViolationKind::flat_projection: return "flat_projection";
    }
    return "unknown";
}

struct Violation {
    ViolationKind kind;
    std::vector<int> witness;
};

struct GeneralPositionReport {
    bool ok = true;
    std::size_t violation_count = 0;
    std::vector<Violation> violations;  ///< first `max_witnesses` violations

    std::string summary() const {
        if (ok) return "general position";
        std::string s = std::to_string(violation_count) + " violation(s)";
        if (!violations.empty()) {
            s += ", first: ";
            s += to_string(violations.front().kind);
            s += " {";
            for (std::size_t i = 0; i < violations.front().witness.size(); ++i)
                s += (i ? "," : "") + std::to_string(violations.front().witness[i]);
            s += "}";
        }
        return s;
    }
};

/// 2D: no 3 collinear, no 2 sharing an x-coordinate.
/// 3D: no 4 coplanar, no 3 collinear, no 2 on a common vertical line.
/// Also rejects coordinates beyond kMaxCoord and point sets whose projection
/// along the last axis is degenerate (only possible for n = 3 in 3D).
template <int D>
GeneralPositionReport validate_general_position(const PointSet<D>& pts, std::size_t max_witnesses = 16) {
    static_assert(D == 2 || D == 3);
    GeneralPositionReport rep;
    auto add = [&](ViolationKind k, std::vector<int> w) {
        rep.ok = false;
        ++rep.violation_count;
        if (rep.violations.size() < max_witnesses) rep.violations.push_back({k, std::move(w)});
    };
    const int n = static_cast<int>(pts.size());
    for (int i = 0; i < n; ++i)
        if (!detail::in_range<D>(pts[i])) add(ViolationKind::out_of_range, {i});
    if (!rep.ok) return rep;

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool same = true;
            for (int c = 0; c < D - 1; ++c) same = same && pts[i][c] == pts[j][c];
            if (same) add(ViolationKind::shared_vertical_line, {i, j});
        }

    if constexpr (D == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k)
                    if (orientation<2>({pts[i], pts[j], pts[k]}) == Orientation::zero) add(ViolationKind::collinear, {i, j, k});
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    const auto& a = pts[i];
                    Coord ux = pts[j][0] - a[0], uy = pts[j][1] - a[1], uz = pts[j][2] - a[2];
                    Coord vx = pts[k][0] - a[0], vy = pts[k][1] - a[1], vz = pts[k][2] - a[2];
                    Coord nx = uy * vz - uz * vy, ny = uz * vx - ux * vz, nz = ux * vy - uy * vx;
                    if (nx == 0 && ny == 0 && nz == 0) {
                        add(ViolationKind::collinear, {i, j, k});
                        continue;
                    }
                    for (int l = k + 1; l < n; ++l) {
                        Wide v = Wide(nx) * (pts[l][0] - a[0]) + Wide(ny) * (pts[l][1] - a[1]) + Wide(nz) * (pts[l][2] - a[2]);
                        if (v == 0) add(ViolationKind::coplanar, {i, j, k, l});
                    }
                }
        if (n == 3 && rep.ok) {
            Coord ux = pts[1][0] - pts[0][0], uy = pts[1][1] - pts[0][1];
            Coord vx = pts[2][0] - pts[0][0], vy = pts[2][1] - pts[0][1];
            if (Wide(ux) * vy - Wide(uy) * vx == 0) add(ViolationKind::flat_projection, {0, 1, 2});
        }
    }
    return rep;
}

template <int D>
void require_general_position(const PointSet<D>& pts) {
    auto rep = validate_general_position<D>(pts, 1);
    if (!rep.ok) throw DegenerateInput("point set is not in general position: " + rep.summary());
}

}  // namespace epsnet
