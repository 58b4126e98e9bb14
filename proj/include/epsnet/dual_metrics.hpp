#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "net_builder.hpp"
#include "range_oracle.hpp"

namespace epsnet {

/// Number of dual planes p* strictly below q. Throws if q lies on one.
template <int D>
std::int64_t level(const DualPoint<D>& q, const PointSet<D>& pts) {
    std::int64_t below = 0;
    for (const auto& p : pts) {
        auto s = dual_side(q, dualize<D>(p));
        if (s == DualSide::on) throw DegenerateInput("dual point lies on a dual plane");
        if (s == DualSide::above) ++below;
    }
    return below;
}

/// Number of dual planes separating u and v (neither may lie on a plane).
template <int D>
std::int64_t crossing_distance(const DualPoint<D>& u, const DualPoint<D>& v, const PointSet<D>& pts) {
    std::int64_t d = 0;
    for (const auto& p : pts) {
        auto pl = dualize<D>(p);
        auto su = dual_side(u, pl), sv = dual_side(v, pl);
        if (su == DualSide::on || sv == DualSide::on) throw DegenerateInput("dual point lies on a dual plane");
        if (su != sv) ++d;
    }
    return d;
}

/// A vertex of the dual arrangement: the dual point of the plane through
/// `contacts`. `below` holds the points whose dual planes pass strictly below
/// it, which are the points strictly below the primal plane.
template <int D>
struct DualVertex {
    std::array<int, D> contacts{};
    IndexSet below;

    std::int64_t level() const { return static_cast<std::int64_t>(below.size()); }
};

/// Vertex-side crossing distances use closed separation: a plane counts
/// unless both points lie strictly on the same side of it. This keeps the
/// triangle inequality exact when vertices lie on their defining planes.
/// A vertex is at distance 0 from itself.
template <int D>
std::int64_t vertex_distance(const DualVertex<D>& a, const DualVertex<D>& b, std::size_t n) {
    if (a.contacts == b.contacts) return 0;
    IndexSet on_a, on_b;
    for (int c : a.contacts) on_a.insert(static_cast<std::size_t>(c));
    for (int c : b.contacts) on_b.insert(static_cast<std::size_t>(c));
    IndexSet all = IndexSet::prefix(n);
    IndexSet above_a = all - a.below - on_a, above_b = all - b.below - on_b;
    auto same = (a.below & b.below).size() + (above_a & above_b).size();
    return static_cast<std::int64_t>(n - same);
}

/// Number of planes with the two vertices strictly on opposite sides. Planes
/// through either vertex do not count, so neighbouring vertices of one cell
/// edge can be at distance 0.
template <int D>
std::int64_t vertex_open_distance(const DualVertex<D>& a, const DualVertex<D>& b, std::size_t n) {
    IndexSet on_a, on_b;
    for (int c : a.contacts) on_a.insert(static_cast<std::size_t>(c));
    for (int c : b.contacts) on_b.insert(static_cast<std::size_t>(c));
    IndexSet all = IndexSet::prefix(n);
    IndexSet above_a = all - a.below - on_a, above_b = all - b.below - on_b;
    return static_cast<std::int64_t>((a.below & above_b).size() + (above_a & b.below).size());
}

/// Distance from a vertex to the dual point of a generic halfspace whose
/// strict-below set is `trace`.
template <int D>
std::int64_t vertex_to_member(const DualVertex<D>& v, const IndexSet& trace, std::size_t n) {
    IndexSet on;
    for (int c : v.contacts) on.insert(static_cast<std::size_t>(c));
    IndexSet above = IndexSet::prefix(n) - v.below - on;
    auto same = (v.below & trace).size() + (above - trace).size();
    return static_cast<std::int64_t>(n - same);
}

struct ShallowCount {
    std::size_t vertices = 0;      ///< vertices with level <= cap
    std::size_t total = 0;         ///< all vertices
    std::size_t skipped = 0;       ///< triples with no unique intersection point
};

/// Vertices of the dual arrangement with level <= level_cap, by brute force
/// over D-subsets. Triples whose dual planes have no unique common point
/// (primal contacts spanning a vertical plane) are skipped and counted.
template <int D>
std::vector<DualVertex<D>> shallow_vertices(const PointSet<D>& pts, std::int64_t level_cap, ShallowCount* count = nullptr) {
    detail::check_capacity(pts.size());
    if (pts.size() < static_cast<std::size_t>(D)) throw InvalidArgument("need at least d points for a vertex");
    std::vector<DualVertex<D>> out;
    ShallowCount local;
    const std::size_t m = pts.size();
    auto visit = [&](const std::array<int, D>& c) {
        std::array<Point<D>, D> cp;
        for (int i = 0; i < D; ++i) cp[i] = pts[c[i]];
        auto pl = canonical_plane<D>(cp);
        if (!pl) {
            ++local.skipped;
            return;
        }
        ++local.total;
        DualVertex<D> v;
        v.contacts = c;
        for (std::size_t i = 0; i < m; ++i) {
            Wide e = pl->eval(pts[i]);
            if (e < 0) {
                v.below.insert(i);
            } else if (e == 0 && std::find(c.begin(), c.end(), static_cast<int>(i)) == c.end()) {
                throw DegenerateInput("four dual planes share a vertex");
            }
        }
        if (v.level() <= level_cap) out.push_back(v);
    };
    const int n = static_cast<int>(m);
    if constexpr (D == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) visit({i, j});
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) visit({i, j, k});
    }
    local.vertices = out.size();
    if (count) *count = local;
    return out;
}

/// Ball B_h: indices (into `vertices`) at crossing distance < r from the
/// member's dual point. Only vertices with |level - |trace|| < r can qualify.
template <int D>
std::vector<std::size_t> ball(const std::vector<DualVertex<D>>& vertices, const IndexSet& trace, const Rational& r,
                              std::size_t n) {
    std::vector<std::size_t> out;
    if (r <= 0) return out;
    const auto lvl = static_cast<std::int64_t>(trace.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (Rational(std::abs(vertices[i].level() - lvl)) >= r) continue;
        if (Rational(vertex_to_member<D>(vertices[i], trace, n)) < r) out.push_back(i);
    }
    return out;
}

struct DualArrangementStats {
    Side side = Side::lower;
    std::int64_t n = 0;
    std::int64_t k = 0;  ///< ceil(eps n)
    Rational r;          ///< (1 - beta) k
    std::vector<std::int64_t> member_levels;
    std::vector<std::vector<std::int64_t>> distances;
    std::int64_t min_distance = -1;  ///< -1 with fewer than two members
    ShallowCount shallow;            ///< vertices at level <= 3k
    std::vector<std::size_t> ball_sizes;

    bool levels_in_range = true;
    bool separated = true;
    bool balls_disjoint = true;
    bool ball_levels_ok = true;
    bool ball_sum_ok = true;

    bool ok() const { return levels_in_range && separated && balls_disjoint && ball_levels_ok && ball_sum_ok; }

    std::size_t ball_sum() const {
        std::size_t s = 0;
        for (auto b : ball_sizes) s += b;
        return s;
    }
};

/// Dual-side analysis of one family: member levels, pairwise crossing
/// distances (|T_h xor T_g| for generic member planes), the shallow-vertex
/// inventory at level <= 3k and the balls of radius (1 - beta) k.
template <int D>
DualArrangementStats analyze_family_dual(const PointSet<D>& pts, const Family<D>& f, const Rational& beta) {
    PointSet<D> buf;
    const auto& q = detail::oriented(pts, f.side, buf);
    DualArrangementStats st;
    st.side = f.side;
    st.n = static_cast<std::int64_t>(pts.size());
    st.k = ceil_times(f.scale, st.n);
    st.r = (1 - beta) * st.k;
    const std::size_t t = f.members.size();

    for (const auto& m : f.members) {
        auto lvl = static_cast<std::int64_t>(m.trace.size());
        st.member_levels.push_back(lvl);
        if (lvl < st.k || lvl > 2 * st.k) st.levels_in_range = false;
    }
    st.distances.assign(t, std::vector<std::int64_t>(t, 0));
    const Rational need = 2 * st.r;
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = i + 1; j < t; ++j) {
            auto d = static_cast<std::int64_t>((f.members[i].trace.indices ^ f.members[j].trace.indices).size());
            st.distances[i][j] = st.distances[j][i] = d;
            if (st.min_distance < 0 || d < st.min_distance) st.min_distance = d;
            if (Rational(d) < need) st.separated = false;
        }

    auto shallow = shallow_vertices<D>(q, 3 * st.k, &st.shallow);
    std::vector<int> owner(shallow.size(), -1);
    const Rational lo = st.k - st.r, hi = 2 * st.k + st.r;
    for (std::size_t i = 0; i < t; ++i) {
        auto b = ball<D>(shallow, f.members[i].trace.indices, st.r, pts.size());
        st.ball_sizes.push_back(b.size());
        for (auto v : b) {
            if (owner[v] >= 0) st.balls_disjoint = false;
            owner[v] = static_cast<int>(i);
            Rational l(shallow[v].level());
            if (l < lo || l > hi) st.ball_levels_ok = false;
        }
    }
    st.ball_sum_ok = st.ball_sum() <= st.shallow.vertices;
    return st;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("need at least two samples");
    double mx = 0, my = 0;
    const auto m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / m;
        my += std::log(y[i]) / m;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    if (sxx == 0) throw InvalidArgument("degenerate abscissae");
    return sxy / sxx;
}

}  // namespace epsnet
