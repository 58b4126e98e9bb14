#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "net_builder.hpp"
#include "random.hpp"

namespace epsnet {

/// Non-vertical plane z = (a x + b y + g) / w with w > 0. Read as a point
/// (a, b, g, w) it is also the homogeneous dual point of the plane.
struct HomPlane {
    BigInt a, b, g, w{1};

    friend bool operator==(const HomPlane&, const HomPlane&) = default;
};

inline HomPlane hom_plane(const Hyperplane<3>& h) {
    auto s = h.slopes();
    Rational c = h.intercept();
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    BigInt w = denominator(s[0]) * denominator(s[1]) * denominator(c);
    HomPlane p;
    p.a = numerator(Rational(s[0] * w));
    p.b = numerator(Rational(s[1] * w));
    p.g = numerator(Rational(c * w));
    p.w = w;
    return p;
}

/// z = slope_x x + slope_y y + c with integer coefficients.
inline HomPlane hom_plane(std::int64_t slope_x, std::int64_t slope_y, std::int64_t c) {
    return HomPlane{BigInt(slope_x), BigInt(slope_y), BigInt(c), BigInt(1)};
}

/// Raised internally when perturbed planes are still degenerate for the hull.
class HullDegenerate : public DegenerateInput {
  public:
    using DegenerateInput::DegenerateInput;
};

namespace detail {

struct Row1 {
    BigInt a, c;  ///< a t + c > 0
};
struct Row2 {
    BigInt cx, cy, d;  ///< cx x + cy y + d > 0
};

inline bool strict_feasible_1d(const std::vector<Row1>& rows) {
    bool has_lo = false, has_hi = false;
    BigInt lo_p, lo_q, hi_p, hi_q;  // t > lo_p/lo_q, t < hi_p/hi_q, denominators positive
    for (const auto& r : rows) {
        int s = sign_of(r.a);
        if (s == 0) {
            if (sign_of(r.c) <= 0) return false;
            continue;
        }
        if (s > 0) {
            BigInt p = -r.c, q = r.a;
            if (!has_lo || p * lo_q > lo_p * q) {
                lo_p = p;
                lo_q = q;
                has_lo = true;
            }
        } else {
            BigInt p = r.c, q = -r.a;
            if (!has_hi || p * hi_q < hi_p * q) {
                hi_p = p;
                hi_q = q;
                has_hi = true;
            }
        }
    }
    return !(has_lo && has_hi) || lo_p * hi_q < hi_p * lo_q;
}

/// Fourier-Motzkin on a strict system in two unknowns. Exact.
inline bool strict_feasible_2d(const std::vector<Row2>& rows) {
    std::vector<Row1> out;
    std::vector<const Row2*> pos, neg;
    for (const auto& r : rows) {
        int s = sign_of(r.cy);
        if (s == 0)
            out.push_back({r.cx, r.d});
        else
            (s > 0 ? pos : neg).push_back(&r);
    }
    for (const auto* p : pos)
        for (const auto* q : neg) {
            BigInt m = -q->cy, k = p->cy;
            out.push_back({m * p->cx + k * q->cx, m * p->d + k * q->d});
        }
    return strict_feasible_1d(out);
}

/// plane_i - plane_j, scaled by w_i w_j > 0.
inline Row2 plane_gap(const HomPlane& i, const HomPlane& j) {
    return {i.a * j.w - j.a * i.w, i.b * j.w - j.b * i.w, i.g * j.w - j.g * i.w};
}

inline BigInt det3(const std::array<std::array<BigInt, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Sign of the 4x4 determinant with rows (a, b, g, w).
inline int orient4(const HomPlane& p, const HomPlane& q, const HomPlane& r, const HomPlane& s) {
    auto m = [](const HomPlane& u, const HomPlane& v, int i, int j) {
        const BigInt* ru[4] = {&u.a, &u.b, &u.g, &u.w};
        const BigInt* rv[4] = {&v.a, &v.b, &v.g, &v.w};
        return BigInt(*ru[i] * *rv[j] - *ru[j] * *rv[i]);
    };
    BigInt det = m(p, q, 0, 1) * m(r, s, 2, 3) - m(p, q, 0, 2) * m(r, s, 1, 3) + m(p, q, 0, 3) * m(r, s, 1, 2) +
                 m(p, q, 1, 2) * m(r, s, 0, 3) - m(p, q, 1, 3) * m(r, s, 0, 2) + m(p, q, 2, 3) * m(r, s, 0, 1);
    return sign_of(det);
}

}  // namespace detail

/// On-envelope test for each plane of `active`: some point of the plane lies
/// strictly above every other active plane.
inline std::vector<bool> envelope_membership(const std::vector<HomPlane>& planes, const std::vector<int>& active) {
    if (active.empty()) throw InvalidArgument("envelope membership needs at least one plane");
    std::vector<bool> on(active.size());
    std::vector<detail::Row2> rows;
    for (std::size_t i = 0; i < active.size(); ++i) {
        rows.clear();
        for (std::size_t j = 0; j < active.size(); ++j)
            if (j != i) rows.push_back(detail::plane_gap(planes[active[i]], planes[active[j]]));
        on[i] = detail::strict_feasible_2d(rows);
    }
    return on;
}

inline std::vector<bool> envelope_membership(const std::vector<HomPlane>& planes) {
    return envelope_membership(planes, detail::iota_indices(planes.size()));
}

/// True when the envelope of `active` has an edge between planes i and j: a
/// point of their intersection line lies strictly above every other plane.
inline bool envelope_edge(const std::vector<HomPlane>& planes, const std::vector<int>& active, int i, int j) {
    auto line = detail::plane_gap(planes[i], planes[j]);
    std::vector<detail::Row1> rows;
    for (int k : active) {
        if (k == i || k == j) continue;
        auto r = detail::plane_gap(planes[i], planes[k]);
        if (sign_of(line.cy) != 0) {
            // y = -(cx x + d) / cy
            int s = sign_of(line.cy);
            BigInt a = r.cx * line.cy - r.cy * line.cx;
            BigInt c = r.d * line.cy - r.cy * line.d;
            rows.push_back({s > 0 ? a : BigInt(-a), s > 0 ? c : BigInt(-c)});
        } else if (sign_of(line.cx) != 0) {
            // x = -d / cx, y free
            int s = sign_of(line.cx);
            BigInt a = r.cy * line.cx;
            BigInt c = r.d * line.cx - r.cx * line.d;
            rows.push_back({s > 0 ? a : BigInt(-a), s > 0 ? c : BigInt(-c)});
        } else {
            return false;
        }
    }
    if (sign_of(line.cx) == 0 && sign_of(line.cy) == 0) return false;
    return detail::strict_feasible_1d(rows);
}

/// Face degrees on the envelope of `active` by direct edge tests, O(t^3).
/// Works for any planes, including parallel or repeated ones.
inline std::vector<int> envelope_degrees_direct(const std::vector<HomPlane>& planes, const std::vector<int>& active) {
    std::vector<int> deg(active.size(), 0);
    for (std::size_t i = 0; i < active.size(); ++i)
        for (std::size_t j = i + 1; j < active.size(); ++j)
            if (envelope_edge(planes, active, active[i], active[j])) {
                ++deg[i];
                ++deg[j];
            }
    return deg;
}

/// Incremental exact convex hull of homogeneous dual points. Only the upper
/// hull is reported: its vertices are the envelope faces and its edges the
/// envelope edges. Any degeneracy (coplanar points, vertical facets) raises
/// HullDegenerate; callers re-perturb.
class DualHull {
  public:
    explicit DualHull(const std::vector<HomPlane>& pts) : pts_(pts) {}

    void insert(int idx) {
        if (pending_.size() < 4) {
            pending_.push_back(idx);
            if (pending_.size() == 4) init();
            return;
        }
        add(idx);
    }

    bool started() const { return pending_.size() == 4; }

    /// Edges of the upper hull as ordered pairs (u < v).
    std::set<std::pair<int, int>> upper_edges() const {
        std::set<std::pair<int, int>> e;
        for (const auto& f : facets_) {
            if (!f.upper) continue;
            for (int k = 0; k < 3; ++k) {
                int u = f.v[k], v = f.v[(k + 1) % 3];
                e.insert({std::min(u, v), std::max(u, v)});
            }
        }
        return e;
    }

    int upper_degree(int v) const {
        int d = 0;
        for (const auto& [a, b] : upper_edges())
            if (a == v || b == v) ++d;
        return d;
    }

    bool on_upper_hull(int v) const {
        for (const auto& f : facets_)
            if (f.upper && (f.v[0] == v || f.v[1] == v || f.v[2] == v)) return true;
        return false;
    }

  private:
    struct Facet {
        std::array<int, 3> v;
        bool upper = false;
    };

    int orient(const Facet& f, const HomPlane& p) const {
        return detail::orient4(pts_[f.v[0]], pts_[f.v[1]], pts_[f.v[2]], p);
    }

    void add_facet(int u, int v, int w) {
        Facet f{{u, v, w}};
        int s = orient(f, interior_);
        if (s == 0) throw HullDegenerate("flat hull facet");
        if (s > 0) std::swap(f.v[1], f.v[2]);
        static const HomPlane up{BigInt(0), BigInt(0), BigInt(1), BigInt(0)};
        int z = orient(f, up);
        if (z == 0) throw HullDegenerate("vertical hull facet");
        f.upper = z > 0;
        facets_.push_back(f);
    }

    void init() {
        const auto& p = pending_;
        if (detail::orient4(pts_[p[0]], pts_[p[1]], pts_[p[2]], pts_[p[3]]) == 0)
            throw HullDegenerate("first four dual points are coplanar");
        // Centroid of the first tetrahedron, strictly inside every later hull.
        BigInt wprod = 1;
        for (int i : p) wprod *= pts_[i].w;
        interior_ = HomPlane{0, 0, 0, wprod * 4};
        for (int i : p) {
            BigInt scale = wprod / pts_[i].w;
            interior_.a += pts_[i].a * scale;
            interior_.b += pts_[i].b * scale;
            interior_.g += pts_[i].g * scale;
        }
        add_facet(p[0], p[1], p[2]);
        add_facet(p[0], p[1], p[3]);
        add_facet(p[0], p[2], p[3]);
        add_facet(p[1], p[2], p[3]);
    }

    void add(int idx) {
        const HomPlane& q = pts_[idx];
        std::vector<char> visible(facets_.size(), 0);
        bool any = false;
        for (std::size_t i = 0; i < facets_.size(); ++i) {
            int s = orient(facets_[i], q);
            if (s == 0) throw HullDegenerate("dual point on a hull facet plane");
            if (s > 0) visible[i] = any = 1;
        }
        if (!any) return;  // inside the hull
        std::map<std::pair<int, int>, int> count;
        std::vector<std::pair<int, int>> directed;
        for (std::size_t i = 0; i < facets_.size(); ++i) {
            if (!visible[i]) continue;
            for (int k = 0; k < 3; ++k) {
                int u = facets_[i].v[k], v = facets_[i].v[(k + 1) % 3];
                ++count[{std::min(u, v), std::max(u, v)}];
                directed.push_back({u, v});
            }
        }
        std::vector<Facet> kept;
        for (std::size_t i = 0; i < facets_.size(); ++i)
            if (!visible[i]) kept.push_back(facets_[i]);
        facets_ = std::move(kept);
        for (auto [u, v] : directed)
            if (count[{std::min(u, v), std::max(u, v)}] == 1) add_facet(u, v, idx);
    }

    const std::vector<HomPlane>& pts_;
    std::vector<int> pending_;
    std::vector<Facet> facets_;
    HomPlane interior_;
};

/// Per-plane envelope degrees of `active` (indices into planes). Uses the dual
/// hull for four or more planes and direct edge tests below that.
inline std::vector<int> envelope_degrees(const std::vector<HomPlane>& planes, const std::vector<int>& active) {
    if (active.size() < 4) return envelope_degrees_direct(planes, active);
    DualHull hull(planes);
    for (int i : active) hull.insert(i);
    auto edges = hull.upper_edges();
    std::map<int, int> deg;
    for (auto [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    std::vector<int> out(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) out[i] = deg.count(active[i]) ? deg[active[i]] : 0;
    return out;
}

namespace detail {

/// Lifts each contact of a member's canonical plane by eta * (+-u_i): included
/// contacts end strictly below the plane, excluded ones strictly above; eta =
/// 2^-e is small enough to keep every other point on its side.
inline HomPlane perturb_member(const PointSet<3>& q, const RangeTrace<3>& t, Rng& rng) {
    if (t.num_contacts != 3) throw InvalidArgument("member has no canonical plane");
    std::array<std::array<BigInt, 3>, 3> A;
    std::array<BigInt, 3> z, su;
    std::uniform_int_distribution<int> pick(1, 1024);
    for (int i = 0; i < 3; ++i) {
        const auto& c = q[t.contacts[i]];
        A[i] = {BigInt(c[0]), BigInt(c[1]), BigInt(1)};
        z[i] = BigInt(c[2]);
        int u = pick(rng);
        su[i] = (t.mask & (1U << i)) ? BigInt(u) : BigInt(-u);
    }
    BigInt delta = det3(A);
    if (delta == 0) throw DegenerateInput("member contacts project to a line");
    auto cramer = [&](const std::array<BigInt, 3>& rhs) {
        std::array<BigInt, 3> out;
        for (int k = 0; k < 3; ++k) {
            auto M = A;
            for (int i = 0; i < 3; ++i) M[i][k] = rhs[i];
            out[k] = det3(M);
        }
        return out;
    };
    auto q0 = cramer(z);   // delta * plane through the contacts
    auto dq = cramer(su);  // delta * direction of the nudge
    int e = 0;
    for (std::size_t p = 0; p < q.size(); ++p) {
        if (std::find(t.contacts.begin(), t.contacts.end(), static_cast<int>(p)) != t.contacts.end()) continue;
        BigInt x(q[p][0]), y(q[p][1]);
        BigInt F = delta * BigInt(q[p][2]) - (x * q0[0] + y * q0[1] + q0[2]);
        BigInt G = x * dq[0] + y * dq[1] + dq[2];
        if (sign_of(F) == 0) throw DegenerateInput("point on a member's canonical plane");
        if (sign_of(G) != sign_of(F)) continue;
        BigInt aF = abs(F), aG = abs(G);
        while ((aF << e) <= aG) ++e;
    }
    HomPlane h;
    h.a = (q0[0] << e) + dq[0];
    h.b = (q0[1] << e) + dq[1];
    h.g = (q0[2] << e) + dq[2];
    h.w = delta << e;
    if (sign_of(h.w) < 0) {
        h.a = -h.a;
        h.b = -h.b;
        h.g = -h.g;
        h.w = -h.w;
    }
    BigInt gcd = boost::multiprecision::gcd(boost::multiprecision::gcd(h.a, h.b), boost::multiprecision::gcd(h.g, h.w));
    if (gcd > 1) {
        h.a /= gcd;
        h.b /= gcd;
        h.g /= gcd;
        h.w /= gcd;
    }
    for (std::size_t p = 0; p < q.size(); ++p) {
        BigInt v = h.w * BigInt(q[p][2]) - (h.a * BigInt(q[p][0]) + h.b * BigInt(q[p][1]) + h.g);
        if (sign_of(v) == 0 || (sign_of(v) < 0) != t.indices.contains(p))
            throw VerificationFailure("perturbed plane changed a member trace");
    }
    return h;
}

inline const PointSet<3>& family_points(const PointSet<3>& pts, const Family<3>& f, PointSet<3>& buf) {
    return oriented(pts, f.side, buf);
}

inline constexpr int kPerturbationAttempts = 20;

/// Runs `body(planes)` on perturbed member planes, re-perturbing while it
/// raises HullDegenerate.
template <typename F>
auto with_perturbation(const PointSet<3>& pts, const Family<3>& f, std::uint64_t seed, F&& body) {
    PointSet<3> buf;
    const auto& q = family_points(pts, f, buf);
    for (int attempt = 0;; ++attempt) {
        Rng rng(derive_seed(seed, {0xe1, static_cast<std::uint64_t>(attempt)}));
        std::vector<HomPlane> planes;
        planes.reserve(f.members.size());
        for (const auto& m : f.members) planes.push_back(perturb_member(q, m.trace, rng));
        try {
            return body(planes, attempt + 1);
        } catch (const HullDegenerate&) {
            if (attempt + 1 >= kPerturbationAttempts) throw;
        }
    }
}

}  // namespace detail

/// Generic, trace-preserving member planes of a family.
inline std::vector<HomPlane> perturbed_planes(const PointSet<3>& pts, const Family<3>& f, std::uint64_t seed) {
    return detail::with_perturbation(pts, f, seed, [](const std::vector<HomPlane>& p, int) { return p; });
}

inline std::vector<bool> envelope_membership(const PointSet<3>& pts, const Family<3>& f, std::uint64_t seed) {
    if (f.members.empty()) throw InvalidArgument("envelope membership needs at least one member");
    return envelope_membership(perturbed_planes(pts, f, seed));
}

/// Pockets h \ (union of the other members), computed on traces.
inline std::vector<IndexSet> family_pockets(const Family<3>& f) {
    const std::size_t t = f.members.size();
    std::vector<IndexSet> prefix(t + 1), suffix(t + 1);
    for (std::size_t i = 0; i < t; ++i) prefix[i + 1] = prefix[i] | f.members[i].trace.indices;
    for (std::size_t i = t; i-- > 0;) suffix[i] = suffix[i + 1] | f.members[i].trace.indices;
    std::vector<IndexSet> out(t);
    for (std::size_t i = 0; i < t; ++i) out[i] = f.members[i].trace.indices - (prefix[i] | suffix[i + 1]);
    return out;
}

inline constexpr int kLightDegree = 11;

struct EnvelopeStructure {
    Side side = Side::lower;
    Rational scale;
    std::int64_t n = 0;
    std::vector<HomPlane> planes;
    std::vector<bool> on_envelope;
    std::vector<int> degree;
    std::vector<IndexSet> pockets;
    std::size_t envelope_edges = 0;
    int perturbation_attempts = 0;

    std::size_t t() const { return planes.size(); }
    bool all_on_envelope() const { return std::all_of(on_envelope.begin(), on_envelope.end(), [](bool b) { return b; }); }
    long sum_degree() const {
        long s = 0;
        for (int d : degree) s += d;
        return s;
    }
    std::size_t light_count() const {
        return static_cast<std::size_t>(std::count_if(degree.begin(), degree.end(), [](int d) { return d <= kLightDegree; }));
    }
    /// ceil(scale n / 2)
    std::int64_t pocket_threshold() const { return ceil_times(scale / 2, n); }
};

/// Envelope faces, degrees and pockets of one family (3D).
inline EnvelopeStructure face_degrees_and_pockets(const PointSet<3>& pts, const Family<3>& f, std::uint64_t seed) {
    if (f.members.empty()) throw InvalidArgument("family has no members");
    EnvelopeStructure es;
    es.side = f.side;
    es.scale = f.scale;
    es.n = static_cast<std::int64_t>(pts.size());
    es.pockets = family_pockets(f);
    detail::with_perturbation(pts, f, seed, [&](const std::vector<HomPlane>& planes, int attempts) {
        auto all = detail::iota_indices(planes.size());
        es.planes = planes;
        es.on_envelope = envelope_membership(planes, all);
        es.degree = envelope_degrees(planes, all);
        es.perturbation_attempts = attempts;
        return 0;
    });
    es.envelope_edges = static_cast<std::size_t>(es.sum_degree() / 2);
    return es;
}

struct EnvelopeChecks {
    bool all_on_envelope = true;
    bool degree_sum_below_6t = true;
    bool half_light = true;
    bool light_pockets_large = true;
    bool pockets_disjoint = true;
    std::string detail;

    bool ok() const { return all_on_envelope && degree_sum_below_6t && half_light && light_pockets_large && pockets_disjoint; }
};

inline EnvelopeChecks check_envelope(const EnvelopeStructure& es) {
    EnvelopeChecks c;
    const auto t = static_cast<long>(es.t());
    c.all_on_envelope = es.all_on_envelope();
    if (!c.all_on_envelope) c.detail = "member below the envelope";
    c.degree_sum_below_6t = es.sum_degree() < 6 * t;
    if (!c.degree_sum_below_6t) c.detail = "degree sum " + std::to_string(es.sum_degree()) + " >= 6t";
    c.half_light = 2 * static_cast<long>(es.light_count()) >= t;
    if (!c.half_light) c.detail = "fewer than half of the faces are light";
    const auto thr = es.pocket_threshold();
    for (std::size_t i = 0; i < es.t(); ++i)
        if (es.degree[i] <= kLightDegree && static_cast<std::int64_t>(es.pockets[i].size()) < thr) {
            c.light_pockets_large = false;
            c.detail = "light face " + std::to_string(i) + " has pocket " + std::to_string(es.pockets[i].size()) + " < " +
                       std::to_string(thr);
        }
    IndexSet seen;
    for (const auto& p : es.pockets) {
        if (p.intersects(seen)) {
            c.pockets_disjoint = false;
            c.detail = "pockets overlap";
        }
        seen |= p;
    }
    return c;
}

struct PeelingRecord {
    std::vector<std::vector<int>> layers;
    std::vector<std::vector<int>> layer_degrees;  ///< degrees within the envelope of the remaining planes
    long sum_degree = 0;
    std::size_t t = 0;

    std::size_t k() const { return layers.empty() ? 0 : layers.size() - 1; }
    double ratio() const { return t ? static_cast<double>(sum_degree) / static_cast<double>(t) : 0.0; }
};

/// Repeatedly strips the planes on the upper envelope of what remains.
inline PeelingRecord peel_layers(const std::vector<HomPlane>& planes) {
    if (planes.empty()) throw InvalidArgument("peel_layers needs at least one plane");
    PeelingRecord rec;
    rec.t = planes.size();
    auto remaining = detail::iota_indices(planes.size());
    while (!remaining.empty()) {
        auto on = envelope_membership(planes, remaining);
        auto deg = envelope_degrees_direct(planes, remaining);
        std::vector<int> layer, layer_deg, rest;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            if (on[i]) {
                layer.push_back(remaining[i]);
                layer_deg.push_back(deg[i]);
                rec.sum_degree += deg[i];
            } else {
                rest.push_back(remaining[i]);
            }
        }
        if (layer.empty()) {
            // Only identical planes remain; none is strictly above the others.
            // Each copy forms its own layer so the process terminates.
            layer.push_back(rest.front());
            layer_deg.push_back(0);
            rest.erase(rest.begin());
        }
        rec.layers.push_back(std::move(layer));
        rec.layer_degrees.push_back(std::move(layer_deg));
        remaining = std::move(rest);
    }
    return rec;
}

inline PeelingRecord peel_layers(const PointSet<3>& pts, const Family<3>& f, std::uint64_t seed) {
    if (f.members.empty()) throw InvalidArgument("family has no members");
    return peel_layers(perturbed_planes(pts, f, seed));
}

struct IncrementalRecord {
    std::vector<int> permutation;
    std::vector<int> degree_at_birth;
    std::vector<IndexSet> pocket_at_birth;

    long sum_degree() const {
        long s = 0;
        for (int d : degree_at_birth) s += d;
        return s;
    }
    double mean_degree() const {
        return permutation.empty() ? 0.0 : static_cast<double>(sum_degree()) / static_cast<double>(permutation.size());
    }
    bool pockets_disjoint() const {
        IndexSet seen;
        for (const auto& p : pocket_at_birth) {
            if (p.intersects(seen)) return false;
            seen |= p;
        }
        return true;
    }
};

/// Inserts the members in a seeded random order. Each newcomer's degree at
/// birth is its face degree on the envelope of the prefix; its pocket at
/// birth is its trace minus every earlier trace.
inline IncrementalRecord incremental_degrees(const PointSet<3>& pts, const Family<3>& f, std::uint64_t seed) {
    if (f.members.empty()) throw InvalidArgument("family has no members");
    IncrementalRecord rec;
    rec.permutation = detail::iota_indices(f.members.size());
    Rng rng(derive_seed(seed, {0x1ac}));
    std::shuffle(rec.permutation.begin(), rec.permutation.end(), rng);

    IndexSet covered;
    for (int m : rec.permutation) {
        rec.pocket_at_birth.push_back(f.members[m].trace.indices - covered);
        covered |= f.members[m].trace.indices;
    }
    rec.degree_at_birth = detail::with_perturbation(pts, f, seed, [&](const std::vector<HomPlane>& planes, int) {
        std::vector<int> deg;
        DualHull hull(planes);
        std::vector<int> prefix;
        for (int m : rec.permutation) {
            prefix.push_back(m);
            hull.insert(m);
            if (!hull.started()) {
                deg.push_back(envelope_degrees_direct(planes, prefix).back());
            } else {
                if (!hull.on_upper_hull(m)) throw VerificationFailure("inserted member is hidden below the envelope");
                deg.push_back(hull.upper_degree(m));
            }
        }
        return deg;
    });
    return rec;
}

struct IncrementalSummary {
    std::vector<IncrementalRecord> runs;
    double mean_ratio = 0;  ///< mean over runs of (sum of degrees at birth) / t
    double max_ratio = 0;
    bool pockets_disjoint = true;
};

inline IncrementalSummary incremental_summary(const PointSet<3>& pts, const Family<3>& f, std::uint64_t seed, int runs = 20) {
    IncrementalSummary s;
    for (int r = 0; r < runs; ++r) {
        s.runs.push_back(incremental_degrees(pts, f, derive_seed(seed, {static_cast<std::uint64_t>(r)})));
        double ratio = s.runs.back().mean_degree();
        s.mean_ratio += ratio / runs;
        s.max_ratio = std::max(s.max_ratio, ratio);
        s.pockets_disjoint = s.pockets_disjoint && s.runs.back().pockets_disjoint();
    }
    return s;
}

}  // namespace epsnet
