#include <catch_amalgamated.hpp>

#include "epsnet.hpp"
#include "oracles.hpp"

using namespace epsnet;

namespace {

PointSet<3> points3(std::size_t n, std::uint64_t seed) {
    return generate<3>(GeneratorKind::cube_uniform, n, seed, 5000).points;
}

// Common point of the dual planes of three points, solved by Cramer's rule on
// z + p_x X + p_y Y = p_z.
std::array<Rational, 3> dual_vertex_by_cramer(const PointSet<3>& p, const std::array<int, 3>& c) {
    std::vector<std::vector<Rational>> m(3, std::vector<Rational>(3));
    std::array<Rational, 3> rhs;
    for (int i = 0; i < 3; ++i) {
        m[i] = {Rational(p[c[i]][0]), Rational(p[c[i]][1]), Rational(1)};
        rhs[i] = Rational(p[c[i]][2]);
    }
    auto det = [](const std::vector<std::vector<Rational>>& a) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    Rational d = det(m);
    std::array<Rational, 3> out;
    for (int k = 0; k < 3; ++k) {
        auto mk = m;
        for (int i = 0; i < 3; ++i) mk[i][k] = rhs[i];
        out[k] = det(mk) / d;
    }
    return out;
}

// Dual point of a perturbed member plane z = (a x + b y + g) / w.
DualPoint<3> dual_of(const HomPlane& h) {
    return DualPoint<3>{{Rational(h.a) / Rational(h.w), Rational(h.b) / Rational(h.w), Rational(h.g) / Rational(h.w)}};
}

}  // namespace

TEST_CASE("levels of extreme dual points", "[dual_metrics]") {
    auto p = points3(20, 1);
    CHECK(level<3>(DualPoint<3>{{make_rational(0), make_rational(0), make_rational(-100000)}}, p) == 0);
    CHECK(level<3>(DualPoint<3>{{make_rational(0), make_rational(0), make_rational(100000)}}, p) == 20);
    // The dual point of a plane through p[0] lies on p[0]'s dual plane.
    DualPoint<3> on{{make_rational(1), make_rational(2), Rational(p[0][2] - p[0][0] - 2 * p[0][1])}};
    CHECK_THROWS_AS(level<3>(on, p), DegenerateInput);
    CHECK_THROWS_AS(crossing_distance<3>(on, on, p), DegenerateInput);
}

TEST_CASE("crossing distance basics", "[dual_metrics]") {
    auto p = points3(25, 2);
    DualPoint<3> lo{{make_rational(0), make_rational(0), make_rational(-100000)}};
    DualPoint<3> hi{{make_rational(0), make_rational(0), make_rational(100000)}};
    CHECK(crossing_distance<3>(lo, lo, p) == 0);
    CHECK(crossing_distance<3>(lo, hi, p) == 25);
    CHECK(crossing_distance<3>(hi, lo, p) == 25);
}

TEST_CASE("vertex levels match an independent Cramer solve", "[dual_metrics][oracle]") {
    auto p = points3(14, 3);
    auto verts = shallow_vertices<3>(p, 14);
    REQUIRE(verts.size() == 364);  // C(14, 3)
    for (const auto& v : verts) {
        auto x = dual_vertex_by_cramer(p, v.contacts);
        IndexSet below;
        for (std::size_t i = 0; i < p.size(); ++i) {
            Rational plane = -Rational(p[i][0]) * x[0] - Rational(p[i][1]) * x[1] + Rational(p[i][2]);
            if (std::find(v.contacts.begin(), v.contacts.end(), static_cast<int>(i)) != v.contacts.end()) {
                CHECK(plane == x[2]);
                continue;
            }
            REQUIRE(plane != x[2]);
            if (plane < x[2]) below.insert(i);
        }
        CHECK(below == v.below);
    }
}

TEST_CASE("shallow vertex inventory", "[dual_metrics]") {
    PointSet<3> three{{0, 0, 0}, {5, 1, 2}, {1, 4, 7}};
    CHECK(shallow_vertices<3>(three, 3).size() == 1);
    auto p = points3(18, 4);
    ShallowCount all, some;
    CHECK(shallow_vertices<3>(p, 18, &all).size() == 816);  // C(18, 3)
    CHECK(all.total == 816);
    CHECK(all.skipped == 0);
    auto low = shallow_vertices<3>(p, 4, &some);
    CHECK(some.vertices == low.size());
    CHECK(some.total == 816);
    for (const auto& v : low) CHECK(v.level() <= 4);
    // 2D: every pair of dual lines meets.
    auto q = oracle::random_points_2d(12, 4);
    CHECK(shallow_vertices<2>(q, 12).size() == 66);
}

TEST_CASE("closed vertex distance obeys the triangle inequality", "[dual_metrics]") {
    auto p = points3(16, 5);
    auto verts = shallow_vertices<3>(p, 6);
    REQUIRE(verts.size() > 20);
    const std::size_t m = std::min<std::size_t>(verts.size(), 60);
    for (std::size_t i = 0; i < m; ++i) {
        CHECK(vertex_distance<3>(verts[i], verts[i], 16) == 0);
        for (std::size_t j = 0; j < m; ++j) {
            auto dij = vertex_distance<3>(verts[i], verts[j], 16);
            CHECK(dij == vertex_distance<3>(verts[j], verts[i], 16));
            CHECK(vertex_open_distance<3>(verts[i], verts[j], 16) <= dij);
            for (std::size_t k = 0; k < m; k += 7)
                CHECK(vertex_distance<3>(verts[i], verts[k], 16) <=
                      dij + vertex_distance<3>(verts[j], verts[k], 16));
        }
    }
}

TEST_CASE("family duals: levels, separation and triangle inequality", "[dual_metrics][family]") {
    auto p = points3(50, 6);
    auto beta = make_rational(1, 22);
    for (Side side : {Side::lower, Side::upper}) {
        auto f = build_family<3>(p, make_rational(1, 10), beta, side);
        REQUIRE(f.size() >= 2);
        auto planes = perturbed_planes(p, f, 1);
        auto q = side == Side::lower ? p : reflect_last_axis<3>(p);
        const std::int64_t k = 5;
        std::vector<DualPoint<3>> duals;
        for (std::size_t i = 0; i < f.size(); ++i) {
            duals.push_back(dual_of(planes[i]));
            auto h = dualize<3>(duals.back());
            CHECK(level<3>(duals.back(), q) == depth<3>(h, q));
            CHECK(level<3>(duals.back(), q) == static_cast<std::int64_t>(f.members[i].trace.size()));
            CHECK(level<3>(duals.back(), q) >= k);
            CHECK(level<3>(duals.back(), q) <= 2 * k);
        }
        for (std::size_t i = 0; i < duals.size(); ++i)
            for (std::size_t j = 0; j < duals.size(); ++j) {
                auto dij = crossing_distance<3>(duals[i], duals[j], q);
                if (i != j) {
                    CHECK(dij == static_cast<std::int64_t>((f.members[i].trace.indices ^ f.members[j].trace.indices).size()));
                    CHECK(Rational(dij) >= 2 * (1 - beta) * k);
                }
                for (std::size_t l = 0; l < duals.size(); ++l)
                    CHECK(crossing_distance<3>(duals[i], duals[l], q) <= dij + crossing_distance<3>(duals[j], duals[l], q));
            }
    }
}

TEST_CASE("balls", "[dual_metrics][balls]") {
    auto p = points3(30, 7);
    auto verts = shallow_vertices<3>(p, 30);
    IndexSet trace = IndexSet{0, 1, 2, 3};
    CHECK(ball<3>(verts, trace, make_rational(0), 30).empty());
    // Brute-force membership with the ball's own radius rule.
    auto r = make_rational(7, 2);
    auto b = ball<3>(verts, trace, r, 30);
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < verts.size(); ++i)
        if (Rational(vertex_to_member<3>(verts[i], trace, 30)) < r) expect.push_back(i);
    CHECK(b == expect);
}

TEST_CASE("analysis of seeded families", "[dual_metrics][family]") {
    for (std::uint64_t seed : {11u, 12u}) {
        auto p = points3(40, seed);
        for (Side side : {Side::lower, Side::upper}) {
            auto f = build_family<3>(p, make_rational(1, 5), make_rational(1, 22), side);
            auto st = analyze_family_dual<3>(p, f, make_rational(1, 22));
            CHECK(st.ok());
            CHECK(st.k == 8);
            CHECK(st.r == make_rational(21, 22) * 8);
            CHECK(st.ball_sizes.size() == f.size());
            CHECK(st.ball_sum() <= st.shallow.vertices);
            CHECK(st.shallow.total + st.shallow.skipped == 9880);  // C(40, 3)
        }
    }
}

TEST_CASE("log-log slope", "[dual_metrics]") {
    std::vector<double> x{1, 2, 4, 8}, y{3, 12, 48, 192};
    CHECK(loglog_slope(x, y) == Catch::Approx(2.0));
    CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), InvalidArgument);
}
