#include <catch_amalgamated.hpp>

#include "epsnet.hpp"
#include "oracles.hpp"

using namespace epsnet;

namespace {

std::vector<HomPlane> random_planes(std::size_t t, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_int_distribution<int> s(-40, 40), c(-500, 500);
    std::vector<HomPlane> out;
    for (std::size_t i = 0; i < t; ++i) out.push_back(hom_plane(s(rng), s(rng), c(rng)));
    return out;
}

// Height of plane p at (x, y) times the common positive denominator.
Rational height(const HomPlane& p, const Rational& x, const Rational& y) {
    return (Rational(p.a) * x + Rational(p.b) * y + Rational(p.g)) / Rational(p.w);
}

// Planes that are the unique maximum at some sampled location.
std::set<int> sampled_top(const std::vector<HomPlane>& planes, int grid, int span) {
    std::set<int> out;
    for (int i = -grid; i <= grid; ++i)
        for (int j = -grid; j <= grid; ++j) {
            Rational x = make_rational(i * span, grid), y = make_rational(j * span, grid);
            int best = -1;
            Rational top;
            bool unique = true;
            for (std::size_t k = 0; k < planes.size(); ++k) {
                Rational h = height(planes[k], x, y);
                if (best < 0 || h > top) {
                    best = static_cast<int>(k);
                    top = h;
                    unique = true;
                } else if (h == top) {
                    unique = false;
                }
            }
            if (unique) out.insert(best);
        }
    return out;
}

Family<3> family_for(const PointSet<3>& p, const Rational& eps, const Rational& beta, Side side) {
    auto f = build_family<3>(p, eps, beta, side);
    for (auto& m : f.members) m.subnet = build_subnet<3>(p, m.trace, beta);
    return f;
}

}  // namespace

TEST_CASE("two crossing planes are both on the envelope", "[envelope]") {
    std::vector<HomPlane> planes{hom_plane(0, 0, 0), hom_plane(1, 0, 0)};
    auto on = envelope_membership(planes);
    CHECK(on[0]);
    CHECK(on[1]);
    CHECK(envelope_degrees_direct(planes, {0, 1}) == std::vector<int>{1, 1});
}

TEST_CASE("parallel and repeated planes", "[envelope]") {
    std::vector<HomPlane> planes{hom_plane(0, 0, 0), hom_plane(0, 0, -1), hom_plane(0, 0, 0)};
    auto on = envelope_membership(planes);
    CHECK_FALSE(on[1]);
    // Identical planes: neither is strictly above the other anywhere.
    CHECK_FALSE(on[0]);
    CHECK_FALSE(on[2]);
    auto single = envelope_membership(planes, {0, 1});
    CHECK(single[0]);
    CHECK_FALSE(single[1]);
}

TEST_CASE("nested planes peel one layer at a time", "[envelope][peel]") {
    std::vector<HomPlane> planes;
    for (int i = 1; i <= 5; ++i) planes.push_back(hom_plane(0, 0, -i));
    auto rec = peel_layers(planes);
    REQUIRE(rec.layers.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(rec.layers[i] == std::vector<int>{i});
    CHECK(rec.k() == 4);
    CHECK(rec.sum_degree == 0);
}

TEST_CASE("four generic planes have at most 3t-6 envelope edges", "[envelope]") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto planes = random_planes(4, seed);
        auto all = detail::iota_indices(4);
        auto deg = envelope_degrees_direct(planes, all);
        long sum = 0;
        for (int d : deg) sum += d;
        CHECK(sum <= 12);
        auto on = envelope_membership(planes);
        if (std::all_of(on.begin(), on.end(), [](bool b) { return b; })) CHECK(sum <= 2 * (3 * 4 - 6));
    }
}

TEST_CASE("membership agrees with sampled maxima", "[envelope][oracle]") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto planes = random_planes(8 + seed % 6, 100 + seed);
        auto on = envelope_membership(planes);
        for (int k : sampled_top(planes, 12, 60)) CHECK(on[k]);
    }
}

TEST_CASE("hull degrees equal direct edge tests", "[envelope]") {
    int compared = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto planes = random_planes(5 + seed % 10, 500 + seed);
        auto all = detail::iota_indices(planes.size());
        std::vector<int> hull;
        try {
            hull = envelope_degrees(planes, all);
        } catch (const HullDegenerate&) {
            continue;  // integer planes may be degenerate for the hull
        }
        ++compared;
        auto direct = envelope_degrees_direct(planes, all);
        CHECK(hull == direct);
        long sum = 0;
        for (int d : direct) sum += d;
        auto on = envelope_membership(planes);
        long t_on = std::count(on.begin(), on.end(), true);
        if (t_on >= 3) CHECK(sum <= 2 * (3 * t_on - 6));
        for (std::size_t i = 0; i < planes.size(); ++i)
            if (!on[i]) CHECK(direct[i] == 0);
    }
    CHECK(compared >= 20);
}

TEST_CASE("families from point sets", "[envelope][family]") {
    auto p = generate<3>(GeneratorKind::cube_uniform, 60, 60).points;
    for (Side side : {Side::lower, Side::upper}) {
        auto f = family_for(p, make_rational(1, 10), make_rational(1, 22), side);
        UNSCOPED_INFO("family size " << f.size());
        REQUIRE(f.size() >= 2);

        SECTION(std::string("perturbed planes keep every trace, ") + to_string(side)) {
            auto planes = perturbed_planes(p, f, 3);
            auto q = side == Side::lower ? p : reflect_last_axis<3>(p);
            for (std::size_t i = 0; i < f.size(); ++i) {
                IndexSet below;
                for (std::size_t k = 0; k < q.size(); ++k) {
                    Rational z = height(planes[i], Rational(q[k][0]), Rational(q[k][1]));
                    REQUIRE(Rational(q[k][2]) != z);
                    if (Rational(q[k][2]) < z) below.insert(k);
                }
                CHECK(below == f.members[i].trace.indices);
            }
        }

        SECTION(std::string("structure and checks, ") + to_string(side)) {
            auto es = face_degrees_and_pockets(p, f, 7);
            CHECK(es.t() == f.size());
            CHECK(es.all_on_envelope());
            auto chk = check_envelope(es);
            CHECK(chk.ok());
            CHECK(es.sum_degree() < 6 * static_cast<long>(es.t()));
            CHECK(2 * es.light_count() >= es.t());
            CHECK(es.pocket_threshold() == 3);
            auto direct = envelope_degrees_direct(es.planes, detail::iota_indices(es.t()));
            CHECK(es.degree == direct);
            for (std::size_t i = 0; i < es.t(); ++i) {
                IndexSet others;
                for (std::size_t j = 0; j < es.t(); ++j)
                    if (j != i) others |= f.members[j].trace.indices;
                CHECK(es.pockets[i] == f.members[i].trace.indices - others);
            }
        }

        SECTION(std::string("a single peeling layer, ") + to_string(side)) {
            auto rec = peel_layers(p, f, 7);
            CHECK(rec.layers.size() == 1);
            CHECK(rec.k() == 0);
            CHECK(rec.t == f.size());
        }

        SECTION(std::string("incremental insertion, ") + to_string(side)) {
            auto planes = perturbed_planes(p, f, 11);
            auto stat = envelope_degrees(planes, detail::iota_indices(planes.size()));
            auto rec = incremental_degrees(p, f, 11);
            REQUIRE(rec.permutation.size() == f.size());
            CHECK(rec.degree_at_birth.front() == 0);
            CHECK(rec.degree_at_birth.back() == stat[rec.permutation.back()]);
            CHECK(rec.pocket_at_birth.front() == f.members[rec.permutation.front()].trace.indices);
            CHECK(rec.pockets_disjoint());
            auto s = incremental_summary(p, f, 11, 5);
            CHECK(s.runs.size() == 5);
            CHECK(s.pockets_disjoint);
            CHECK(s.mean_ratio <= s.max_ratio);
            CHECK(s.max_ratio < 6.0);
        }
    }
}

TEST_CASE("pocket accounting fails loudly on a hand-made overlap", "[envelope]") {
    EnvelopeStructure es;
    es.scale = make_rational(1, 5);
    es.n = 20;
    es.planes = {hom_plane(0, 0, 0), hom_plane(1, 0, 0)};
    es.on_envelope = {true, true};
    es.degree = {1, 1};
    es.pockets = {IndexSet{0, 1, 2, 3}, IndexSet{3, 4, 5, 6}};
    auto chk = check_envelope(es);
    CHECK_FALSE(chk.pockets_disjoint);
    CHECK(chk.light_pockets_large);
    es.pockets = {IndexSet{0}, IndexSet{3, 4}};
    CHECK_FALSE(check_envelope(es).light_pockets_large);
}

TEST_CASE("empty input is rejected", "[envelope]") {
    CHECK_THROWS_AS(envelope_membership(std::vector<HomPlane>{}), InvalidArgument);
    CHECK_THROWS_AS(peel_layers(std::vector<HomPlane>{}), InvalidArgument);
}
