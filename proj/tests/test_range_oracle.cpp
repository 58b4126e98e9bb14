#include <catch_amalgamated.hpp>

#include "epsnet.hpp"
#include "oracles.hpp"

using namespace epsnet;

namespace {

PointSet<3> points3(std::size_t n, std::uint64_t seed, Coord box = 1000) {
    return generate<3>(GeneratorKind::cube_uniform, n, seed, box).points;
}

template <int D>
Halfspace<D> random_halfspace(Rng& rng, Coord box) {
    std::uniform_int_distribution<int> slope(-20, 20);
    std::uniform_int_distribution<Coord> icpt(-2 * box, 3 * box);
    std::array<Rational, D - 1> s;
    for (auto& v : s) v = make_rational(slope(rng), 1 + slope(rng) % 3 + 3);
    return Halfspace<D>{Hyperplane<D>::from_graph(s, Rational(icpt(rng))), rng() % 2 ? Side::upper : Side::lower};
}

}  // namespace

TEST_CASE("depth counts closed membership", "[range_oracle]") {
    PointSet<2> p{{0, 0}, {4, 1}, {1, 5}, {5, 6}, {8, 3}};
    Halfspace<2> y_le_2{Hyperplane<2>::from_graph({make_rational(0)}, make_rational(2)), Side::lower};
    CHECK(depth<2>(y_le_2, p) == 2);
    Halfspace<2> all{Hyperplane<2>::from_graph({make_rational(0)}, make_rational(100)), Side::lower};
    CHECK(depth<2>(all, p) == 5);
}

TEST_CASE("depth matches per-point sidedness on random pairs", "[range_oracle]") {
    Rng rng(8);
    for (int it = 0; it < 200; ++it) {
        auto pts = points3(25, static_cast<std::uint64_t>(it));
        auto h = random_halfspace<3>(rng, 1000);
        std::int64_t count = 0;
        for (const auto& p : pts)
            if (sign_of(h.signed_value(p)) <= 0) ++count;
        CHECK(depth<3>(h, pts) == count);
    }
}

TEST_CASE("three points in the plane realize every subset", "[range_oracle]") {
    PointSet<2> p{{0, 0}, {5, 1}, {2, 4}};
    auto traces = enumerate_canonical_traces<2>(p, SideFilter::both, 1, 3);
    auto sweep = oracle::window(oracle::sweep_traces_2d(p, false), 1, 3);
    CHECK(oracle::keys_of(traces) == sweep);
    CHECK(traces.size() == 7);
}

TEST_CASE("four points in convex position have four pair traces", "[range_oracle]") {
    PointSet<2> p{{0, 0}, {4, 1}, {5, 5}, {1, 4}};
    auto traces = enumerate_canonical_traces<2>(p, SideFilter::both, 2, 2);
    oracle::TraceKeys expect{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    CHECK(oracle::keys_of(traces) == expect);
    CHECK(oracle::window(oracle::sweep_traces_2d(p, false), 2, 2) == expect);
}

TEST_CASE("full window holds exactly one trace", "[range_oracle]") {
    auto p = points3(15, 3);
    auto traces = enumerate_canonical_traces<3>(p, SideFilter::both, 15, 15);
    REQUIRE(traces.size() == 1);
    CHECK(traces.traces().front().size() == 15);
}

TEST_CASE("2D enumeration equals the angular sweep", "[range_oracle][oracle]") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        auto p = oracle::random_points_2d(6 + seed, seed);
        const auto n = p.size();
        CHECK(oracle::keys_of(enumerate_canonical_traces<2>(p, SideFilter::both, 0, static_cast<std::int64_t>(n))) ==
              oracle::sweep_traces_2d(p, false));
        CHECK(oracle::keys_of(enumerate_canonical_traces<2>(p, SideFilter::lower, 0, static_cast<std::int64_t>(n))) ==
              oracle::sweep_traces_2d(p, true));
    }
}

TEST_CASE("3D enumeration equals the direction oracle", "[range_oracle][oracle]") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto p = points3(6 + 2 * seed, 40 + seed, 200);
        const auto n = static_cast<std::int64_t>(p.size());
        CHECK(oracle::keys_of(enumerate_canonical_traces<3>(p, SideFilter::both, 0, n)) ==
              oracle::direction_traces_3d(p, false));
        CHECK(oracle::keys_of(enumerate_canonical_traces<3>(p, SideFilter::lower, 0, n)) ==
              oracle::direction_traces_3d(p, true));
    }
}

TEST_CASE("random halfspaces have their trace enumerated", "[range_oracle]") {
    auto p = points3(30, 77);
    auto traces = enumerate_canonical_traces<3>(p, SideFilter::both, 0, 30);
    Rng rng(77);
    std::uniform_int_distribution<int> c(-1000, 1000);
    for (int it = 0; it < 2000; ++it) {
        std::array<BigInt, 3> u{c(rng), c(rng), c(rng)};
        BigInt off = BigInt(c(rng)) * 1000;
        CHECK(traces.contains(IndexSet::from(oracle::trace_of<3>(p, u, off))));
    }
}

TEST_CASE("windows partition the enumeration", "[range_oracle]") {
    auto p = points3(14, 9);
    auto all = oracle::keys_of(enumerate_canonical_traces<3>(p, SideFilter::both, 0, 14));
    oracle::TraceKeys merged;
    for (auto [lo, hi] : {std::pair{0, 3}, {4, 8}, {9, 14}}) {
        auto part = oracle::keys_of(enumerate_canonical_traces<3>(p, SideFilter::both, lo, hi));
        CHECK(part == oracle::window(all, lo, hi));
        merged.insert(part.begin(), part.end());
    }
    CHECK(merged == all);
    auto narrow = oracle::keys_of(enumerate_canonical_traces<3>(p, SideFilter::both, 5, 6));
    CHECK(std::includes(all.begin(), all.end(), narrow.begin(), narrow.end()));
}

TEST_CASE("every canonical trace shrinks to each smaller size", "[range_oracle]") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto p = points3(10 + seed, 100 + seed);
        const auto n = static_cast<std::int64_t>(p.size());
        auto traces = enumerate_canonical_traces<3>(p, SideFilter::lower, 1, n);
        for (const auto& t : traces) {
            for (std::int64_t m = 1; m < static_cast<std::int64_t>(t.size()); ++m) {
                bool found = false;
                for (const auto& u : traces)
                    if (static_cast<std::int64_t>(u.size()) == m && u.indices.is_subset_of(t.indices)) {
                        found = true;
                        break;
                    }
                CHECK(found);
            }
        }
    }
}

TEST_CASE("representatives reproduce their trace", "[range_oracle]") {
    auto p = points3(20, 4);
    for (const auto& t : enumerate_canonical_traces<3>(p, SideFilter::both, 0, 20)) {
        auto h = to_halfspace<3>(p, t);
        IndexSet strict, on;
        for (std::size_t i = 0; i < p.size(); ++i) {
            auto loc = side_of<3>(h, p[i]);
            if (loc == Location::inside_strict) strict.insert(i);
            if (loc == Location::on_boundary) on.insert(i);
        }
        CHECK(on.size() == 3);
        CHECK(strict.is_subset_of(t.indices));
        CHECK((t.indices - strict).is_subset_of(on));
    }
}

TEST_CASE("degenerate input is rejected", "[range_oracle]") {
    PointSet<3> p{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {3, 7, 2}};
    CHECK_THROWS_AS(enumerate_canonical_traces<3>(p, SideFilter::both, 0, 5), DegenerateInput);
    CHECK_THROWS_AS(verify_net<3>(p, IndexSet{}, make_rational(1, 2)), DegenerateInput);
}

TEST_CASE("verify_net trivial cases", "[range_oracle][verify]") {
    auto p = points3(20, 1);
    for (auto e : {make_rational(1, 20), make_rational(1, 3), make_rational(1)})
        CHECK(verify_net<3>(p, IndexSet::prefix(20), e).valid);
    auto v = verify_net<3>(p, IndexSet{}, make_rational(1));
    REQUIRE_FALSE(v.valid);
    REQUIRE(v.witness);
    CHECK(v.witness->size() == 20);
    CHECK_THROWS_AS(verify_net<3>(p, IndexSet{}, make_rational(0)), InvalidArgument);
    CHECK_THROWS_AS(verify_net<3>(p, IndexSet{25}, make_rational(1, 2)), InvalidArgument);
}

TEST_CASE("failing verdicts carry a heavy missed witness", "[range_oracle][verify]") {
    Rng rng(3);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto p = points3(18, seed);
        auto net = IndexSet::from(sample_without_replacement(detail::iota_indices(18), 1 + seed % 4, rng));
        auto e = make_rational(1 + static_cast<std::int64_t>(seed % 5), 8);
        auto v = verify_net<3>(p, net, e);
        auto traces = oracle::keys_of(enumerate_canonical_traces<3>(p, SideFilter::both, 0, 18));
        CHECK(v.valid == oracle::is_net(traces, net, ceil_times(e, 18)));
        if (!v.valid) {
            REQUIRE(v.witness);
            CHECK(static_cast<std::int64_t>(v.witness->size()) >= v.threshold);
            CHECK_FALSE(v.witness->indices.intersects(net));
            CHECK(traces.count(oracle::key(v.witness->indices)) == 1);
        }
    }
}

TEST_CASE("verify_net is monotone in N and epsilon", "[range_oracle][verify]") {
    Rng rng(12);
    auto p = points3(22, 12);
    for (int it = 0; it < 20; ++it) {
        auto order = sample_without_replacement(detail::iota_indices(22), 22, rng);
        IndexSet net;
        bool was_valid = false;
        for (int i : order) {
            net.insert(static_cast<std::size_t>(i));
            bool now = verify_net<3>(p, net, make_rational(1, 4)).valid;
            CHECK((!was_valid || now));
            was_valid = now;
            for (auto bigger : {make_rational(1, 3), make_rational(1, 2)})
                if (now) CHECK(verify_net<3>(p, net, bigger).valid);
        }
    }
}

TEST_CASE("builder output verifies on a small instance", "[range_oracle][verify]") {
    auto p = points3(20, 2026);
    BuildConfig cfg;
    cfg.epsilon = make_rational(1, 4);
    cfg.seed = 2026;
    auto rep = build_net<3>(p, cfg);
    CHECK(verify_net<3>(p, rep.net, cfg.epsilon).valid);
}

TEST_CASE("subnet oracle", "[range_oracle][subnet]") {
    SECTION("singleton subset") {
        PointSet<2> p{{0, 0}, {3, 1}, {1, 4}};
        auto t = subnet_oracle<2>(p, IndexSet{1}, make_rational(1));
        REQUIRE(t.size() == 1);
        CHECK(t.front().indices == IndexSet{1});
    }
    SECTION("convex quadrilateral") {
        PointSet<2> p{{0, 0}, {4, 1}, {5, 5}, {1, 4}, {9, 9}};
        IndexSet s{0, 1, 2, 3};
        auto got = oracle::keys_of(subnet_oracle<2>(p, s, make_rational(1)));
        PointSet<2> sub{p[0], p[1], p[2], p[3]};
        auto expect = oracle::keys_of(enumerate_canonical_traces<2>(sub, SideFilter::lower, 2, 4));
        CHECK(got == expect);
        CHECK(got == oracle::window(oracle::sweep_traces_2d(sub, true), 2, 4));
    }
    SECTION("twelve points in space") {
        auto p = points3(30, 55, 300);
        std::vector<int> chosen{0, 2, 3, 5, 8, 11, 13, 17, 19, 23, 27, 29};
        auto got = subnet_oracle<3>(p, IndexSet::from(chosen), make_rational(1, 8));
        PointSet<3> sub;
        for (int i : chosen) sub.push_back(p[i]);
        auto all = oracle::window(oracle::direction_traces_3d(sub, true), 1, 12);  // ceil(12/16) = 1
        CHECK(got.size() == all.size());
        oracle::TraceKeys mapped;
        for (const auto& k : all) {
            std::vector<int> m;
            for (int i : k) m.push_back(chosen[i]);
            mapped.insert(m);
        }
        CHECK(oracle::keys_of(got) == mapped);
    }
}
