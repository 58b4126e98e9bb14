#include <catch_amalgamated.hpp>

#include <cmath>

#include "epsnet.hpp"
#include "epsnet/io.hpp"
#include "oracles.hpp"

using namespace epsnet;

namespace {

constexpr GeneratorKind kKinds[] = {GeneratorKind::cube_uniform, GeneratorKind::sphere_rounded, GeneratorKind::paraboloid,
                                    GeneratorKind::clustered};

}  // namespace

TEST_CASE("generators are deterministic and in general position", "[experiments][generator]") {
    for (auto kind : kKinds) {
        auto a = generate<3>(kind, 50, 17);
        auto b = generate<3>(kind, 50, 17);
        auto c = generate<3>(kind, 50, 18);
        CHECK(a.points == b.points);
        CHECK(a.points != c.points);
        CHECK(a.points.size() == 50);
        CHECK(validate_general_position<3>(a.points).ok);
        for (const auto& p : a.points)
            for (auto x : p) {
                CHECK(x >= 0);
                CHECK(x <= kDefaultBox);
            }
        auto d = generate<2>(kind, 30, 17, 5000);
        CHECK(validate_general_position<2>(d.points).ok);
        CHECK(parse_generator(to_string(kind)) == kind);
    }
}

TEST_CASE("generator edge cases", "[experiments][generator]") {
    auto g = generate<3>(GeneratorKind::cube_uniform, 4, 1);
    CHECK(g.points.size() == 4);
    CHECK(validate_general_position<3>(g.points).ok);
    CHECK_THROWS_AS(generate<3>(GeneratorKind::cube_uniform, 3, 1), InvalidArgument);
    CHECK_THROWS_AS(generate<2>(GeneratorKind::cube_uniform, 2, 1), InvalidArgument);
    CHECK_THROWS_AS(generate<3>(GeneratorKind::cube_uniform, 400, 1), InvalidArgument);
    CHECK_THROWS_AS(parse_generator("gaussian"), InvalidArgument);
}

TEST_CASE("line family on the smallest grid", "[experiments][elekes]") {
    auto r = elekes_demo(2, make_rational(1, 2));
    CHECK(r.n == 16);
    CHECK(r.epsilon == make_rational(1, 8));
    CHECK(r.family_size() == 8);
    CHECK(r.counts == std::vector<int>(8, 2));
    CHECK(r.ok());
    CHECK(r.ratio == Catch::Approx(std::pow(2.0, 1.5)));
}

TEST_CASE("line family checked against brute force", "[experiments][elekes][oracle]") {
    for (int k : {3, 4}) {
        auto r = elekes_demo(k, make_rational(1, k));
        REQUIRE(r.family_size() == static_cast<std::size_t>(k * k * k));
        // Incidences counted from the grid side.
        std::map<std::pair<int, int>, int> count;
        std::map<std::pair<int, int>, std::set<std::pair<int, int>>> on;
        for (int x = 1; x <= k; ++x)
            for (int y = 1; y <= 2 * k * k; ++y)
                for (auto [a, b] : r.lines)
                    if (y == a * x + b) {
                        ++count[{a, b}];
                        on[{a, b}].insert({x, y});
                    }
        for (std::size_t i = 0; i < r.lines.size(); ++i) CHECK(count[r.lines[i]] == r.counts[i]);
        for (int c : r.counts) CHECK(c == k);
        int shared = 0;
        for (auto& [l1, s1] : on)
            for (auto& [l2, s2] : on)
                if (l1 < l2) {
                    int common = 0;
                    for (const auto& p : s1) common += static_cast<int>(s2.count(p));
                    shared = std::max(shared, common);
                }
        CHECK(shared == r.max_shared);
        CHECK(shared <= 1);
        CHECK(r.ok());
        CHECK(r.ratio == Catch::Approx(std::pow(2.0, 1.5)));
    }
    // A budget below one shared point breaks condition (b).
    CHECK_FALSE(elekes_demo(3, make_rational(1, 4)).condition_b);
    CHECK_THROWS_AS(elekes_demo(1, make_rational(1, 2)), InvalidArgument);
}

TEST_CASE("sweep rows round trip through CSV", "[experiments][csv]") {
    CHECK(std::string(kSweepHeader) == "generator,n,dim,epsilon,beta,seed,family_size,net_size,baseline_size,valid,millis");
    SweepRow r;
    r.generator = "paraboloid";
    r.n = 120;
    r.dim = 3;
    r.epsilon = make_rational(1, 10);
    r.beta = make_rational(1, 22);
    r.seed = 7;
    r.family_size = 9;
    r.net_size = 41;
    r.baseline_size = 63;
    r.valid = true;
    r.millis = 12.5;
    auto line = to_csv(r);
    CHECK(line == "paraboloid,120,3,1/10,1/22,7,9,41,63,true,12.5");
    auto back = parse_sweep_row(line);
    CHECK(back.generator == r.generator);
    CHECK(back.n == r.n);
    CHECK(back.epsilon == r.epsilon);
    CHECK(back.beta == r.beta);
    CHECK(back.seed == r.seed);
    CHECK(back.family_size == r.family_size);
    CHECK(back.net_size == r.net_size);
    CHECK(back.baseline_size == r.baseline_size);
    CHECK(back.valid);
    CHECK(back.millis == 12.5);
    CHECK_THROWS_AS(parse_sweep_row("a,b,c"), InvalidArgument);
    CHECK_THROWS_AS(parse_sweep_row("x,n,3,1/10,1/22,7,9,41,63,true,1"), InvalidArgument);
}

TEST_CASE("instances and nets round trip through JSON", "[experiments][io]") {
    auto g = generate<3>(GeneratorKind::clustered, 30, 3);
    auto inst = make_instance(g);
    auto j = to_json(inst);
    CHECK(j.at("dim") == 3);
    CHECK(j.at("generator").at("kind") == "clustered");
    auto back = instance_from_json(json::parse(j.dump()));
    CHECK(back.as<3>() == g.points);
    CHECK_THROWS_AS(back.as<2>(), InvalidArgument);
    CHECK_THROWS_AS(instance_from_json(json{{"dim", 3}, {"points", {{1, 2}}}}), InvalidArgument);
    CHECK_THROWS_AS(instance_from_json(json{{"dim", 4}, {"points", json::array()}}), InvalidArgument);
    CHECK_THROWS_AS(instance_from_json(json{{"points", json::array()}}), InvalidArgument);

    BuildConfig cfg;
    cfg.epsilon = make_rational(1, 5);
    auto rep = build_net<3>(g.points, cfg);
    auto nj = json::parse(to_json(rep).dump());
    CHECK(nj.at("epsilon") == "1/5");
    CHECK(nj.at("valid") == true);
    REQUIRE(nj.at("families").size() == rep.families.size());
    for (const auto& fam : nj.at("families"))
        for (const auto& m : fam.at("members")) {
            CHECK(m.contains("trace"));
            CHECK(m.contains("contacts"));
            CHECK(m.contains("subnet"));
        }
    auto nf = net_from_json(nj);
    CHECK(nf.epsilon == cfg.epsilon);
    CHECK(nf.net == rep.net);
    CHECK(verify_net<3>(g.points, nf.net, nf.epsilon).valid);
    CHECK_THROWS_AS(net_from_json(json{{"epsilon", "1/4"}, {"net", {-1}}}), InvalidArgument);
}

TEST_CASE("small scaling sweep", "[experiments][sweep]") {
    auto rows = scaling_sweep<3>(GeneratorKind::cube_uniform, 48, {make_rational(1, 4), make_rational(1, 6)},
                                 make_rational(1, 22), {1, 2});
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.valid);
        CHECK(r.generator == "cube_uniform");
        CHECK(Rational(static_cast<std::int64_t>(r.family_size)) * r.epsilon <= 4);
        CHECK(r.net_size <= 48);
        CHECK(r.baseline_size >= 1);
        CHECK(parse_sweep_row(to_csv(r)).net_size == r.net_size);
    }
}
