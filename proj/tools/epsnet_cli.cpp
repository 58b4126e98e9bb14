// Command-line front end. Exit codes: 0 success, 1 verification or assertion
// failure, 2 degenerate or invalid input.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epsnet.hpp"
#include "epsnet/io.hpp"

using namespace epsnet;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInvalid = 2;

struct AssertionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << text << '\n';
}

std::vector<Rational> parse_list(const std::string& s) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
    if (out.empty()) throw InvalidArgument("empty list");
    return out;
}

BuildMode parse_mode(const std::string& s) {
    if (s == "single_scale") return BuildMode::single_scale;
    if (s == "doubling") return BuildMode::doubling;
    throw InvalidArgument("mode must be single_scale or doubling");
}

SubnetMethod parse_subnet(const std::string& s) {
    if (s == "greedy_hitting_set") return SubnetMethod::greedy_hitting_set;
    if (s == "sample_and_verify") return SubnetMethod::sample_and_verify;
    throw InvalidArgument("subnet method must be greedy_hitting_set or sample_and_verify");
}

void check(bool cond, const std::string& what) {
    if (!cond) throw AssertionFailed(what);
}

struct BuildArgs {
    std::string input, output, epsilon = "1/4", beta = "1/22", mode = "single_scale", subnet = "greedy_hitting_set";
    std::uint64_t seed = 0;

    BuildConfig config() const {
        BuildConfig c;
        c.epsilon = parse_rational(epsilon);
        c.beta = parse_rational(beta);
        c.mode = parse_mode(mode);
        c.subnet_method = parse_subnet(subnet);
        c.seed = seed;
        c.validate();
        return c;
    }
};

void add_build_flags(CLI::App* app, BuildArgs& a, bool with_mode) {
    app->add_option("-i,--in", a.input, "instance JSON")->required();
    app->add_option("-e,--epsilon", a.epsilon, "epsilon as p/q or decimal");
    app->add_option("-b,--beta", a.beta, "intersection budget factor");
    if (with_mode) {
        app->add_option("--mode", a.mode, "single_scale | doubling");
        app->add_option("--subnet", a.subnet, "greedy_hitting_set | sample_and_verify");
    }
    app->add_option("-s,--seed", a.seed, "seed")->required();
}

template <int D>
json build_cmd(const PointSet<D>& pts, const BuildConfig& cfg) {
    auto rep = build_net<D>(pts, cfg);
    auto j = to_json(rep);
    auto cov = explain_coverage<D>(pts, rep);
    j["stats"] = {{"net_size", rep.stats.net_size},
                  {"family_lower", rep.stats.first_scale_lower},
                  {"family_upper", rep.stats.first_scale_upper},
                  {"family_bound", rep.stats.family_bound},
                  {"max_subnet", rep.stats.max_subnet},
                  {"mean_subnet", rep.stats.mean_subnet}};
    j["coverage"] = {{"heavy", cov.heavy}, {"member", cov.member}, {"conflict", cov.conflict},
                     {"other_hit", cov.other_hit}, {"missed", cov.missed}};
    return j;
}

json envelope_cmd(const PointSet<3>& pts, const BuildConfig& cfg, int runs) {
    auto rep = build_net<3>(pts, cfg);
    json fams = json::array();
    for (const auto& f : rep.families) {
        auto es = face_degrees_and_pockets(pts, f, cfg.seed);
        auto chk = check_envelope(es);
        auto peel = peel_layers(pts, f, cfg.seed);
        auto inc = incremental_summary(pts, f, cfg.seed, runs);
        std::vector<std::size_t> pockets;
        for (const auto& p : es.pockets) pockets.push_back(p.size());
        std::vector<std::size_t> layer_sizes;
        for (const auto& l : peel.layers) layer_sizes.push_back(l.size());
        fams.push_back({{"scale", to_string(f.scale)},
                        {"side", to_string(f.side)},
                        {"t", es.t()},
                        {"on_envelope", es.on_envelope},
                        {"degrees", es.degree},
                        {"pocket_sizes", pockets},
                        {"pocket_threshold", es.pocket_threshold()},
                        {"sum_degree", es.sum_degree()},
                        {"envelope_edges", es.envelope_edges},
                        {"light_faces", es.light_count()},
                        {"perturbation_attempts", es.perturbation_attempts},
                        {"checks_ok", chk.ok()},
                        {"check_detail", chk.detail},
                        {"peeling", {{"layers", layer_sizes}, {"sum_degree", peel.sum_degree}, {"ratio", peel.ratio()}}},
                        {"incremental",
                         {{"runs", runs},
                          {"mean_degree_at_birth", inc.mean_ratio},
                          {"max_degree_at_birth", inc.max_ratio},
                          {"pockets_disjoint", inc.pockets_disjoint}}}});
        if (cfg.beta < make_rational(1, 3)) {
            check(es.all_on_envelope(), "a member plane is hidden below the envelope");
            check(peel.layers.size() == 1, "peeling produced more than one layer");
        }
        check(chk.degree_sum_below_6t && chk.half_light && chk.pockets_disjoint, "degree accounting: " + chk.detail);
        if (cfg.beta <= make_rational(1, 22)) check(chk.light_pockets_large, "pocket counting: " + chk.detail);
        check(inc.pockets_disjoint, "pockets at birth overlap");
    }
    return {{"epsilon", to_string(cfg.epsilon)}, {"beta", to_string(cfg.beta)}, {"seed", cfg.seed}, {"families", fams}};
}

template <int D>
json dual_cmd(const PointSet<D>& pts, const BuildConfig& cfg) {
    auto rep = build_net<D>(pts, cfg);
    json fams = json::array();
    for (const auto& f : rep.families) {
        auto st = analyze_family_dual<D>(pts, f, cfg.beta);
        fams.push_back({{"scale", to_string(f.scale)},
                        {"side", to_string(f.side)},
                        {"k", st.k},
                        {"r", to_string(st.r)},
                        {"member_levels", st.member_levels},
                        {"min_distance", st.min_distance},
                        {"shallow_vertices", st.shallow.vertices},
                        {"total_vertices", st.shallow.total},
                        {"skipped_triples", st.shallow.skipped},
                        {"ball_sizes", st.ball_sizes},
                        {"ball_sum", st.ball_sum()},
                        {"levels_in_range", st.levels_in_range},
                        {"separated", st.separated},
                        {"balls_disjoint", st.balls_disjoint},
                        {"ball_levels_ok", st.ball_levels_ok},
                        {"ball_sum_ok", st.ball_sum_ok}});
        check(st.ok(), "dual separation checks failed");
    }
    return {{"epsilon", to_string(cfg.epsilon)}, {"beta", to_string(cfg.beta)}, {"families", fams}};
}

json pipeline_cmd(const PointSet<3>& pts, const PipelineConfig& cfg) {
    auto tr = run_pipeline<3>(pts, cfg);
    json sides = json::array();
    for (const auto& s : tr.sides)
        sides.push_back({{"side", to_string(s.side)},
                         {"sample_size", s.sample.indices.size()},
                         {"sample_draws", s.sample.draws},
                         {"sample_certified", s.sample.certified},
                         {"max_discrepancy", s.sample.max_discrepancy},
                         {"shallow_vertices", s.shallow_count},
                         {"r", to_string(s.r)},
                         {"family_size", s.members.size()}});
    return {{"epsilon", to_string(cfg.epsilon)},
            {"beta", to_string(cfg.beta)},
            {"approx_multiplier", cfg.approx_multiplier},
            {"seed", cfg.seed},
            {"attempts", tr.attempts},
            {"sides", sides},
            {"family_size", tr.family_size()},
            {"family_times_epsilon", static_cast<double>(tr.family_size()) * to_double(cfg.epsilon)},
            {"members_shallow", tr.members_shallow()},
            {"net", to_json(tr.net)},
            {"verdict", to_json(tr.verdict)}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"epsilon-nets for halfspaces in the plane and in space"};
    app.require_subcommand(1);

    // gen
    std::string gen_kind = "cube_uniform", gen_out;
    std::size_t gen_n = 0;
    int gen_dim = 3;
    std::uint64_t gen_seed = 0;
    Coord gen_box = kDefaultBox;
    auto* gen = app.add_subcommand("gen", "generate a seeded instance");
    gen->add_option("-k,--kind", gen_kind, "cube_uniform | sphere_rounded | paraboloid | clustered");
    gen->add_option("-n,--n", gen_n, "number of points")->required();
    gen->add_option("-d,--dim", gen_dim, "2 or 3");
    gen->add_option("--box", gen_box, "coordinates lie in [0, box]");
    gen->add_option("-s,--seed", gen_seed, "seed")->required();
    gen->add_option("-o,--out", gen_out, "output file (default stdout)");

    // build
    BuildArgs build_args;
    auto* build = app.add_subcommand("build", "construct and verify a net");
    add_build_flags(build, build_args, true);
    build->add_option("-o,--out", build_args.output, "net JSON (default stdout)");

    // verify
    std::string verify_in, verify_net_path, verify_eps;
    auto* verify = app.add_subcommand("verify", "check a net file against the complete oracle");
    verify->add_option("-i,--in", verify_in, "instance JSON")->required();
    verify->add_option("--net", verify_net_path, "net JSON")->required();
    verify->add_option("-e,--epsilon", verify_eps, "override the file's epsilon");

    // diagnose-envelope
    BuildArgs env_args;
    int env_runs = 20;
    auto* env = app.add_subcommand("diagnose-envelope", "envelope membership, degrees, pockets, peeling (3D)");
    add_build_flags(env, env_args, false);
    env->add_option("--runs", env_runs, "random insertion orders")->check(CLI::PositiveNumber);
    env->add_option("-o,--out", env_args.output, "report JSON (default stdout)");

    // diagnose-dual
    BuildArgs dual_args;
    auto* dual = app.add_subcommand("diagnose-dual", "dual levels, crossing distances and balls");
    add_build_flags(dual, dual_args, false);
    dual->add_option("-o,--out", dual_args.output, "report JSON (default stdout)");

    // pipeline-dual
    std::string pipe_in, pipe_out, pipe_eps = "1/4", pipe_beta = "1/16";
    PipelineConfig pipe_cfg;
    auto* pipe = app.add_subcommand("pipeline-dual", "approximation + shallow vertices + beta-nets (3D)");
    pipe->add_option("-i,--in", pipe_in, "instance JSON")->required();
    pipe->add_option("-e,--epsilon", pipe_eps, "epsilon");
    pipe->add_option("-b,--beta", pipe_beta, "subnet fraction, below 1/8");
    pipe->add_option("-a,--approx-multiplier", pipe_cfg.approx_multiplier, "sample size multiplier");
    pipe->add_option("--spot-checks", pipe_cfg.spot_checks, "segments per approximation check");
    pipe->add_option("--redraw-cap", pipe_cfg.redraw_cap, "approximation redraws");
    pipe->add_option("--retry-cap", pipe_cfg.retry_cap, "pipeline attempts");
    pipe->add_flag("--require-certified", pipe_cfg.require_certified_sample, "fail when no sample passes the spot-check");
    pipe->add_option("-s,--seed", pipe_cfg.seed, "seed")->required();
    pipe->add_option("-o,--out", pipe_out, "report JSON (default stdout)");

    // elekes
    int elekes_k = 2;
    std::string elekes_beta;
    auto* elekes = app.add_subcommand("elekes", "grid-and-lines family of k^3 heavy lines");
    elekes->add_option("-k,--k", elekes_k, "grid parameter (>= 2)")->required();
    elekes->add_option("-b,--beta", elekes_beta, "budget factor (default 1/k)");

    // sweep
    std::string sweep_gen = "cube_uniform", sweep_eps = "1/10,1/5,2/5", sweep_beta = "1/22", sweep_out, sweep_mode = "single_scale";
    std::size_t sweep_n = 60;
    int sweep_dim = 3, sweep_repeats = 1;
    std::uint64_t sweep_seed = 0;
    auto* sweep = app.add_subcommand("sweep", "net sizes across epsilon and seeds (CSV)");
    sweep->add_option("-g,--generator", sweep_gen, "generator kind");
    sweep->add_option("-n,--n", sweep_n, "points per instance");
    sweep->add_option("-d,--dim", sweep_dim, "2 or 3");
    sweep->add_option("-e,--epsilons", sweep_eps, "comma-separated epsilons");
    sweep->add_option("-b,--beta", sweep_beta, "budget factor");
    sweep->add_option("--mode", sweep_mode, "single_scale | doubling");
    sweep->add_option("-s,--seed", sweep_seed, "first seed")->required();
    sweep->add_option("-r,--repeats", sweep_repeats, "seeds seed, seed+1, ...")->check(CLI::PositiveNumber);
    sweep->add_option("-o,--out", sweep_out, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInvalid;
    }

    try {
        if (*gen) {
            if (gen_dim != 2 && gen_dim != 3) throw InvalidArgument("dim must be 2 or 3");
            auto kind = parse_generator(gen_kind);
            Instance inst = gen_dim == 2 ? make_instance(generate<2>(kind, gen_n, gen_seed, gen_box))
                                         : make_instance(generate<3>(kind, gen_n, gen_seed, gen_box));
            emit(gen_out, to_json(inst).dump());
        } else if (*build) {
            auto inst = instance_from_json(read_json(build_args.input));
            auto cfg = build_args.config();
            json j = inst.dim == 2 ? build_cmd<2>(inst.as<2>(), cfg) : build_cmd<3>(inst.as<3>(), cfg);
            emit(build_args.output, j.dump(2));
        } else if (*verify) {
            auto inst = instance_from_json(read_json(verify_in));
            auto nf = net_from_json(read_json(verify_net_path));
            if (!verify_eps.empty()) nf.epsilon = parse_rational(verify_eps);
            json j;
            bool valid;
            if (inst.dim == 2) {
                auto pts = inst.as<2>();
                require_general_position<2>(pts);
                auto v = verify_net<2>(pts, nf.net, nf.epsilon);
                j = to_json(v);
                valid = v.valid;
            } else {
                auto pts = inst.as<3>();
                require_general_position<3>(pts);
                auto v = verify_net<3>(pts, nf.net, nf.epsilon);
                j = to_json(v);
                valid = v.valid;
            }
            std::cout << j.dump(2) << '\n';
            return valid ? kOk : kFailed;
        } else if (*env) {
            auto inst = instance_from_json(read_json(env_args.input));
            if (inst.dim != 3) throw InvalidArgument("diagnose-envelope needs a 3D instance");
            emit(env_args.output, envelope_cmd(inst.as<3>(), env_args.config(), env_runs).dump(2));
        } else if (*dual) {
            auto inst = instance_from_json(read_json(dual_args.input));
            auto cfg = dual_args.config();
            json j = inst.dim == 2 ? dual_cmd<2>(inst.as<2>(), cfg) : dual_cmd<3>(inst.as<3>(), cfg);
            emit(dual_args.output, j.dump(2));
        } else if (*pipe) {
            auto inst = instance_from_json(read_json(pipe_in));
            if (inst.dim != 3) throw InvalidArgument("pipeline-dual needs a 3D instance");
            pipe_cfg.epsilon = parse_rational(pipe_eps);
            pipe_cfg.beta = parse_rational(pipe_beta);
            pipe_cfg.validate();
            emit(pipe_out, pipeline_cmd(inst.as<3>(), pipe_cfg).dump(2));
        } else if (*elekes) {
            Rational beta = elekes_beta.empty() ? make_rational(1, std::max(elekes_k, 1)) : parse_rational(elekes_beta);
            auto r = elekes_demo(elekes_k, beta);
            json j{{"k", r.k},
                   {"n", r.n},
                   {"grid", {r.width, r.height}},
                   {"epsilon", to_string(r.epsilon)},
                   {"beta", to_string(r.beta)},
                   {"lines", r.family_size()},
                   {"points_per_line_min", *std::min_element(r.counts.begin(), r.counts.end())},
                   {"points_per_line_max", *std::max_element(r.counts.begin(), r.counts.end())},
                   {"max_shared", r.max_shared},
                   {"condition_a", r.condition_a},
                   {"condition_b", r.condition_b},
                   {"eps_pow_minus_3_2_over_family", r.ratio}};
            std::cout << j.dump(2) << '\n';
            check(r.ok(), "line family assertions failed");
        } else if (*sweep) {
            auto kind = parse_generator(sweep_gen);
            auto eps = parse_list(sweep_eps);
            auto beta = parse_rational(sweep_beta);
            auto mode = parse_mode(sweep_mode);
            if (sweep_dim != 2 && sweep_dim != 3) throw InvalidArgument("dim must be 2 or 3");
            for (const auto& e : eps) BuildConfig{e, beta, mode}.validate();
            std::vector<std::uint64_t> seeds;
            for (int r = 0; r < sweep_repeats; ++r) seeds.push_back(sweep_seed + static_cast<std::uint64_t>(r));
            auto rows = sweep_dim == 2 ? scaling_sweep<2>(kind, sweep_n, eps, beta, seeds, mode)
                                       : scaling_sweep<3>(kind, sweep_n, eps, beta, seeds, mode);
            std::ostringstream os;
            os << kSweepHeader;
            for (const auto& r : rows) os << '\n' << to_csv(r);
            emit(sweep_out, os.str());
        }
    } catch (const AssertionFailed& e) {
        std::cerr << "assertion failed: " << e.what() << '\n';
        return kFailed;
    } catch (const VerificationFailure& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kFailed;
    } catch (const DegenerateInput& e) {
        std::cerr << "degenerate input: " << e.what() << '\n';
        return kInvalid;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kInvalid;
    }
    return kOk;
}
