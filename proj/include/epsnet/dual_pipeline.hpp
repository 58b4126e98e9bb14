#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dual_metrics.hpp"
#include "net_builder.hpp"
#include "random.hpp"
#include "range_oracle.hpp"

namespace epsnet {

/// How planes through a vertex count when measuring crossing distance between
/// vertices: `strict` counts only planes with the two vertices strictly on
/// opposite sides, `closed` also counts planes through either vertex.
enum class Separation { strict, closed };

struct PipelineConfig {
    Rational epsilon = make_rational(1, 4);
    double approx_multiplier = 4.0;  ///< a in |X| = ceil(a / eps^2 * ln(1/eps))
    Rational beta = make_rational(1, 16);
    std::uint64_t seed = 0;
    int spot_checks = 1000;
    int redraw_cap = 20;
    int retry_cap = 5;
    SubnetMethod subnet_method = SubnetMethod::greedy_hitting_set;
    Separation separation = Separation::strict;
    /// Fail instead of continuing with the best uncertified draw.
    bool require_certified_sample = false;

    void validate() const {
        if (epsilon <= 0 || epsilon > 1) throw InvalidArgument("epsilon must lie in (0, 1]");
        if (beta <= 0 || beta >= make_rational(1, 8)) throw InvalidArgument("beta must lie in (0, 1/8)");
        if (!(approx_multiplier > 0)) throw InvalidArgument("approximation multiplier must be positive");
        if (spot_checks < 0 || redraw_cap < 1 || retry_cap < 1) throw InvalidArgument("caps must be positive");
    }
};

/// Target size of the approximation sample, clamped to [d + 1, n].
template <int D>
std::size_t approximation_size(const PipelineConfig& cfg, std::size_t n) {
    const double e = to_double(cfg.epsilon);
    const double raw = cfg.approx_multiplier / (e * e) * std::log(1.0 / e);
    auto target = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    target = std::max<std::size_t>(target, D + 1);
    return std::min(target, n);
}

/// A dual point with coordinates (X, Y, ..., Z) / scale, held as integers.
template <int D>
struct ScaledDualPoint {
    std::array<Wide, D> c{};
};

namespace detail {

inline constexpr Wide kDualScale = Wide{1} << 20;

/// > 0: the dual plane of p passes strictly below u.
template <int D>
Wide dual_gap(const ScaledDualPoint<D>& u, const Point<D>& p) {
    Wide v = u.c[D - 1] - Wide(p[D - 1]) * kDualScale;
    for (int i = 0; i < D - 1; ++i) v += Wide(p[i]) * u.c[i];
    return v;
}

/// A random dual point near a random dual plane, so levels spread over [0, n].
template <int D>
ScaledDualPoint<D> random_dual_point(const PointSet<D>& pts, Rng& rng) {
    std::uniform_int_distribution<std::int64_t> slope(-(std::int64_t{1} << 20), std::int64_t{1} << 20);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    std::uniform_int_distribution<std::int64_t> off(1, 1024);
    std::bernoulli_distribution flip(0.5);
    ScaledDualPoint<D> u;
    const auto& p = pts[pick(rng)];
    Wide z = Wide(p[D - 1]) * kDualScale;
    for (int i = 0; i < D - 1; ++i) {
        u.c[i] = slope(rng);
        z -= Wide(p[i]) * u.c[i];
    }
    Wide o = off(rng);
    u.c[D - 1] = z + (flip(rng) ? o : -o);
    return u;
}

}  // namespace detail

struct ApproximationSample {
    std::vector<int> indices;
    int draws = 0;
    bool certified = false;       ///< every spot-checked segment within eps/4
    double max_discrepancy = 0;   ///< of the returned draw
};

/// Largest segment discrepancy | |X_e|/|X| - |H_e|/n | over `checks` seeded
/// segments: half chords between two random dual points, half downward rays.
template <int D>
double segment_discrepancy(const PointSet<D>& pts, const std::vector<int>& sample, int checks, std::uint64_t seed) {
    if (sample.empty()) throw InvalidArgument("empty sample");
    Rng rng(seed);
    IndexSet in_x = IndexSet::from(sample);
    const double n = static_cast<double>(pts.size()), m = static_cast<double>(sample.size());
    double worst = 0;
    for (int s = 0; s < checks; ++s) {
        auto u = detail::random_dual_point<D>(pts, rng);
        const bool ray = (s % 2) == 1;
        ScaledDualPoint<D> v;
        if (!ray) v = detail::random_dual_point<D>(pts, rng);
        std::int64_t he = 0, xe = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            Wide gu = detail::dual_gap<D>(u, pts[i]);
            bool crosses = ray ? gu >= 0 : (gu >= 0) != (detail::dual_gap<D>(v, pts[i]) > 0) || gu == 0;
            if (!crosses) continue;
            ++he;
            if (in_x.contains(i)) ++xe;
        }
        worst = std::max(worst, std::abs(static_cast<double>(xe) / m - static_cast<double>(he) / n));
    }
    return worst;
}

/// Seeded random sample of the dual planes, spot-checked as an
/// (eps/4)-approximation for segment ranges. Redraws up to the cap; after
/// that the draw with the smallest discrepancy is returned uncertified, since
/// the final net is verified primally anyway.
template <int D>
ApproximationSample sample_approximation(const PointSet<D>& pts, const PipelineConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (pts.empty()) throw InvalidArgument("no dual planes");
    const std::size_t m = approximation_size<D>(cfg, pts.size());
    ApproximationSample out;
    auto pool = detail::iota_indices(pts.size());
    if (m >= pts.size()) {
        out.indices = pool;
        out.draws = 1;
        out.certified = true;
        return out;
    }
    const double limit = to_double(cfg.epsilon) / 4;
    Rng rng(derive_seed(seed, {0xa99}));
    for (int draw = 1; draw <= cfg.redraw_cap; ++draw) {
        auto x = sample_without_replacement(pool, m, rng);
        std::sort(x.begin(), x.end());
        double disc = segment_discrepancy<D>(pts, x, cfg.spot_checks, derive_seed(seed, {0x5e6, static_cast<std::uint64_t>(draw)}));
        if (draw == 1 || disc < out.max_discrepancy) {
            out.indices = x;
            out.max_discrepancy = disc;
        }
        out.draws = draw;
        if (disc < limit) {
            out.indices = x;
            out.max_discrepancy = disc;
            out.certified = true;
            return out;
        }
    }
    if (cfg.require_certified_sample)
        throw VerificationFailure("no sample passed the approximation spot-check within " + std::to_string(cfg.redraw_cap) +
                                  " draws");
    return out;
}

/// Greedy scan of `candidates` (already in scan order): keep a vertex when its
/// crossing distance to every kept vertex exceeds r.
template <int D>
std::vector<std::size_t> select_separated(const std::vector<DualVertex<D>>& candidates, std::size_t n, const Rational& r,
                                          Separation rule = Separation::strict) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        bool far = true;
        for (auto j : kept)
            if (Rational(rule == Separation::strict ? vertex_open_distance<D>(candidates[i], candidates[j], n)
                                                    : vertex_distance<D>(candidates[i], candidates[j], n)) <= r) {
                far = false;
                break;
            }
        if (far) kept.push_back(i);
    }
    return kept;
}

namespace detail {

/// Scan order: level ascending, then the vertex's dual coordinates.
template <int D>
void sort_by_level_then_coords(const PointSet<D>& pts, std::vector<DualVertex<D>>& s) {
    std::vector<std::pair<std::size_t, std::array<Rational, D>>> key(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::array<Point<D>, D> cp;
        for (int j = 0; j < D; ++j) cp[j] = pts[s[i].contacts[j]];
        auto h = canonical_plane<D>(cp)->to_hyperplane();
        auto sl = h.slopes();
        key[i].first = i;
        for (int j = 0; j < D - 1; ++j) key[i].second[j] = sl[j];
        key[i].second[D - 1] = h.intercept();
    }
    std::sort(key.begin(), key.end(), [&](const auto& a, const auto& b) {
        auto la = s[a.first].level(), lb = s[b.first].level();
        if (la != lb) return la < lb;
        return a.second < b.second;
    });
    std::vector<DualVertex<D>> out;
    out.reserve(s.size());
    for (const auto& k : key) out.push_back(s[k.first]);
    s = std::move(out);
}

}  // namespace detail

template <int D>
struct PipelineMember {
    std::array<int, D> contacts{};  ///< indices into P
    std::int64_t level_x = 0;       ///< level in the arrangement of X
    IndexSet below;                 ///< H_p: points whose dual planes pass below the vertex
    IndexSet subnet;

    std::int64_t level_h() const { return static_cast<std::int64_t>(below.size()); }
};

template <int D>
struct PipelineSide {
    Side side = Side::lower;
    ApproximationSample sample;
    std::size_t shallow_count = 0;  ///< |S|
    Rational r;                     ///< eps |X| / 4
    std::vector<PipelineMember<D>> members;
};

template <int D>
struct PipelineTrace {
    PipelineConfig config;
    std::size_t n = 0;
    int attempts = 0;
    std::vector<PipelineSide<D>> sides;
    IndexSet net;
    Verdict<D> verdict;

    std::size_t family_size() const {
        std::size_t s = 0;
        for (const auto& sd : sides) s += sd.members.size();
        return s;
    }
    /// Every selected vertex has level < 2 eps n in the full arrangement.
    bool members_shallow() const {
        for (const auto& sd : sides)
            for (const auto& m : sd.members)
                if (Rational(m.level_h()) >= config.epsilon * 2 * static_cast<std::int64_t>(n)) return false;
        return true;
    }
    bool approximations_certified() const {
        return std::all_of(sides.begin(), sides.end(), [](const PipelineSide<D>& s) { return s.sample.certified; });
    }
};

namespace detail {

template <int D>
PipelineSide<D> pipeline_side(const PointSet<D>& q, const PipelineConfig& cfg, Side side, std::uint64_t seed) {
    PipelineSide<D> out;
    out.side = side;
    out.sample = sample_approximation<D>(q, cfg, seed);
    const auto& xs = out.sample.indices;
    PointSet<D> xpts;
    for (int i : xs) xpts.push_back(q[i]);
    const auto m = static_cast<std::int64_t>(xpts.size());
    out.r = cfg.epsilon * m / 4;
    if (xpts.size() < static_cast<std::size_t>(D)) return out;

    auto s = shallow_vertices<D>(xpts, ceil_times(cfg.epsilon * 3 / 2, m));
    sort_by_level_then_coords<D>(xpts, s);
    out.shallow_count = s.size();
    auto chosen = select_separated<D>(s, xpts.size(), out.r, cfg.separation);

    for (std::size_t c = 0; c < chosen.size(); ++c) {
        const auto& v = s[chosen[c]];
        PipelineMember<D> pm;
        std::array<Point<D>, D> cp;
        for (int j = 0; j < D; ++j) {
            pm.contacts[j] = xs[v.contacts[j]];
            cp[j] = q[pm.contacts[j]];
        }
        pm.level_x = v.level();
        auto pl = canonical_plane<D>(cp);
        for (std::size_t i = 0; i < q.size(); ++i)
            if (pl->eval(q[i]) < 0) pm.below.insert(i);
        if (!pm.below.empty())
            pm.subnet = fraction_net<D>(q, pm.below, cfg.beta, cfg.subnet_method, derive_seed(seed, {0x5b, c}));
        out.members.push_back(std::move(pm));
    }
    return out;
}

}  // namespace detail

/// Dual construction: per side, sample X, collect the shallow vertices S of
/// the arrangement of X, greedily pick a crossing-distance-separated subset
/// and take a beta-net of the planes below each pick. The union is verified
/// primally; on failure X is redrawn (retry_cap attempts), then
/// VerificationFailure.
template <int D>
PipelineTrace<D> run_pipeline(const PointSet<D>& pts, const PipelineConfig& cfg) {
    cfg.validate();
    detail::check_capacity(pts.size());
    require_general_position<D>(pts);
    if (pts.size() < static_cast<std::size_t>(D + 1)) throw InvalidArgument("need at least d + 1 points");
    PipelineTrace<D> tr;
    tr.config = cfg;
    tr.n = pts.size();
    for (int attempt = 1; attempt <= cfg.retry_cap; ++attempt) {
        tr.attempts = attempt;
        tr.sides.clear();
        tr.net = IndexSet{};
        for (Side side : {Side::lower, Side::upper}) {
            PointSet<D> buf;
            const auto& q = detail::oriented(pts, side, buf);
            auto seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(attempt), static_cast<std::uint64_t>(side)});
            tr.sides.push_back(detail::pipeline_side<D>(q, cfg, side, seed));
            for (const auto& m : tr.sides.back().members) tr.net |= m.subnet;
        }
        tr.verdict = verify_net<D>(pts, tr.net, cfg.epsilon);
        if (tr.verdict.valid) return tr;
    }
    throw VerificationFailure("pipeline net failed verification after " + std::to_string(cfg.retry_cap) + " attempts");
}

}  // namespace epsnet
