#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "index_set.hpp"
#include "random.hpp"
#include "range_oracle.hpp"

namespace epsnet {

enum class BuildMode { single_scale, doubling };
enum class SubnetMethod { greedy_hitting_set, sample_and_verify };

inline const char* to_string(BuildMode m) { return m == BuildMode::single_scale ? "single_scale" : "doubling"; }
inline const char* to_string(SubnetMethod m) {
    return m == SubnetMethod::greedy_hitting_set ? "greedy_hitting_set" : "sample_and_verify";
}

struct BuildConfig {
    Rational epsilon = make_rational(1, 4);
    Rational beta = make_rational(1, 22);
    BuildMode mode = BuildMode::single_scale;
    SubnetMethod subnet_method = SubnetMethod::greedy_hitting_set;
    std::uint64_t seed = 0;

    void validate() const {
        if (epsilon <= 0 || epsilon > 1) throw InvalidArgument("epsilon must lie in (0, 1]");
        if (beta <= 0 || beta >= make_rational(1, 3)) throw InvalidArgument("beta must lie in (0, 1/3)");
    }
};

/// Size window of family members at one scale: [ceil(s n), floor(2 s n)].
/// When s n < 1/2 the window would be empty; its upper end is raised to
/// ceil(s n) so that singleton-scale families still exist.
struct ScaleWindow {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int64_t budget = 0;  ///< floor(beta s n): the pairwise intersection cap

    bool empty() const { return lo > hi; }

    static ScaleWindow of(const Rational& scale, const Rational& beta, std::int64_t n) {
        ScaleWindow w;
        w.lo = ceil_times(scale, n);
        w.hi = std::min<std::int64_t>(n, std::max(w.lo, floor_times(scale * 2, n)));
        w.budget = floor_times(beta * scale, n);
        return w;
    }
};

template <int D>
struct FamilyMember {
    RangeTrace<D> trace;
    IndexSet subnet;
};

/// A maximal set of traces at one scale with pairwise intersections within budget.
template <int D>
struct Family {
    Rational scale;
    Side side = Side::lower;
    ScaleWindow window;
    std::size_t candidate_count = 0;
    std::vector<FamilyMember<D>> members;

    std::size_t size() const { return members.size(); }
};

struct FamilyCheck {
    bool size_window = true;
    bool pairwise_budget = true;
    bool maximal = true;
    std::string detail;

    bool ok() const { return size_window && pairwise_budget && maximal; }
};

namespace detail {

/// Candidate order: larger traces first, then lexicographically smaller index lists.
template <int D>
void sort_candidates(std::vector<RangeTrace<D>>& c) {
    std::sort(c.begin(), c.end(), [](const RangeTrace<D>& a, const RangeTrace<D>& b) {
        auto sa = a.size(), sb = b.size();
        if (sa != sb) return sa > sb;
        return a.indices.lex_less_same_size(b.indices);
    });
}

/// Lower-side candidates of `pts` (already reflected for the upper side).
template <int D>
std::vector<RangeTrace<D>> family_candidates(const PointSet<D>& pts, const ScaleWindow& w) {
    if (w.empty() || w.lo > static_cast<std::int64_t>(pts.size())) return {};
    auto c = enumerate_canonical_traces<D>(pts, SideFilter::lower, w.lo, w.hi).release();
    sort_candidates<D>(c);
    return c;
}

template <int D>
FamilyCheck check_family_against(const Family<D>& f, const std::vector<RangeTrace<D>>& candidates) {
    FamilyCheck chk;
    const auto& w = f.window;
    for (std::size_t i = 0; i < f.members.size(); ++i) {
        auto sz = static_cast<std::int64_t>(f.members[i].trace.size());
        if (sz < w.lo || sz > w.hi) {
            chk.size_window = false;
            chk.detail = "member " + std::to_string(i) + " has size " + std::to_string(sz) + " outside window";
        }
        for (std::size_t j = i + 1; j < f.members.size(); ++j) {
            auto inter = static_cast<std::int64_t>(f.members[i].trace.indices.intersection_size(f.members[j].trace.indices));
            if (inter > w.budget) {
                chk.pairwise_budget = false;
                chk.detail = "members " + std::to_string(i) + "," + std::to_string(j) + " share " + std::to_string(inter);
            }
        }
    }
    for (const auto& c : candidates) {
        bool blocked = false;
        for (const auto& m : f.members) {
            if (m.trace.indices == c.indices ||
                static_cast<std::int64_t>(m.trace.indices.intersection_size(c.indices)) > w.budget) {
                blocked = true;
                break;
            }
        }
        if (!blocked) {
            chk.maximal = false;
            chk.detail = "candidate of size " + std::to_string(c.size()) + " could be added";
            break;
        }
    }
    return chk;
}

template <int D>
Family<D> greedy_family(const std::vector<RangeTrace<D>>& candidates, const Rational& scale, const ScaleWindow& w,
                        Side side) {
    Family<D> f;
    f.scale = scale;
    f.side = side;
    f.window = w;
    f.candidate_count = candidates.size();
    for (const auto& c : candidates) {
        bool ok = true;
        for (const auto& m : f.members) {
            if (static_cast<std::int64_t>(m.trace.indices.intersection_size(c.indices)) > w.budget) {
                ok = false;
                break;
            }
        }
        if (ok) {
            FamilyMember<D> m;
            m.trace = c;
            m.trace.side = side;
            f.members.push_back(std::move(m));
        }
    }
    return f;
}

inline const PointSet<2>& oriented(const PointSet<2>& pts, Side s, PointSet<2>& buf) {
    if (s == Side::lower) return pts;
    buf = reflect_last_axis<2>(pts);
    return buf;
}
inline const PointSet<3>& oriented(const PointSet<3>& pts, Side s, PointSet<3>& buf) {
    if (s == Side::lower) return pts;
    buf = reflect_last_axis<3>(pts);
    return buf;
}

}  // namespace detail

/// The greedy maximal family at `scale` on the given side. Subnets are left
/// empty; build_net fills them in.
template <int D>
Family<D> build_family(const PointSet<D>& pts, const Rational& scale, const Rational& beta, Side side) {
    PointSet<D> buf;
    const auto& q = detail::oriented(pts, side, buf);
    auto w = ScaleWindow::of(scale, beta, static_cast<std::int64_t>(pts.size()));
    return detail::greedy_family<D>(detail::family_candidates<D>(q, w), scale, w, side);
}

/// Recomputes the candidate set and checks the window, the pairwise budget and
/// maximality of `f`.
template <int D>
FamilyCheck check_family(const PointSet<D>& pts, const Family<D>& f) {
    PointSet<D> buf;
    const auto& q = detail::oriented(pts, f.side, buf);
    return detail::check_family_against<D>(f, detail::family_candidates<D>(q, f.window));
}

/// A `fraction`-net of `subset` for lower halfspaces: it meets every lower
/// trace on `subset` holding at least ceil(fraction |subset|) of its points.
/// `pts` must already be oriented so that the wanted side is "lower".
template <int D>
IndexSet fraction_net(const PointSet<D>& pts, const IndexSet& subset, const Rational& fraction, SubnetMethod method,
                      std::uint64_t seed) {
    if (subset.empty()) throw InvalidArgument("fraction_net of an empty set");
    if (subset.size() == 1) return subset;
    auto heavy = heavy_lower_traces<D>(pts, subset, fraction);

    auto hits_all = [&](const IndexSet& s) {
        return std::all_of(heavy.begin(), heavy.end(), [&](const RangeTrace<D>& t) { return t.indices.intersects(s); });
    };

    if (method == SubnetMethod::sample_and_verify) {
        const double inv = 4.0 / to_double(fraction);
        const auto want = static_cast<std::size_t>(std::ceil(inv * std::log(inv)));
        if (want < subset.size()) {
            Rng rng(seed);
            auto pool = subset.to_vector();
            for (int draw = 0; draw < 100; ++draw) {
                auto s = IndexSet::from(sample_without_replacement(pool, want, rng));
                if (hits_all(s)) return s;
            }
        }
        return subset;
    }

    // Greedy hitting set: repeatedly take the point lying in the most unhit
    // heavy traces (smallest index on ties).
    IndexSet chosen;
    std::vector<char> hit(heavy.size(), 0);
    std::size_t remaining = heavy.size();
    auto members = subset.to_vector();
    while (remaining > 0) {
        int best = -1;
        std::size_t best_count = 0;
        for (int p : members) {
            if (chosen.contains(static_cast<std::size_t>(p))) continue;
            std::size_t cnt = 0;
            for (std::size_t t = 0; t < heavy.size(); ++t)
                if (!hit[t] && heavy[t].indices.contains(static_cast<std::size_t>(p))) ++cnt;
            if (cnt > best_count) {
                best_count = cnt;
                best = p;
            }
        }
        if (best < 0) throw VerificationFailure("greedy hitting set stalled");
        chosen.insert(static_cast<std::size_t>(best));
        for (std::size_t t = 0; t < heavy.size(); ++t)
            if (!hit[t] && heavy[t].indices.contains(static_cast<std::size_t>(best))) {
                hit[t] = 1;
                --remaining;
            }
    }
    if (chosen.empty()) chosen.insert(static_cast<std::size_t>(members.front()));
    return chosen;
}

/// (beta/2)-net N_h of a member trace for (h ∩ P, lower halfspaces).
template <int D>
IndexSet build_subnet(const PointSet<D>& pts, const RangeTrace<D>& trace, const Rational& beta,
                      SubnetMethod method = SubnetMethod::greedy_hitting_set, std::uint64_t seed = 0) {
    PointSet<D> buf;
    const auto& q = detail::oriented(pts, trace.side, buf);
    return fraction_net<D>(q, trace.indices, beta / 2, method, seed);
}

struct NetStats {
    std::size_t net_size = 0;
    std::size_t first_scale_lower = 0;  ///< |F^(1)| on the lower side
    std::size_t first_scale_upper = 0;
    double family_bound = 0;  ///< 4 / epsilon
    std::size_t max_subnet = 0;
    double mean_subnet = 0;
    double millis = 0;  ///< wall time; excluded from serialized reports
};

template <int D>
struct NetReport {
    BuildConfig config;
    std::size_t n = 0;
    IndexSet net;
    std::vector<Family<D>> families;  ///< lower-side scales, then upper-side scales
    Verdict<D> verdict;
    NetStats stats;

    const Family<D>& first_family(Side s) const {
        for (const auto& f : families)
            if (f.side == s) return f;
        throw InvalidArgument("no family on requested side");
    }
};

template <int D>
std::vector<Rational> scales_for(const BuildConfig& cfg, std::int64_t n) {
    std::vector<Rational> out{cfg.epsilon};
    if (cfg.mode == BuildMode::doubling) {
        Rational s = cfg.epsilon * 2;
        while (ceil_times(s, n) <= n) {
            out.push_back(s);
            s *= 2;
        }
    }
    return out;
}

/// Builds the net: per side and scale a maximal family plus a (beta/2)-subnet
/// per member; the union is verified against the complete oracle. Throws
/// VerificationFailure if it does not verify or a family invariant breaks.
template <int D>
NetReport<D> build_net(const PointSet<D>& pts, const BuildConfig& cfg) {
    cfg.validate();
    detail::check_capacity(pts.size());
    require_general_position<D>(pts);
    auto t0 = std::chrono::steady_clock::now();

    NetReport<D> rep;
    rep.config = cfg;
    rep.n = pts.size();
    const auto n = static_cast<std::int64_t>(pts.size());
    const auto scales = scales_for<D>(cfg, n);

    std::size_t subnet_total = 0, subnet_count = 0;
    for (Side side : {Side::lower, Side::upper}) {
        PointSet<D> buf;
        const auto& q = detail::oriented(pts, side, buf);
        for (std::size_t j = 0; j < scales.size(); ++j) {
            auto w = ScaleWindow::of(scales[j], cfg.beta, n);
            auto cand = detail::family_candidates<D>(q, w);
            auto fam = detail::greedy_family<D>(cand, scales[j], w, side);
            auto chk = detail::check_family_against<D>(fam, cand);
            if (!chk.ok()) throw VerificationFailure("family invariant violated: " + chk.detail);
            for (std::size_t m = 0; m < fam.members.size(); ++m) {
                auto seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(side), j, m});
                fam.members[m].subnet = fraction_net<D>(q, fam.members[m].trace.indices, cfg.beta / 2, cfg.subnet_method, seed);
                rep.net |= fam.members[m].subnet;
                subnet_total += fam.members[m].subnet.size();
                ++subnet_count;
                rep.stats.max_subnet = std::max(rep.stats.max_subnet, fam.members[m].subnet.size());
            }
            rep.families.push_back(std::move(fam));
        }
    }
    rep.verdict = verify_net<D>(pts, rep.net, cfg.epsilon);
    rep.stats.net_size = rep.net.size();
    rep.stats.first_scale_lower = rep.first_family(Side::lower).size();
    rep.stats.first_scale_upper = rep.first_family(Side::upper).size();
    rep.stats.family_bound = 4.0 / to_double(cfg.epsilon);
    rep.stats.mean_subnet = subnet_count ? static_cast<double>(subnet_total) / static_cast<double>(subnet_count) : 0.0;
    rep.stats.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!rep.verdict.valid) throw VerificationFailure("constructed net failed verification");
    return rep;
}

enum class CoverageCase { member, conflict, other_hit, missed };

/// How each heavy trace is hit, following the correctness chain: it is a
/// member (hit by its own subnet) or it exceeds the budget against a member g
/// and meets N_g. `other_hit` means hit by N through neither route.
struct CoverageSummary {
    std::size_t heavy = 0;
    std::size_t member = 0;
    std::size_t conflict = 0;
    std::size_t other_hit = 0;
    std::size_t missed = 0;
};

template <int D>
CoverageSummary explain_coverage(const PointSet<D>& pts, const NetReport<D>& rep) {
    CoverageSummary out;
    const auto n = static_cast<std::int64_t>(pts.size());
    const auto k = ceil_times(rep.config.epsilon, n);
    for (Side side : {Side::lower, Side::upper}) {
        PointSet<D> buf;
        const auto& q = detail::oriented(pts, side, buf);
        std::vector<const Family<D>*> fams;
        for (const auto& f : rep.families)
            if (f.side == side) fams.push_back(&f);
        for (const auto& t : enumerate_canonical_traces<D>(q, SideFilter::lower, k, n)) {
            ++out.heavy;
            // The scale whose window holds |T| (the last scale if none does,
            // which happens in single-scale mode for large traces).
            const Family<D>* f = fams.front();
            for (const auto* g : fams)
                if (static_cast<std::int64_t>(t.size()) >= g->window.lo && static_cast<std::int64_t>(t.size()) <= g->window.hi) {
                    f = g;
                    break;
                }
            CoverageCase c = CoverageCase::missed;
            for (const auto& m : f->members)
                if (m.trace.indices == t.indices) c = CoverageCase::member;
            if (c == CoverageCase::missed)
                for (const auto& m : f->members)
                    if (static_cast<std::int64_t>(m.trace.indices.intersection_size(t.indices)) > f->window.budget &&
                        m.subnet.intersects(t.indices)) {
                        c = CoverageCase::conflict;
                        break;
                    }
            if (c == CoverageCase::missed && t.indices.intersects(rep.net)) c = CoverageCase::other_hit;
            switch (c) {
                case CoverageCase::member: ++out.member; break;
                case CoverageCase::conflict: ++out.conflict; break;
                case CoverageCase::other_hit: ++out.other_hit; break;
                case CoverageCase::missed: ++out.missed; break;
            }
        }
    }
    return out;
}

struct BaselineNet {
    IndexSet net;
    int draws = 0;
};

/// Random-sample baseline: draws ceil((8d/eps) ln(8/eps)) points until the
/// sample verifies (at most 100 draws). A sample at least as large as P is P.
template <int D>
BaselineNet baseline_hw_net(const PointSet<D>& pts, const Rational& eps, std::uint64_t seed) {
    if (eps <= 0 || eps > 1) throw InvalidArgument("epsilon must lie in (0, 1]");
    const double e = to_double(eps);
    const auto want = static_cast<std::size_t>(std::ceil((8.0 * D / e) * std::log(8.0 / e)));
    BaselineNet out;
    if (want >= pts.size()) {
        out.net = IndexSet::prefix(pts.size());
        out.draws = 1;
        return out;
    }
    Rng rng(derive_seed(seed, {0xba5e}));
    auto pool = detail::iota_indices(pts.size());
    for (int draw = 1; draw <= 100; ++draw) {
        auto s = IndexSet::from(sample_without_replacement(pool, want, rng));
        if (verify_net<D>(pts, s, eps).valid) {
            out.net = s;
            out.draws = draw;
            return out;
        }
    }
    throw VerificationFailure("baseline sample did not verify within 100 draws");
}

}  // namespace epsnet
