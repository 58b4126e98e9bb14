#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "geometry.hpp"
#include "index_set.hpp"

namespace epsnet {

/// A realizable subset h ∩ P together with one canonical witness: the plane
/// through `contacts`, the side, and which contacts are included.
template <int D>
struct RangeTrace {
    IndexSet indices;
    std::array<int, D> contacts{};
    int num_contacts = 0;
    unsigned mask = 0;  ///< bit i set: contacts[i] belongs to the trace
    Side side = Side::lower;

    std::size_t size() const { return indices.size(); }

    /// Traces are identified by their point sets alone.
    friend bool operator==(const RangeTrace& a, const RangeTrace& b) { return a.indices == b.indices; }
};

enum class SideFilter { lower, upper, both };

inline bool admits(SideFilter f, Side s) {
    return f == SideFilter::both || (f == SideFilter::lower) == (s == Side::lower);
}

/// Deduplicated traces in first-seen order, with lookup by point set.
template <int D>
class TraceSet {
  public:
    /// Returns false (and keeps the earlier representative) on duplicates.
    bool insert(const RangeTrace<D>& t) {
        auto [it, fresh] = index_.try_emplace(t.indices, traces_.size());
        if (fresh) traces_.push_back(t);
        return fresh;
    }
    bool contains(const IndexSet& s) const { return index_.count(s) != 0; }
    const RangeTrace<D>* find(const IndexSet& s) const {
        auto it = index_.find(s);
        return it == index_.end() ? nullptr : &traces_[it->second];
    }
    const std::vector<RangeTrace<D>>& traces() const { return traces_; }
    std::vector<RangeTrace<D>> release() && { return std::move(traces_); }
    std::size_t size() const { return traces_.size(); }
    auto begin() const { return traces_.begin(); }
    auto end() const { return traces_.end(); }

  private:
    std::vector<RangeTrace<D>> traces_;
    std::unordered_map<IndexSet, std::size_t, IndexSetHash> index_;
};

namespace detail {

inline std::vector<int> iota_indices(std::size_t n) {
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
    return v;
}

inline void check_capacity(std::size_t n) {
    if (n > IndexSet::kCapacity)
        throw InvalidArgument("point set larger than " + std::to_string(IndexSet::kCapacity) + " points");
}

/// Visits every non-vertical plane spanned by D points of `subset`, passing the
/// contacts and the strict below/above sets (restricted to `subset`). The
/// visitor returns false to stop early.
template <int D, typename F>
void for_each_canonical(const PointSet<D>& pts, const std::vector<int>& subset, F&& visit) {
    const int m = static_cast<int>(subset.size());
    std::array<int, D> c{};
    auto handle = [&]() -> bool {
        std::array<Point<D>, D> cp;
        for (int i = 0; i < D; ++i) cp[i] = pts[c[i]];
        auto plane = canonical_plane<D>(cp);
        if (!plane) return true;
        IndexSet below, above;
        for (int idx : subset) {
            Wide v = plane->eval(pts[idx]);
            if (v < 0) {
                below.insert(static_cast<std::size_t>(idx));
            } else if (v > 0) {
                above.insert(static_cast<std::size_t>(idx));
            } else if (std::find(c.begin(), c.end(), idx) == c.end()) {
                throw DegenerateInput("point " + std::to_string(idx) + " lies on a canonical plane (general position violated)");
            }
        }
        return visit(c, *plane, below, above);
    };
    if constexpr (D == 2) {
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                c = {subset[i], subset[j]};
                if (!handle()) return;
            }
    } else {
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                for (int k = j + 1; k < m; ++k) {
                    c = {subset[i], subset[j], subset[k]};
                    if (!handle()) return;
                }
    }
}

/// True when the lower-halfspace constraints of `subset` do not have full rank,
/// i.e. canonical planes alone cannot witness every trace.
template <int D>
bool rank_deficient(const PointSet<D>& pts, const std::vector<int>& subset) {
    if (subset.size() < static_cast<std::size_t>(D)) return true;
    if constexpr (D == 2) {
        for (std::size_t i = 1; i < subset.size(); ++i)
            if (pts[subset[i]][0] != pts[subset[0]][0]) return false;
        return true;
    } else {
        const auto& a = pts[subset[0]];
        for (std::size_t i = 1; i < subset.size(); ++i)
            for (std::size_t j = i + 1; j < subset.size(); ++j) {
                const auto& b = pts[subset[i]];
                const auto& c = pts[subset[j]];
                Wide cr = Wide(b[0] - a[0]) * (c[1] - a[1]) - Wide(b[1] - a[1]) * (c[0] - a[0]);
                if (cr != 0) return false;
            }
        return true;
    }
}

}  // namespace detail

/// Canonical traces of `subset` (indices into pts) with lo <= |trace| <= hi.
/// Complete for every halfspace when the points of `subset` are in general
/// position; see enumerate_canonical_traces.
template <int D>
TraceSet<D> enumerate_traces_on(const PointSet<D>& pts, const std::vector<int>& subset, SideFilter filter,
                                std::int64_t lo, std::int64_t hi) {
    detail::check_capacity(pts.size());
    TraceSet<D> out;
    if (subset.empty()) return out;

    if (detail::rank_deficient<D>(pts, subset)) {
        if constexpr (D == 3) {
          if (subset.size() >= 3) {
            // All of `subset` on one vertical plane: reduce to the 2D problem in
            // (position along the plane, height).
            const auto& a = pts[subset[0]];
            Coord dx = 0, dy = 0;
            for (int idx : subset)
                if (pts[idx][0] != a[0] || pts[idx][1] != a[1]) {
                    dx = pts[idx][0] - a[0];
                    dy = pts[idx][1] - a[1];
                    break;
                }
            PointSet<2> flat(pts.size());
            for (int idx : subset) flat[idx] = {dx * (pts[idx][0] - a[0]) + dy * (pts[idx][1] - a[1]), pts[idx][D - 1]};
            for (const auto& t : enumerate_traces_on<2>(flat, subset, filter, lo, hi)) {
                RangeTrace<D> r;
                r.indices = t.indices;
                r.num_contacts = 2;
                r.contacts[0] = t.contacts[0];
                r.contacts[1] = t.contacts[1];
                r.mask = t.mask;
                r.side = t.side;
                out.insert(r);
            }
            return out;
          }
        }
        for (std::size_t i = 0; i < subset.size(); ++i)
            for (std::size_t j = i + 1; j < subset.size(); ++j)
                if (std::equal(pts[subset[i]].begin(), pts[subset[i]].end() - 1, pts[subset[j]].begin()))
                    throw DegenerateInput("points share a vertical line (general position violated)");
        // Fewer than D points with distinct projections: every subset is
        // realizable from either side.
        const std::size_t m = subset.size();
        for (unsigned bits = 0; bits < (1U << m); ++bits) {
            RangeTrace<D> t;
            t.num_contacts = static_cast<int>(m);
            for (std::size_t i = 0; i < m; ++i) {
                t.contacts[i] = subset[i];
                if (bits & (1U << i)) t.indices.insert(static_cast<std::size_t>(subset[i]));
            }
            t.mask = bits;
            auto sz = static_cast<std::int64_t>(t.indices.size());
            if (sz < lo || sz > hi) continue;
            for (Side s : {Side::lower, Side::upper}) {
                if (!admits(filter, s)) continue;
                t.side = s;
                out.insert(t);
            }
        }
        return out;
    }

    detail::for_each_canonical<D>(pts, subset, [&](const std::array<int, D>& c, const IntPlane<D>&, const IndexSet& below,
                                                   const IndexSet& above) {
        const auto nb = static_cast<std::int64_t>(below.size());
        const auto na = static_cast<std::int64_t>(above.size());
        if (nb + D < lo && na + D < lo) return true;
        if (nb > hi && na > hi) return true;
        for (unsigned mask = 0; mask < (1U << D); ++mask) {
            IndexSet extra;
            for (int i = 0; i < D; ++i)
                if (mask & (1U << i)) extra.insert(static_cast<std::size_t>(c[i]));
            const auto ne = static_cast<std::int64_t>(std::popcount(mask));
            for (Side s : {Side::lower, Side::upper}) {
                if (!admits(filter, s)) continue;
                const std::int64_t sz = (s == Side::lower ? nb : na) + ne;
                if (sz < lo || sz > hi) continue;
                RangeTrace<D> t;
                t.indices = (s == Side::lower ? below : above) | extra;
                t.contacts = c;
                t.num_contacts = D;
                t.mask = mask;
                t.side = s;
                out.insert(t);
            }
        }
        return true;
    });
    return out;
}

/// Every trace h ∩ P of a closed halfspace with lo <= |h ∩ P| <= hi, built from
/// the D-subsets of P (both sides, all 2^D contact inclusion masks).
/// Requires P in general position; a fourth point on a canonical plane raises
/// DegenerateInput.
template <int D>
TraceSet<D> enumerate_canonical_traces(const PointSet<D>& pts, SideFilter filter, std::int64_t lo, std::int64_t hi) {
    return enumerate_traces_on<D>(pts, detail::iota_indices(pts.size()), filter, lo, hi);
}

/// |h ∩ P| for a closed halfspace.
template <int D>
std::int64_t depth(const Halfspace<D>& h, const PointSet<D>& pts) {
    std::int64_t count = 0;
    for (const auto& p : pts)
        if (side_of(h, p) != Location::outside) ++count;
    return count;
}

template <int D>
Halfspace<D> to_halfspace(const PointSet<D>& pts, const RangeTrace<D>& t) {
    if (t.num_contacts != D) throw InvalidArgument("trace has no canonical plane");
    std::array<Point<D>, D> cp;
    for (int i = 0; i < D; ++i) cp[i] = pts[t.contacts[i]];
    auto pl = canonical_plane<D>(cp);
    if (!pl) throw DegenerateInput("trace contacts do not span a non-vertical plane");
    return Halfspace<D>{pl->to_hyperplane(), t.side};
}

/// Verdict of verify_net. A failing verdict carries a heavy trace missed by N.
template <int D>
struct Verdict {
    bool valid = true;
    std::int64_t threshold = 0;  ///< ceil(eps * n)
    std::optional<RangeTrace<D>> witness;
};

/// Sound and complete epsilon-net check for closed halfspaces: N is valid iff
/// every canonical trace with at least ceil(eps n) points meets N.
template <int D>
Verdict<D> verify_net(const PointSet<D>& pts, const IndexSet& net, const Rational& eps) {
    if (eps <= 0 || eps > 1) throw InvalidArgument("epsilon must lie in (0, 1]");
    detail::check_capacity(pts.size());
    const auto n = static_cast<std::int64_t>(pts.size());
    Verdict<D> v;
    v.threshold = ceil_times(eps, n);
    if (!net.is_subset_of(IndexSet::prefix(pts.size()))) throw InvalidArgument("net index out of range");
    if (n == 0) return v;

    auto all = detail::iota_indices(pts.size());
    if (detail::rank_deficient<D>(pts, all)) {
        for (const auto& t : enumerate_traces_on<D>(pts, all, SideFilter::both, v.threshold, n)) {
            if (!t.indices.intersects(net)) {
                v.valid = false;
                v.witness = t;
                return v;
            }
        }
        return v;
    }

    // Per canonical plane and side, the best candidate trace avoiding N takes
    // every contact outside N; it is a witness iff the strict side misses N and
    // it is heavy.
    detail::for_each_canonical<D>(pts, all, [&](const std::array<int, D>& c, const IntPlane<D>&, const IndexSet& below,
                                                 const IndexSet& above) {
            unsigned mask = 0;
            IndexSet extra;
            for (int i = 0; i < D; ++i)
                if (!net.contains(static_cast<std::size_t>(c[i]))) {
                    mask |= 1U << i;
                    extra.insert(static_cast<std::size_t>(c[i]));
                }
            for (Side s : {Side::lower, Side::upper}) {
                const IndexSet& strict = s == Side::lower ? below : above;
                if (strict.intersects(net)) continue;
                if (static_cast<std::int64_t>(strict.size() + extra.size()) < v.threshold) continue;
                RangeTrace<D> t;
                t.indices = strict | extra;
                t.contacts = c;
                t.num_contacts = D;
                t.mask = mask;
                t.side = s;
                v.valid = false;
                v.witness = t;
                return false;
            }
            return true;
        });
    return v;
}

/// Lower-halfspace traces on `subset` holding at least ceil(fraction |subset|)
/// of its points: the ranges a fraction-net of the subset must hit.
template <int D>
std::vector<RangeTrace<D>> heavy_lower_traces(const PointSet<D>& pts, const IndexSet& subset, const Rational& fraction) {
    if (subset.empty()) throw InvalidArgument("empty subset");
    const auto m = static_cast<std::int64_t>(subset.size());
    const std::int64_t thr = std::max<std::int64_t>(1, ceil_times(fraction, m));
    return enumerate_traces_on<D>(pts, subset.to_vector(), SideFilter::lower, thr, m).release();
}

/// Heavy traces of (S, lower halfspaces) for a (beta/2)-net of S.
template <int D>
std::vector<RangeTrace<D>> subnet_oracle(const PointSet<D>& pts, const IndexSet& subset, const Rational& beta) {
    return heavy_lower_traces<D>(pts, subset, beta / 2);
}

}  // namespace epsnet
