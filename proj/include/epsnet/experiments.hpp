#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "net_builder.hpp"
#include "random.hpp"

namespace epsnet {

enum class GeneratorKind { cube_uniform, sphere_rounded, paraboloid, clustered };

inline const char* to_string(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::cube_uniform: return "cube_uniform";
        case GeneratorKind::sphere_rounded: return "sphere_rounded";
        case GeneratorKind::paraboloid: return "paraboloid";
        case GeneratorKind::clustered: return "clustered";
    }
    return "unknown";
}

inline GeneratorKind parse_generator(const std::string& s) {
    if (s == "cube_uniform") return GeneratorKind::cube_uniform;
    if (s == "sphere_rounded") return GeneratorKind::sphere_rounded;
    if (s == "paraboloid") return GeneratorKind::paraboloid;
    if (s == "clustered") return GeneratorKind::clustered;
    throw InvalidArgument("unknown generator '" + s + "'");
}

inline constexpr Coord kDefaultBox = 1000000;
inline constexpr int kGeneratorRetries = 50;

template <int D>
struct GeneratedInstance {
    PointSet<D> points;
    GeneratorKind kind = GeneratorKind::cube_uniform;
    std::uint64_t seed = 0;
    Coord box = kDefaultBox;
    int retries = 0;  ///< rounds of point replacement needed for general position
};

namespace detail {

template <int D>
Point<D> draw_point(GeneratorKind kind, Coord box, Rng& rng, const std::vector<Point<D>>& centers) {
    Point<D> p{};
    std::uniform_int_distribution<Coord> uni(0, box);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double half = static_cast<double>(box) / 2;
    auto clamp = [&](double v) { return std::clamp<Coord>(static_cast<Coord>(std::llround(v)), 0, box); };
    switch (kind) {
        case GeneratorKind::cube_uniform:
            for (auto& c : p) c = uni(rng);
            break;
        case GeneratorKind::sphere_rounded: {
            std::array<double, D> v{};
            double norm = 0;
            while (norm < 1e-9) {
                norm = 0;
                for (auto& c : v) {
                    c = gauss(rng);
                    norm += c * c;
                }
            }
            norm = std::sqrt(norm);
            for (int i = 0; i < D; ++i) p[i] = clamp(half + half * v[i] / norm);
            break;
        }
        case GeneratorKind::paraboloid: {
            // x_d = |x'|^2 over a centered grid scaled to fit the box.
            const auto r = static_cast<Coord>(std::sqrt(static_cast<double>(box) / (D - 1)));
            std::uniform_int_distribution<Coord> off(-r, r);
            Coord h = 0;
            for (int i = 0; i < D - 1; ++i) {
                Coord x = off(rng);
                p[i] = box / 2 + x;
                h += x * x;
            }
            p[D - 1] = h;
            break;
        }
        case GeneratorKind::clustered: {
            std::uniform_int_distribution<std::size_t> pick(0, centers.size() - 1);
            const auto& c = centers[pick(rng)];
            const double spread = static_cast<double>(box) / 50;
            for (int i = 0; i < D; ++i) p[i] = clamp(static_cast<double>(c[i]) + spread * gauss(rng));
            break;
        }
    }
    return p;
}

}  // namespace detail

/// Seeded instance in [0, box]^d. Points involved in a general-position
/// violation are redrawn, at most 50 rounds.
template <int D>
GeneratedInstance<D> generate(GeneratorKind kind, std::size_t n, std::uint64_t seed, Coord box = kDefaultBox) {
    if (n < static_cast<std::size_t>(D + 1)) throw InvalidArgument("need n >= d + 1 points");
    if (n > IndexSet::kCapacity) throw InvalidArgument("n exceeds point capacity (384)");
    if (box < 1 || box > kMaxCoord) throw InvalidArgument("box out of range");
    GeneratedInstance<D> inst;
    inst.kind = kind;
    inst.seed = seed;
    inst.box = box;
    Rng rng(derive_seed(seed, {0x9e4, static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(D)}));
    std::vector<Point<D>> centers;
    if (kind == GeneratorKind::clustered) {
        std::uniform_int_distribution<Coord> uni(box / 10, box - box / 10);
        for (int c = 0; c < 4; ++c) {
            Point<D> p;
            for (auto& x : p) x = uni(rng);
            centers.push_back(p);
        }
    }
    inst.points.resize(n);
    for (auto& p : inst.points) p = detail::draw_point<D>(kind, box, rng, centers);
    for (int round = 0;; ++round) {
        auto rep = validate_general_position<D>(inst.points, 64);
        if (rep.ok) {
            inst.retries = round;
            return inst;
        }
        if (round >= kGeneratorRetries) throw DegenerateInput("generator could not reach general position: " + rep.summary());
        for (const auto& v : rep.violations) {
            int victim = *std::max_element(v.witness.begin(), v.witness.end());
            inst.points[victim] = detail::draw_point<D>(kind, box, rng, centers);
        }
    }
}

// ---------------------------------------------------------------------------
// Lines y = a x + b over the grid [1:k] x [1:2k^2].

struct LineFamilyReport {
    int k = 0;
    std::int64_t n = 0;
    int width = 0;
    int height = 0;
    Rational epsilon;
    Rational beta;
    std::vector<std::pair<int, int>> lines;  ///< (a, b)
    std::vector<int> counts;                 ///< grid points per line
    int max_shared = 0;                      ///< over pairs of lines
    bool exact_counts = true;                ///< every line holds exactly eps n = k points
    bool pairwise_ok = true;                 ///< every pair shares at most one point
    bool condition_a = true;
    bool condition_b = true;
    double ratio = 0;                        ///< eps^{-3/2} / |F|

    std::size_t family_size() const { return lines.size(); }
    bool ok() const { return exact_counts && pairwise_ok && condition_a && condition_b; }
};

/// The grid construction with k^3 lines, each holding exactly eps n points.
/// Condition (b) asks pairwise intersections <= beta eps n = beta k.
inline LineFamilyReport elekes_demo(int k, const Rational& beta) {
    if (k < 2) throw InvalidArgument("k must be at least 2");
    if (k > 20) throw InvalidArgument("k too large for the brute-force check");
    LineFamilyReport r;
    r.k = k;
    r.width = k;
    r.height = 2 * k * k;
    r.n = static_cast<std::int64_t>(r.width) * r.height;
    r.epsilon = make_rational(1, 2 * k * k);
    r.beta = beta;
    const std::int64_t eps_n = ceil_times(r.epsilon, r.n);
    const std::int64_t lo = eps_n, hi = floor_times(r.epsilon * 2, r.n);

    std::vector<std::vector<int>> on_line;  // point ids x * height + y
    for (int a = 1; a <= k; ++a)
        for (int b = 1; b <= k * k; ++b) {
            r.lines.push_back({a, b});
            std::vector<int> pts;
            for (int x = 1; x <= r.width; ++x)
                for (int y = 1; y <= r.height; ++y)
                    if (y == a * x + b) pts.push_back((x - 1) * r.height + (y - 1));
            r.counts.push_back(static_cast<int>(pts.size()));
            if (static_cast<std::int64_t>(pts.size()) != eps_n) r.exact_counts = false;
            auto sz = static_cast<std::int64_t>(pts.size());
            if (sz < lo || sz > hi) r.condition_a = false;
            on_line.push_back(std::move(pts));
        }
    const Rational budget = beta * eps_n;
    for (std::size_t i = 0; i < on_line.size(); ++i)
        for (std::size_t j = i + 1; j < on_line.size(); ++j) {
            std::vector<int> common;
            std::set_intersection(on_line[i].begin(), on_line[i].end(), on_line[j].begin(), on_line[j].end(),
                                  std::back_inserter(common));
            int s = static_cast<int>(common.size());
            r.max_shared = std::max(r.max_shared, s);
            if (s > 1) r.pairwise_ok = false;
            if (Rational(s) > budget) r.condition_b = false;
        }
    r.ratio = std::pow(to_double(r.epsilon), -1.5) / static_cast<double>(r.lines.size());
    return r;
}

// ---------------------------------------------------------------------------
// Scaling sweep.

struct SweepRow {
    std::string generator;
    std::size_t n = 0;
    int dim = 3;
    Rational epsilon;
    Rational beta;
    std::uint64_t seed = 0;
    std::size_t family_size = 0;  ///< max over sides of the first-scale family size
    std::size_t net_size = 0;
    std::size_t baseline_size = 0;
    bool valid = false;
    double millis = 0;
};

inline const char* kSweepHeader = "generator,n,dim,epsilon,beta,seed,family_size,net_size,baseline_size,valid,millis";

inline std::string to_csv(const SweepRow& r) {
    std::ostringstream os;
    os << r.generator << ',' << r.n << ',' << r.dim << ',' << to_string(r.epsilon) << ',' << to_string(r.beta) << ','
       << r.seed << ',' << r.family_size << ',' << r.net_size << ',' << r.baseline_size << ','
       << (r.valid ? "true" : "false") << ',';
    os.setf(std::ios::fixed);
    os.precision(1);
    os << r.millis;
    return os.str();
}

inline SweepRow parse_sweep_row(const std::string& line) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 11) throw InvalidArgument("sweep row must have 11 columns");
    SweepRow r;
    try {
        r.generator = f[0];
        r.n = std::stoul(f[1]);
        r.dim = std::stoi(f[2]);
        r.epsilon = parse_rational(f[3]);
        r.beta = parse_rational(f[4]);
        r.seed = std::stoull(f[5]);
        r.family_size = std::stoul(f[6]);
        r.net_size = std::stoul(f[7]);
        r.baseline_size = std::stoul(f[8]);
        r.valid = f[9] == "true";
        r.millis = std::stod(f[10]);
    } catch (const std::logic_error&) {
        throw InvalidArgument("malformed sweep row: " + line);
    }
    return r;
}

template <int D>
SweepRow sweep_cell(GeneratorKind kind, std::size_t n, const Rational& eps, const Rational& beta, std::uint64_t seed,
                    BuildMode mode = BuildMode::single_scale) {
    auto inst = generate<D>(kind, n, seed);
    BuildConfig cfg;
    cfg.epsilon = eps;
    cfg.beta = beta;
    cfg.mode = mode;
    cfg.seed = seed;
    auto rep = build_net<D>(inst.points, cfg);
    SweepRow row;
    row.generator = to_string(kind);
    row.n = n;
    row.dim = D;
    row.epsilon = eps;
    row.beta = beta;
    row.seed = seed;
    row.family_size = std::max(rep.stats.first_scale_lower, rep.stats.first_scale_upper);
    row.net_size = rep.stats.net_size;
    row.baseline_size = baseline_hw_net<D>(inst.points, eps, seed).net.size();
    row.valid = rep.verdict.valid;
    row.millis = rep.stats.millis;
    return row;
}

/// One row per (epsilon, seed); a net that fails verification raises
/// VerificationFailure from build_net.
template <int D>
std::vector<SweepRow> scaling_sweep(GeneratorKind kind, std::size_t n, const std::vector<Rational>& eps,
                                    const Rational& beta, const std::vector<std::uint64_t>& seeds,
                                    BuildMode mode = BuildMode::single_scale) {
    std::vector<SweepRow> rows;
    for (const auto& e : eps)
        for (auto s : seeds) rows.push_back(sweep_cell<D>(kind, n, e, beta, s, mode));
    return rows;
}

}  // namespace epsnet
