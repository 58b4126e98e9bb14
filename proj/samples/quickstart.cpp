// Builds a net for a random 3D instance, checks it, and prints what the
// envelope of one family looks like.

#include <iostream>

#include "epsnet.hpp"

int main() {
    using namespace epsnet;

    auto inst = generate<3>(GeneratorKind::cube_uniform, 60, /*seed=*/7);

    BuildConfig cfg;
    cfg.epsilon = make_rational(1, 5);
    cfg.seed = 7;
    auto rep = build_net<3>(inst.points, cfg);

    std::cout << "n = " << rep.n << ", eps = " << to_string(cfg.epsilon) << ", |N| = " << rep.net.size()
              << ", valid = " << std::boolalpha << rep.verdict.valid << '\n';

    // An arbitrary handful of points is usually not a net.
    auto sample = IndexSet::prefix(4);
    auto v = verify_net<3>(inst.points, sample, cfg.epsilon);
    std::cout << "first " << sample.size() << " points as a net: " << v.valid;
    if (v.witness) std::cout << " (misses a halfspace holding " << v.witness->size() << " points)";
    std::cout << '\n';

    const auto& fam = rep.first_family(Side::lower);
    auto es = face_degrees_and_pockets(inst.points, fam, cfg.seed);
    std::cout << "lower family: t = " << es.t() << ", envelope edges = " << es.envelope_edges << '\n';
    for (std::size_t i = 0; i < es.t(); ++i)
        std::cout << "  member " << i << ": |trace| = " << fam.members[i].trace.size() << ", degree = " << es.degree[i]
                  << ", pocket = " << es.pockets[i].size() << '\n';
}
