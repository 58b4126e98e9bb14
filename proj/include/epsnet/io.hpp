#pragma once

// JSON wire formats for instances and nets. Needs nlohmann/json.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "experiments.hpp"
#include "net_builder.hpp"

namespace epsnet {

using json = nlohmann::json;

/// Dimension-erased instance as read from or written to disk.
struct Instance {
    int dim = 3;
    std::vector<std::vector<Coord>> points;
    json generator = json::object();

    template <int D>
    PointSet<D> as() const {
        if (dim != D) throw InvalidArgument("instance has dimension " + std::to_string(dim));
        PointSet<D> out(points.size());
        for (std::size_t i = 0; i < points.size(); ++i)
            for (int c = 0; c < D; ++c) out[i][c] = points[i][c];
        return out;
    }
};

template <int D>
Instance make_instance(const GeneratedInstance<D>& g) {
    Instance inst;
    inst.dim = D;
    for (const auto& p : g.points) inst.points.emplace_back(p.begin(), p.end());
    inst.generator = {{"kind", to_string(g.kind)}, {"n", g.points.size()}, {"seed", g.seed}, {"box", g.box},
                      {"retries", g.retries}};
    return inst;
}

inline json to_json(const Instance& inst) {
    return json{{"dim", inst.dim}, {"points", inst.points}, {"generator", inst.generator}};
}

inline Instance instance_from_json(const json& j) {
    Instance inst;
    try {
        inst.dim = j.at("dim").get<int>();
        if (inst.dim != 2 && inst.dim != 3) throw InvalidArgument("dim must be 2 or 3");
        for (const auto& p : j.at("points")) {
            if (!p.is_array() || p.size() != static_cast<std::size_t>(inst.dim))
                throw InvalidArgument("every point needs exactly dim integer coordinates");
            std::vector<Coord> row;
            for (const auto& c : p) {
                if (!c.is_number_integer()) throw InvalidArgument("coordinates must be integers");
                row.push_back(c.get<Coord>());
            }
            inst.points.push_back(std::move(row));
        }
        if (j.contains("generator")) inst.generator = j.at("generator");
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed instance: ") + e.what());
    }
    return inst;
}

inline json to_json(const IndexSet& s) { return s.to_vector(); }

inline IndexSet index_set_from_json(const json& j) {
    IndexSet s;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw InvalidArgument("indices must be non-negative integers");
        s.insert(v.get<std::size_t>());
    }
    return s;
}

template <int D>
json to_json(const NetReport<D>& rep) {
    json fams = json::array();
    for (const auto& f : rep.families) {
        json members = json::array();
        for (const auto& m : f.members) {
            std::vector<int> contacts(m.trace.contacts.begin(), m.trace.contacts.begin() + m.trace.num_contacts);
            members.push_back({{"trace", to_json(m.trace.indices)},
                               {"contacts", contacts},
                               {"mask", m.trace.mask},
                               {"subnet", to_json(m.subnet)}});
        }
        fams.push_back({{"scale", to_string(f.scale)}, {"side", to_string(f.side)}, {"members", members}});
    }
    return json{{"epsilon", to_string(rep.config.epsilon)},
                {"beta", to_string(rep.config.beta)},
                {"mode", to_string(rep.config.mode)},
                {"subnet_method", to_string(rep.config.subnet_method)},
                {"seed", rep.config.seed},
                {"n", rep.n},
                {"net", to_json(rep.net)},
                {"families", fams},
                {"valid", rep.verdict.valid}};
}

/// The pieces of a net file that `verify` needs.
struct NetFile {
    Rational epsilon;
    IndexSet net;
};

inline NetFile net_from_json(const json& j) {
    NetFile f;
    try {
        f.epsilon = parse_rational(j.at("epsilon").get<std::string>());
        f.net = index_set_from_json(j.at("net"));
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed net file: ") + e.what());
    }
    return f;
}

template <int D>
json to_json(const Verdict<D>& v) {
    json j{{"valid", v.valid}, {"threshold", v.threshold}};
    if (v.witness) {
        std::vector<int> contacts(v.witness->contacts.begin(), v.witness->contacts.begin() + v.witness->num_contacts);
        j["witness"] = {{"trace", to_json(v.witness->indices)},
                        {"contacts", contacts},
                        {"side", to_string(v.witness->side)},
                        {"size", v.witness->size()}};
    }
    return j;
}

}  // namespace epsnet
