#include "larglab/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace larglab {

using nlohmann::json;

namespace {

std::string kind_name(FuncKind k) {
    switch (k) {
        case FuncKind::pl: return "pl";
        case FuncKind::poly: return "poly";
        default: return "bm";
    }
}

FuncKind kind_from_name(const std::string& s) {
    if (s == "pl") return FuncKind::pl;
    if (s == "poly") return FuncKind::poly;
    if (s == "bm") return FuncKind::bm;
    throw std::invalid_argument("unknown function kind: " + s);
}

json rational_to_json(const Rational& r) { return json::array({r.num_string(), r.den_string()}); }

Rational rational_from_json(const json& j) {
    return Rational::from_strings(j.at(0).get<std::string>(), j.at(1).get<std::string>());
}

}  // namespace

json func_to_json(const Func& f) {
    json j;
    j["id"] = f.id;
    j["kind"] = kind_name(f.kind());
    switch (f.kind()) {
        case FuncKind::pl: {
            json pts = json::array();
            for (const auto& p : f.as_pl().points())
                pts.push_back(json::array({rational_to_json(p.x), rational_to_json(p.y)}));
            j["points"] = std::move(pts);
            break;
        }
        case FuncKind::poly: j["coeffs"] = f.as_poly().coeffs(); break;
        case FuncKind::bm: {
            j["depth"] = f.as_bm().depth();
            j["shift"] = f.as_bm().shift();
            j["values"] = f.as_bm().values();
            break;
        }
    }
    return j;
}

Func func_from_json(const json& j) {
    int id = j.at("id").get<int>();
    switch (kind_from_name(j.at("kind").get<std::string>())) {
        case FuncKind::pl: {
            std::vector<ChangePoint> pts;
            for (const auto& p : j.at("points"))
                pts.push_back({rational_from_json(p.at(0)), rational_from_json(p.at(1))});
            return {id, PLFunction(std::move(pts))};
        }
        case FuncKind::poly:
            return {id, Polynomial(j.at("coeffs").get<std::vector<double>>())};
        default:
            return {id, DyadicPath(j.at("depth").get<int>(), j.at("shift").get<double>(),
                                   j.at("values").get<std::vector<double>>())};
    }
}

json family_to_json(const FunctionFamily& fam) {
    json spec;
    spec["kind"] = kind_name(fam.spec.kind);
    spec["count"] = fam.spec.count;
    spec["seed"] = fam.spec.seed;
    spec["bm_depth"] = fam.spec.bm_depth;
    spec["poisson_mean"] = fam.spec.poisson_mean;
    json fns = json::array();
    for (const auto& f : fam.functions) fns.push_back(func_to_json(f));
    json j;
    j["spec"] = std::move(spec);
    j["functions"] = std::move(fns);
    return j;
}

FunctionFamily family_from_json(const json& j) {
    FunctionFamily fam;
    const json& spec = j.at("spec");
    fam.spec.kind = kind_from_name(spec.at("kind").get<std::string>());
    fam.spec.count = spec.at("count").get<int>();
    fam.spec.seed = spec.at("seed").get<std::uint64_t>();
    fam.spec.bm_depth = spec.value("bm_depth", 10);
    fam.spec.poisson_mean = spec.value("poisson_mean", 1.0);
    for (const auto& fj : j.at("functions")) fam.functions.push_back(func_from_json(fj));
    return fam;
}

std::string family_hash(const FunctionFamily& fam) {
    json fns = json::array();
    for (const auto& f : fam.functions) fns.push_back(func_to_json(f));
    std::string dump = fns.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

json graph_to_json(const LargGraph& g) {
    json j;
    j["family"] = g.family_hash;
    j["p"] = g.p;
    j["seed"] = g.seed;
    j["n"] = g.n;
    json edges = json::array();
    for (int u = 0; u < g.n; ++u)
        for (int v : g.adj[u])
            if (u < v) edges.push_back(json::array({u, v}));
    j["edges"] = std::move(edges);
    json floors = json::array();
    for (const auto& [pr, fl] : g.floors)
        floors.push_back(json::array({pr.first, pr.second, fl.value, fl.ambiguous}));
    j["floors"] = std::move(floors);
    return j;
}

LargGraph graph_from_json(const json& j) {
    LargGraph g;
    g.family_hash = j.at("family").get<std::string>();
    g.p = j.at("p").get<double>();
    g.seed = j.at("seed").get<std::uint64_t>();
    g.n = j.at("n").get<int>();
    g.adj.assign(g.n, {});
    for (const auto& e : j.at("edges")) {
        int u = e.at(0).get<int>(), v = e.at(1).get<int>();
        g.adj.at(u).push_back(v);
        g.adj.at(v).push_back(u);
    }
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
    if (j.contains("floors"))
        for (const auto& e : j.at("floors"))
            g.floors[{e.at(0).get<int>(), e.at(1).get<int>()}] =
                FloorNorm{e.at(2).get<long long>(), e.at(3).get<bool>()};
    return g;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    json j;
    in >> j;
    return j;
}

}  // namespace larglab
