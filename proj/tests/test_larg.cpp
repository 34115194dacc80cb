#include <doctest.h>

#include <cmath>

#include "larglab/json_io.hpp"
#include "larglab/larg.hpp"

using namespace larglab;

namespace {

FunctionFamily constants(std::initializer_list<double> values) {
    FunctionFamily fam;
    fam.spec = {FuncKind::pl, static_cast<int>(values.size()), 0};
    int id = 0;
    for (double v : values)
        fam.functions.push_back({id++, PLFunction::constant(Rational::snapped(v))});
    return fam;
}

}  // namespace

TEST_CASE("build_larg: distance gate is absolute") {
    FunctionFamily fam = constants({0.0, 2.0});
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        LargGraph g = build_larg(fam, 0.9, seed);
        CHECK(g.edge_count() == 0);
        CHECK(g.floors.at({0, 1}).value == 2);
    }
    CHECK_THROWS_AS(build_larg(fam, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_larg(fam, 1.0, 1), std::invalid_argument);
}

TEST_CASE("build_larg: edge frequency matches p") {
    FunctionFamily fam = constants({0.0, 0.5});
    double p = 0.3;
    int n = 10000, hits = 0;
    for (int seed = 0; seed < n; ++seed)
        hits += build_larg(fam, p, seed).adjacent(0, 1);
    double freq = static_cast<double>(hits) / n;
    double sigma = std::sqrt(p * (1 - p) / n);
    CHECK(std::fabs(freq - p) <= 3 * sigma);
}

TEST_CASE("build_larg: determinism and edge=>distance invariant") {
    FamilySpec spec{FuncKind::pl, 25, 4242};
    FunctionFamily fam = sample_family(spec);
    LargGraph a = build_larg(fam, 0.5, 7);
    LargGraph b = build_larg(fam, 0.5, 7);
    CHECK(graph_to_json(a).dump() == graph_to_json(b).dump());
    for (int u = 0; u < a.n; ++u)
        for (int v : a.adj[u]) {
            CHECK(sup_norm_diff(fam.functions[u].as_pl(), fam.functions[v].as_pl()) <
                  Rational(1));
        }
    LargGraph c = build_larg(fam, 0.5, 8);
    CHECK(graph_to_json(a).dump() != graph_to_json(c).dump());
}

TEST_CASE("extend_larg keeps existing edges") {
    FamilySpec spec{FuncKind::pl, 12, 99};
    FunctionFamily fam = sample_family(spec);
    FunctionFamily prefix = fam;
    prefix.functions.pop_back();
    prefix.spec.count -= 1;
    LargGraph small = build_larg(prefix, 0.5, 3);
    LargGraph big = build_larg(fam, 0.5, 3);
    extend_larg(small, prefix, fam.functions.back());
    for (int u = 0; u < big.n; ++u) CHECK(small.adj[u] == big.adj[u]);
}

TEST_CASE("correct_join_prob") {
    CHECK(correct_join_prob(2, 1, 0.5) == doctest::Approx(0.125));
    CHECK(correct_join_prob(0, 0, 0.7) == doctest::Approx(1.0));
    CHECK(correct_join_prob(1, 0, 0.3) == doctest::Approx(0.3));
    CHECK_THROWS_AS(correct_join_prob(-1, 0, 0.5), std::invalid_argument);
}

TEST_CASE("find_correctly_joined") {
    FamilySpec spec{FuncKind::pl, 20, 31337};
    FunctionFamily fam = sample_family(spec);
    LargGraph g = build_larg(fam, 0.5, 11);

    std::vector<int> candidates{3, 4, 5, 6};
    CHECK(find_correctly_joined(g, {}, {}, candidates) == 3);

    // An isolated vertex can never serve A={u}.
    int isolated = -1;
    for (int u = 0; u < g.n && isolated < 0; ++u)
        if (g.adj[u].empty()) isolated = u;
    if (isolated >= 0) {
        std::vector<int> pool;
        for (int v = 0; v < g.n; ++v)
            if (v != isolated) pool.push_back(v);
        CHECK_FALSE(find_correctly_joined(g, {isolated}, {}, pool).has_value());
    }
    CHECK_THROWS_AS(find_correctly_joined(g, {1}, {1}, candidates), std::invalid_argument);
    CHECK_THROWS_AS(find_correctly_joined(g, {3}, {}, candidates), std::invalid_argument);
}

TEST_CASE("find_correctly_joined: hit frequency against the closed form") {
    // A = {0,1}, B = {2}; all candidates within unit distance of everything.
    FunctionFamily fam = constants({0.0, 0.1, 0.2, 0.3, 0.35, 0.4, 0.45, 0.5});
    double p = 0.5;
    std::vector<int> candidates{3, 4, 5, 6, 7};
    int n = 4000, hits = 0;
    for (int seed = 0; seed < n; ++seed) {
        LargGraph g = build_larg(fam, p, seed);
        hits += find_correctly_joined(g, {0, 1}, {2}, candidates).has_value();
    }
    double q = correct_join_prob(2, 1, p);  // per-candidate success 0.125
    double expect = 1.0 - std::pow(1.0 - q, candidates.size());
    double freq = static_cast<double>(hits) / n;
    double sigma = std::sqrt(expect * (1 - expect) / n);
    CHECK(std::fabs(freq - expect) <= 4 * sigma);
}

TEST_CASE("estimate_join_frequency") {
    // Far-away family: no constraint binds.
    FunctionFamily far = constants({0.0, 5.0, 7.0});
    JoinFrequency f0 = estimate_join_frequency(far, far.functions[0], {}, 2000, 0.5, 9);
    CHECK(f0.freq == doctest::Approx(1.0));

    // k=2, l=1 at p=0.5: frequency ~ 0.125.
    FunctionFamily fam = constants({0.3, 0.5, 0.2, 0.6});
    JoinFrequency f1 =
        estimate_join_frequency(fam, fam.functions[0], {1, 2}, 10000, 0.5, 10);
    CHECK(std::fabs(f1.freq - 0.125) <= 3 * f1.stderr_ + 1e-9);

    // p=0.9, k=0, l=2: about (1-p)^2 = 0.01.
    FunctionFamily fam2 = constants({0.3, 0.5, 0.2});
    JoinFrequency f2 = estimate_join_frequency(fam2, fam2.functions[0], {}, 20000, 0.9, 11);
    CHECK(f2.freq == doctest::Approx(0.01).epsilon(0.5));

    // Parallel execution is schedule independent.
    JoinFrequency f3 = estimate_join_frequency(fam, fam.functions[0], {1, 2}, 10000, 0.5, 10, 4);
    CHECK(f3.freq == f1.freq);
}

TEST_CASE("graph_distance against a Floyd-Warshall oracle") {
    FamilySpec spec{FuncKind::pl, 18, 515};
    FunctionFamily fam = sample_family(spec);
    LargGraph g = build_larg(fam, 0.4, 2);

    CHECK(graph_distance(g, 3, 3) == 0);

    int n = g.n;
    const int inf = 1 << 20;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int u = 0; u < n; ++u) d[u][u] = 0;
    for (int u = 0; u < n; ++u)
        for (int v : g.adj[u]) d[u][v] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            auto got = graph_distance(g, u, v);
            if (d[u][v] >= inf)
                CHECK_FALSE(got.has_value());
            else
                CHECK(got == d[u][v]);
        }
}

TEST_CASE("graph json round-trip") {
    FamilySpec spec{FuncKind::pl, 10, 606};
    FunctionFamily fam = sample_family(spec);
    LargGraph g = build_larg(fam, 0.5, 1);
    LargGraph back = graph_from_json(graph_to_json(g));
    CHECK(graph_to_json(back).dump() == graph_to_json(g).dump());
    CHECK(back.family_hash == family_hash(fam));
}

TEST_CASE("ambiguous distances: strict aborts, tolerant flags") {
    double c = 1.0 - 1e-15;
    FunctionFamily fam;
    fam.spec = {FuncKind::poly, 2, 0};
    fam.functions.push_back({0, Polynomial({0.0})});
    fam.functions.push_back({1, Polynomial({0.0, 4.0 * c, -4.0 * c})});
    CHECK_THROWS_AS(build_larg(fam, 0.5, 1, true), std::runtime_error);
    LargGraph g = build_larg(fam, 0.5, 1, false);
    REQUIRE(g.ambiguous_pairs.size() == 1);
    CHECK(g.ambiguous_pairs[0] == std::make_pair(0, 1));
    CHECK_FALSE(g.adjacent(0, 1));
}

TEST_CASE("non-positional family ids are rejected") {
    FunctionFamily fam;
    fam.spec = {FuncKind::pl, 2, 0};
    fam.functions.push_back({5, PLFunction::constant(Rational(0))});
    fam.functions.push_back({6, PLFunction::constant(Rational(1, 2))});
    CHECK_THROWS_AS(build_larg(fam, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(fam.by_id(0), std::invalid_argument);
}
