#include "larglab/larg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <thread>

#include "larglab/json_io.hpp"

namespace larglab {

bool LargGraph::adjacent(int u, int v) const {
    if (u < 0 || v < 0 || u >= n || v >= n) throw std::out_of_range("LargGraph::adjacent");
    const auto& a = adj[u];
    return std::binary_search(a.begin(), a.end(), v);
}

std::size_t LargGraph::edge_count() const {
    std::size_t s = 0;
    for (const auto& a : adj) s += a.size();
    return s / 2;
}

bool pair_coin(std::uint64_t seed, int u, int v, double p) {
    auto lo = static_cast<std::uint64_t>(std::min(u, v));
    auto hi = static_cast<std::uint64_t>(std::max(u, v));
    Rng rng = Rng::substream(seed, {stream_tag::larg_pair, lo, hi});
    return rng.next_unit() < p;
}

namespace {

void add_pair(LargGraph& g, const Func& fu, const Func& fv, bool strict, double tol) {
    int u = fu.id, v = fv.id;
    FloorNorm fl = floor_norm_diff(fu, fv, tol);
    g.floors[{std::min(u, v), std::max(u, v)}] = fl;
    if (fl.ambiguous) {
        if (strict)
            throw std::runtime_error("build_larg: ambiguous distance for pair (" +
                                     std::to_string(u) + "," + std::to_string(v) + ")");
        g.ambiguous_pairs.emplace_back(std::min(u, v), std::max(u, v));
        return;
    }
    if (fl.value < 1 && pair_coin(g.seed, u, v, g.p)) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
}

}  // namespace

LargGraph build_larg(const FunctionFamily& family, double p, std::uint64_t seed, bool strict,
                     double tol) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("build_larg: p must be in (0,1)");
    LargGraph g;
    g.family_hash = family_hash(family);
    g.p = p;
    g.seed = seed;
    g.n = static_cast<int>(family.functions.size());
    for (int i = 0; i < g.n; ++i)
        if (family.functions[i].id != i)
            throw std::invalid_argument("build_larg: family ids must be positional");
    g.adj.assign(g.n, {});
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v)
            add_pair(g, family.functions[u], family.functions[v], strict, tol);
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
    return g;
}

void extend_larg(LargGraph& g, const FunctionFamily& family, const Func& fresh, bool strict,
                 double tol) {
    if (fresh.id != g.n) throw std::invalid_argument("extend_larg: new id must be n");
    g.adj.emplace_back();
    g.n += 1;
    for (int u = 0; u + 1 < g.n; ++u) add_pair(g, family.functions[u], fresh, strict, tol);
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
}

double correct_join_prob(int k, int l, double p) {
    if (k < 0 || l < 0) throw std::invalid_argument("correct_join_prob: k,l must be >= 0");
    return std::pow(p, k) * std::pow(1.0 - p, l);
}

std::optional<int> find_correctly_joined(const LargGraph& g, const std::set<int>& A,
                                         const std::set<int>& B,
                                         const std::vector<int>& candidates) {
    for (int a : A)
        if (B.count(a)) throw std::invalid_argument("find_correctly_joined: A and B overlap");
    for (int z : candidates) {
        if (A.count(z) || B.count(z))
            throw std::invalid_argument("find_correctly_joined: candidate inside A or B");
        bool ok = true;
        for (int a : A)
            if (!g.adjacent(z, a)) { ok = false; break; }
        if (ok)
            for (int b : B)
                if (g.adjacent(z, b)) { ok = false; break; }
        if (ok) return z;
    }
    return std::nullopt;
}

JoinFrequency estimate_join_frequency(const FunctionFamily& family, const Func& target,
                                      const std::set<int>& adj_targets, long long trials,
                                      double p, std::uint64_t seed, int jobs) {
    if (trials <= 0) throw std::invalid_argument("estimate_join_frequency: trials must be > 0");
    // Distance gates are fixed; only coins are redrawn per trial. A member
    // at distance >= 1 can never be adjacent: required members at such a
    // distance force frequency 0, forbidden ones are free.
    std::vector<int> required, forbidden;
    bool impossible = false;
    for (const auto& h : family.functions) {
        if (h.id == target.id) continue;
        FloorNorm fl = floor_norm_diff(target, h);
        bool within = !fl.ambiguous && fl.value < 1;
        if (adj_targets.count(h.id)) {
            if (within)
                required.push_back(h.id);
            else
                impossible = true;
        } else if (within) {
            forbidden.push_back(h.id);
        }
    }
    JoinFrequency out;
    out.trials = trials;
    if (impossible) return out;

    auto run_range = [&](long long lo, long long hi, long long& hits) {
        long long h = 0;
        for (long long t = lo; t < hi; ++t) {
            bool ok = true;
            for (int j : required) {
                Rng rng = Rng::substream(seed, {stream_tag::trial, static_cast<std::uint64_t>(t),
                                                static_cast<std::uint64_t>(j)});
                if (!(rng.next_unit() < p)) { ok = false; break; }
            }
            if (ok)
                for (int j : forbidden) {
                    Rng rng = Rng::substream(seed, {stream_tag::trial, static_cast<std::uint64_t>(t),
                                                    static_cast<std::uint64_t>(j)});
                    if (rng.next_unit() < p) { ok = false; break; }
                }
            if (ok) ++h;
        }
        hits = h;
    };

    long long total_hits = 0;
    if (jobs <= 1) {
        run_range(0, trials, total_hits);
    } else {
        int nthreads = std::min<long long>(jobs, trials);
        std::vector<long long> hits(nthreads, 0);
        std::vector<std::thread> pool;
        long long chunk = (trials + nthreads - 1) / nthreads;
        for (int i = 0; i < nthreads; ++i) {
            long long lo = i * chunk, hi = std::min<long long>(trials, lo + chunk);
            pool.emplace_back(run_range, lo, hi, std::ref(hits[i]));
        }
        for (auto& th : pool) th.join();
        for (long long h : hits) total_hits += h;
    }
    out.freq = static_cast<double>(total_hits) / static_cast<double>(trials);
    out.stderr_ = std::sqrt(out.freq * (1.0 - out.freq) / static_cast<double>(trials));
    return out;
}

std::optional<int> graph_distance(const LargGraph& g, int u, int v) {
    if (u < 0 || v < 0 || u >= g.n || v >= g.n) throw std::out_of_range("graph_distance");
    if (u == v) return 0;
    std::vector<int> dist(g.n, -1);
    std::deque<int> q{u};
    dist[u] = 0;
    while (!q.empty()) {
        int w = q.front();
        q.pop_front();
        for (int x : g.adj[w]) {
            if (dist[x] >= 0) continue;
            dist[x] = dist[w] + 1;
            if (x == v) return dist[x];
            q.push_back(x);
        }
    }
    return std::nullopt;
}

}  // namespace larglab
