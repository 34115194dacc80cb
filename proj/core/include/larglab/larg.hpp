#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "larglab/sampling.hpp"

namespace larglab {

// Local Area Random Graph on a finite family: each unordered pair at sup
// distance < 1 is joined by an independent seeded coin with probability p.
// Coins are addressed by (seed, min_id, max_id), so extending the vertex
// set never perturbs existing edges.
struct LargGraph {
    std::string family_hash;
    double p = 0.5;
    std::uint64_t seed = 0;
    int n = 0;
    std::vector<std::vector<int>> adj;            // sorted neighbour lists
    std::map<std::pair<int, int>, FloorNorm> floors;  // per-pair floor distances
    std::vector<std::pair<int, int>> ambiguous_pairs;

    bool adjacent(int u, int v) const;
    std::size_t edge_count() const;
};

// The per-pair coin: true with probability p, a pure function of
// (seed, min(u,v), max(u,v)).
bool pair_coin(std::uint64_t seed, int u, int v, double p);

// Build the graph. In strict mode a distance enclosure straddling 1 aborts;
// tolerant mode refines, then records the pair as ambiguous (no edge).
LargGraph build_larg(const FunctionFamily& family, double p, std::uint64_t seed,
                     bool strict = true, double tol = 1e-9);

// Append one vertex to an existing graph, preserving all previous edges.
void extend_larg(LargGraph& g, const FunctionFamily& family, const Func& fresh,
                 bool strict = true, double tol = 1e-9);

// p^k (1-p)^l, the correct-join probability for |A| = k, |B| = l.
double correct_join_prob(int k, int l, double p);

// First candidate (in list order) adjacent to every vertex of A and none of
// B; candidates must be disjoint from A and B.
std::optional<int> find_correctly_joined(const LargGraph& g, const std::set<int>& A,
                                         const std::set<int>& B,
                                         const std::vector<int>& candidates);

struct JoinFrequency {
    double freq = 0.0;
    double stderr_ = 0.0;
    long long trials = 0;
};

// Monte Carlo frequency of the target being correctly joined to
// adj_targets vs the rest of the family, over fresh coin sets per trial.
JoinFrequency estimate_join_frequency(const FunctionFamily& family, const Func& target,
                                      const std::set<int>& adj_targets, long long trials,
                                      double p, std::uint64_t seed, int jobs = 1);

// BFS shortest-path length; nullopt when unreachable.
std::optional<int> graph_distance(const LargGraph& g, int u, int v);

}  // namespace larglab
