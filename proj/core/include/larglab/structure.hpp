#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "larglab/larg.hpp"

namespace larglab {

// A family member in PL form, the uniform substrate for all structural
// predicates. `exact` records whether the rendering is the function itself
// (pl, bm) or a resolution-limited interpolant (poly).
struct PLEntry {
    int id = 0;
    PLFunction fn = PLFunction::constant(Rational(0));
    bool exact = true;
};

using PLFamilyView = std::vector<PLEntry>;

PLFamilyView render_family(const FunctionFamily& fam, int poly_resolution = 4096);

// Every member minus the lowest-id member; realizes the "first element is
// the zero function" normalization. Ids are preserved.
PLFamilyView normalize_to_zero(const PLFamilyView& view);

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ViolationKind {
    shared_crossing,
    boundary_crossing,
    extremum_crossing,
    infinite_crossing,
    shared_slope
};

const char* violation_kind_name(ViolationKind k);

struct Violation {
    ViolationKind kind;
    std::vector<int> ids;
    std::optional<Rational> x;
};

// Transversality over all pairs. Hard violations decide `ok`; shared slope
// sets are reported separately as advisory (they predict, rather than
// witness, infinite crossing sets).
struct TransversalityReport {
    bool ok = true;
    std::vector<Violation> violations;
    std::vector<Violation> slope_advisories;
    bool at_resolution = false;  // true when any member is a poly rendering
};

TransversalityReport check_transverse(const PLFamilyView& view);

// Crossing of a family pair, with the owning ids attached.
struct FamilyCrossing {
    std::pair<int, int> ids;
    Crossing c;
};

std::vector<FamilyCrossing> all_crossings(const PLFamilyView& view);

enum class RunType { below_below, below_above, above_below, above_above };

const char* run_type_name(RunType t);

// Maximal cluster of crossings of one pair, typed by the fractional order
// of the two functions on small flanks just outside the cluster.
struct CrossingRunOut {
    Rational lo, hi;
    std::pair<int, int> ids;
    RunType type = RunType::below_above;
    long long offset = 0;  // f - g at the first crossing of the cluster
};

std::vector<CrossingRunOut> crossing_runs(const PLEntry& f, const PLEntry& g);

struct PartitionCell {
    Rational lo, hi;
    bool closed = false;
    std::pair<int, int> ids{-1, -1};  // crossing pair, closed cells only
};

// Alternating open/closed decomposition of [0,1] from the iterative
// min/max scan. Throws StructuralError on shared or boundary crossings.
struct CrossingPartition {
    std::vector<PartitionCell> cells;
    std::size_t closed_count() const;
};

CrossingPartition crossing_partition(const PLFamilyView& view);

// True when every triple of fractional parts has the same circular
// orientation in both lists.
bool same_circular_order(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

// Orientation of <a>,<b>,<c> on the circle: +1 positive, -1 negative,
// 0 degenerate (a coincidence).
int circular_orientation(const Rational& a, const Rational& b, const Rational& c);

// A ~_eps B: same cardinality, i-th elements within eps after sorting.
// Runs are collapsed to their midpoints before comparing.
bool similar_crossings(const std::vector<Crossing>& a, const std::vector<Crossing>& b,
                       const Rational& eps);

// Finite-resolution crossing profile of a pair: counts per depth. Brownian
// pairs are counted on dyadic renderings; pl and poly pairs report their
// resolution-independent count at every depth.
struct ICProfile {
    std::pair<int, int> ids;
    std::vector<std::pair<int, long long>> counts;  // (depth, count), depths increasing
};

ICProfile ic_profile(const Func& f, const Func& g, const std::vector<int>& depths);

// Steep re-crossing target from the smooth-density construction: agrees
// with f outside isolation intervals around its crossings with F, crosses
// linearly with slope +-(K+2) inside, and comes with the acceptance
// clearances eta (inner) and zeta (outer).
struct SteepTarget {
    PLFunction target = PLFunction::constant(Rational(0));
    std::vector<std::pair<Rational, Rational>> neighborhoods;  // N_{j,m}
    std::vector<Rational> deltas;                              // isolation radii, < eps
    Rational eta{0};
    Rational zeta{0};
    Rational steep_slope{0};  // K + 2
};

SteepTarget build_steep_target(const PLFunction& f, const PLFamilyView& F, const Rational& eps);

// Bounded realization of the almost-sure existence of smooth
// eps-approximations: first stream element g with ||f-g|| < eps and
// cr(g,h) ~_eps cr(f,h) for every h in F (plus, when a graph and target
// set are wired in, correct adjacency). Every success is re-verified from
// scratch; the search trusts nothing.
struct ApproxSearch {
    bool found = false;
    int id = -1;
    long long examined = 0;
};

ApproxSearch find_smooth_approx(const PLFunction& f, const PLFamilyView& F, const Rational& eps,
                                const PLFamilyView& stream, long long budget,
                                const LargGraph* graph = nullptr,
                                const std::set<int>* adjacency_targets = nullptr);

}  // namespace larglab
