#pragma once

#include <string>
#include <vector>

#include "larglab/structure.hpp"

namespace larglab {

// All checks below take two aligned PL views: entry k of F is paired with
// entry k of G. Ids identify the functions inside their own families.

struct SIResult {
    bool ok = true;
    // First violating pair and the two floor distances, when !ok.
    int left_a = -1, left_b = -1;
    long long floor_left = 0, floor_right = 0;
};

// floor ||F_i - F_j|| == floor ||G_i - G_j|| for all pairs. Exact.
SIResult is_step_isometry(const PLFamilyView& F, const PLFamilyView& G);

struct OPResult {
    bool ok = true;
    std::string detail;  // witness description when !ok
};

// Order preservation on the matched interval systems X (from F's crossings
// plus {0,1}) and Y (from G's): equal integer parts and identical remainder
// orders on every matched open interval. Exact; floor constancy inside each
// interval is itself verified.
OPResult check_order_preserving(const PLFamilyView& F, const PLFamilyView& G);

struct SMResult {
    bool ok = true;
    bool edges = true;            // SM1
    bool values_at_zero = true;   // SM2
    bool partition_shape = true;  // SM3a
    bool crossing_pairs = true;   // SM3b
    bool circular_orders = true;  // SM3c
    std::string detail;
};

// Suitable matching of (F, G1) against (G, G2) via the aligned pairing.
SMResult check_suitable_matching(const PLFamilyView& F, const PLFamilyView& G,
                                 const LargGraph& g1, const LargGraph& g2);

// Target function for the smoothly-dense forth step: continuous t on the
// image side whose position between integer translates of the matched
// images mirrors the position of g_new between translates of the sources.
struct SDTarget {
    PLFunction target = PLFunction::constant(Rational(0));
    // Per refined sub-interval: bounding translates (member index, integer).
    struct Bracket {
        Rational lo, hi;      // sub-interval of the image side
        std::size_t below_member, above_member;
        long long below_shift, above_shift;
    };
    std::vector<Bracket> brackets;
    // Clearance-derived epsilon that keeps any accepted approximation
    // order-preserving (quarter of the minimal gap of the extended system).
    Rational sufficient_eps{0};
};

SDTarget build_sd_target(const PLFunction& g_new, const PLFamilyView& Vn, const PLFamilyView& Wn);

// Target for the infinite-crossing forth step: midpoints of bounding image
// translates off the crossing cells, midpoint-interpolation across them,
// with the acceptance radius delta = min(delta1, delta2, delta3).
struct ICDTarget {
    PLFunction target = PLFunction::constant(Rational(0));
    Rational delta1{0}, delta2{0}, delta3{0}, delta{0};
    // Chosen image crossing cells, aligned with the source's refined cells.
    struct CellChoice {
        Rational src_lo, src_hi;
        Rational dst_lo, dst_hi;
        std::pair<int, int> src_ids;  // crossing pair on the source side
        RunType type;
        bool is_new_member;  // cell where the new function crosses
    };
    std::vector<CellChoice> cells;
};

struct ResolutionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ICDTarget build_icd_target(const PLFunction& f_new, const PLFamilyView& Fn,
                           const PLFamilyView& Gn, const LargGraph* g1 = nullptr,
                           const LargGraph* g2 = nullptr);

enum class MatchMode { sd, icd };

struct EngineOptions {
    MatchMode mode = MatchMode::sd;
    int steps = 10;
    long long budget = 10000;
    double eps0 = 1.0;
    bool favor_identity = false;  // try the same-id candidate first
    int poly_resolution = 4096;
    // ICD mode may re-render brownian families at deeper dyadic depth when
    // a required crossing run is missing; this caps the refinement.
    int max_bm_depth = 14;
};

enum class MatchStatus { accepted = 0, certificate_failure = 1, budget_exhausted = 2 };

struct TranscriptStep {
    bool forth = true;
    int new_id = -1;
    int chosen_id = -1;
    double eps_used = 0.0;
    long long candidates_examined = 0;
    bool cert_step_isometry = false;
    bool cert_order_or_matching = false;
    bool cert_adjacency = false;
    std::string target_note;
};

struct MatchTranscript {
    MatchStatus status = MatchStatus::accepted;
    std::string message;
    std::vector<std::pair<int, int>> pairs;  // (left id, right id), base first
    std::vector<TranscriptStep> steps;
    int completed_steps = 0;
};

// The back-and-forth engine. Alternates forth (next unmatched left id) and
// back (next unmatched right id); each step builds the mode's target,
// screens candidates in id order within the budget, and re-certifies
// step-isometry, order/matching and induced-subgraph isomorphism before
// extending the match.
MatchTranscript back_and_forth(const FunctionFamily& V, const FunctionFamily& W,
                               const LargGraph& g1, const LargGraph& g2,
                               const EngineOptions& opt);

}  // namespace larglab
