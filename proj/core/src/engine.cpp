#include <algorithm>
#include <cmath>
#include <sstream>

#include "larglab/json_io.hpp"
#include "larglab/matcher.hpp"

namespace larglab {

namespace {

struct Side {
    const FunctionFamily* family = nullptr;
    const LargGraph* graph = nullptr;
    PLFamilyView normalized;  // full family, normalized, id order
    std::vector<int> matched_ids;
};

const PLEntry& entry_of(const Side& s, int id) {
    for (const auto& e : s.normalized)
        if (e.id == id) return e;
    throw std::out_of_range("engine: unknown id " + std::to_string(id));
}

PLFamilyView matched_view(const Side& s) {
    PLFamilyView v;
    for (int id : s.matched_ids) v.push_back(entry_of(s, id));
    return v;
}

// ICD structural requirements at the family level: crossing sets disjoint
// across pairs and clear of the boundary. (Tangent runs are tolerated; a
// rendered path can flatten at integer level.)
bool icd_structural_ok(const PLFamilyView& view, std::string& why) {
    try {
        crossing_partition(view);
    } catch (const StructuralError& e) {
        why = e.what();
        return false;
    }
    return true;
}

bool sd_structural_ok(const PLFamilyView& view, std::string& why) {
    TransversalityReport rep = check_transverse(view);
    if (!rep.ok) {
        std::ostringstream os;
        os << "transversality violation: " << violation_kind_name(rep.violations.front().kind);
        os << " ids";
        for (int id : rep.violations.front().ids) os << " " << id;
        why = os.str();
        return false;
    }
    return true;
}

// New-candidate hygiene: its crossings with the matched images must be
// transverse points, interior, and disjoint from each other and from the
// existing system.
bool candidate_geometry_ok(const PLFunction& cand, const PLFamilyView& matched, bool allow_runs) {
    std::vector<Rational> seen;
    for (const auto& e : matched)
        for (const auto& c : crossings(cand, e.fn)) {
            if (!allow_runs && (c.is_run() || c.dir == CrossDir::tangent)) return false;
            if (c.x == Rational(0) || c.x_end == Rational(1)) return false;
            seen.push_back(c.x);
            if (c.is_run()) seen.push_back(c.x_end);
        }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
    // Positions must not collide with the existing pair crossings.
    for (std::size_t i = 0; i < matched.size(); ++i)
        for (std::size_t j = i + 1; j < matched.size(); ++j)
            for (const auto& c : crossings(matched[i].fn, matched[j].fn)) {
                auto it = std::lower_bound(seen.begin(), seen.end(), c.x);
                if (it != seen.end() && *it <= c.x_end) return false;
            }
    return true;
}

bool adjacency_matches(const Side& src, const Side& dst, int new_src, int cand) {
    for (std::size_t k = 0; k < src.matched_ids.size(); ++k) {
        bool left = src.graph->adjacent(new_src, src.matched_ids[k]);
        bool right = dst.graph->adjacent(cand, dst.matched_ids[k]);
        if (left != right) return false;
    }
    return true;
}

bool induced_iso(const Side& a, const Side& b) {
    for (std::size_t i = 0; i < a.matched_ids.size(); ++i)
        for (std::size_t j = i + 1; j < a.matched_ids.size(); ++j)
            if (a.graph->adjacent(a.matched_ids[i], a.matched_ids[j]) !=
                b.graph->adjacent(b.matched_ids[i], b.matched_ids[j]))
                return false;
    return true;
}

}  // namespace

namespace {

// A brownian family can be consistently re-rendered at a deeper depth only
// when it really came from its own spec (dyadic refinement reuses draws).
bool refinable_bm(const FunctionFamily& fam) {
    if (fam.spec.kind != FuncKind::bm) return false;
    return family_hash(sample_family(fam.spec)) == family_hash(fam);
}

}  // namespace

MatchTranscript back_and_forth(const FunctionFamily& V, const FunctionFamily& W,
                               const LargGraph& g1, const LargGraph& g2,
                               const EngineOptions& opt) {
    MatchTranscript out;
    FunctionFamily v_cur = V;
    FunctionFamily w_cur = W;
    Side left{&V, &g1, {}, {}};
    Side right{&W, &g2, {}, {}};
    left.normalized = normalize_to_zero(render_family(v_cur, opt.poly_resolution));
    right.normalized = normalize_to_zero(render_family(w_cur, opt.poly_resolution));

    std::string why;
    bool ok = opt.mode == MatchMode::sd
                  ? sd_structural_ok(left.normalized, why) && sd_structural_ok(right.normalized, why)
                  : icd_structural_ok(left.normalized, why) && icd_structural_ok(right.normalized, why);
    if (!ok) {
        out.status = MatchStatus::certificate_failure;
        out.message = "structural precondition failed: " + why;
        return out;
    }
    if (left.normalized.empty() || right.normalized.empty()) {
        out.status = MatchStatus::certificate_failure;
        out.message = "empty family";
        return out;
    }

    // Base pairing: the normalized zero functions (lowest ids).
    auto lowest_id = [](const PLFamilyView& v) {
        int m = v.front().id;
        for (const auto& e : v) m = std::min(m, e.id);
        return m;
    };
    left.matched_ids.push_back(lowest_id(left.normalized));
    right.matched_ids.push_back(lowest_id(right.normalized));
    out.pairs.emplace_back(left.matched_ids[0], right.matched_ids[0]);

    for (int step = 1; step <= opt.steps; ++step) {
        bool forth = (step % 2) == 1;
        Side& src = forth ? left : right;
        Side& dst = forth ? right : left;

        int new_id = -1;
        for (const auto& e : src.normalized) {
            if (std::find(src.matched_ids.begin(), src.matched_ids.end(), e.id) ==
                src.matched_ids.end() &&
                (new_id < 0 || e.id < new_id))
                new_id = e.id;
        }
        if (new_id < 0) {
            out.message = "source side exhausted after " + std::to_string(step - 1) + " steps";
            break;
        }

        TranscriptStep ts;
        ts.forth = forth;
        ts.new_id = new_id;

        double eps_sched = opt.eps0 / std::pow(2.0, step - 1);
        Rational eps = Rational::snapped(eps_sched);

        PLFamilyView src_view, dst_view;
        PLFunction target = PLFunction::constant(Rational(0));
        Rational radius(0);
        std::ostringstream note;
        bool built = false;
        while (!built) {
            src_view = matched_view(src);
            dst_view = matched_view(dst);
            const PLFunction& new_fn = entry_of(src, new_id).fn;
            try {
                if (opt.mode == MatchMode::sd) {
                    SDTarget t = build_sd_target(new_fn, src_view, dst_view);
                    target = t.target;
                    radius = eps;
                    SteepTarget steep = build_steep_target(target, dst_view, eps);
                    note << "sd target: brackets=" << t.brackets.size()
                         << " sufficient_eps=" << t.sufficient_eps.to_double()
                         << " zeta=" << steep.zeta.to_double() << " eta=" << steep.eta.to_double();
                } else {
                    ICDTarget t = build_icd_target(new_fn, src_view, dst_view);
                    target = t.target;
                    radius = t.delta;
                    note << "icd target: cells=" << t.cells.size()
                         << " delta=" << t.delta.to_double() << " d1=" << t.delta1.to_double()
                         << " d2=" << t.delta2.to_double() << " d3=" << t.delta3.to_double();
                }
                built = true;
            } catch (const ResolutionExhausted& e) {
                // A missing run type may appear at a finer dyadic depth.
                bool can_refine = opt.mode == MatchMode::icd &&
                                  v_cur.spec.bm_depth < opt.max_bm_depth && refinable_bm(v_cur) &&
                                  refinable_bm(w_cur);
                if (!can_refine) {
                    out.status = MatchStatus::budget_exhausted;
                    out.message = std::string("resolution exhausted: ") + e.what();
                    out.steps.push_back(ts);
                    return out;
                }
                v_cur.spec.bm_depth += 1;
                w_cur.spec.bm_depth += 1;
                v_cur = sample_family(v_cur.spec);
                w_cur = sample_family(w_cur.spec);
                left.normalized = normalize_to_zero(render_family(v_cur, opt.poly_resolution));
                right.normalized = normalize_to_zero(render_family(w_cur, opt.poly_resolution));
                note << "refined to depth " << v_cur.spec.bm_depth << "; ";
                std::string why2;
                PLFamilyView lv2 = matched_view(left);
                PLFamilyView rv2 = matched_view(right);
                if (!icd_structural_ok(left.normalized, why2) ||
                    !icd_structural_ok(right.normalized, why2) ||
                    !is_step_isometry(lv2, rv2).ok ||
                    !check_suitable_matching(lv2, rv2, g1, g2).ok) {
                    out.status = MatchStatus::budget_exhausted;
                    out.message = "refinement to depth " +
                                  std::to_string(v_cur.spec.bm_depth) +
                                  " invalidated the matched prefix";
                    out.steps.push_back(ts);
                    return out;
                }
            } catch (const StructuralError& e) {
                out.status = MatchStatus::certificate_failure;
                out.message = std::string("target construction failed: ") + e.what();
                out.steps.push_back(ts);
                return out;
            }
        }
        ts.eps_used = opt.mode == MatchMode::sd ? eps.to_double() : radius.to_double();
        ts.target_note = note.str();

        // Precompute the target's crossings with the matched images for the
        // similarity screen (SD mode).
        std::vector<std::vector<Crossing>> target_cr;
        if (opt.mode == MatchMode::sd) {
            target_cr.reserve(dst_view.size());
            for (const auto& e : dst_view) target_cr.push_back(crossings(target, e.fn));
        }

        // Candidate order: id ascending; optionally the twin id first.
        std::vector<int> order;
        if (opt.favor_identity) order.push_back(new_id);
        for (const auto& e : dst.normalized) order.push_back(e.id);

        auto dst_has = [&](int id) {
            for (const auto& e : dst.normalized)
                if (e.id == id) return true;
            return false;
        };
        int chosen = -1;
        std::vector<int> tried;
        for (int cand : order) {
            if (chosen >= 0 || ts.candidates_examined >= opt.budget) break;
            if (!dst_has(cand)) continue;  // the twin id may not exist over there
            if (std::find(dst.matched_ids.begin(), dst.matched_ids.end(), cand) !=
                dst.matched_ids.end())
                continue;
            if (std::find(tried.begin(), tried.end(), cand) != tried.end()) continue;
            tried.push_back(cand);
            ++ts.candidates_examined;
            const PLFunction& cf = entry_of(dst, cand).fn;

            bool in_radius;
            if (opt.favor_identity && cand == new_id) {
                in_radius = true;  // certificates alone decide the twin
            } else if (opt.mode == MatchMode::sd) {
                in_radius = sup_norm_diff(cf, target) < eps;
                for (std::size_t k = 0; k < dst_view.size() && in_radius; ++k)
                    in_radius = similar_crossings(crossings(cf, dst_view[k].fn), target_cr[k], eps);
            } else {
                in_radius = sup_norm_diff(cf, target) < radius;
            }
            if (!in_radius) continue;
            if (!adjacency_matches(src, dst, new_id, cand)) continue;
            if (!candidate_geometry_ok(cf, dst_view, opt.mode == MatchMode::icd)) continue;

            // Authoritative certificates on the extended pairing.
            PLFamilyView src_ext = src_view;
            src_ext.push_back(entry_of(src, new_id));
            PLFamilyView dst_ext = dst_view;
            dst_ext.push_back(entry_of(dst, cand));
            bool cert_om;
            if (opt.mode == MatchMode::sd) {
                cert_om = check_order_preserving(src_ext, dst_ext).ok;
            } else {
                cert_om = check_suitable_matching(src_ext, dst_ext, *src.graph, *dst.graph).ok;
            }
            if (!cert_om) continue;
            if (!is_step_isometry(src_ext, dst_ext).ok) continue;
            chosen = cand;
        }

        if (chosen < 0) {
            out.status = MatchStatus::budget_exhausted;
            out.message = "no acceptable candidate for step " + std::to_string(step) +
                          " (examined " + std::to_string(ts.candidates_examined) + ")";
            out.steps.push_back(ts);
            return out;
        }

        src.matched_ids.push_back(new_id);
        dst.matched_ids.push_back(chosen);
        ts.chosen_id = chosen;

        // Re-certify the full prefix; a failure here is a bug, not chance.
        PLFamilyView lv = matched_view(left);
        PLFamilyView rv = matched_view(right);
        ts.cert_step_isometry = is_step_isometry(lv, rv).ok;
        ts.cert_order_or_matching = opt.mode == MatchMode::sd
                                        ? check_order_preserving(lv, rv).ok
                                        : check_suitable_matching(lv, rv, g1, g2).ok;
        ts.cert_adjacency = induced_iso(left, right);
        if (!ts.cert_step_isometry || !ts.cert_order_or_matching || !ts.cert_adjacency) {
            out.status = MatchStatus::certificate_failure;
            out.message = "certificate failure after accepting step " + std::to_string(step);
            out.steps.push_back(ts);
            return out;
        }
        out.pairs.emplace_back(forth ? new_id : chosen, forth ? chosen : new_id);
        out.steps.push_back(ts);
        out.completed_steps = step;
    }

    out.status = MatchStatus::accepted;
    return out;
}

}  // namespace larglab
