#include <algorithm>
#include <map>

#include "larglab/matcher.hpp"

namespace larglab {

namespace {

constexpr int kNewId = -1;

struct SrcNewCell {
    Rational lo, hi;
    std::size_t member = 0;         // index into the aligned views
    long long offset = 0;           // f - F_member at the crossings
    bool left_below = true;         // f below F_member+offset on the left flank
    bool right_below = true;
    Rational dst_lo{0}, dst_hi{0};  // placed image cell
};

struct Span {
    Rational src_lo, src_hi;
    Rational dst_lo, dst_hi;
};

// Upper/lower envelope node values of a set of translated members over
// [lo,hi]. Node set: interval ends, member change points, and pairwise
// switch points (translate crossings) inside.
struct EnvelopeNodes {
    std::vector<Rational> xs;
    std::vector<Rational> upper_of_below;  // max over below-candidates
    std::vector<Rational> lower_of_above;  // min over above-candidates
};

EnvelopeNodes envelope_nodes(const PLFamilyView& Gn, const std::vector<long long>& offsets,
                             const Rational& lo, const Rational& hi) {
    std::vector<Rational> xs{lo, hi};
    for (const auto& e : Gn)
        for (const auto& p : e.fn.points())
            if (lo < p.x && p.x < hi) xs.push_back(p.x);
    for (std::size_t a = 0; a < Gn.size(); ++a)
        for (std::size_t b = a + 1; b < Gn.size(); ++b) {
            long long rel = offsets[b] - offsets[a];
            for (const auto& c : crossings(Gn[a].fn, Gn[b].fn)) {
                if (c.offset != rel && c.offset != rel + 1 && c.offset != rel - 1) continue;
                if (lo < c.x && c.x < hi) xs.push_back(c.x);
                if (c.is_run() && lo < c.x_end && c.x_end < hi) xs.push_back(c.x_end);
            }
        }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    EnvelopeNodes out;
    out.xs = std::move(xs);
    for (const auto& x : out.xs) {
        bool first = true;
        Rational below(0), above(0);
        for (std::size_t c = 0; c < Gn.size(); ++c) {
            Rational b = Gn[c].fn.eval(x) + Rational(offsets[c]);
            Rational a = b + Rational(1);
            if (first || b > below) below = b;
            if (first || a < above) above = a;
            first = false;
        }
        out.upper_of_below.push_back(below);
        out.lower_of_above.push_back(above);
    }
    return out;
}

void insert_node(std::map<Rational, Rational>& nodes, const Rational& x, const Rational& y) {
    auto it = nodes.find(x);
    if (it == nodes.end())
        nodes.emplace(x, y);
    else if (it->second != y)
        throw StructuralError("build_icd_target: discontinuity at y=" + x.str());
}

}  // namespace

ICDTarget build_icd_target(const PLFunction& f_new, const PLFamilyView& Fn,
                           const PLFamilyView& Gn, const LargGraph*, const LargGraph*) {
    if (Fn.size() != Gn.size() || Fn.empty())
        throw std::invalid_argument("build_icd_target: aligned nonempty views required");

    CrossingPartition pf = crossing_partition(Fn);
    CrossingPartition pg = crossing_partition(Gn);
    if (pf.cells.size() != pg.cells.size())
        throw StructuralError("build_icd_target: partitions differ in shape");
    std::map<int, std::size_t> posF, posG;
    for (std::size_t i = 0; i < Fn.size(); ++i) {
        posF[Fn[i].id] = i;
        posG[Gn[i].id] = i;
    }
    for (std::size_t c = 0; c < pf.cells.size(); ++c) {
        if (pf.cells[c].closed != pg.cells[c].closed)
            throw StructuralError("build_icd_target: partition cell kinds differ");
        if (pf.cells[c].closed) {
            auto a = std::minmax(posF.at(pf.cells[c].ids.first), posF.at(pf.cells[c].ids.second));
            auto b = std::minmax(posG.at(pg.cells[c].ids.first), posG.at(pg.cells[c].ids.second));
            if (a != b)
                throw StructuralError("build_icd_target: crossing pairs do not correspond");
        }
    }

    PLFamilyView ext = Fn;
    ext.push_back({kNewId, f_new, true});
    CrossingPartition pext = crossing_partition(ext);  // may throw StructuralError

    // Classify the refined closed cells and verify they nest in the base
    // partition.
    struct ExtCell {
        Rational lo, hi;
        bool is_new;
        std::size_t member;    // crossed member (new cells)
        std::size_t open_idx;  // index of the *adjacent left* open ext cell
    };
    std::vector<ExtCell> closed_cells;
    for (std::size_t i = 0; i < pext.cells.size(); ++i) {
        const auto& cell = pext.cells[i];
        if (!cell.closed) continue;
        ExtCell ec{cell.lo, cell.hi, false, 0, i - 1};
        if (cell.ids.first == kNewId || cell.ids.second == kNewId) {
            ec.is_new = true;
            int other = cell.ids.first == kNewId ? cell.ids.second : cell.ids.first;
            ec.member = posF.at(other);
        }
        closed_cells.push_back(ec);
    }

    // Per new cell: single integer offset and the real flank signs against
    // the crossed translate, sampled in the adjacent (crossing-free) open
    // cells of the refined partition.
    std::vector<SrcNewCell> new_cells;
    for (std::size_t i = 0; i < closed_cells.size(); ++i) {
        const auto& ec = closed_cells[i];
        if (!ec.is_new) continue;
        SrcNewCell nc;
        nc.lo = ec.lo;
        nc.hi = ec.hi;
        nc.member = ec.member;
        bool have_offset = false;
        for (const auto& c : crossings(f_new, Fn[ec.member].fn)) {
            if (c.x_end < ec.lo || c.x > ec.hi) continue;
            if (!have_offset) {
                nc.offset = c.offset;
                have_offset = true;
            } else if (c.offset != nc.offset) {
                throw ResolutionExhausted(
                    "build_icd_target: mixed-offset crossing cell at [" + ec.lo.str() + "," +
                    ec.hi.str() + "] against member " + std::to_string(Fn[ec.member].id));
            }
        }
        if (!have_offset) throw std::logic_error("build_icd_target: empty new cell");
        const auto& left_open = pext.cells[ec.open_idx];
        const auto& right_open = pext.cells[ec.open_idx + 2];
        Rational lmid = (left_open.lo + left_open.hi) / Rational(2);
        Rational rmid = (right_open.lo + right_open.hi) / Rational(2);
        Rational off(nc.offset);
        nc.left_below = f_new.eval(lmid) < Fn[ec.member].fn.eval(lmid) + off;
        nc.right_below = f_new.eval(rmid) < Fn[ec.member].fn.eval(rmid) + off;
        new_cells.push_back(nc);
    }

    // Place the image cells. Walk the base partition region by region; each
    // region places the new cells that fall inside it.
    std::size_t nc_at = 0;
    ICDTarget out;
    for (std::size_t region = 0; region < pf.cells.size(); ++region) {
        const auto& src_region = pf.cells[region];
        const auto& dst_region = pg.cells[region];
        std::vector<std::size_t> mine;
        while (nc_at + mine.size() < new_cells.size()) {
            const auto& nc = new_cells[nc_at + mine.size()];
            if (nc.lo >= src_region.lo && nc.hi <= src_region.hi)
                mine.push_back(nc_at + mine.size());
            else
                break;
        }
        if (mine.empty()) continue;

        if (!src_region.closed) {
            // Crossing-free region: equal division of the image region into
            // 2M+1 parts, cells at the odd parts.
            std::size_t m = mine.size();
            Rational w = (dst_region.hi - dst_region.lo) / Rational(2 * m + 1);
            for (std::size_t k = 0; k < m; ++k) {
                new_cells[mine[k]].dst_lo = dst_region.lo + w * Rational(2 * k + 1);
                new_cells[mine[k]].dst_hi = dst_region.lo + w * Rational(2 * k + 2);
            }
        } else {
            // Inside a crossing cell of pair (l,m). The source blocks
            // (maximal run groups of the pair, split by the new function's
            // cells) each carry one crossing level; the image runs are
            // consumed into blocks of matching level, and each group of new
            // cells is dropped into a crossing-free gap between blocks whose
            // remainder order matches the source gap.
            std::size_t lpos = posF.at(src_region.ids.first);
            std::size_t mpos = posF.at(src_region.ids.second);
            const PLFunction& fl = Fn[lpos].fn;
            const PLFunction& fm = Fn[mpos].fn;

            // Source blocks with their levels, and the new cells per gap.
            std::vector<long long> block_level;
            std::vector<std::vector<std::size_t>> gap_cells;
            std::vector<bool> gap_below;
            std::vector<long long> gap_floor;
            {
                auto pair_cr = crossings(fl, fm);
                std::vector<std::size_t> current;
                for (const auto& ec : closed_cells) {
                    if (ec.hi < src_region.lo || ec.lo > src_region.hi) continue;
                    if (ec.is_new) {
                        for (std::size_t idx : mine)
                            if (new_cells[idx].lo == ec.lo) current.push_back(idx);
                        continue;
                    }
                    // A family block: its crossings all share one level.
                    long long level = 0;
                    bool have = false;
                    for (const auto& c : pair_cr) {
                        if (c.x_end < ec.lo || c.x > ec.hi) continue;
                        if (!have) {
                            level = c.offset;
                            have = true;
                        } else if (c.offset != level) {
                            throw StructuralError(
                                "build_icd_target: mixed levels inside a family block");
                        }
                    }
                    if (!have)
                        throw std::logic_error("build_icd_target: family block without crossings");
                    if (!block_level.empty()) {
                        gap_cells.push_back(current);
                        const auto& open_before = pext.cells[ec.open_idx];
                        Rational mid = (open_before.lo + open_before.hi) / Rational(2);
                        gap_below.push_back(fractional_order(fl, fm, mid) == Ord::less);
                        gap_floor.push_back((fl.eval(mid) - fm.eval(mid)).floor_ll());
                    }
                    current.clear();
                    block_level.push_back(level);
                }
                if (!current.empty())
                    throw StructuralError("build_icd_target: new cell after the last family block");
            }

            auto runs = crossing_runs(PLEntry{Gn[lpos].id, Gn[lpos].fn, true},
                                      PLEntry{Gn[mpos].id, Gn[mpos].fn, true});
            std::erase_if(runs, [&](const CrossingRunOut& r) {
                return r.hi < dst_region.lo || r.lo > dst_region.hi;
            });
            if (runs.empty() || runs.front().lo != dst_region.lo ||
                runs.back().hi != dst_region.hi)
                throw StructuralError("build_icd_target: image runs do not frame the cell");

            const PLFunction& gl = Gn[lpos].fn;
            const PLFunction& gm = Gn[mpos].fn;
            // Walk the image runs: block k consumes runs at its own crossing
            // level; the k-th placement goes into the first gap after at
            // least one consumed run whose remainder order and floor state
            // both match the source gap.
            std::size_t j = 0;
            std::size_t blocks = block_level.size();
            for (std::size_t k = 0; k + 1 < blocks; ++k) {
                bool next_level_differs = block_level[k + 1] != block_level[k];
                std::size_t consumed = 0;
                std::size_t split = runs.size();  // gap index: between run t-1 and t
                while (j < runs.size() && runs[j].offset == block_level[k]) {
                    ++j;
                    ++consumed;
                    if (j >= runs.size()) break;
                    Rational gmid = (runs[j - 1].hi + runs[j].lo) / Rational(2);
                    bool sym_ok =
                        (fractional_order(gl, gm, gmid) == Ord::less) == gap_below[k];
                    bool floor_ok =
                        (gl.eval(gmid) - gm.eval(gmid)).floor_ll() == gap_floor[k];
                    if (sym_ok && floor_ok) {
                        if (next_level_differs) {
                            // must exhaust this level first
                            if (runs[j].offset != block_level[k]) {
                                split = j;
                                break;
                            }
                        } else {
                            split = j;
                            break;
                        }
                    }
                }
                if (consumed == 0 || split >= runs.size())
                    throw ResolutionExhausted(
                        "build_icd_target: no image gap of matching level/order for block " +
                        std::to_string(k + 1) + " in cell [" + dst_region.lo.str() + "," +
                        dst_region.hi.str() + "]");
                Rational u0 = runs[split - 1].hi;
                Rational v0 = runs[split].lo;
                std::size_t m = gap_cells[k].size();
                Rational w = (v0 - u0) / Rational(2 * m + 1);
                for (std::size_t i = 0; i < m; ++i) {
                    new_cells[gap_cells[k][i]].dst_lo = u0 + w * Rational(2 * i + 1);
                    new_cells[gap_cells[k][i]].dst_hi = u0 + w * Rational(2 * i + 2);
                }
                j = split;
            }
            // The final block takes everything left, all at its level.
            for (; j < runs.size(); ++j)
                if (runs[j].offset != block_level.back())
                    throw ResolutionExhausted(
                        "build_icd_target: trailing image runs at the wrong level in cell [" +
                        dst_region.lo.str() + "," + dst_region.hi.str() + "]");
        }
        nc_at += mine.size();
    }
    if (nc_at != new_cells.size())
        throw std::logic_error("build_icd_target: cells not exhausted by regions");

    // Spans between consecutive image cells (plus leading/trailing), with
    // the matching source spans for the translate offsets.
    std::vector<Span> spans;
    {
        Rational slo(0), dlo(0);
        for (const auto& nc : new_cells) {
            spans.push_back({slo, nc.lo, dlo, nc.dst_lo});
            slo = nc.hi;
            dlo = nc.dst_hi;
        }
        spans.push_back({slo, Rational(1), dlo, Rational(1)});
    }

    std::map<Rational, Rational> nodes;
    for (const auto& sp : spans) {
        Rational mid = (sp.src_lo + sp.src_hi) / Rational(2);
        std::vector<long long> offsets(Fn.size());
        for (std::size_t c = 0; c < Fn.size(); ++c)
            offsets[c] = (f_new.eval(mid) - Fn[c].fn.eval(mid)).floor_ll();
        EnvelopeNodes env = envelope_nodes(Gn, offsets, sp.dst_lo, sp.dst_hi);
        for (std::size_t i = 0; i < env.xs.size(); ++i) {
            if (!(env.upper_of_below[i] < env.lower_of_above[i]))
                throw StructuralError("build_icd_target: degenerate translate tube on span [" +
                                      sp.dst_lo.str() + "," + sp.dst_hi.str() + "] at y=" +
                                      env.xs[i].str() + " (src [" + sp.src_lo.str() + "," +
                                      sp.src_hi.str() + "])");
            insert_node(nodes, env.xs[i],
                        (env.upper_of_below[i] + env.lower_of_above[i]) / Rational(2));
        }
    }

    // Blend across each image cell between the midpoints below and above
    // the crossed translate.
    for (auto& nc : new_cells) {
        Rational smid = (nc.lo + nc.hi) / Rational(2);
        Rational fm = f_new.eval(smid);
        Rational jt = Fn[nc.member].fn.eval(smid) + Rational(nc.offset);
        // Tightest translates below and above both f and the crossed
        // translate. The crossed member contributes its own neighbours at
        // offsets t-1 and t+1; adjacency keeps the blend from brushing any
        // other translate.
        std::size_t p = nc.member, q = nc.member;
        long long r = nc.offset - 1, s = nc.offset + 1;
        Rational bv = jt - Rational(1), av = jt + Rational(1);
        for (std::size_t c = 0; c < Fn.size(); ++c) {
            if (c == nc.member) continue;
            Rational base = Fn[c].fn.eval(smid);
            long long n = (fm - base).floor_ll();
            Rational below = base + Rational(n);
            Rational above = below + Rational(1);
            if (below > bv && below < min(fm, jt)) { bv = below; p = c; r = n; }
            if (above < av && above > max(fm, jt)) { av = above; q = c; s = n + 1; }
        }
        if (!(bv < min(fm, jt) && av > max(fm, jt)))
            throw StructuralError("build_icd_target: walls do not bracket the crossing cell");

        const PLFunction& gp = Gn[p].fn;
        const PLFunction& gq = Gn[q].fn;
        const PLFunction& gj = Gn[nc.member].fn;
        auto m_below = [&](const Rational& y) {
            return (gp.eval(y) + Rational(r) + gj.eval(y) + Rational(nc.offset)) / Rational(2);
        };
        auto m_above = [&](const Rational& y) {
            return (gj.eval(y) + Rational(nc.offset) + gq.eval(y) + Rational(s)) / Rational(2);
        };

        std::vector<Rational> ys{nc.dst_lo, nc.dst_hi};
        Rational gamma = (nc.dst_lo + nc.dst_hi) / Rational(2);
        bool same_side = nc.left_below == nc.right_below;
        if (same_side) ys.push_back(gamma);
        for (const PLFunction* fn : {&gp, &gq, &gj})
            for (const auto& pt : fn->points())
                if (nc.dst_lo < pt.x && pt.x < nc.dst_hi) ys.push_back(pt.x);
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

        // lambda: 0 at the end(s) where the source sits on its flank side,
        // 1 where it has crossed over.
        for (const auto& y : ys) {
            Rational lam(0);
            if (!same_side) {
                lam = (y - nc.dst_lo) / (nc.dst_hi - nc.dst_lo);
            } else {
                lam = y <= gamma ? (y - nc.dst_lo) / (gamma - nc.dst_lo)
                                 : (nc.dst_hi - y) / (nc.dst_hi - gamma);
            }
            Rational lo_v = m_below(y), hi_v = m_above(y);
            Rational value = nc.left_below ? lo_v + lam * (hi_v - lo_v)   // <> and <<
                                           : hi_v + lam * (lo_v - hi_v);  // >< and >>
            insert_node(nodes, y, value);
        }

        out.cells.push_back({nc.lo, nc.hi, nc.dst_lo, nc.dst_hi,
                             {kNewId, Fn[nc.member].id},
                             nc.left_below ? (nc.right_below ? RunType::below_below
                                                             : RunType::below_above)
                                           : (nc.right_below ? RunType::above_below
                                                             : RunType::above_above),
                             true});
    }

    std::vector<ChangePoint> pts;
    pts.reserve(nodes.size());
    for (const auto& [x, y] : nodes) pts.push_back({x, y});
    out.target = PLFunction(std::move(pts));

    // delta1: integer clearance against every member outside the epsilon
    // neighbourhoods of the crossing cells.
    Rational eps_n(0);
    if (!new_cells.empty()) {
        bool first = true;
        Rational m(0);
        for (std::size_t i = 0; i < new_cells.size(); ++i) {
            Rational gap_before = i == 0 ? new_cells[i].dst_lo
                                         : new_cells[i].dst_lo - new_cells[i - 1].dst_hi;
            if (first || gap_before < m) m = gap_before;
            first = false;
        }
        Rational tail = Rational(1) - new_cells.back().dst_hi;
        m = min(m, tail);
        eps_n = m / Rational(2);
        if (!(eps_n > Rational(0)))
            throw StructuralError("build_icd_target: crossing cells touch the boundary");
    }
    Rational d1(1);
    {
        Rational cursor(0);
        auto account = [&](const Rational& a, const Rational& b) {
            if (!(a < b)) return;
            for (const auto& e : Gn)
                d1 = min(d1, min_dist_to_integers(pl_difference(out.target, e.fn), a, b));
        };
        for (const auto& nc : new_cells) {
            account(cursor, nc.dst_lo - eps_n);
            cursor = nc.dst_hi + eps_n;
        }
        account(cursor, Rational(1));
    }
    out.delta1 = d1;

    // delta2: the worst overshoot of the target across its crossed
    // translates.
    Rational d2(1);
    bool have_d2 = false;
    for (const auto& nc : new_cells) {
        PLFunction diff = pl_difference(out.target, Gn[nc.member].fn);
        Rational up(0), down(0);
        Rational off(nc.offset);
        std::vector<Rational> xs{nc.dst_lo, nc.dst_hi};
        for (const auto& p : diff.points())
            if (nc.dst_lo < p.x && p.x < nc.dst_hi) xs.push_back(p.x);
        for (const auto& x : xs) {
            Rational v = diff.eval(x) - off;
            up = max(up, v);
            down = max(down, -v);
        }
        if (!(up > Rational(0) && down > Rational(0)))
            throw StructuralError("build_icd_target: cell blend does not cross its translate");
        d2 = have_d2 ? min(d2, min(up, down)) : min(up, down);
        have_d2 = true;
    }
    out.delta2 = have_d2 ? d2 : Rational(1);

    // delta3: clearance of the floors and order of the values at 0.
    Rational d3(1);
    for (std::size_t c = 0; c < Fn.size(); ++c) {
        Rational df = f_new.value_at_zero() - Fn[c].fn.value_at_zero();
        Rational dg = out.target.value_at_zero() - Gn[c].fn.value_at_zero();
        if (df.abs().floor_ll() != dg.abs().floor_ll() ||
            (df < Rational(0)) != (dg < Rational(0)))
            throw StructuralError("build_icd_target: values at 0 do not mirror the source");
        d3 = min(d3, dg.dist_to_integer());
        d3 = min(d3, dg.abs());
    }
    out.delta3 = d3;
    out.delta = min(out.delta1, min(out.delta2, out.delta3));
    return out;
}

}  // namespace larglab
