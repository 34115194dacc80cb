#include "larglab/structure.hpp"

#include <algorithm>
#include <map>

namespace larglab {

PLFamilyView render_family(const FunctionFamily& fam, int poly_resolution) {
    PLFamilyView view;
    view.reserve(fam.functions.size());
    for (const auto& f : fam.functions)
        view.push_back({f.id, render_pl(f, poly_resolution), f.pl_exact()});
    return view;
}

PLFamilyView normalize_to_zero(const PLFamilyView& view) {
    if (view.empty()) return {};
    std::size_t base = 0;
    for (std::size_t i = 1; i < view.size(); ++i)
        if (view[i].id < view[base].id) base = i;
    PLFamilyView out;
    out.reserve(view.size());
    for (const auto& e : view)
        out.push_back({e.id, pl_difference(e.fn, view[base].fn), e.exact});
    return out;
}

const char* violation_kind_name(ViolationKind k) {
    switch (k) {
        case ViolationKind::shared_crossing: return "shared_crossing";
        case ViolationKind::boundary_crossing: return "boundary_crossing";
        case ViolationKind::extremum_crossing: return "extremum_crossing";
        case ViolationKind::infinite_crossing: return "infinite_crossing";
        default: return "shared_slope";
    }
}

const char* run_type_name(RunType t) {
    switch (t) {
        case RunType::below_below: return "<<";
        case RunType::below_above: return "<>";
        case RunType::above_below: return "><";
        default: return ">>";
    }
}

std::vector<FamilyCrossing> all_crossings(const PLFamilyView& view) {
    std::vector<FamilyCrossing> out;
    for (std::size_t i = 0; i < view.size(); ++i)
        for (std::size_t j = i + 1; j < view.size(); ++j)
            for (const auto& c : crossings(view[i].fn, view[j].fn))
                out.push_back({{view[i].id, view[j].id}, c});
    std::sort(out.begin(), out.end(), [](const FamilyCrossing& a, const FamilyCrossing& b) {
        if (a.c.x != b.c.x) return a.c.x < b.c.x;
        return a.ids < b.ids;
    });
    return out;
}

TransversalityReport check_transverse(const PLFamilyView& view) {
    TransversalityReport rep;
    for (const auto& e : view) rep.at_resolution |= !e.exact;

    // Pairwise conditions: finite crossing sets (no runs), no boundary or
    // extremum crossings.
    std::map<Rational, std::vector<std::pair<int, int>>> by_position;
    for (std::size_t i = 0; i < view.size(); ++i) {
        for (std::size_t j = i + 1; j < view.size(); ++j) {
            auto pair_ids = std::make_pair(view[i].id, view[j].id);
            for (const auto& c : crossings(view[i].fn, view[j].fn)) {
                if (c.is_run()) {
                    rep.violations.push_back(
                        {ViolationKind::infinite_crossing, {pair_ids.first, pair_ids.second}, c.x});
                    continue;
                }
                if (c.x == Rational(0) || c.x == Rational(1)) {
                    rep.violations.push_back(
                        {ViolationKind::boundary_crossing, {pair_ids.first, pair_ids.second}, c.x});
                } else if (c.dir == CrossDir::tangent) {
                    rep.violations.push_back(
                        {ViolationKind::extremum_crossing, {pair_ids.first, pair_ids.second}, c.x});
                }
                by_position[c.x].push_back(pair_ids);
            }
            // Shared slope sets are advisory: a.s. excluded by the measure,
            // and the cause of any infinite crossing set.
            std::vector<Rational> si = view[i].fn.slope_set();
            std::vector<Rational> sj = view[j].fn.slope_set();
            std::vector<Rational> inter;
            std::set_intersection(si.begin(), si.end(), sj.begin(), sj.end(),
                                  std::back_inserter(inter));
            if (!inter.empty())
                rep.slope_advisories.push_back(
                    {ViolationKind::shared_slope, {pair_ids.first, pair_ids.second}, inter.front()});
        }
    }
    for (const auto& [x, pairs] : by_position) {
        if (pairs.size() < 2) continue;
        std::vector<int> ids;
        for (const auto& pr : pairs) {
            ids.push_back(pr.first);
            ids.push_back(pr.second);
        }
        rep.violations.push_back({ViolationKind::shared_crossing, ids, x});
    }
    rep.ok = rep.violations.empty();
    return rep;
}

namespace {

// Flank evaluation point strictly left (or right) of x, past no event of
// `events` (sorted positions). Returns nullopt at the domain boundary.
std::optional<Rational> flank_point(const std::vector<Rational>& events, const Rational& x,
                                    bool left) {
    if (left) {
        if (x == Rational(0)) return std::nullopt;
        Rational prev(0);
        for (const auto& e : events) {
            if (e >= x) break;
            prev = max(prev, e);
        }
        return (prev + x) / Rational(2);
    }
    if (x == Rational(1)) return std::nullopt;
    Rational next(1);
    for (auto it = events.rbegin(); it != events.rend(); ++it) {
        if (*it <= x) break;
        next = min(next, *it);
    }
    return (x + next) / Rational(2);
}

std::vector<Rational> pair_event_positions(const PLFunction& f, const PLFunction& g) {
    // Positions where the fractional order of (f,g) can change: their own
    // crossings plus integer passages of either function.
    std::vector<Rational> ev;
    PLFunction zero = PLFunction::constant(Rational(0));
    for (const auto& c : crossings(f, g)) {
        ev.push_back(c.x);
        if (c.is_run()) ev.push_back(c.x_end);
    }
    for (const auto& c : crossings(f, zero)) {
        ev.push_back(c.x);
        if (c.is_run()) ev.push_back(c.x_end);
    }
    for (const auto& c : crossings(g, zero)) {
        ev.push_back(c.x);
        if (c.is_run()) ev.push_back(c.x_end);
    }
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    return ev;
}

}  // namespace

std::vector<CrossingRunOut> crossing_runs(const PLEntry& fe, const PLEntry& ge) {
    const PLFunction& f = fe.fn;
    const PLFunction& g = ge.fn;
    auto cs = crossings(f, g);
    std::vector<CrossingRunOut> out;
    if (cs.empty()) return out;

    // Merge touching crossings into maximal clusters.
    struct Cluster {
        Rational lo, hi;
        long long offset;
    };
    std::vector<Cluster> clusters;
    for (const auto& c : cs) {
        if (!clusters.empty() && clusters.back().hi == c.x)
            clusters.back().hi = max(clusters.back().hi, c.x_end);
        else
            clusters.push_back({c.x, c.x_end, c.offset});
    }

    std::vector<Rational> events = pair_event_positions(f, g);
    for (const auto& [lo, hi, offset] : clusters) {
        auto lp = flank_point(events, lo, true);
        auto rp = flank_point(events, hi, false);
        if (!lp || !rp)
            throw StructuralError("crossing_runs: cluster touches the domain boundary");
        bool left_below = fractional_order(f, g, *lp) == Ord::less;
        bool right_below = fractional_order(f, g, *rp) == Ord::less;
        RunType t = left_below ? (right_below ? RunType::below_below : RunType::below_above)
                               : (right_below ? RunType::above_below : RunType::above_above);
        out.push_back({lo, hi, {fe.id, ge.id}, t, offset});
    }
    return out;
}

std::size_t CrossingPartition::closed_count() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.closed;
    return n;
}

CrossingPartition crossing_partition(const PLFamilyView& view) {
    // Crossing clusters (points and runs) per pair, as intervals tagged by
    // pair. Preconditions: no shared crossings across distinct pairs, none
    // at 0 or 1 (the scan needs them to order cleanly).
    struct Item {
        Rational lo, hi;
        std::pair<int, int> ids;
    };
    std::vector<Item> items;
    for (std::size_t i = 0; i < view.size(); ++i)
        for (std::size_t j = i + 1; j < view.size(); ++j)
            for (const auto& c : crossings(view[i].fn, view[j].fn))
                items.push_back({c.x, c.x_end, {view[i].id, view[j].id}});
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.hi < b.hi;
    });
    if (!items.empty()) {
        Rational reach = items[0].hi;
        std::pair<int, int> reach_ids = items[0].ids;
        for (std::size_t i = 1; i < items.size(); ++i) {
            if (items[i].lo <= reach && items[i].ids != reach_ids)
                throw StructuralError("crossing_partition: shared crossing between distinct pairs");
            if (items[i].hi > reach) {
                reach = items[i].hi;
                reach_ids = items[i].ids;
            }
        }
    }
    for (const auto& it : items)
        if (it.lo == Rational(0) || it.hi == Rational(1))
            throw StructuralError("crossing_partition: crossing at the domain boundary");

    CrossingPartition part;
    if (items.empty()) {
        part.cells.push_back({Rational(0), Rational(1), false, {-1, -1}});
        return part;
    }

    // The iterative scan: a_{n+1} is the first crossing position past a_n
    // owned by a pair other than the current one; b_n is the last crossing
    // of the current pair before a_{n+1}.
    std::vector<std::pair<Rational, std::pair<int, int>>> bounds;  // (a_i, pair_i)
    std::size_t k = 0;
    Rational a = items[0].lo;
    std::pair<int, int> cur = items[0].ids;
    bounds.emplace_back(a, cur);
    while (true) {
        std::size_t next = k + 1;
        while (next < items.size() && items[next].ids == cur) ++next;
        if (next == items.size()) break;
        k = next;
        a = items[k].lo;
        cur = items[k].ids;
        bounds.emplace_back(a, cur);
    }
    // b_i = max crossing end of pair_i in [a_i, a_{i+1}).
    std::vector<Rational> bs;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        Rational lo = bounds[i].first;
        std::optional<Rational> hi_limit;
        if (i + 1 < bounds.size()) hi_limit = bounds[i + 1].first;
        Rational b = lo;
        for (const auto& it : items) {
            if (it.ids != bounds[i].second) continue;
            if (it.lo < lo) continue;
            if (hi_limit && it.lo >= *hi_limit) continue;
            b = max(b, it.hi);
        }
        bs.push_back(b);
    }

    Rational prev(0);
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        part.cells.push_back({prev, bounds[i].first, false, {-1, -1}});
        part.cells.push_back({bounds[i].first, bs[i], true, bounds[i].second});
        prev = bs[i];
    }
    part.cells.push_back({prev, Rational(1), false, {-1, -1}});
    return part;
}

int circular_orientation(const Rational& a, const Rational& b, const Rational& c) {
    Rational u = (b - a).frac();
    Rational v = (c - a).frac();
    if (u == Rational(0) || v == Rational(0) || u == v) return 0;
    return u < v ? 1 : -1;
}

bool same_circular_order(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("same_circular_order: length mismatch");
    std::size_t n = xs.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                if (circular_orientation(xs[a], xs[b], xs[c]) !=
                    circular_orientation(ys[a], ys[b], ys[c]))
                    return false;
    return true;
}

bool similar_crossings(const std::vector<Crossing>& a, const std::vector<Crossing>& b,
                       const Rational& eps) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if ((a[i].midpoint() - b[i].midpoint()).abs() >= eps) return false;
    return true;
}

ICProfile ic_profile(const Func& f, const Func& g, const std::vector<int>& depths) {
    if (f.id == g.id) throw std::invalid_argument("ic_profile: ids must be distinct");
    if (depths.empty()) throw std::invalid_argument("ic_profile: depths must be nonempty");
    for (std::size_t i = 1; i < depths.size(); ++i)
        if (depths[i] <= depths[i - 1])
            throw std::invalid_argument("ic_profile: depths must strictly increase");

    ICProfile prof;
    prof.ids = {f.id, g.id};
    if (f.kind() == FuncKind::bm && g.kind() == FuncKind::bm) {
        int need = depths.back();
        if (f.as_bm().depth() < need || g.as_bm().depth() < need)
            throw std::invalid_argument("ic_profile: paths shallower than requested depth");
        for (int d : depths) {
            int m = 1 << d;
            auto cs = crossings(f.as_bm().to_pl(m), g.as_bm().to_pl(m));
            prof.counts.emplace_back(d, static_cast<long long>(cs.size()));
        }
        return prof;
    }
    // pl and poly pairs have finite, resolution-independent crossing sets;
    // report that count at every depth.
    long long count = 0;
    if (f.kind() == FuncKind::poly && g.kind() == FuncKind::poly) {
        count = certified_integer_crossings(f.as_poly(), g.as_poly());
    } else if (f.pl_exact() && g.pl_exact()) {
        count = static_cast<long long>(crossings(render_pl(f), render_pl(g)).size());
    } else {
        throw std::invalid_argument("ic_profile: mixed pl/poly pairs are not supported");
    }
    for (int d : depths) prof.counts.emplace_back(d, count);
    return prof;
}

}  // namespace larglab
