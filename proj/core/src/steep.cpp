#include <algorithm>
#include <map>

#include "larglab/structure.hpp"

namespace larglab {

namespace {

struct CrossingSite {
    Rational t;
    std::size_t member;  // index into F
    long long offset;
    bool up;
    Rational delta{0};
};

}  // namespace

SteepTarget build_steep_target(const PLFunction& f, const PLFamilyView& F, const Rational& eps) {
    if (!(eps > Rational(0))) throw std::invalid_argument("build_steep_target: eps must be > 0");

    // Collect the crossings of f with every member; the construction needs
    // them transverse, interior, and distinct across members.
    std::vector<CrossingSite> sites;
    std::vector<std::vector<Crossing>> per_member(F.size());
    for (std::size_t j = 0; j < F.size(); ++j) {
        per_member[j] = crossings(f, F[j].fn);
        for (const auto& c : per_member[j]) {
            if (c.is_run() || c.dir == CrossDir::tangent)
                throw StructuralError("build_steep_target: tangent crossing with member " +
                                      std::to_string(F[j].id));
            if (c.x == Rational(0) || c.x == Rational(1))
                throw StructuralError("build_steep_target: boundary crossing with member " +
                                      std::to_string(F[j].id));
            sites.push_back({c.x, j, c.offset, c.dir == CrossDir::up});
        }
    }
    std::sort(sites.begin(), sites.end(),
              [](const CrossingSite& a, const CrossingSite& b) { return a.t < b.t; });
    for (std::size_t i = 0; i + 1 < sites.size(); ++i)
        if (sites[i].t == sites[i + 1].t)
            throw StructuralError("build_steep_target: shared crossing at x=" + sites[i].t.str());

    Rational K(0);
    for (const auto& e : F) K = max(K, e.fn.max_abs_slope());
    Rational steep = K + Rational(2);

    SteepTarget out;
    out.steep_slope = steep;

    if (sites.empty()) {
        // Nothing to re-cross: the target is f itself and zeta is the
        // integer clearance of f against the whole family.
        out.target = f;
        out.eta = Rational(1, 2);
        Rational zr(2);
        for (const auto& e : F)
            zr = min(zr, min_dist_to_integers(pl_difference(f, e.fn), Rational(0), Rational(1)));
        out.zeta = min(zr / Rational(2), Rational(63, 64));
        return out;
    }

    // Isolation radii: delta < eps, a quarter of the gap to the nearest
    // crossing of any pair, and clear of the boundary.
    for (std::size_t i = 0; i < sites.size(); ++i) {
        Rational gap = min(sites[i].t, Rational(1) - sites[i].t) * Rational(2);
        if (i > 0) gap = min(gap, sites[i].t - sites[i - 1].t);
        if (i + 1 < sites.size()) gap = min(gap, sites[i + 1].t - sites[i].t);
        sites[i].delta = min(eps / Rational(2), gap / Rational(4));
    }

    // eta: half the worst integer clearance of f against the *other*
    // members over the isolation intervals.
    bool have_eta = false;
    Rational eta(1, 2);
    for (const auto& s : sites) {
        for (std::size_t i = 0; i < F.size(); ++i) {
            if (i == s.member) continue;
            Rational d = min_dist_to_integers(pl_difference(f, F[i].fn), s.t - s.delta,
                                              s.t + s.delta);
            if (d == Rational(0))
                throw StructuralError("build_steep_target: member " + std::to_string(F[i].id) +
                                      " crosses inside an isolation interval");
            eta = have_eta ? min(eta, d / Rational(2)) : d / Rational(2);
            have_eta = true;
        }
    }
    out.eta = eta;

    // Build the steep piece on each isolation interval. delta halves until
    // the inner-clearance and sign conditions verify exactly.
    std::map<Rational, Rational> node_map;  // x -> y of the target
    for (const auto& p : f.points()) node_map[p.x] = p.y;

    for (auto& site : sites) {
        const PLFunction& fj = F[site.member].fn;
        Rational fy = f.eval(site.t);
        Rational sgn = site.up ? Rational(1) : Rational(-1);
        Rational off(site.offset);
        // The steep line through the crossing: its difference against the
        // crossed member has slope at least 2 in magnitude, so its sign is
        // pinned on both sides of t. Connectors taper between f and the
        // line; both have the correct sign, hence so does the taper.
        auto steep_line = [&](const Rational& x) { return fy + sgn * steep * (x - site.t); };

        Rational delta = site.delta;
        bool built = false;
        for (int iter = 0; iter < 80 && !built; ++iter, delta /= Rational(2)) {
            Rational nu = delta / Rational(2);
            Rational lo = site.t - delta, hi = site.t + delta;

            std::vector<Rational> xs{lo, site.t - nu, site.t, site.t + nu, hi};
            for (const auto& p : f.points())
                if (lo < p.x && p.x < hi) xs.push_back(p.x);
            for (const auto& p : fj.points())
                if (lo < p.x && p.x < hi) xs.push_back(p.x);
            std::sort(xs.begin(), xs.end());
            xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

            auto piece_eval = [&](const Rational& x) {
                Rational dist = (x - site.t).abs();
                if (dist <= nu) return steep_line(x);
                Rational lambda = (dist - nu) / (delta - nu);  // 0 at N edge, 1 at I edge
                return lambda * f.eval(x) + (Rational(1) - lambda) * steep_line(x);
            };

            bool ok = true;
            for (const auto& x : xs) {
                Rational ty = piece_eval(x);
                if (have_eta && (ty - f.eval(x)).abs() >= eta) { ok = false; break; }
                Rational d = ty - fj.eval(x) - off;
                if (d.abs() >= Rational(1)) { ok = false; break; }
                if (x < site.t && !(site.up ? d < Rational(0) : d > Rational(0))) { ok = false; break; }
                if (x > site.t && !(site.up ? d > Rational(0) : d < Rational(0))) { ok = false; break; }
                if (x == site.t && d != Rational(0)) { ok = false; break; }
            }
            if (!ok) continue;
            for (const auto& p : f.points())
                if (lo < p.x && p.x < hi) node_map.erase(p.x);
            for (const auto& x : xs) node_map[x] = piece_eval(x);
            out.neighborhoods.emplace_back(site.t - nu, site.t + nu);
            out.deltas.push_back(delta);
            built = true;
        }
        if (!built) throw std::logic_error("build_steep_target: refinement did not converge");
    }

    std::vector<ChangePoint> pts;
    for (const auto& [x, y] : node_map) pts.push_back({x, y});
    out.target = PLFunction(std::move(pts));

    // zeta: half the integer clearance of the target against every member
    // outside the union of the steep neighbourhoods.
    std::sort(out.neighborhoods.begin(), out.neighborhoods.end());
    Rational zr(2);
    Rational cursor(0);
    auto account_gap = [&](const Rational& a, const Rational& b) {
        if (!(a < b)) return;
        for (const auto& e : F)
            zr = min(zr, min_dist_to_integers(pl_difference(out.target, e.fn), a, b));
    };
    for (const auto& [nlo, nhi] : out.neighborhoods) {
        account_gap(cursor, nlo);
        cursor = nhi;
    }
    account_gap(cursor, Rational(1));
    if (zr == Rational(0))
        throw std::logic_error("build_steep_target: target crosses outside its neighbourhoods");
    out.zeta = min(zr / Rational(2), Rational(63, 64));
    return out;
}

ApproxSearch find_smooth_approx(const PLFunction& f, const PLFamilyView& F, const Rational& eps,
                                const PLFamilyView& stream, long long budget,
                                const LargGraph* graph, const std::set<int>* adjacency_targets) {
    if (budget <= 0) throw std::invalid_argument("find_smooth_approx: budget must be > 0");
    if (!(eps > Rational(0))) throw std::invalid_argument("find_smooth_approx: eps must be > 0");
    std::vector<std::vector<Crossing>> base(F.size());
    for (std::size_t j = 0; j < F.size(); ++j) base[j] = crossings(f, F[j].fn);

    ApproxSearch res;
    for (const auto& cand : stream) {
        if (res.examined >= budget) break;
        ++res.examined;
        if (sup_norm_diff(f, cand.fn) >= eps) continue;
        bool ok = true;
        for (std::size_t j = 0; j < F.size() && ok; ++j)
            ok = similar_crossings(crossings(cand.fn, F[j].fn), base[j], eps);
        if (!ok) continue;
        if (graph && adjacency_targets) {
            for (const auto& h : F) {
                bool want = adjacency_targets->count(h.id) > 0;
                if (graph->adjacent(cand.id, h.id) != want) { ok = false; break; }
            }
            if (!ok) continue;
        }
        res.found = true;
        res.id = cand.id;
        return res;
    }
    return res;
}

}  // namespace larglab
