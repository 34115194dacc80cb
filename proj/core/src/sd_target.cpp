#include <algorithm>
#include <map>

#include "larglab/matcher.hpp"

namespace larglab {

namespace {

// Positions of the interval system: all pair crossings plus {0,1}.
// Tangent runs are rejected; the construction needs transverse geometry.
std::vector<Rational> system_positions(const PLFamilyView& view) {
    std::vector<Rational> xs{Rational(0), Rational(1)};
    for (std::size_t i = 0; i < view.size(); ++i)
        for (std::size_t j = i + 1; j < view.size(); ++j)
            for (const auto& c : crossings(view[i].fn, view[j].fn)) {
                if (c.is_run())
                    throw StructuralError("sd target: tangent run between members " +
                                          std::to_string(view[i].id) + " and " +
                                          std::to_string(view[j].id));
                xs.push_back(c.x);
            }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

}  // namespace

SDTarget build_sd_target(const PLFunction& g_new, const PLFamilyView& Vn,
                         const PLFamilyView& Wn) {
    if (Vn.size() != Wn.size() || Vn.empty())
        throw std::invalid_argument("build_sd_target: aligned nonempty views required");
    std::vector<Rational> X = system_positions(Vn);
    std::vector<Rational> Y = system_positions(Wn);
    if (X.size() != Y.size())
        throw StructuralError("build_sd_target: interval systems differ in cardinality");

    // Crossings of the new function with the matched sources, bucketed by
    // the enclosing interval of X. They subdivide each I_i.
    std::vector<std::vector<Rational>> cuts(X.size());  // cuts[i] inside (X[i-1], X[i])
    for (const auto& e : Vn) {
        for (const auto& c : crossings(g_new, e.fn)) {
            if (c.is_run() || c.dir == CrossDir::tangent)
                throw StructuralError("build_sd_target: tangent crossing of the new function");
            if (c.x == Rational(0) || c.x == Rational(1))
                throw StructuralError("build_sd_target: boundary crossing of the new function");
            auto it = std::lower_bound(X.begin(), X.end(), c.x);
            if (it != X.end() && *it == c.x)
                throw StructuralError("build_sd_target: new function crosses at a system point");
            cuts[static_cast<std::size_t>(it - X.begin())].push_back(c.x);
        }
    }

    SDTarget out;
    std::map<Rational, Rational> nodes;  // y -> t(y)

    for (std::size_t i = 1; i < X.size(); ++i) {
        const Rational& x0 = X[i - 1];
        const Rational& x1 = X[i];
        const Rational& y0 = Y[i - 1];
        const Rational& y1 = Y[i];
        Rational scale_to_img = (y1 - y0) / (x1 - x0);

        std::vector<Rational> sub{x0};
        std::sort(cuts[i].begin(), cuts[i].end());
        cuts[i].erase(std::unique(cuts[i].begin(), cuts[i].end()), cuts[i].end());
        for (const auto& c : cuts[i]) sub.push_back(c);
        sub.push_back(x1);

        for (std::size_t l = 1; l < sub.size(); ++l) {
            const Rational& slo = sub[l - 1];
            const Rational& shi = sub[l];
            Rational mid = (slo + shi) / Rational(2);
            Rational gm = g_new.eval(mid);

            // Tightest integer translates of the sources around g_new on
            // this sub-interval; the pointwise translate order is constant
            // here, so the midpoint decides.
            std::size_t bm = 0, am = 0;
            long long bs = 0, as = 0;
            bool first = true;
            Rational bv(0), av(0);
            for (std::size_t c = 0; c < Vn.size(); ++c) {
                Rational base = Vn[c].fn.eval(mid);
                long long n = (gm - base).floor_ll();
                Rational below = base + Rational(n);
                Rational above = below + Rational(1);
                if (first || below > bv) { bv = below; bm = c; bs = n; }
                if (first || above < av) { av = above; am = c; as = n + 1; }
                first = false;
            }
            if (!(bv < gm && gm < av))
                throw StructuralError("build_sd_target: bracket lookup failed (tangency?)");

            Rational tlo = y0 + (slo - x0) * scale_to_img;
            Rational thi = y0 + (shi - x0) * scale_to_img;
            out.brackets.push_back({tlo, thi, bm, am, bs, as});

            // Image-side evaluation grid: sub-interval ends, every change
            // point of the bracket images inside, and the midpoint. The
            // interior node keeps the target strictly off its bracket walls
            // between two wall-touching endpoints.
            std::vector<Rational> ys{tlo, thi, (tlo + thi) / Rational(2)};
            for (const auto& p : Wn[bm].fn.points())
                if (tlo < p.x && p.x < thi) ys.push_back(p.x);
            for (const auto& p : Wn[am].fn.points())
                if (tlo < p.x && p.x < thi) ys.push_back(p.x);
            std::sort(ys.begin(), ys.end());
            ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

            Rational scale_to_src = (x1 - x0) / (y1 - y0);
            for (const auto& y : ys) {
                Rational xq = x0 + (y - y0) * scale_to_src;
                Rational below_src = Vn[bm].fn.eval(xq) + Rational(bs);
                Rational above_src = Vn[am].fn.eval(xq) + Rational(as);
                Rational below_img = Wn[bm].fn.eval(y) + Rational(bs);
                Rational above_img = Wn[am].fn.eval(y) + Rational(as);
                Rational denom = above_src - below_src;
                Rational value(0);
                if (denom == Rational(0)) {
                    // Bracket translates cross exactly here (an X point);
                    // their images must cross at the matching Y point.
                    if (below_img != above_img)
                        throw StructuralError(
                            "build_sd_target: image translates do not meet at a system point");
                    value = below_img;
                } else {
                    Rational alpha = (g_new.eval(xq) - below_src) / denom;
                    if (alpha < Rational(0) || alpha > Rational(1))
                        throw StructuralError("build_sd_target: alpha outside [0,1]");
                    value = alpha * above_img + (Rational(1) - alpha) * below_img;
                }
                auto it = nodes.find(y);
                if (it == nodes.end())
                    nodes.emplace(y, value);
                else if (it->second != value)
                    throw StructuralError("build_sd_target: discontinuity at y=" + y.str());
            }
        }
    }

    std::vector<ChangePoint> pts;
    pts.reserve(nodes.size());
    for (const auto& [y, v] : nodes) pts.push_back({y, v});
    out.target = PLFunction(std::move(pts));

    // Clearance-derived epsilon for the extension: a quarter of the minimal
    // gap of the extended image system (Y plus the target's crossings,
    // which sit at the mapped cut points).
    std::vector<Rational> ext = Y;
    for (std::size_t i = 1; i < X.size(); ++i) {
        Rational scale = (Y[i] - Y[i - 1]) / (X[i] - X[i - 1]);
        for (const auto& c : cuts[i]) ext.push_back(Y[i - 1] + (c - X[i - 1]) * scale);
    }
    std::sort(ext.begin(), ext.end());
    ext.erase(std::unique(ext.begin(), ext.end()), ext.end());
    Rational gap(1);
    for (std::size_t i = 1; i < ext.size(); ++i) gap = min(gap, ext[i] - ext[i - 1]);
    out.sufficient_eps = gap / Rational(4);
    return out;
}

}  // namespace larglab
