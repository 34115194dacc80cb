#include "larglab/func.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace larglab {

double eval(const Func& f, double x) {
    switch (f.kind()) {
        case FuncKind::pl: return f.as_pl().eval_d(x);
        case FuncKind::poly:
            if (x < 0.0 || x > 1.0) throw std::domain_error("eval: x outside [0,1]");
            return f.as_poly().eval(x);
        default: return f.as_bm().eval(x);
    }
}

double lipschitz_bound(const Func& f) {
    switch (f.kind()) {
        case FuncKind::pl: return f.as_pl().max_abs_slope().to_double();
        case FuncKind::poly: return f.as_poly().lipschitz_bound();
        default: return f.as_bm().max_abs_slope();
    }
}

PLFunction render_pl(const Func& f, int poly_resolution) {
    switch (f.kind()) {
        case FuncKind::pl: return f.as_pl();
        case FuncKind::poly: return poly_to_pl(f.as_poly(), poly_resolution);
        default: return f.as_bm().to_pl();
    }
}

namespace {

// Branch-and-bound enclosure of max over [0,1] of |f-g| when a polynomial
// is involved. Upper bounds per cell come from endpoint values plus the
// Lipschitz constant of the difference.
NormEnclosure norm_branch_bound(const Func& f, const Func& g, double tol) {
    double lip = lipschitz_bound(f) + lipschitz_bound(g);
    auto h = [&](double x) { return std::fabs(eval(f, x) - eval(g, x)); };

    struct Cell {
        double lo, hi, ub;
        bool operator<(const Cell& o) const { return ub < o.ub; }
    };
    auto make_cell = [&](double lo, double hi) {
        double ub = std::max(h(lo), h(hi)) + lip * (hi - lo) * 0.5;
        return Cell{lo, hi, ub};
    };

    double best = std::max({h(0.0), h(0.5), h(1.0)});
    std::priority_queue<Cell> q;
    q.push(make_cell(0.0, 0.5));
    q.push(make_cell(0.5, 1.0));
    while (!q.empty()) {
        Cell c = q.top();
        if (c.ub - best <= tol) break;
        q.pop();
        double mid = 0.5 * (c.lo + c.hi);
        best = std::max(best, h(mid));
        q.push(make_cell(c.lo, mid));
        q.push(make_cell(mid, c.hi));
    }
    NormEnclosure out;
    out.lo = best;
    out.hi = q.empty() ? best : std::max(best, q.top().ub);
    out.exact = false;
    return out;
}

}  // namespace

NormEnclosure sup_norm_diff(const Func& f, const Func& g, double tol) {
    if (f.pl_exact() && g.pl_exact()) {
        Rational v = sup_norm_diff(render_pl(f), render_pl(g));
        NormEnclosure out;
        out.lo = out.hi = v.to_double();
        out.exact = true;
        out.exact_value = v;
        return out;
    }
    return norm_branch_bound(f, g, tol);
}

FloorNorm floor_norm_diff(const Func& f, const Func& g, double tol) {
    NormEnclosure e = sup_norm_diff(f, g, tol);
    if (e.exact) return {e.exact_value->floor_ll(), false};
    for (int refine = 0; refine < 3; ++refine) {
        auto flo = static_cast<long long>(std::floor(e.lo));
        auto fhi = static_cast<long long>(std::floor(e.hi));
        if (flo == fhi) return {flo, false};
        tol /= 16.0;
        if (tol < 1e-14) break;
        e = sup_norm_diff(f, g, tol);
    }
    return {static_cast<long long>(std::floor(e.lo)), true};
}

}  // namespace larglab
