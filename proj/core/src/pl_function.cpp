#include "larglab/pl_function.hpp"

#include <algorithm>
#include <cmath>

namespace larglab {

PLFunction::PLFunction(std::vector<ChangePoint> pts) : pts_(std::move(pts)) {
    if (pts_.size() < 2) throw std::invalid_argument("PLFunction: needs at least 2 change points");
    if (pts_.front().x != Rational(0) || pts_.back().x != Rational(1))
        throw std::invalid_argument("PLFunction: domain must be exactly [0,1]");
    for (std::size_t i = 1; i < pts_.size(); ++i)
        if (!(pts_[i - 1].x < pts_[i].x))
            throw std::invalid_argument("PLFunction: x-coordinates must strictly increase");
}

PLFunction PLFunction::constant(const Rational& c) {
    return PLFunction({{Rational(0), c}, {Rational(1), c}});
}

PLFunction PLFunction::line(const Rational& y0, const Rational& y1) {
    return PLFunction({{Rational(0), y0}, {Rational(1), y1}});
}

namespace {

// Index of the segment [pts[i].x, pts[i+1].x] containing x.
std::size_t segment_index(const std::vector<ChangePoint>& pts, const Rational& x) {
    std::size_t lo = 0, hi = pts.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (pts[mid].x <= x)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

Rational interp(const ChangePoint& a, const ChangePoint& b, const Rational& x) {
    if (x == a.x) return a.y;
    if (x == b.x) return b.y;
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

}  // namespace

Rational PLFunction::eval(const Rational& x) const {
    if (x < Rational(0) || x > Rational(1))
        throw std::domain_error("PLFunction::eval: x outside [0,1]");
    std::size_t i = segment_index(pts_, x);
    return interp(pts_[i], pts_[i + 1], x);
}

double PLFunction::eval_d(double x) const {
    if (x < 0.0 || x > 1.0) throw std::domain_error("PLFunction::eval_d: x outside [0,1]");
    // double comparisons against rational nodes; fine for oracles and output.
    std::size_t lo = 0, hi = pts_.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (pts_[mid].x.to_double() <= x)
            lo = mid;
        else
            hi = mid;
    }
    double x0 = pts_[lo].x.to_double(), x1 = pts_[lo + 1].x.to_double();
    double y0 = pts_[lo].y.to_double(), y1 = pts_[lo + 1].y.to_double();
    if (x1 == x0) return y0;
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

Rational PLFunction::max_abs_slope() const {
    Rational m(0);
    for (std::size_t i = 1; i < pts_.size(); ++i) {
        Rational s = ((pts_[i].y - pts_[i - 1].y) / (pts_[i].x - pts_[i - 1].x)).abs();
        m = max(m, s);
    }
    return m;
}

std::vector<Rational> PLFunction::slope_set() const {
    std::vector<Rational> out;
    for (std::size_t i = 1; i < pts_.size(); ++i)
        out.push_back((pts_[i].y - pts_[i - 1].y) / (pts_[i].x - pts_[i - 1].x));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Rational PLFunction::sup_abs() const {
    Rational m(0);
    for (const auto& p : pts_) m = max(m, p.y.abs());
    return m;
}

PLFunction PLFunction::add_constant(const Rational& c) const {
    auto pts = pts_;
    for (auto& p : pts) p.y += c;
    return PLFunction(std::move(pts));
}

PLFunction PLFunction::negate() const {
    auto pts = pts_;
    for (auto& p : pts) p.y = -p.y;
    return PLFunction(std::move(pts));
}

std::vector<Rational> merge_grids(const PLFunction& f, const PLFunction& g) {
    std::vector<Rational> xs;
    xs.reserve(f.size() + g.size());
    for (const auto& p : f.points()) xs.push_back(p.x);
    for (const auto& p : g.points()) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

PLFunction pl_sum(const PLFunction& f, const PLFunction& g) {
    std::vector<ChangePoint> pts;
    for (const auto& x : merge_grids(f, g)) pts.push_back({x, f.eval(x) + g.eval(x)});
    return PLFunction(std::move(pts));
}

PLFunction pl_difference(const PLFunction& f, const PLFunction& g) {
    std::vector<ChangePoint> pts;
    for (const auto& x : merge_grids(f, g)) pts.push_back({x, f.eval(x) - g.eval(x)});
    return PLFunction(std::move(pts));
}

PLFunction PLFunction::compose(const PLFunction& psi) const {
    if (psi.value_at_zero() != Rational(0) || psi.value_at_one() != Rational(1))
        throw std::invalid_argument("compose: psi must fix 0 and 1");
    std::vector<Rational> ys;
    for (const auto& p : psi.points()) ys.push_back(p.x);
    // Preimages of this function's nodes under psi (psi strictly increasing).
    for (std::size_t i = 1; i < psi.points().size(); ++i) {
        const auto& a = psi.points()[i - 1];
        const auto& b = psi.points()[i];
        if (!(a.y < b.y)) throw std::invalid_argument("compose: psi must strictly increase");
        for (const auto& q : pts_) {
            if (a.y < q.x && q.x < b.y)
                ys.push_back(a.x + (q.x - a.y) * (b.x - a.x) / (b.y - a.y));
        }
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    std::vector<ChangePoint> pts;
    for (const auto& y : ys) pts.push_back({y, eval(psi.eval(y))});
    return PLFunction(std::move(pts));
}

Rational sup_norm_diff(const PLFunction& f, const PLFunction& g) {
    // f-g is PL, so the max of |f-g| sits on the merged grid.
    Rational m(0);
    for (const auto& x : merge_grids(f, g)) m = max(m, (f.eval(x) - g.eval(x)).abs());
    return m;
}

Ord fractional_order(const PLFunction& f, const PLFunction& g, const Rational& x) {
    Rational a = f.eval(x).frac();
    Rational b = g.eval(x).frac();
    if (a < b) return Ord::less;
    if (b < a) return Ord::greater;
    return Ord::equal;
}

namespace {

long long to_ll(const Rational& r) {
    if (!r.is_integer()) throw std::logic_error("to_ll: not an integer");
    return r.floor_ll();
}

}  // namespace

std::vector<Crossing> crossings(const PLFunction& f, const PLFunction& g) {
    PLFunction d = pl_difference(f, g);
    const auto& pts = d.points();

    // Raw events per segment: transverse points and flat runs.
    struct Event {
        Rational x0, x1;
        long long level;
        CrossDir dir;  // up/down for transverse, tangent for flat runs
    };
    std::vector<Event> ev;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const Rational& xa = pts[i - 1].x;
        const Rational& xb = pts[i].x;
        const Rational& a = pts[i - 1].y;
        const Rational& b = pts[i].y;
        if (a == b) {
            if (a.is_integer()) ev.push_back({xa, xb, to_ll(a), CrossDir::tangent});
            continue;
        }
        const Rational& lo = min(a, b);
        const Rational& hi = max(a, b);
        long long k0 = lo.is_integer() ? lo.floor_ll() : lo.floor_ll() + 1;  // ceil(lo)
        long long k1 = hi.floor_ll();
        CrossDir dir = (a < b) ? CrossDir::up : CrossDir::down;
        for (long long k = k0; k <= k1; ++k) {
            Rational x = xa + (Rational(k) - a) * (xb - xa) / (b - a);
            ev.push_back({x, x, k, dir});
        }
    }
    std::sort(ev.begin(), ev.end(), [](const Event& p, const Event& q) {
        if (p.x0 != q.x0) return p.x0 < q.x0;
        return p.x1 < q.x1;
    });

    // Merge events that touch: duplicated node crossings from adjacent
    // segments, flat runs absorbing their endpoint crossings.
    std::vector<Crossing> out;
    for (const auto& e : ev) {
        if (!out.empty() && out.back().x_end == e.x0 && out.back().offset == e.level) {
            Crossing& prev = out.back();
            if (prev.is_run() || e.x0 < e.x1) {
                // A flat run extends through the touching event.
                prev.x_end = max(prev.x_end, e.x1);
                prev.dir = CrossDir::tangent;
            } else {
                // Same point reported by both neighbouring segments.
                prev.dir = (prev.dir == e.dir) ? e.dir : CrossDir::tangent;
            }
            continue;
        }
        out.push_back({e.x0, e.x1, e.level, e.dir});
    }
    return out;
}

Rational min_dist_to_integers(const PLFunction& d, const Rational& lo, const Rational& hi) {
    if (lo > hi) throw std::invalid_argument("min_dist_to_integers: empty interval");
    std::vector<Rational> xs{lo};
    for (const auto& p : d.points())
        if (lo < p.x && p.x < hi) xs.push_back(p.x);
    xs.push_back(hi);

    Rational best = d.eval(lo).dist_to_integer();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        Rational a = d.eval(xs[i]);
        Rational b = d.eval(xs[i + 1]);
        // On a linear piece the value range is [min(a,b), max(a,b)]; if it
        // contains an integer the distance collapses to zero.
        if (min(a, b).floor_ll() != max(a, b).floor_ll() || min(a, b).is_integer() ||
            max(a, b).is_integer())
            return Rational(0);
        best = min(best, min(a.dist_to_integer(), b.dist_to_integer()));
    }
    return best;
}

}  // namespace larglab
