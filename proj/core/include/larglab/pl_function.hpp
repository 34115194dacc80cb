#pragma once

#include <optional>
#include <vector>

#include "larglab/rational.hpp"

namespace larglab {

struct ChangePoint {
    Rational x;
    Rational y;
};

// Continuous piecewise-linear function on [0,1] with exact rational change
// points. x-coordinates strictly increase, first is 0, last is 1.
class PLFunction {
public:
    explicit PLFunction(std::vector<ChangePoint> pts);

    static PLFunction constant(const Rational& c);
    // The line from (0,y0) to (1,y1).
    static PLFunction line(const Rational& y0, const Rational& y1);

    const std::vector<ChangePoint>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }

    Rational eval(const Rational& x) const;
    double eval_d(double x) const;

    Rational value_at_zero() const { return pts_.front().y; }
    Rational value_at_one() const { return pts_.back().y; }

    // Largest |slope|; the Lipschitz constant of the function.
    Rational max_abs_slope() const;
    // Distinct segment slopes, sorted ascending.
    std::vector<Rational> slope_set() const;
    // max over [0,1] of |f|; attained at a change point.
    Rational sup_abs() const;

    PLFunction add_constant(const Rational& c) const;
    PLFunction negate() const;

    // f + g and f - g on the merged change-point grid (the canonical form
    // of the difference: extrema and crossings live on this grid).
    friend PLFunction pl_sum(const PLFunction& f, const PLFunction& g);
    friend PLFunction pl_difference(const PLFunction& f, const PLFunction& g);

    // f ∘ psi for psi an increasing PL bijection of [0,1]. Exact.
    PLFunction compose(const PLFunction& psi) const;

private:
    std::vector<ChangePoint> pts_;
};

Rational sup_norm_diff(const PLFunction& f, const PLFunction& g);

enum class CrossDir { up, down, tangent };

// A point (or maximal closed interval, when x_end > x) where <f> = <g>,
// i.e. f - g hits the integer `offset`. `dir` is the sign of the slope of
// f - g through the crossing; tangent marks extremum touches and flat runs.
struct Crossing {
    Rational x;
    Rational x_end;
    long long offset = 0;
    CrossDir dir = CrossDir::tangent;

    bool is_run() const { return x < x_end; }
    Rational midpoint() const { return (x + x_end) / Rational(2); }
};

// All crossings of f and g, sorted by position. Exact.
std::vector<Crossing> crossings(const PLFunction& f, const PLFunction& g);

enum class Ord { less, equal, greater };

// Trichotomy on <f(x)> vs <g(x)>.
Ord fractional_order(const PLFunction& f, const PLFunction& g, const Rational& x);

// Exact min over [lo,hi] of the distance from d(x) to the nearest integer.
// Returns 0 when d passes through an integer inside the interval.
Rational min_dist_to_integers(const PLFunction& d, const Rational& lo, const Rational& hi);

// Merged x-grid of both functions' change points.
std::vector<Rational> merge_grids(const PLFunction& f, const PLFunction& g);

}  // namespace larglab
