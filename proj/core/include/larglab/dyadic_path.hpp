#pragma once

#include <vector>

#include "larglab/pl_function.hpp"

namespace larglab {

// Finite-depth rendering of a shifted Brownian path f(t) = N + X(t):
// values of X at the 2^D + 1 dyadic nodes t = k/2^D, plus the start shift N.
class DyadicPath {
public:
    DyadicPath(int depth, double shift, std::vector<double> values);

    int depth() const { return depth_; }
    double shift() const { return shift_; }
    const std::vector<double>& values() const { return values_; }

    double eval(double t) const;

    // Exact PL rendering at the path's own nodes (value-snapped rationals).
    PLFunction to_pl() const;
    // PL interpolant at m+1 equispaced nodes; optional uniform error bound
    // from the path's slope (exact, 0, when m is a multiple of 2^depth).
    PLFunction to_pl(int m, double* error_bound = nullptr) const;

    double max_abs_slope() const;

private:
    int depth_;
    double shift_;
    std::vector<double> values_;
};

}  // namespace larglab
