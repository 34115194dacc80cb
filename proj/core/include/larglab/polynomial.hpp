#pragma once

#include <vector>

#include "larglab/pl_function.hpp"

namespace larglab {

// Real polynomial a_0 + a_1 t + ... + a_n t^n, kept in floating point.
// Norms and crossing counts against other functions come with certified
// enclosures instead of exact values.
class Polynomial {
public:
    explicit Polynomial(std::vector<double> coeffs);

    const std::vector<double>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    double eval(double t) const;
    Polynomial derivative() const;

    // Bound on |f'| over [0,1]: sum of i*|a_i|.
    double lipschitz_bound() const;
    // Bound on |f''| over [0,1]: sum of i*(i-1)*|a_i|.
    double second_derivative_bound() const;

    // Interval evaluation over [lo,hi] (outward-sloppy by float rounding,
    // which is far below every tolerance used here).
    void range(double lo, double hi, double& out_lo, double& out_hi) const;

private:
    std::vector<double> c_;
};

// PL interpolant at m+1 equispaced nodes, with a certified uniform error
// bound (h^2/8 * max|f''|).
PLFunction poly_to_pl(const Polynomial& f, int m, double* error_bound = nullptr);

// Number of points where f - g passes through an integer, certified by
// monotone subdivision. Throws std::runtime_error if it cannot separate a
// near-tangency at width 1e-12.
long long certified_integer_crossings(const Polynomial& f, const Polynomial& g);

}  // namespace larglab
