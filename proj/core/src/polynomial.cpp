#include "larglab/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace larglab {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("Polynomial: empty coefficient list");
}

double Polynomial::eval(double t) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() == 1) return Polynomial({0.0});
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
    return Polynomial(std::move(d));
}

double Polynomial::lipschitz_bound() const {
    double s = 0.0;
    for (std::size_t i = 1; i < c_.size(); ++i) s += static_cast<double>(i) * std::fabs(c_[i]);
    return s;
}

double Polynomial::second_derivative_bound() const {
    double s = 0.0;
    for (std::size_t i = 2; i < c_.size(); ++i)
        s += static_cast<double>(i) * static_cast<double>(i - 1) * std::fabs(c_[i]);
    return s;
}

void Polynomial::range(double lo, double hi, double& out_lo, double& out_hi) const {
    // Interval Horner on [lo,hi] (assumes 0 <= lo <= hi).
    double rlo = 0.0, rhi = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        double a = rlo * lo, b = rlo * hi, c = rhi * lo, d = rhi * hi;
        double mlo = std::min(std::min(a, b), std::min(c, d));
        double mhi = std::max(std::max(a, b), std::max(c, d));
        rlo = mlo + *it;
        rhi = mhi + *it;
    }
    out_lo = rlo;
    out_hi = rhi;
}

PLFunction poly_to_pl(const Polynomial& f, int m, double* error_bound) {
    if (m < 1) throw std::invalid_argument("poly_to_pl: resolution must be >= 1");
    std::vector<ChangePoint> pts;
    pts.reserve(m + 1);
    for (int k = 0; k <= m; ++k) {
        Rational x(k, m);
        pts.push_back({x, Rational::snapped(f.eval(x.to_double()))});
    }
    if (error_bound) {
        double h = 1.0 / m;
        // Interpolation error h^2/8 * max|f''| plus the value-snap slack.
        *error_bound = h * h / 8.0 * f.second_derivative_bound() + 1e-15;
    }
    return PLFunction(std::move(pts));
}

namespace {

long long count_monotone(const Polynomial& d, const Polynomial& dp, double lo, double hi,
                         int depth) {
    double slo, shi;
    dp.range(lo, hi, slo, shi);
    if (slo > 0.0 || shi < 0.0) {
        // Monotone: levels crossed are the floor jumps between the endpoint
        // values (each level counted once, at the cell where it is crossed).
        double a = d.eval(lo), b = d.eval(hi);
        return std::llabs(static_cast<long long>(std::floor(b)) -
                          static_cast<long long>(std::floor(a)));
    }
    if (hi - lo < 1e-12 || depth > 60) {
        // Could not separate; only matters if an integer level is inside.
        double vlo, vhi;
        d.range(lo, hi, vlo, vhi);
        if (std::floor(vlo) == std::floor(vhi)) return 0;
        throw std::runtime_error("certified_integer_crossings: unresolved near-tangency");
    }
    double mid = 0.5 * (lo + hi);
    return count_monotone(d, dp, lo, mid, depth + 1) + count_monotone(d, dp, mid, hi, depth + 1);
}

}  // namespace

long long certified_integer_crossings(const Polynomial& f, const Polynomial& g) {
    std::size_t n = std::max(f.coeffs().size(), g.coeffs().size());
    std::vector<double> dc(n, 0.0);
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) dc[i] += f.coeffs()[i];
    for (std::size_t i = 0; i < g.coeffs().size(); ++i) dc[i] -= g.coeffs()[i];
    Polynomial d(std::move(dc));
    if (d.lipschitz_bound() == 0.0) {
        // Constant difference: crossings everywhere or nowhere.
        return 0;
    }
    return count_monotone(d, d.derivative(), 0.0, 1.0, 0);
}

}  // namespace larglab
