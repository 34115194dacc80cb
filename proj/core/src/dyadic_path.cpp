#include "larglab/dyadic_path.hpp"

#include <cmath>
#include <stdexcept>

namespace larglab {

DyadicPath::DyadicPath(int depth, double shift, std::vector<double> values)
    : depth_(depth), shift_(shift), values_(std::move(values)) {
    if (depth_ < 0) throw std::invalid_argument("DyadicPath: depth must be >= 0");
    if (values_.size() != (std::size_t(1) << depth_) + 1)
        throw std::invalid_argument("DyadicPath: values length must be 2^depth + 1");
}

double DyadicPath::eval(double t) const {
    if (t < 0.0 || t > 1.0) throw std::domain_error("DyadicPath::eval: t outside [0,1]");
    double n = std::ldexp(t, depth_);  // t * 2^D
    auto k = static_cast<std::size_t>(n);
    if (k >= values_.size() - 1) return shift_ + values_.back();
    double frac = n - static_cast<double>(k);
    return shift_ + values_[k] + frac * (values_[k + 1] - values_[k]);
}

PLFunction DyadicPath::to_pl() const {
    long long m = 1LL << depth_;
    std::vector<ChangePoint> pts;
    pts.reserve(values_.size());
    for (long long k = 0; k <= m; ++k)
        pts.push_back({Rational(k, m), Rational::snapped(shift_ + values_[k])});
    return PLFunction(std::move(pts));
}

PLFunction DyadicPath::to_pl(int m, double* error_bound) const {
    if (m < 1) throw std::invalid_argument("DyadicPath::to_pl: resolution must be >= 1");
    if (error_bound) {
        long long native = 1LL << depth_;
        // Exact at multiples of the native spacing; otherwise a Lipschitz
        // interpolation bound plus the value snap.
        *error_bound = (m % native == 0) ? 0.0 : max_abs_slope() / m + 1e-15;
    }
    std::vector<ChangePoint> pts;
    pts.reserve(m + 1);
    for (int k = 0; k <= m; ++k) {
        Rational x(k, m);
        pts.push_back({x, Rational::snapped(eval(x.to_double()))});
    }
    return PLFunction(std::move(pts));
}

double DyadicPath::max_abs_slope() const {
    double m = 0.0;
    double inv_h = std::ldexp(1.0, depth_);
    for (std::size_t i = 1; i < values_.size(); ++i)
        m = std::max(m, std::fabs(values_[i] - values_[i - 1]) * inv_h);
    return m;
}

}  // namespace larglab
