#include "larglab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace larglab {

PLFunction sample_pl(std::uint64_t seed, std::uint64_t index, double mean) {
    Rng rng = Rng::substream(seed, {stream_tag::pl, index});
    long long n = rng.next_poisson(mean);
    // Snapped uniforms must be distinct and interior; collisions are
    // astronomically rare but would break the strict-increase invariant.
    std::vector<Rational> xs;
    for (int attempt = 0; attempt < 64; ++attempt) {
        xs.clear();
        for (long long i = 0; i < n; ++i) xs.push_back(Rational::snapped(rng.next_unit()));
        std::sort(xs.begin(), xs.end());
        bool ok = true;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] <= Rational(0) || xs[i] >= Rational(1) ||
                (i > 0 && xs[i] == xs[i - 1])) {
                ok = false;
                break;
            }
        }
        if (ok) break;
        if (attempt == 63) throw std::runtime_error("sample_pl: could not draw distinct nodes");
    }
    std::vector<ChangePoint> pts;
    pts.push_back({Rational(0), Rational::snapped(rng.next_normal())});
    for (const auto& x : xs) pts.push_back({x, Rational::snapped(rng.next_normal())});
    pts.push_back({Rational(1), Rational::snapped(rng.next_normal())});
    return PLFunction(std::move(pts));
}

Polynomial sample_poly(std::uint64_t seed, std::uint64_t index, double mean) {
    Rng rng = Rng::substream(seed, {stream_tag::poly, index});
    long long n = rng.next_poisson(mean);
    std::vector<double> coeffs;
    coeffs.reserve(n + 1);
    for (long long i = 0; i <= n; ++i) coeffs.push_back(rng.next_normal());
    return Polynomial(std::move(coeffs));
}

DyadicPath sample_brownian(std::uint64_t seed, std::uint64_t index, int depth) {
    if (depth < 0) throw std::invalid_argument("sample_brownian: depth must be >= 0");
    Rng rng = Rng::substream(seed, {stream_tag::bm, index});
    double shift = rng.next_normal();

    // Level-major midpoint refinement: X(0)=0, X(1)~N(0,1), then for each
    // level d the midpoints get N(avg, 2^-(d+1)). Draw order is fixed, so a
    // deeper depth reproduces all shallower values bit-for-bit.
    std::size_t m = std::size_t(1) << depth;
    std::vector<double> values(m + 1, 0.0);
    values[m] = rng.next_normal();
    for (int d = 1; d <= depth; ++d) {
        std::size_t step = m >> d;  // node spacing at this level
        double sd = std::sqrt(std::ldexp(1.0, -(d + 1)));
        for (std::size_t j = 0; (2 * j + 1) * step <= m; ++j) {
            std::size_t left = 2 * j * step;
            std::size_t mid = left + step;
            std::size_t right = left + 2 * step;
            values[mid] = 0.5 * (values[left] + values[right]) + sd * rng.next_normal();
        }
    }
    return DyadicPath(depth, shift, std::move(values));
}

FunctionFamily sample_family(const FamilySpec& spec) {
    if (spec.count < 1) throw std::invalid_argument("sample_family: count must be >= 1");
    FunctionFamily fam;
    fam.spec = spec;
    fam.functions.reserve(spec.count);
    for (int i = 0; i < spec.count; ++i) {
        switch (spec.kind) {
            case FuncKind::pl:
                fam.functions.push_back({i, sample_pl(spec.seed, i, spec.poisson_mean)});
                break;
            case FuncKind::poly:
                fam.functions.push_back({i, sample_poly(spec.seed, i, spec.poisson_mean)});
                break;
            case FuncKind::bm:
                fam.functions.push_back({i, sample_brownian(spec.seed, i, spec.bm_depth)});
                break;
        }
    }
    return fam;
}

}  // namespace larglab
