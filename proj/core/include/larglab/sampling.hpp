#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "larglab/func.hpp"
#include "larglab/rng.hpp"

namespace larglab {

struct FamilySpec {
    FuncKind kind = FuncKind::pl;
    int count = 1;
    std::uint64_t seed = 0;
    int bm_depth = 10;          // bm only
    double poisson_mean = 1.0;  // pl / poly change-point and degree law

    bool operator==(const FamilySpec&) const = default;
};

struct FunctionFamily {
    FamilySpec spec;
    std::vector<Func> functions;  // ids 0..count-1 in order

    const Func& by_id(int id) const {
        const Func& f = functions.at(static_cast<std::size_t>(id));
        if (f.id != id) throw std::invalid_argument("FunctionFamily: ids are not positional");
        return f;
    }
};

// One draw from the PL measure: n ~ Poisson(mean) interior change points at
// sorted uniform x's, values iid standard normal, all snapped to rationals.
PLFunction sample_pl(std::uint64_t seed, std::uint64_t index, double mean = 1.0);

// One draw from the polynomial measure: degree ~ Poisson(mean),
// coefficients iid standard normal.
Polynomial sample_poly(std::uint64_t seed, std::uint64_t index, double mean = 1.0);

// Shifted Brownian path at dyadic depth D by midpoint refinement. The same
// (seed, index) at a deeper depth extends the path without changing the
// values at shared nodes.
DyadicPath sample_brownian(std::uint64_t seed, std::uint64_t index, int depth);

FunctionFamily sample_family(const FamilySpec& spec);

}  // namespace larglab
