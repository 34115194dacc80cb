#pragma once

#include <optional>
#include <variant>

#include "larglab/dyadic_path.hpp"
#include "larglab/pl_function.hpp"
#include "larglab/polynomial.hpp"

namespace larglab {

enum class FuncKind { pl, poly, bm };

// A member of a function family: one of the three concrete representations
// plus a stable id (unique within its family).
struct Func {
    int id = 0;
    std::variant<PLFunction, Polynomial, DyadicPath> body;

    FuncKind kind() const {
        switch (body.index()) {
            case 0: return FuncKind::pl;
            case 1: return FuncKind::poly;
            default: return FuncKind::bm;
        }
    }
    const PLFunction& as_pl() const { return std::get<PLFunction>(body); }
    const Polynomial& as_poly() const { return std::get<Polynomial>(body); }
    const DyadicPath& as_bm() const { return std::get<DyadicPath>(body); }

    // True when the function admits an exact PL form (pl and bm kinds).
    bool pl_exact() const { return kind() != FuncKind::poly; }
};

double eval(const Func& f, double x);
double lipschitz_bound(const Func& f);

// PL form: pl as-is, bm exactly at its own depth, poly interpolated at
// `poly_resolution` nodes (error bound available via poly_to_pl).
PLFunction render_pl(const Func& f, int poly_resolution = 4096);

// Certified enclosure of sup|f-g| over [0,1]. Exact (lo == hi as rationals)
// when neither side is a polynomial; otherwise width <= tol.
struct NormEnclosure {
    double lo = 0.0;
    double hi = 0.0;
    bool exact = false;
    std::optional<Rational> exact_value;
};
NormEnclosure sup_norm_diff(const Func& f, const Func& g, double tol = 1e-9);

// floor(sup|f-g|); `ambiguous` when the enclosure straddles an integer at
// the requested tolerance.
struct FloorNorm {
    long long value = 0;
    bool ambiguous = false;
};
FloorNorm floor_norm_diff(const Func& f, const Func& g, double tol = 1e-9);

}  // namespace larglab
