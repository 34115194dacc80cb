#include <doctest.h>

#include <cmath>

#include "larglab/func.hpp"
#include "larglab/sampling.hpp"

using namespace larglab;

namespace {

PLFunction pl(std::initializer_list<std::pair<double, double>> pts) {
    std::vector<ChangePoint> cps;
    for (const auto& [x, y] : pts) cps.push_back({Rational::snapped(x), Rational::snapped(y)});
    return PLFunction(std::move(cps));
}

// Grid oracle for crossings: integer passages of f-g bracketed between
// consecutive grid values, located by linear inversion. Independent of the
// exact enumeration path.
std::vector<double> grid_crossing_oracle(const PLFunction& f, const PLFunction& g, int n) {
    std::vector<double> out;
    double prev_x = 0.0;
    double prev_d = f.eval_d(0.0) - g.eval_d(0.0);
    if (std::floor(prev_d) == prev_d) out.push_back(0.0);
    for (int i = 1; i <= n; ++i) {
        double x = static_cast<double>(i) / n;
        double d = f.eval_d(x) - g.eval_d(x);
        double lo = std::min(prev_d, d), hi = std::max(prev_d, d);
        for (long long k = static_cast<long long>(std::ceil(lo)); k <= std::floor(hi); ++k) {
            if (static_cast<double>(k) == prev_d) continue;  // counted at the previous node
            if (d == prev_d) continue;
            out.push_back(prev_x + (k - prev_d) / (d - prev_d) * (x - prev_x));
        }
        prev_x = x;
        prev_d = d;
    }
    return out;
}

}  // namespace

TEST_CASE("rational snapping and arithmetic") {
    Rational r = Rational::snapped(0.5);
    CHECK(r == Rational(1, 2));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(7, 2).floor_ll() == 3);
    CHECK(Rational(-7, 2).floor_ll() == -4);
    CHECK(Rational(-7, 2).frac() == Rational(1, 2));
    CHECK(Rational(5, 4).dist_to_integer() == Rational(1, 4));
    CHECK(Rational::from_strings("-3", "6") == Rational(-1, 2));
    CHECK(Rational(3, 7).num_string() == "3");
    CHECK(Rational(3, 7).den_string() == "7");
}

TEST_CASE("eval: linear interpolation and Horner") {
    PLFunction f = pl({{0, 0}, {1, 2}});
    CHECK(f.eval(Rational(1, 2)) == Rational(1));

    Polynomial c({3.0});
    CHECK(c.eval(0.7) == doctest::Approx(3.0));

    Polynomial q({0.0, 1.0, 1.0});
    CHECK(q.eval(0.5) == doctest::Approx(0.75));

    CHECK_THROWS_AS(f.eval(Rational(3, 2)), std::domain_error);
}

TEST_CASE("eval at change points is exact") {
    for (std::uint64_t i = 0; i < 20; ++i) {
        PLFunction f = sample_pl(11, i);
        for (const auto& p : f.points()) CHECK(f.eval(p.x) == p.y);
    }
}

TEST_CASE("sup_norm_diff: examples and grid oracle") {
    PLFunction f = pl({{0, 0}, {1, 2}});
    PLFunction z = PLFunction::constant(Rational(0));
    CHECK(sup_norm_diff(f, z) == Rational(2));
    CHECK(sup_norm_diff(f, f) == Rational(0));

    for (std::uint64_t i = 0; i < 30; ++i) {
        PLFunction a = sample_pl(21, 2 * i);
        PLFunction b = sample_pl(21, 2 * i + 1);
        int n = 20000;
        double grid_max = 0.0;
        for (int k = 0; k <= n; ++k) {
            double x = static_cast<double>(k) / n;
            grid_max = std::max(grid_max, std::fabs(a.eval_d(x) - b.eval_d(x)));
        }
        double lip = (a.max_abs_slope() + b.max_abs_slope()).to_double();
        double exact = sup_norm_diff(a, b).to_double();
        CHECK(exact >= grid_max - 1e-12);
        CHECK(exact <= grid_max + lip / n + 1e-12);
    }
}

TEST_CASE("sup_norm_diff: symmetry and triangle inequality") {
    for (std::uint64_t i = 0; i < 15; ++i) {
        PLFunction a = sample_pl(31, 3 * i);
        PLFunction b = sample_pl(31, 3 * i + 1);
        PLFunction c = sample_pl(31, 3 * i + 2);
        CHECK(sup_norm_diff(a, b) == sup_norm_diff(b, a));
        CHECK(sup_norm_diff(a, c) <= sup_norm_diff(a, b) + sup_norm_diff(b, c));
    }
}

TEST_CASE("floor_norm_diff") {
    Func f{0, PLFunction::line(Rational(0), Rational(8, 5))};  // 1.6x
    Func z{1, PLFunction::constant(Rational(0))};
    CHECK(floor_norm_diff(f, z).value == 1);
    CHECK_FALSE(floor_norm_diff(f, z).ambiguous);
    CHECK(floor_norm_diff(f, f).value == 0);

    for (std::uint64_t i = 0; i < 20; ++i) {
        Func a{0, sample_pl(41, 2 * i)};
        Func b{1, sample_pl(41, 2 * i + 1)};
        long long fl = floor_norm_diff(a, b).value;
        CHECK(fl == sup_norm_diff(a.as_pl(), b.as_pl()).floor_ll());
    }
}

TEST_CASE("crossings: doubling line against zero") {
    PLFunction f = pl({{0, 0}, {1, 2}});
    PLFunction z = PLFunction::constant(Rational(0));
    auto cs = crossings(f, z);
    REQUIRE(cs.size() == 3);
    CHECK(cs[0].x == Rational(0));
    CHECK(cs[0].offset == 0);
    CHECK(cs[0].dir == CrossDir::up);
    CHECK(cs[1].x == Rational(1, 2));
    CHECK(cs[1].offset == 1);
    CHECK(cs[2].x == Rational(1));
    CHECK(cs[2].offset == 2);
}

TEST_CASE("crossings: constant half offset has none") {
    PLFunction g = sample_pl(5, 0);
    PLFunction f = g.add_constant(Rational(1, 2));
    CHECK(crossings(f, g).empty());
}

TEST_CASE("crossings: flat run reported once with tangent direction") {
    PLFunction f = PLFunction({{Rational(0), Rational(0)},
                               {Rational(1, 4), Rational(1)},
                               {Rational(1, 2), Rational(1)},
                               {Rational(1), Rational(0)}});
    PLFunction z = PLFunction::constant(Rational(0));
    auto cs = crossings(f, z);
    REQUIRE(cs.size() == 3);  // boundary touches at 0 and 1, run at level 1
    CHECK(cs[0].x == Rational(0));
    CHECK(cs[1].x == Rational(1, 4));
    CHECK(cs[1].x_end == Rational(1, 2));
    CHECK(cs[1].dir == CrossDir::tangent);
    CHECK(cs[1].is_run());
    CHECK(cs[2].x == Rational(1));
    CHECK(cs[2].dir == CrossDir::down);
}

TEST_CASE("crossings: extremum touching an integer level is tangent") {
    PLFunction f = PLFunction(
        {{Rational(0), Rational(0)}, {Rational(1, 2), Rational(1)}, {Rational(1), Rational(0)}});
    PLFunction z = PLFunction::constant(Rational(0));
    auto cs = crossings(f, z);
    REQUIRE(cs.size() == 3);
    CHECK(cs[1].x == Rational(1, 2));
    CHECK_FALSE(cs[1].is_run());
    CHECK(cs[1].dir == CrossDir::tangent);
}

TEST_CASE("crossings agree with the grid sign-change oracle") {
    int pairs = 0;
    for (std::uint64_t i = 0; pairs < 40; ++i) {
        PLFunction a = sample_pl(51, 2 * i);
        PLFunction b = sample_pl(51, 2 * i + 1);
        auto exact = crossings(a, b);
        bool clean = true;
        for (const auto& c : exact) clean &= !c.is_run() && c.dir != CrossDir::tangent;
        if (!clean) continue;
        ++pairs;
        auto oracle = grid_crossing_oracle(a, b, 100000);
        REQUIRE(exact.size() == oracle.size());
        for (std::size_t k = 0; k < exact.size(); ++k)
            CHECK(std::fabs(exact[k].x.to_double() - oracle[k]) < 2e-5);
    }
}

TEST_CASE("fractional_order") {
    PLFunction a = PLFunction::constant(Rational(3, 10));
    PLFunction b = PLFunction::constant(Rational(7, 10));
    PLFunction c = PLFunction::constant(Rational(17, 10));
    CHECK(fractional_order(a, b, Rational(1, 3)) == Ord::less);
    CHECK(fractional_order(c, b, Rational(1, 3)) == Ord::equal);
    for (std::uint64_t i = 0; i < 10; ++i) {
        PLFunction f = sample_pl(61, 2 * i);
        PLFunction g = sample_pl(61, 2 * i + 1);
        Rational x(1, 3);
        Rational df = f.eval(x).frac();
        Rational dg = g.eval(x).frac();
        Ord expect = df < dg ? Ord::less : (dg < df ? Ord::greater : Ord::equal);
        CHECK(fractional_order(f, g, x) == expect);
    }
}

TEST_CASE("slopes") {
    CHECK(pl({{0, 0}, {1, 2}}).slope_set() == std::vector<Rational>{Rational(2)});
    auto s = pl({{0, 0}, {0.5, 1}, {1, 0}}).slope_set();
    CHECK(s == std::vector<Rational>{Rational(-2), Rational(2)});
    for (std::uint64_t i = 0; i < 20; ++i) {
        PLFunction f = sample_pl(71, i);
        CHECK(f.slope_set().size() <= f.size() - 1);
    }
}

TEST_CASE("lipschitz bounds") {
    Func tent{0, pl({{0, 0}, {0.5, 1}, {1, 0}})};
    CHECK(lipschitz_bound(tent) == doctest::Approx(2.0));
    Func lin{1, Polynomial({0.0, 1.0})};
    CHECK(lipschitz_bound(lin) == doctest::Approx(1.0));
    Func sq{2, Polynomial({0.0, 0.0, 1.0})};
    CHECK(lipschitz_bound(sq) == doctest::Approx(2.0));
}

TEST_CASE("to_pl: exact cases and certified error bound") {
    DyadicPath path = sample_brownian(3, 0, 5);
    PLFunction exact = path.to_pl();
    PLFunction again = path.to_pl(1 << 5);
    CHECK(sup_norm_diff(exact, again) == Rational(0));

    double err = 0.0;
    PLFunction line = poly_to_pl(Polynomial({0.25, 1.0}), 17, &err);
    CHECK(err <= 1e-12);
    for (int k = 0; k <= 100; ++k) {
        double x = k / 100.0;
        CHECK(std::fabs(line.eval_d(x) - (0.25 + x)) < 1e-12);
    }

    Polynomial sq({0.0, 0.0, 1.0});
    PLFunction interp = poly_to_pl(sq, 100, &err);
    CHECK(err <= 2.0 / 40000.0);  // 1/(4 m^2) * max|f''|
    double worst = 0.0;
    for (int k = 0; k <= 10000; ++k) {
        double x = k / 10000.0;
        worst = std::max(worst, std::fabs(interp.eval_d(x) - sq.eval(x)));
    }
    CHECK(worst <= err + 1e-12);
    CHECK_THROWS_AS(poly_to_pl(sq, 0), std::invalid_argument);
}

TEST_CASE("sup_norm_diff enclosure for polynomial pairs") {
    Polynomial a({0.3, 1.2, -0.7});
    Polynomial b({-0.1, 0.4});
    Func fa{0, a}, fb{1, b};
    NormEnclosure e = sup_norm_diff(fa, fb, 1e-10);
    CHECK_FALSE(e.exact);
    CHECK(e.hi - e.lo <= 1e-10);
    double grid = 0.0;
    for (int k = 0; k <= 100000; ++k) {
        double x = k / 100000.0;
        grid = std::max(grid, std::fabs(a.eval(x) - b.eval(x)));
    }
    CHECK(grid >= e.lo - 1e-9);
    CHECK(grid <= e.hi + 1e-9);
}

TEST_CASE("certified integer crossings for polynomial pairs") {
    // d(x) = 2.5x - 0.75 passes levels -0.75..1.75: integers 0 and 1.
    CHECK(certified_integer_crossings(Polynomial({-0.75, 2.5}), Polynomial({0.0})) == 2);
    // Constant difference: no crossings.
    CHECK(certified_integer_crossings(Polynomial({0.5}), Polynomial({0.0})) == 0);
    // Parabola 4x(1-x) - 0.5: hits 0 twice, stays below 1.
    CHECK(certified_integer_crossings(Polynomial({-0.5, 4.0, -4.0}), Polynomial({0.0})) == 2);
}

TEST_CASE("pl composition with an increasing reparametrization") {
    PLFunction f = sample_pl(81, 0);
    PLFunction psi = PLFunction(
        {{Rational(0), Rational(0)}, {Rational(1, 3), Rational(2, 3)}, {Rational(1), Rational(1)}});
    PLFunction g = f.compose(psi);
    for (int k = 0; k <= 50; ++k) {
        Rational y(k, 50);
        CHECK(g.eval(y) == f.eval(psi.eval(y)));
    }
    CHECK(sup_norm_diff(f, PLFunction::constant(Rational(0))) ==
          sup_norm_diff(g, PLFunction::constant(Rational(0))));
}

TEST_CASE("disjoint slope sets give finite transverse crossing sets") {
    for (std::uint64_t i = 0; i < 25; ++i) {
        PLFunction a = sample_pl(911, 2 * i);
        PLFunction b = sample_pl(911, 2 * i + 1);
        auto sa = a.slope_set();
        auto sb = b.slope_set();
        std::vector<Rational> inter;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                              std::back_inserter(inter));
        if (!inter.empty()) continue;  // sampled collision, not this law's case
        for (const auto& c : crossings(a, b)) {
            CHECK_FALSE(c.is_run());
            CHECK(c.dir != CrossDir::tangent);
        }
    }
}

TEST_CASE("floor_norm_diff flags an enclosure straddling an integer") {
    // A parabola with sup exactly 1 - 1e-15: every refinement of the
    // enclosure still straddles 1.
    double c = 1.0 - 1e-15;
    Func f{0, Polynomial({0.0, 4.0 * c, -4.0 * c})};
    Func z{1, Polynomial({0.0})};
    FloorNorm fl = floor_norm_diff(f, z);
    CHECK(fl.ambiguous);
}

TEST_CASE("mixed pl/poly norm enclosures bracket the grid maximum") {
    Func f{0, sample_pl(7311, 0)};
    Func g{1, sample_poly(7311, 1)};
    NormEnclosure e = sup_norm_diff(f, g, 1e-9);
    CHECK_FALSE(e.exact);
    CHECK(e.hi - e.lo <= 1e-9);
    double grid = 0.0;
    for (int k = 0; k <= 20000; ++k) {
        double x = k / 20000.0;
        grid = std::max(grid, std::fabs(eval(f, x) - eval(g, x)));
    }
    // The grid max sits inside the enclosure up to the grid modulus.
    double modulus = (lipschitz_bound(f) + lipschitz_bound(g)) / 20000.0;
    CHECK(grid <= e.hi + 1e-9);
    CHECK(grid >= e.lo - modulus - 1e-9);
}
