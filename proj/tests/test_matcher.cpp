#include <doctest.h>

#include "larglab/matcher.hpp"

using namespace larglab;

namespace {

PLEntry entry(int id, PLFunction f) { return {id, std::move(f), true}; }

PLEntry cst(int id, const Rational& c) { return {id, PLFunction::constant(c), true}; }

// A random increasing PL bijection of [0,1] fixing the endpoints.
PLFunction random_reparam(std::uint64_t seed) {
    Rng rng = Rng::substream(seed, {771});
    int k = 1 + static_cast<int>(rng.next_u64() % 3);
    std::vector<Rational> xs, ys;
    for (int i = 0; i < k; ++i) {
        xs.push_back(Rational::snapped(rng.next_unit()));
        ys.push_back(Rational::snapped(rng.next_unit()));
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    std::vector<ChangePoint> pts{{Rational(0), Rational(0)}};
    for (int i = 0; i < k; ++i) {
        if (xs[i] <= pts.back().x || ys[i] <= pts.back().y) continue;
        if (xs[i] >= Rational(1) || ys[i] >= Rational(1)) continue;
        pts.push_back({xs[i], ys[i]});
    }
    pts.push_back({Rational(1), Rational(1)});
    return PLFunction(std::move(pts));
}

// A normalized transverse family view (zero member included), or empty if
// the draw is degenerate.
PLFamilyView sampled_normalized_family(std::uint64_t seed, int count) {
    FamilySpec spec{FuncKind::pl, count, seed};
    PLFamilyView view = normalize_to_zero(render_family(sample_family(spec)));
    if (!check_transverse(view).ok) return {};
    return view;
}

PLFamilyView reparametrized(const PLFamilyView& view, const PLFunction& psi) {
    PLFamilyView out;
    for (const auto& e : view) out.push_back({e.id, e.fn.compose(psi), e.exact});
    return out;
}

}  // namespace

TEST_CASE("is_step_isometry: identity, translation, floor mismatch") {
    PLFamilyView F = sampled_normalized_family(1101, 6);
    REQUIRE(!F.empty());
    CHECK(is_step_isometry(F, F).ok);

    PLFamilyView shifted;
    for (const auto& e : F) shifted.push_back({e.id, e.fn.add_constant(Rational(1, 3)), true});
    CHECK(is_step_isometry(F, shifted).ok);

    PLFamilyView A{cst(0, Rational(0)), cst(1, Rational(23, 10))};
    PLFamilyView B{cst(0, Rational(0)), cst(1, Rational(19, 10))};
    SIResult r = is_step_isometry(A, B);
    CHECK_FALSE(r.ok);
    CHECK(r.floor_left == 2);
    CHECK(r.floor_right == 1);
}

TEST_CASE("check_order_preserving: constants and a broken order") {
    PLFamilyView F{cst(0, Rational(0)), cst(1, Rational(1, 2))};
    CHECK(check_order_preserving(F, F).ok);

    // Images swap the remainder order.
    PLFamilyView G{cst(0, Rational(2, 5)), cst(1, Rational(1, 5))};
    OPResult r = check_order_preserving(F, G);
    CHECK_FALSE(r.ok);
    CHECK(!r.detail.empty());
}

TEST_CASE("check_order_preserving: mismatched interval systems error") {
    PLFamilyView F{cst(0, Rational(0)), entry(1, PLFunction::line(Rational(1, 2), Rational(3, 2)))};
    PLFamilyView G{cst(0, Rational(0)), cst(1, Rational(1, 2))};
    OPResult r = check_order_preserving(F, G);
    CHECK_FALSE(r.ok);
    CHECK(r.detail.find("cardinality") != std::string::npos);
}

TEST_CASE("order preservation implies step isometry on reparametrized families") {
    int done = 0;
    for (std::uint64_t seed = 0; done < 25; ++seed) {
        PLFamilyView F = sampled_normalized_family(1200 + seed, 5);
        if (F.empty()) continue;
        PLFamilyView G = reparametrized(F, random_reparam(1300 + seed));
        OPResult op = check_order_preserving(F, G);
        REQUIRE(op.ok);
        CHECK(is_step_isometry(F, G).ok);
        ++done;
    }
}

TEST_CASE("check_suitable_matching: identity and shape mismatch") {
    FamilySpec spec{FuncKind::bm, 4, 8181, 7};
    FunctionFamily fam = sample_family(spec);
    auto view = normalize_to_zero(render_family(fam));
    LargGraph g = build_larg(fam, 0.5, 5);
    SMResult r = check_suitable_matching(view, view, g, g);
    CHECK(r.ok);

    // Different crossing structure on the right side.
    PLFamilyView F{cst(0, Rational(0)), entry(1, PLFunction::line(Rational(1, 2), Rational(3, 2)))};
    PLFamilyView G{cst(0, Rational(0)), cst(1, Rational(1, 2))};
    FunctionFamily tiny;
    tiny.spec = {FuncKind::pl, 2, 0};
    tiny.functions.push_back({0, F[0].fn});
    tiny.functions.push_back({1, F[1].fn});
    LargGraph tg = build_larg(tiny, 0.5, 1);
    SMResult r2 = check_suitable_matching(F, G, tg, tg);
    CHECK_FALSE(r2.ok);
    CHECK_FALSE(r2.partition_shape);
}

TEST_CASE("suitable matching implies step isometry on reparametrized brownian families") {
    int done = 0;
    for (std::uint64_t seed = 0; done < 10; ++seed) {
        FamilySpec spec{FuncKind::bm, 4, 9000 + seed, 6};
        FunctionFamily fam = sample_family(spec);
        auto view = normalize_to_zero(render_family(fam));
        try {
            crossing_partition(view);
        } catch (const StructuralError&) {
            continue;
        }
        LargGraph g = build_larg(fam, 0.5, seed);
        PLFamilyView img = reparametrized(view, random_reparam(9500 + seed));
        SMResult sm = check_suitable_matching(view, img, g, g);
        REQUIRE(sm.ok);
        CHECK(is_step_isometry(view, img).ok);
        ++done;
    }
}

TEST_CASE("build_sd_target: constant cases from the construction") {
    PLFamilyView Vn{cst(0, Rational(0))};
    PLFunction g = PLFunction::constant(Rational(1, 2));

    SDTarget t1 = build_sd_target(g, Vn, Vn);
    CHECK(sup_norm_diff(t1.target, PLFunction::constant(Rational(1, 2))) == Rational(0));

    PLFamilyView Wn{cst(0, Rational(1, 4))};
    SDTarget t2 = build_sd_target(g, Vn, Wn);
    CHECK(sup_norm_diff(t2.target, PLFunction::constant(Rational(3, 4))) == Rational(0));
    REQUIRE(t2.brackets.size() == 1);
    CHECK(t2.brackets[0].below_shift == 0);
    CHECK(t2.brackets[0].above_shift == 1);
}

TEST_CASE("build_sd_target: extensions are order preserving") {
    int done = 0;
    for (std::uint64_t seed = 0; done < 15; ++seed) {
        PLFamilyView F = sampled_normalized_family(2200 + seed, 4);
        if (F.empty()) continue;
        PLFunction fresh = pl_difference(sample_pl(2300 + seed, 0), PLFunction::constant(Rational(0)));
        PLFamilyView all = F;
        all.push_back(entry(99, fresh));
        if (!check_transverse(all).ok) continue;

        PLFunction psi = random_reparam(2400 + seed);
        PLFamilyView G = reparametrized(F, psi);
        REQUIRE(check_order_preserving(F, G).ok);

        SDTarget t = build_sd_target(fresh, F, G);
        CHECK(t.sufficient_eps > Rational(0));
        PLFamilyView Fx = all;
        PLFamilyView Gx = G;
        Gx.push_back(entry(99, t.target));
        OPResult op = check_order_preserving(Fx, Gx);
        CHECK(op.ok);
        CHECK(is_step_isometry(Fx, Gx).ok);
        ++done;
    }
}

TEST_CASE("build_sd_target: target sits inside its bracket tube") {
    int done = 0;
    for (std::uint64_t seed = 0; done < 10; ++seed) {
        PLFamilyView F = sampled_normalized_family(2600 + seed, 4);
        if (F.empty()) continue;
        PLFunction fresh =
            pl_difference(sample_pl(2700 + seed, 0), PLFunction::constant(Rational(0)));
        PLFamilyView all = F;
        all.push_back(entry(99, fresh));
        if (!check_transverse(all).ok) continue;
        SDTarget t = build_sd_target(fresh, F, F);
        for (const auto& br : t.brackets) {
            Rational mid = (br.lo + br.hi) / Rational(2);
            Rational below = F[br.below_member].fn.eval(mid) + Rational(br.below_shift);
            Rational above = F[br.above_member].fn.eval(mid) + Rational(br.above_shift);
            Rational v = t.target.eval(mid);
            CHECK(below <= v);
            CHECK(v <= above);
        }
        ++done;
    }
}

TEST_CASE("build_icd_target: midpoint rule with no crossings") {
    PLFamilyView Fn{cst(0, Rational(0)), cst(1, Rational(53, 10))};
    PLFamilyView Gn{cst(0, Rational(0)), cst(1, Rational(27, 5))};
    PLFunction f = PLFunction::constant(Rational(2, 5));
    ICDTarget t = build_icd_target(f, Fn, Gn);
    CHECK(t.cells.empty());
    // Bounding translates on the image side: 27/5 - 5 = 2/5 and 0 + 1.
    CHECK(sup_norm_diff(t.target, PLFunction::constant(Rational(7, 10))) == Rational(0));
    CHECK(t.delta > Rational(0));
}

TEST_CASE("build_icd_target: crossing cells follow the midpoint interpolation") {
    PLFamilyView Fn{cst(0, Rational(0)), cst(1, Rational(21, 5))};
    PLFunction f = PLFunction::line(Rational(1, 2), Rational(3, 2));
    ICDTarget t = build_icd_target(f, Fn, Fn);
    // f crosses the zero member at 1/2 (offset 1) and the far constant's
    // minus-three translate at 7/10; both land in the single open region,
    // placed at [1/5,2/5] and [3/5,4/5].
    REQUIRE(t.cells.size() == 2);
    CHECK(t.cells[0].dst_lo == Rational(1, 5));
    CHECK(t.cells[0].dst_hi == Rational(2, 5));
    CHECK(t.cells[0].type == RunType::below_above);
    CHECK(t.cells[1].dst_lo == Rational(3, 5));
    CHECK(t.cells[1].dst_hi == Rational(4, 5));

    // The target reproduces the crossing pattern: inside each placed cell
    // it crosses exactly the translate the source crosses, nothing else.
    for (const auto& cell : t.cells) {
        int crossed = cell.src_ids.second;
        for (const auto& e : Fn) {
            auto cs = crossings(t.target, e.fn);
            long long inside = 0;
            for (const auto& c : cs)
                if (cell.dst_lo <= c.x && c.x_end <= cell.dst_hi) ++inside;
            if (e.id == crossed)
                CHECK(inside >= 1);
            else
                CHECK(inside == 0);
        }
    }

    // Type <> endpoints: midpoint below at the left end, midpoint above at
    // the right end, spans constant in between.
    CHECK(t.target.eval(Rational(0)) == Rational(3, 5));
    CHECK(t.target.eval(Rational(1, 5)) == Rational(3, 5));
    CHECK(t.target.eval(Rational(2, 5)) == Rational(11, 10));
    CHECK(t.target.eval(Rational(3, 5)) == Rational(11, 10));
    CHECK(t.target.eval(Rational(4, 5)) == Rational(8, 5));
    CHECK(t.target.eval(Rational(1)) == Rational(8, 5));
    CHECK(t.delta > Rational(0));
}

TEST_CASE("build_icd_target: type << cell peaks at the midpoint") {
    PLFamilyView Fn{cst(0, Rational(0)), cst(1, Rational(21, 5))};
    // Up through level 1 and back down (peak 9/8 stays clear of the other
    // member's translates): crossings at 2/5 and 3/5, one cell.
    PLFunction f = PLFunction({{Rational(0), Rational(1, 2)},
                               {Rational(1, 2), Rational(9, 8)},
                               {Rational(1), Rational(1, 2)}});
    ICDTarget t = build_icd_target(f, Fn, Fn);
    REQUIRE(t.cells.size() == 1);
    CHECK(t.cells[0].type == RunType::below_below);
    CHECK(t.cells[0].src_lo == Rational(2, 5));
    CHECK(t.cells[0].src_hi == Rational(3, 5));
    Rational lo = t.cells[0].dst_lo, hi = t.cells[0].dst_hi;
    Rational gamma = (lo + hi) / Rational(2);
    // m-below = 3/5 and m-above = 11/10 as in the <> fixture.
    CHECK(t.target.eval(lo) == Rational(3, 5));
    CHECK(t.target.eval(gamma) == Rational(11, 10));
    CHECK(t.target.eval(hi) == Rational(3, 5));
}

TEST_CASE("build_icd_target: extensions suitably match within delta") {
    // Perturbing the target by less than delta keeps the extended families
    // suitably matched (graph edges aside).
    PLFamilyView Fn{cst(0, Rational(0)), cst(1, Rational(21, 5))};
    PLFunction f = PLFunction::line(Rational(1, 2), Rational(3, 2));
    ICDTarget t = build_icd_target(f, Fn, Fn);
    REQUIRE(t.delta > Rational(0));

    FunctionFamily famF;
    famF.spec = {FuncKind::pl, 3, 0};
    famF.functions.push_back({0, Fn[0].fn});
    famF.functions.push_back({1, Fn[1].fn});
    famF.functions.push_back({2, f});
    LargGraph gF = build_larg(famF, 0.5, 3);

    PLFunction wiggle = t.target.add_constant(t.delta / Rational(3));
    FunctionFamily famG = famF;
    famG.functions[2] = {2, wiggle};
    LargGraph gG = build_larg(famG, 0.5, 3);

    PLFamilyView Fx = Fn;
    Fx.push_back(entry(2, f));
    PLFamilyView Gx = Fn;
    Gx.push_back(entry(2, wiggle));
    SMResult sm = check_suitable_matching(Fx, Gx, gF, gG);
    CHECK(sm.values_at_zero);
    CHECK(sm.partition_shape);
    CHECK(sm.crossing_pairs);
    CHECK(sm.circular_orders);
    CHECK(is_step_isometry(Fx, Gx).ok);
}
