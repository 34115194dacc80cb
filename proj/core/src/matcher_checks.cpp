#include <algorithm>
#include <map>
#include <sstream>

#include "larglab/matcher.hpp"

namespace larglab {

SIResult is_step_isometry(const PLFamilyView& F, const PLFamilyView& G) {
    if (F.size() != G.size())
        throw std::invalid_argument("is_step_isometry: views must have equal size");
    SIResult r;
    for (std::size_t i = 0; i < F.size(); ++i) {
        for (std::size_t j = i + 1; j < F.size(); ++j) {
            long long fl = sup_norm_diff(F[i].fn, F[j].fn).floor_ll();
            long long fr = sup_norm_diff(G[i].fn, G[j].fn).floor_ll();
            if (fl != fr) {
                r.ok = false;
                r.left_a = F[i].id;
                r.left_b = F[j].id;
                r.floor_left = fl;
                r.floor_right = fr;
                return r;
            }
        }
    }
    return r;
}

namespace {

// Sorted crossing positions of all pairs of the view, plus {0,1}. Runs
// contribute both endpoints. `finite` is cleared when a run is present.
std::vector<Rational> interval_system(const PLFamilyView& view, bool* finite) {
    std::vector<Rational> xs{Rational(0), Rational(1)};
    if (finite) *finite = true;
    for (std::size_t i = 0; i < view.size(); ++i)
        for (std::size_t j = i + 1; j < view.size(); ++j)
            for (const auto& c : crossings(view[i].fn, view[j].fn)) {
                xs.push_back(c.x);
                if (c.is_run()) {
                    xs.push_back(c.x_end);
                    if (finite) *finite = false;
                }
            }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

// floor(f) constant on the open interval (lo,hi): the interior range must
// sit in [n, n+1). Endpoint values may touch n+1 (the limit is excluded),
// interior nodes may not.
bool floor_constant_inside(const PLFunction& f, const Rational& lo, const Rational& hi) {
    long long n = f.eval((lo + hi) / Rational(2)).floor_ll();
    Rational lo_bound(n), hi_bound(n + 1);
    for (const Rational& v : {f.eval(lo), f.eval(hi)})
        if (v < lo_bound || v > hi_bound) return false;
    for (const auto& p : f.points())
        if (lo < p.x && p.x < hi && (p.y < lo_bound || p.y >= hi_bound)) return false;
    return true;
}

std::string pair_str(int a, int b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace

OPResult check_order_preserving(const PLFamilyView& F, const PLFamilyView& G) {
    if (F.size() != G.size())
        throw std::invalid_argument("check_order_preserving: views must have equal size");
    OPResult r;
    bool finiteF = true, finiteG = true;
    std::vector<Rational> X = interval_system(F, &finiteF);
    std::vector<Rational> Y = interval_system(G, &finiteG);
    if (!finiteF || !finiteG) {
        r.ok = false;
        r.detail = "infinite crossing set (tangent run) in the interval system";
        return r;
    }
    if (X.size() != Y.size()) {
        r.ok = false;
        r.detail = "interval systems differ in cardinality: |X|=" + std::to_string(X.size()) +
                   " |Y|=" + std::to_string(Y.size());
        return r;
    }
    for (std::size_t i = 1; i < X.size(); ++i) {
        Rational mx = (X[i - 1] + X[i]) / Rational(2);
        Rational my = (Y[i - 1] + Y[i]) / Rational(2);
        for (std::size_t k = 0; k < F.size(); ++k) {
            if (!floor_constant_inside(F[k].fn, X[i - 1], X[i]) ||
                !floor_constant_inside(G[k].fn, Y[i - 1], Y[i])) {
                r.ok = false;
                r.detail = "integer part of member " + std::to_string(F[k].id) +
                           " not constant on interval " + std::to_string(i);
                return r;
            }
            if (F[k].fn.eval(mx).floor_ll() != G[k].fn.eval(my).floor_ll()) {
                r.ok = false;
                r.detail = "integer parts differ for member " + std::to_string(F[k].id) +
                           " on interval " + std::to_string(i);
                return r;
            }
        }
        for (std::size_t a = 0; a < F.size(); ++a) {
            for (std::size_t b = a + 1; b < F.size(); ++b) {
                Ord left = fractional_order(F[a].fn, F[b].fn, mx);
                Ord right = fractional_order(G[a].fn, G[b].fn, my);
                if (left == Ord::equal || right == Ord::equal) {
                    r.ok = false;
                    r.detail = "crossing of pair " + pair_str(F[a].id, F[b].id) +
                               " inside interval " + std::to_string(i);
                    return r;
                }
                if (left != right) {
                    r.ok = false;
                    r.detail = "remainder order of pair " + pair_str(F[a].id, F[b].id) +
                               " flips on interval " + std::to_string(i);
                    return r;
                }
            }
        }
    }
    return r;
}

SMResult check_suitable_matching(const PLFamilyView& F, const PLFamilyView& G,
                                 const LargGraph& g1, const LargGraph& g2) {
    if (F.size() != G.size())
        throw std::invalid_argument("check_suitable_matching: views must have equal size");
    SMResult r;
    std::ostringstream detail;

    // SM1: edges correspond.
    for (std::size_t i = 0; i < F.size(); ++i)
        for (std::size_t j = i + 1; j < F.size(); ++j)
            if (g1.adjacent(F[i].id, F[j].id) != g2.adjacent(G[i].id, G[j].id)) {
                r.edges = false;
                detail << "edge mismatch " << pair_str(F[i].id, F[j].id) << "; ";
                break;
            }

    // SM2: floors and order of the values at 0.
    for (std::size_t i = 0; i < F.size() && r.values_at_zero; ++i) {
        for (std::size_t j = i + 1; j < F.size(); ++j) {
            Rational df = F[i].fn.value_at_zero() - F[j].fn.value_at_zero();
            Rational dg = G[i].fn.value_at_zero() - G[j].fn.value_at_zero();
            if (df.abs().floor_ll() != dg.abs().floor_ll() ||
                (df < Rational(0)) != (dg < Rational(0)) ||
                (df == Rational(0)) != (dg == Rational(0))) {
                r.values_at_zero = false;
                detail << "value-at-0 mismatch " << pair_str(F[i].id, F[j].id) << "; ";
                break;
            }
        }
    }

    // SM3: partition shape, crossing-pair correspondence, circular orders.
    std::map<int, std::size_t> posF, posG;
    for (std::size_t i = 0; i < F.size(); ++i) {
        posF[F[i].id] = i;
        posG[G[i].id] = i;
    }
    try {
        CrossingPartition pf = crossing_partition(F);
        CrossingPartition pg = crossing_partition(G);
        if (pf.cells.size() != pg.cells.size()) {
            r.partition_shape = false;
            detail << "partition sizes " << pf.cells.size() << " vs " << pg.cells.size() << "; ";
        } else {
            for (std::size_t c = 0; c < pf.cells.size(); ++c) {
                const auto& a = pf.cells[c];
                const auto& b = pg.cells[c];
                if (a.closed != b.closed) {
                    r.partition_shape = false;
                    detail << "cell " << c << " open/closed mismatch; ";
                    break;
                }
                if (!a.closed) continue;
                // The pair crossing in cell c must correspond under the pairing.
                std::size_t ia = posF.at(a.ids.first), ja = posF.at(a.ids.second);
                std::size_t ib = posG.at(b.ids.first), jb = posG.at(b.ids.second);
                if (std::minmax(ia, ja) != std::minmax(ib, jb)) {
                    r.crossing_pairs = false;
                    detail << "cell " << c << " crossing pair mismatch; ";
                }
            }
            if (r.partition_shape) {
                for (std::size_t c = 0; c < pf.cells.size() && r.circular_orders; ++c) {
                    const auto& a = pf.cells[c];
                    const auto& b = pg.cells[c];
                    Rational mf = (a.lo + a.hi) / Rational(2);
                    Rational mg = (b.lo + b.hi) / Rational(2);
                    for (std::size_t u = 0; u < F.size() && r.circular_orders; ++u)
                        for (std::size_t v = u + 1; v < F.size() && r.circular_orders; ++v)
                            for (std::size_t w = v + 1; w < F.size(); ++w) {
                                if (a.closed) {
                                    // Skip triples containing the crossing pair.
                                    std::size_t ia = posF.at(a.ids.first);
                                    std::size_t ja = posF.at(a.ids.second);
                                    int hits = (u == ia || u == ja) + (v == ia || v == ja) +
                                               (w == ia || w == ja);
                                    if (hits >= 2) continue;
                                }
                                int of = circular_orientation(F[u].fn.eval(mf).frac(),
                                                              F[v].fn.eval(mf).frac(),
                                                              F[w].fn.eval(mf).frac());
                                int og = circular_orientation(G[u].fn.eval(mg).frac(),
                                                              G[v].fn.eval(mg).frac(),
                                                              G[w].fn.eval(mg).frac());
                                if (of != og) {
                                    r.circular_orders = false;
                                    detail << "circular order differs on cell " << c << " triple ("
                                           << F[u].id << "," << F[v].id << "," << F[w].id << "); ";
                                    break;
                                }
                            }
                }
            }
        }
    } catch (const StructuralError& e) {
        r.partition_shape = false;
        detail << "partition failed: " << e.what() << "; ";
    }

    r.ok = r.edges && r.values_at_zero && r.partition_shape && r.crossing_pairs &&
           r.circular_orders;
    r.detail = detail.str();
    return r;
}

}  // namespace larglab
