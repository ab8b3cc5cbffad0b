#include "cgm/lpp.hpp"

#include <algorithm>
#include <cmath>

namespace cgm {

LppTable forward_lpp(const WeightField& weights, Site base, LatticeWindow window) {
    return forward_lpp_with([&](Site s) { return weights(s); }, base, window);
}

LppTable backward_lpp(const WeightField& weights, Site terminal, LatticeWindow window) {
    return backward_lpp_with([&](Site s) { return weights(s); }, terminal, window);
}

GeodesicPath backtrack_geodesic(const LppTable& table, Site from, Site to, int64_t* tie_count) {
    if (table.orient != Orientation::Forward)
        throw std::domain_error("backtrack_geodesic: forward table required");
    if (!leq(from, to))
        throw std::domain_error("backtrack_geodesic: need from <= to");
    if (!table.window.contains(from) || !table.window.contains(to))
        throw std::domain_error("backtrack_geodesic: endpoints must lie in the table window");

    std::vector<Site> rev{to};
    std::vector<Step> rev_steps;
    Site cur = to;
    while (cur != from) {
        const bool can_left = cur.x1 > from.x1;
        const bool can_down = cur.x2 > from.x2;
        Step s;
        if (can_left && can_down) {
            const double a = table.values(cur - e1);
            const double b = table.values(cur - e2);
            if (a == b && tie_count) ++*tie_count;
            s = a >= b ? Step::E1 : Step::E2; // ties toward e1
        } else {
            s = can_left ? Step::E1 : Step::E2;
        }
        cur = cur - step_vector(s);
        rev.push_back(cur);
        rev_steps.push_back(s);
    }
    GeodesicPath p;
    p.sites.assign(rev.rbegin(), rev.rend());
    p.steps.assign(rev_steps.rbegin(), rev_steps.rend());
    return p;
}

BruteForceResult brute_force_lpp(const WeightField& weights, Site x, Site y) {
    return brute_force_lpp_with([&](Site s) { return weights(s); }, x, y);
}

double shape_function(double xi1, double xi2) {
    if (xi1 < 0.0 || xi2 < 0.0) throw std::domain_error("shape_function: negative coordinate");
    const double r = std::sqrt(xi1) + std::sqrt(xi2);
    return r * r;
}

std::pair<double, double> shape_gradient(double xi1, double xi2) {
    if (!(xi1 > 0.0) || !(xi2 > 0.0))
        throw std::domain_error("shape_gradient: coordinates must be positive");
    return {1.0 + std::sqrt(xi2 / xi1), 1.0 + std::sqrt(xi1 / xi2)};
}

MonotonicityReport check_planar_monotonicity(const WeightField& weights, Site x, Site y, Site v,
                                             LatticeWindow window, double slack) {
    if (!leq(x, v - e1) || !leq(y, v - e2))
        throw std::domain_error("check_planar_monotonicity: need x <= v-e1 and y <= v-e2");
    if (!window.contains(x) || !window.contains(y) || !window.contains(v + e1 + e2))
        throw std::domain_error("check_planar_monotonicity: window must contain x, y and v+e1+e2");

    // G(., v), G(., v+e1), G(., v+e2) from three backward sweeps over
    // sub-windows sharing the weights.
    const auto table_for = [&](Site term) {
        return backward_lpp(weights, term, LatticeWindow(window.lo, term));
    };
    const LppTable gv = table_for(v);
    const LppTable gv1 = table_for(v + e1);
    const LppTable gv2 = table_for(v + e2);

    const auto incr1 = [&](const LppTable& t, Site s) { return t.values(s) - t.values(s + e1); };
    const auto incr2 = [&](const LppTable& t, Site s) { return t.values(s) - t.values(s + e2); };

    MonotonicityReport r;
    r.i_v = incr1(gv, x);
    r.i_ve1 = incr1(gv1, x);
    r.i_ve2 = incr1(gv2, x);
    r.j_v = incr2(gv, y);
    r.j_ve1 = incr2(gv1, y);
    r.j_ve2 = incr2(gv2, y);
    r.pass = r.i_ve2 >= r.i_v - slack && r.i_v >= r.i_ve1 - slack && r.j_ve2 <= r.j_v + slack &&
             r.j_v <= r.j_ve1 + slack;
    return r;
}

} // namespace cgm
