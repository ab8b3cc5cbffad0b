#pragma once

#include <functional>
#include <limits>
#include <utility>

#include "cgm/lattice.hpp"
#include "cgm/rng.hpp"

namespace cgm {

// Out-of-window predecessors: most-negative finite value, never NaN.
inline constexpr double kNoPath = std::numeric_limits<double>::lowest();

enum class Orientation { Forward, Backward };

// Last-passage values over a rectangle.
//   Forward:  value(x) = G(base, x), base = window.lo.
//   Backward: value(x) = G(x, terminal), terminal = window.hi.
// Site weights at both endpoints are included in G.
struct LppTable {
    Site base; // window.lo for forward, window.hi for backward
    Orientation orient = Orientation::Forward;
    LatticeWindow window;
    Grid values;

    double at(Site s) const { return values.at_checked(s); }
};

// Max-plus recursion value(x) = w(x) + max(value(x-e1), value(x-e2)) filled
// upward from base = window.lo.
template <class WeightFn>
LppTable forward_lpp_with(WeightFn&& w, Site base, LatticeWindow window) {
    if (base != window.lo)
        throw std::domain_error("forward_lpp: base must be window.lo");
    LppTable t{base, Orientation::Forward, window, Grid(window)};
    for (int64_t x2 = window.lo.x2; x2 <= window.hi.x2; ++x2) {
        for (int64_t x1 = window.lo.x1; x1 <= window.hi.x1; ++x1) {
            const Site x{x1, x2};
            const double left = x1 > window.lo.x1 ? t.values(x - e1) : kNoPath;
            const double down = x2 > window.lo.x2 ? t.values(x - e2) : kNoPath;
            const double best = std::max(left, down);
            t.values(x) = w(x) + (best == kNoPath ? 0.0 : best);
        }
    }
    return t;
}

// value(x) = w(x) + max(value(x+e1), value(x+e2)) filled downward from
// terminal = window.hi; value(x) = G(x, terminal).
template <class WeightFn>
LppTable backward_lpp_with(WeightFn&& w, Site terminal, LatticeWindow window) {
    if (terminal != window.hi)
        throw std::domain_error("backward_lpp: terminal must be window.hi");
    LppTable t{terminal, Orientation::Backward, window, Grid(window)};
    for (int64_t x2 = window.hi.x2; x2 >= window.lo.x2; --x2) {
        for (int64_t x1 = window.hi.x1; x1 >= window.lo.x1; --x1) {
            const Site x{x1, x2};
            const double right = x1 < window.hi.x1 ? t.values(x + e1) : kNoPath;
            const double up = x2 < window.hi.x2 ? t.values(x + e2) : kNoPath;
            const double best = std::max(right, up);
            t.values(x) = w(x) + (best == kNoPath ? 0.0 : best);
        }
    }
    return t;
}

LppTable forward_lpp(const WeightField& weights, Site base, LatticeWindow window);
LppTable backward_lpp(const WeightField& weights, Site terminal, LatticeWindow window);

// Argmax path between two sites of a forward table. Walks back from `to`
// taking the larger-valued predecessor; exact float ties go to e1.
// `tie_count`, when given, accumulates the number of exact ties met.
GeodesicPath backtrack_geodesic(const LppTable& table, Site from, Site to,
                                int64_t* tie_count = nullptr);

struct BruteForceResult {
    double value = 0.0;
    GeodesicPath path;
    int64_t paths_enumerated = 0;
};

inline constexpr int64_t kBruteForceBound = 24;

// Exhaustive maximum over all C(m+n, m) up-right paths from x to y.
// Ties resolve to the lexicographically e1-first path. |y-x|_1 is capped at
// kBruteForceBound; larger calls are refused.
template <class WeightFn>
BruteForceResult brute_force_lpp_with(WeightFn&& w, Site x, Site y) {
    if (!leq(x, y)) throw std::domain_error("brute_force_lpp: need x <= y");
    if (l1_dist(x, y) > kBruteForceBound)
        throw std::domain_error("brute_force_lpp: |y-x|_1 exceeds enumeration bound " +
                                std::to_string(kBruteForceBound));
    BruteForceResult best;
    best.value = kNoPath;
    std::vector<Step> steps;
    std::vector<Site> sites{x};
    double acc = w(x);

    // depth-first, e1 before e2: paths are visited in e1-first lexicographic
    // order, so keeping strict improvements yields the e1-first argmax.
    std::function<void()> recurse = [&]() {
        const Site cur = sites.back();
        if (cur == y) {
            ++best.paths_enumerated;
            if (acc > best.value) {
                best.value = acc;
                best.path.sites = sites;
                best.path.steps = steps;
            }
            return;
        }
        if (cur.x1 < y.x1) {
            sites.push_back(cur + e1);
            steps.push_back(Step::E1);
            acc += w(cur + e1);
            recurse();
            acc -= w(cur + e1);
            steps.pop_back();
            sites.pop_back();
        }
        if (cur.x2 < y.x2) {
            sites.push_back(cur + e2);
            steps.push_back(Step::E2);
            acc += w(cur + e2);
            recurse();
            acc -= w(cur + e2);
            steps.pop_back();
            sites.pop_back();
        }
    };
    recurse();
    return best;
}

BruteForceResult brute_force_lpp(const WeightField& weights, Site x, Site y);

// Law-of-large-numbers limit of G(0, floor(N xi))/N and its gradient.
double shape_function(double xi1, double xi2);
std::pair<double, double> shape_gradient(double xi1, double xi2);

// Increment orderings in the terminal point, checked on one realization.
//   I(x,v) = G(x,v) - G(x+e1,v) must decrease when v moves by e1 and
//   increase when v moves by e2; J mirrors with the inequalities reversed.
struct MonotonicityReport {
    bool pass = false;
    // I(x, v+e2) >= I(x, v) >= I(x, v+e1)
    double i_ve2 = 0.0, i_v = 0.0, i_ve1 = 0.0;
    // J(y, v+e2) <= J(y, v) <= J(y, v+e1)
    double j_ve2 = 0.0, j_v = 0.0, j_ve1 = 0.0;
};

// `slack` absorbs roundoff between the three independently built tables.
MonotonicityReport check_planar_monotonicity(const WeightField& weights, Site x, Site y, Site v,
                                             LatticeWindow window, double slack = 1e-9);

} // namespace cgm
