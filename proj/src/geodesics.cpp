#include "cgm/geodesics.hpp"

#include <algorithm>
#include <cmath>

namespace cgm {

double ArrowField::e1_frequency() const {
    int64_t n1 = 0;
    for (uint8_t d : dir_)
        if (d == 0) ++n1;
    return static_cast<double>(n1) / static_cast<double>(dir_.size());
}

ArrowField arrow_field(const BusemannField& field) {
    const LatticeWindow tw = field.trusted();
    ArrowField a(tw, field.terminal());
    int64_t ties = 0;
    for (int64_t x2 = tw.lo.x2; x2 <= tw.hi.x2; ++x2)
        for (int64_t x1 = tw.lo.x1; x1 <= tw.hi.x1; ++x1) {
            const Site x{x1, x2};
            const double i = field.b1(x), j = field.b2(x);
            if (i == j) ++ties;
            a.set(x, i <= j ? Step::E1 : Step::E2);
        }
    a.set_tie_count(ties);
    return a;
}

GeodesicPath follow_geodesic(const ArrowField& arrows, Site x, int64_t max_steps) {
    if (!arrows.window().contains(x))
        throw std::domain_error("follow_geodesic: start outside the trusted window");
    GeodesicPath p;
    p.sites.push_back(x);
    Site cur = x;
    for (int64_t k = 0; k < max_steps; ++k) {
        const Step s = arrows.arrow(cur);
        const Site nxt = cur + step_vector(s);
        if (!arrows.window().contains(nxt)) break;
        p.sites.push_back(nxt);
        p.steps.push_back(s);
        cur = nxt;
    }
    return p;
}

SouthwestArrowField southwest_arrows(const BusemannField& field) {
    const LatticeWindow tw = field.trusted();
    const LatticeWindow sw{tw.lo + e1 + e2, tw.hi};
    SouthwestArrowField a(sw, field.terminal());
    for (int64_t x2 = sw.lo.x2; x2 <= sw.hi.x2; ++x2)
        for (int64_t x1 = sw.lo.x1; x1 <= sw.hi.x1; ++x1) {
            const Site x{x1, x2};
            // B(x-e1, x) vs B(x-e2, x); ties down-left to -e1
            a.set(x, field.b1(x - e1) <= field.b2(x - e2) ? Step::E1 : Step::E2);
        }
    return a;
}

std::vector<Site> follow_southwest(const SouthwestArrowField& arrows, Site x, int64_t max_steps) {
    if (!arrows.window().contains(x))
        throw std::domain_error("follow_southwest: start outside the southwest window");
    std::vector<Site> sites{x};
    Site cur = x;
    for (int64_t k = 0; k < max_steps; ++k) {
        const Site nxt = cur - step_vector(arrows.arrow(cur));
        if (!arrows.window().contains(nxt)) break;
        sites.push_back(nxt);
        cur = nxt;
    }
    return sites;
}

namespace {

// 2*x1+k fits 32 bits for every window this artifact builds
uint64_t packed_edge_key(Site a, Step k) {
    const auto hi = static_cast<uint32_t>(2 * a.x1 + static_cast<int64_t>(k));
    const auto lo = static_cast<uint32_t>(a.x2);
    return (static_cast<uint64_t>(hi) << 32) | lo;
}

} // namespace

DualTreeResult dual_tree(const ArrowField& arrows) {
    DualTreeResult r{DualArrowField(arrows), {}};
    const LatticeWindow& w = arrows.window();
    for (int64_t x2 = w.lo.x2; x2 <= w.hi.x2; ++x2)
        for (int64_t x1 = w.lo.x1; x1 <= w.hi.x1; ++x1) {
            const Site x{x1, x2};
            const Step s = arrows.arrow(x);
            r.edges.primal.insert(packed_edge_key(x, s));
            // dual out-edge of x+(1/2,1/2) descends opposite to the primal arrow
            r.edges.dual.insert(packed_edge_key(x, r.dual.arrow(x)));
        }
    return r;
}

XorDualityReport check_xor_duality(const ArrowField& arrows, const GeodesicTreeEdges& edges) {
    XorDualityReport rep;
    const LatticeWindow& w = arrows.window();
    for (int64_t x2 = w.lo.x2 + 1; x2 <= w.hi.x2; ++x2) {
        for (int64_t x1 = w.lo.x1 + 1; x1 <= w.hi.x1; ++x1) {
            const Site x{x1, x2};
            for (const Step k : {Step::E1, Step::E2}) {
                if (!w.contains(x + step_vector(k))) continue;
                const bool in_primal = edges.primal.count(packed_edge_key(x, k)) > 0;
                const Step other = k == Step::E1 ? Step::E2 : Step::E1;
                const bool dual_in = edges.dual.count(packed_edge_key(x, other)) > 0;
                ++rep.edges_checked;
                if (in_primal == dual_in) ++rep.violations;
            }
        }
    }
    rep.pass = rep.edges_checked > 0 && rep.violations == 0;
    return rep;
}

NonCrossingReport check_non_crossing(const ArrowField& arrows, int64_t pairs, uint64_t seed) {
    NonCrossingReport rep;
    const LatticeWindow& w = arrows.window();
    const int64_t max_steps = w.width() + w.height();
    for (int64_t p = 0; p < pairs; ++p) {
        const auto r = [&](int64_t lane, int64_t span) {
            return static_cast<int64_t>(rng::site_hash(seed, Site{p, lane}) %
                                        static_cast<uint64_t>(span));
        };
        const Site start{w.lo.x1 + r(0, w.width()), w.lo.x2 + r(1, w.height())};
        const Site dual_start{w.lo.x1 + r(2, w.width()), w.lo.x2 + r(3, w.height())};

        const GeodesicPath prim = follow_geodesic(arrows, start, max_steps);

        // dual walk on base sites: z = y + (1/2,1/2) steps by -e_{arrow(y)}
        std::unordered_set<uint64_t> dual_edges;
        Site y = dual_start;
        while (w.contains(y)) {
            const Step s = arrows.arrow(y);
            dual_edges.insert(packed_edge_key(y, s));
            y = y - step_vector(s);
        }

        bool crossed = false;
        for (size_t k = 0; k < prim.steps.size(); ++k) {
            const Step s = prim.steps[k];
            const Step other = s == Step::E1 ? Step::E2 : Step::E1;
            // primal edge {a, a+e_s} crosses exactly the dual out-edge keyed (a, other)
            if (dual_edges.count(packed_edge_key(prim.sites[k], other)) > 0) {
                crossed = true;
                break;
            }
        }
        ++rep.pairs_checked;
        if (crossed) ++rep.crossings;
    }
    rep.pass = rep.crossings == 0;
    return rep;
}

CoalescenceResult coalescence(const ArrowField& arrows, Site x, Site y) {
    const LatticeWindow& w = arrows.window();
    if (!w.contains(x) || !w.contains(y))
        throw std::domain_error("coalescence: starts must lie in the trusted window");
    Site a = x, b = y;
    const auto level = [](Site s) { return s.x1 + s.x2; };
    while (true) {
        if (a == b) {
            return {a, std::max(l1_dist(a, x), l1_dist(a, y))};
        }
        Site& lower = level(a) <= level(b) ? a : b;
        const Site nxt = lower + step_vector(arrows.arrow(lower));
        if (!w.contains(nxt)) return {std::nullopt, std::max(l1_dist(a, x), l1_dist(b, y))};
        lower = nxt;
    }
}

char point_class_code(PointClass c) {
    switch (c) {
        case PointClass::Source: return 's';
        case PointClass::Coalescence: return 'c';
        case PointClass::Horizontal: return 'h';
        case PointClass::Vertical: return 'v';
    }
    return '?';
}

PointClass classify_site(Step at_z_minus_e1, Step at_z_minus_e2) {
    if (at_z_minus_e1 == Step::E2 && at_z_minus_e2 == Step::E1) return PointClass::Source;
    if (at_z_minus_e1 == Step::E1 && at_z_minus_e2 == Step::E2) return PointClass::Coalescence;
    if (at_z_minus_e1 == Step::E1) return PointClass::Horizontal;
    return PointClass::Vertical;
}

std::vector<PointClass> classify_points(const ArrowField& arrows, int64_t diag_sum, int64_t j_lo,
                                        int64_t j_hi) {
    std::vector<PointClass> out;
    const LatticeWindow& w = arrows.window();
    for (int64_t j = j_lo; j <= j_hi; ++j) {
        const Site z{j, diag_sum - j};
        if (!w.contains(z - e1) || !w.contains(z - e2))
            throw std::domain_error("classify_points: slice neighbor outside the trusted window");
        out.push_back(classify_site(arrows.arrow(z - e1), arrows.arrow(z - e2)));
    }
    return out;
}

BackwardCluster backward_cluster(const ArrowField& arrows, Site x) {
    const LatticeWindow& w = arrows.window();
    if (!w.contains(x)) throw std::domain_error("backward_cluster: root outside window");
    BackwardCluster c;
    std::vector<Site> stack{x};
    c.sites.push_back(x);
    while (!stack.empty()) {
        const Site cur = stack.back();
        stack.pop_back();
        for (const Step s : {Step::E1, Step::E2}) {
            const Site child = cur - step_vector(s);
            if (!w.contains(child)) {
                c.truncated = true;
                continue;
            }
            if (arrows.arrow(child) == s) {
                c.sites.push_back(child);
                stack.push_back(child);
            }
        }
    }
    return c;
}

GeodesicIdentityReport check_geodesic_identities(const BusemannField& field, int64_t paths,
                                                 int64_t path_steps, uint64_t seed) {
    GeodesicIdentityReport rep;
    const ArrowField arrows = arrow_field(field);
    const SouthwestArrowField sw = southwest_arrows(field);
    const LatticeWindow tw = arrows.window();

    // weight identity at every trusted site
    for (int64_t x2 = tw.lo.x2; x2 <= tw.hi.x2; ++x2)
        for (int64_t x1 = tw.lo.x1; x1 <= tw.hi.x1; ++x1) {
            const Site x{x1, x2};
            const double bstep = field.b(x, x + step_vector(arrows.arrow(x)));
            rep.max_arrow_weight_residual =
                std::max(rep.max_arrow_weight_residual, std::abs(field.weights()(x) - bstep));
        }

    // dual identity at every southwest site
    const LatticeWindow& sww = sw.window();
    for (int64_t x2 = sww.lo.x2; x2 <= sww.hi.x2; ++x2)
        for (int64_t x1 = sww.lo.x1; x1 <= sww.hi.x1; ++x1) {
            const Site x{x1, x2};
            const double xval = std::min(field.b1(x - e1), field.b2(x - e2));
            const double bstep = field.b(x - step_vector(sw.arrow(x)), x);
            rep.max_dual_weight_residual =
                std::max(rep.max_dual_weight_residual, std::abs(xval - bstep));
        }

    // geodesic vs independent forward DP
    for (int64_t p = 0; p < paths; ++p) {
        const auto r = [&](int64_t lane, int64_t span) {
            return static_cast<int64_t>(rng::site_hash(seed, Site{p, lane}) %
                                        static_cast<uint64_t>(span));
        };
        const Site start{tw.lo.x1 + r(0, std::max<int64_t>(tw.width() / 2, 1)),
                         tw.lo.x2 + r(1, std::max<int64_t>(tw.height() / 2, 1))};
        const GeodesicPath path = follow_geodesic(arrows, start, path_steps);
        if (path.sites.size() < 2) continue;
        const Site end = path.sites.back();
        const LppTable fwd =
            forward_lpp(field.weights(), start, LatticeWindow(start, end));
        double acc = 0.0;
        for (size_t k = 0; k < path.sites.size(); ++k) {
            const Site s = path.sites[k];
            acc += field.weights()(s);
            const double lhs = fwd.values(s);
            const double rhs = field.b(start, s) + field.weights()(s);
            rep.max_geodesic_lpp_residual =
                std::max(rep.max_geodesic_lpp_residual, std::abs(lhs - rhs));
        }
        rep.max_geodesic_lpp_residual =
            std::max(rep.max_geodesic_lpp_residual, std::abs(acc - fwd.values(end)));
        ++rep.paths_checked;
    }

    rep.pass = rep.max_arrow_weight_residual < 1e-9 && rep.max_dual_weight_residual < 1e-9 &&
               rep.max_geodesic_lpp_residual < 1e-9;
    return rep;
}

ReflectionReport check_reflection_identity(const BusemannField& field) {
    ReflectionReport rep;
    const SouthwestArrowField sw = southwest_arrows(field);
    const LatticeWindow& w = sw.window();
    for (int64_t x2 = w.lo.x2; x2 <= w.hi.x2; ++x2)
        for (int64_t x1 = w.lo.x1; x1 <= w.hi.x1; ++x1) {
            const Site x{x1, x2};
            // forward min-rule on the reflected increment family at -x
            const double bt1 = field.b(x - e1, x);
            const double bt2 = field.b(x - e2, x);
            const Step reflected = bt1 <= bt2 ? Step::E1 : Step::E2;
            ++rep.sites_checked;
            if (reflected != sw.arrow(x)) ++rep.mismatches;
        }
    rep.pass = rep.mismatches == 0;
    return rep;
}

OrderingReport check_direction_ordering(double alpha_low, double alpha_high, int64_t N,
                                        uint64_t seed, int64_t extent, int64_t paths) {
    if (!(alpha_low < alpha_high))
        throw std::domain_error("check_direction_ordering: need alpha_low < alpha_high");
    OrderingReport rep;
    // both trusted regions must contain one shared square, so anchor it at
    // the componentwise minimum of the two terminals
    const Site vl = direction_terminal(alpha_low, N);
    const Site vh = direction_terminal(alpha_high, N);
    const int64_t m = std::max<int64_t>(N / 4, 1);
    const Site p{std::min(vl.x1, vh.x1) - m, std::min(vl.x2, vh.x2) - m};
    const Site lo = p - Site{extent, extent};
    const LatticeWindow wl{lo, vl}, wh{lo, vh};
    const BusemannField fl(WeightField(seed, wl), vl, wl, std::min(vl.x1 - p.x1, vl.x2 - p.x2));
    const BusemannField fh(WeightField(seed, wh), vh, wh, std::min(vh.x1 - p.x1, vh.x2 - p.x2));
    const LatticeWindow common{lo, p};
    const double slack = 1e-9;
    for (int64_t x2 = common.lo.x2; x2 <= common.hi.x2; ++x2)
        for (int64_t x1 = common.lo.x1; x1 <= common.hi.x1; ++x1) {
            const Site x{x1, x2};
            ++rep.sites_checked;
            if (fh.b1(x) > fl.b1(x) + slack || fh.b2(x) < fl.b2(x) - slack)
                ++rep.increment_violations;
        }

    const ArrowField al = arrow_field(fl);
    const ArrowField ah = arrow_field(fh);
    for (int64_t p = 0; p < paths; ++p) {
        const auto r = [&](int64_t lane, int64_t span) {
            return static_cast<int64_t>(rng::site_hash(seed ^ 0x5bd1e995, Site{p, lane}) %
                                        static_cast<uint64_t>(span));
        };
        const Site start{common.lo.x1 + r(0, std::max<int64_t>(common.width() / 2, 1)),
                         common.lo.x2 + r(1, std::max<int64_t>(common.height() / 2, 1))};
        if (!al.window().contains(start) || !ah.window().contains(start)) continue;
        const GeodesicPath pl = follow_geodesic(al, start, 4 * m);
        const GeodesicPath ph = follow_geodesic(ah, start, 4 * m);
        const size_t len = std::min(pl.sites.size(), ph.sites.size());
        for (size_t k = 0; k < len; ++k)
            if (ph.sites[k].x1 < pl.sites[k].x1) ++rep.path_violations;
    }
    rep.pass = rep.increment_violations == 0 && rep.path_violations == 0;
    return rep;
}

} // namespace cgm
