#include "cgm/competition.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace cgm {

RegionMask::RegionMask(const DownRightPath& boundary, LatticeWindow box)
    : box_(box), zone_(static_cast<size_t>(box.area()), Zone::Outside),
      bidx_(static_cast<size_t>(box.area()), -1) {
    boundary.validate();

    // boundary index per site
    std::unordered_map<uint64_t, int32_t> on_boundary;
    for (size_t k = 0; k < boundary.sites.size(); ++k)
        on_boundary[site_key(boundary.sites[k])] = static_cast<int32_t>(k);

    // one (1,1)-diagonal at a time: Minus strictly before the boundary site,
    // Plus strictly after
    const int64_t dmin = box.lo.x1 - box.hi.x2;
    const int64_t dmax = box.hi.x1 - box.lo.x2;
    for (int64_t d = dmin; d <= dmax; ++d) {
        // find the boundary crossing on this diagonal (unique for a down-right path)
        std::optional<Site> cross;
        int32_t cross_idx = -1;
        for (size_t k = 0; k < boundary.sites.size(); ++k) {
            if (boundary.sites[k].x1 - boundary.sites[k].x2 == d) {
                cross = boundary.sites[k];
                cross_idx = static_cast<int32_t>(k);
                break;
            }
        }
        // walk the diagonal within the box
        Site s{std::max(box.lo.x1, box.lo.x2 + d), 0};
        s.x2 = s.x1 - d;
        for (; box_.contains(s); s = s + e1 + e2) {
            const size_t i = static_cast<size_t>(box_.index(s));
            if (!cross) continue; // untouched diagonal stays Outside
            if (s == *cross) {
                zone_[i] = Zone::Boundary;
                bidx_[i] = cross_idx;
            } else if (s.x1 < cross->x1) {
                zone_[i] = Zone::Minus;
            } else {
                zone_[i] = Zone::Plus;
            }
        }
    }
}

BoundaryLpp boundary_lpp_plus(const BusemannField& field, const DualWeightField& dual,
                              const DownRightPath& boundary, LatticeWindow box) {
    const RegionMask mask(boundary, box);
    BoundaryLpp out;
    out.boundary = boundary;
    out.box = box;
    out.plus_side = true;
    out.y0 = boundary.sites.front();
    out.h = Grid(box);
    out.computed.assign(static_cast<size_t>(box.area()), 0);
    out.root.assign(static_cast<size_t>(box.area()), -1);

    const auto idx = [&](Site s) { return static_cast<size_t>(box.index(s)); };

    // boundary values B(y0, y_k)
    for (size_t k = 0; k < boundary.sites.size(); ++k) {
        const Site y = boundary.sites[k];
        if (!box.contains(y)) continue;
        out.h(y) = field.b(out.y0, y);
        out.computed[idx(y)] = 1;
        out.root[idx(y)] = static_cast<int32_t>(k);
    }

    // bulk sweep northeast over the Plus region
    for (int64_t x2 = box.lo.x2; x2 <= box.hi.x2; ++x2) {
        for (int64_t x1 = box.lo.x1; x1 <= box.hi.x1; ++x1) {
            const Site x{x1, x2};
            if (mask.zone(x) != Zone::Plus) continue;
            double best = kNoPath;
            int32_t from = -1;
            for (const Step s : {Step::E1, Step::E2}) {
                const Site p = x - step_vector(s);
                if (!box.contains(p) || !out.computed[idx(p)]) continue;
                const Zone z = mask.zone(p);
                if (z != Zone::Boundary && z != Zone::Plus) continue;
                const double v = out.h(p);
                if (v > best) {
                    best = v;
                    from = out.root[idx(p)];
                } else if (v == best) {
                    ++out.tie_count; // genericity violation; e1-predecessor kept
                }
            }
            if (from < 0) continue; // unreachable from the stored slice
            out.h(x) = dual.x.at_checked(x) + best;
            out.computed[idx(x)] = 1;
            out.root[idx(x)] = from;
        }
    }
    return out;
}

BoundaryLpp boundary_lpp_minus(const WeightField& weights, const BusemannField& field,
                               const DownRightPath& boundary, LatticeWindow box) {
    const RegionMask mask(boundary, box);
    BoundaryLpp out;
    out.boundary = boundary;
    out.box = box;
    out.plus_side = false;
    out.y0 = boundary.sites.front();
    out.h = Grid(box);
    out.computed.assign(static_cast<size_t>(box.area()), 0);
    out.root.assign(static_cast<size_t>(box.area()), -1);

    const auto idx = [&](Site s) { return static_cast<size_t>(box.index(s)); };

    for (size_t k = 0; k < boundary.sites.size(); ++k) {
        const Site y = boundary.sites[k];
        if (!box.contains(y)) continue;
        out.h(y) = field.b(y, out.y0);
        out.computed[idx(y)] = 1;
        out.root[idx(y)] = static_cast<int32_t>(k);
    }

    // bulk sweep southwest over the Minus region
    for (int64_t x2 = box.hi.x2; x2 >= box.lo.x2; --x2) {
        for (int64_t x1 = box.hi.x1; x1 >= box.lo.x1; --x1) {
            const Site x{x1, x2};
            if (mask.zone(x) != Zone::Minus) continue;
            double best = kNoPath;
            int32_t to = -1;
            for (const Step s : {Step::E1, Step::E2}) {
                const Site q = x + step_vector(s);
                if (!box.contains(q) || !out.computed[idx(q)]) continue;
                const Zone z = mask.zone(q);
                if (z != Zone::Boundary && z != Zone::Minus) continue;
                const double v = out.h(q);
                if (v > best) {
                    best = v;
                    to = out.root[idx(q)];
                } else if (v == best) {
                    ++out.tie_count;
                }
            }
            if (to < 0) continue;
            out.h(x) = weights(x) + best;
            out.computed[idx(x)] = 1;
            out.root[idx(x)] = to;
        }
    }
    return out;
}

namespace {

// Does the geodesic of the side in question reach the stored slice inside the
// box?  Plus side: southwest arrows; minus side: forward arrows.
std::vector<uint8_t> slice_reachability(const BoundaryLpp& blpp, const BusemannField& field) {
    const RegionMask mask(blpp.boundary, blpp.box);
    const LatticeWindow& box = blpp.box;
    std::vector<uint8_t> reach(static_cast<size_t>(box.area()), 0); // 0 no, 1 yes
    const auto idx = [&](Site s) { return static_cast<size_t>(box.index(s)); };

    if (blpp.plus_side) {
        const SouthwestArrowField sw = southwest_arrows(field);
        for (int64_t x2 = box.lo.x2; x2 <= box.hi.x2; ++x2)
            for (int64_t x1 = box.lo.x1; x1 <= box.hi.x1; ++x1) {
                const Site x{x1, x2};
                if (mask.zone(x) == Zone::Boundary) {
                    reach[idx(x)] = 1;
                } else if (mask.zone(x) == Zone::Plus) {
                    if (!sw.window().contains(x)) continue;
                    const Site p = x - step_vector(sw.arrow(x));
                    if (box.contains(p)) reach[idx(x)] = reach[idx(p)];
                }
            }
    } else {
        const ArrowField fw = arrow_field(field);
        for (int64_t x2 = box.hi.x2; x2 >= box.lo.x2; --x2)
            for (int64_t x1 = box.hi.x1; x1 >= box.lo.x1; --x1) {
                const Site x{x1, x2};
                if (mask.zone(x) == Zone::Boundary) {
                    reach[idx(x)] = 1;
                } else if (mask.zone(x) == Zone::Minus) {
                    if (!fw.window().contains(x)) continue;
                    const Site q = x + step_vector(fw.arrow(x));
                    if (box.contains(q)) reach[idx(x)] = reach[idx(q)];
                }
            }
    }
    return reach;
}

} // namespace

BoundaryIdentityReport check_boundary_identity(const BoundaryLpp& blpp,
                                               const BusemannField& field) {
    BoundaryIdentityReport rep;
    const std::vector<uint8_t> reach = slice_reachability(blpp, field);
    const LatticeWindow& box = blpp.box;
    const RegionMask mask(blpp.boundary, box);
    const Zone side = blpp.plus_side ? Zone::Plus : Zone::Minus;
    for (int64_t x2 = box.lo.x2; x2 <= box.hi.x2; ++x2)
        for (int64_t x1 = box.lo.x1; x1 <= box.hi.x1; ++x1) {
            const Site x{x1, x2};
            if (mask.zone(x) != side) continue;
            if (!reach[static_cast<size_t>(box.index(x))] || !blpp.has_value(x)) {
                ++rep.sites_excluded;
                continue;
            }
            const double target = blpp.plus_side ? field.b(blpp.y0, x) : field.b(x, blpp.y0);
            rep.max_residual = std::max(rep.max_residual, std::abs(blpp.value(x) - target));
            ++rep.sites_checked;
        }
    rep.pass = rep.sites_checked > 0 && rep.max_residual < 1e-9;
    return rep;
}

BoundaryPathReport check_boundary_paths(const BoundaryLpp& blpp, const BusemannField& field,
                                        int64_t samples, uint64_t seed) {
    BoundaryPathReport rep;
    const std::vector<uint8_t> reach = slice_reachability(blpp, field);
    const LatticeWindow& box = blpp.box;
    const RegionMask mask(blpp.boundary, box);
    const int64_t max_steps = box.width() + box.height();

    // backtracked maximizing path of H, argmax predecessor per step
    const auto backtrack = [&](Site x) {
        std::vector<Site> path{x};
        Site cur = x;
        while (mask.zone(cur) != Zone::Boundary) {
            double best = kNoPath;
            Site pick = cur;
            const auto consider = [&](Site cand) {
                if (!box.contains(cand) || !blpp.has_value(cand)) return;
                const Zone z = mask.zone(cand);
                if (z == Zone::Outside) return;
                if (blpp.plus_side && z == Zone::Minus) return;
                if (!blpp.plus_side && z == Zone::Plus) return;
                if (blpp.value(cand) > best) {
                    best = blpp.value(cand);
                    pick = cand;
                }
            };
            if (blpp.plus_side) {
                consider(cur - e1);
                consider(cur - e2);
            } else {
                consider(cur + e1);
                consider(cur + e2);
            }
            if (pick == cur) break; // dead end; caller skips
            path.push_back(pick);
            cur = pick;
        }
        return path;
    };

    for (int64_t t = 0; t < samples; ++t) {
        const auto r = [&](int64_t lane, int64_t span) {
            return static_cast<int64_t>(rng::site_hash(seed, Site{t, lane}) %
                                        static_cast<uint64_t>(span));
        };
        const Site x{box.lo.x1 + r(0, box.width()), box.lo.x2 + r(1, box.height())};
        const Zone z = mask.zone(x);
        if (blpp.plus_side ? z != Zone::Plus : z != Zone::Minus) continue;
        if (!reach[static_cast<size_t>(box.index(x))] || !blpp.has_value(x)) continue;

        std::vector<Site> expected; // geodesic stopped at the boundary
        if (blpp.plus_side) {
            const SouthwestArrowField sw = southwest_arrows(field);
            Site cur = x;
            expected.push_back(cur);
            for (int64_t k = 0; k < max_steps && mask.zone(cur) != Zone::Boundary; ++k) {
                cur = cur - step_vector(sw.arrow(cur));
                expected.push_back(cur);
            }
        } else {
            const ArrowField fw = arrow_field(field);
            Site cur = x;
            expected.push_back(cur);
            for (int64_t k = 0; k < max_steps && mask.zone(cur) != Zone::Boundary; ++k) {
                cur = cur + step_vector(fw.arrow(cur));
                expected.push_back(cur);
            }
        }
        const std::vector<Site> got = backtrack(x);
        ++rep.paths_checked;
        if (got != expected) ++rep.mismatches;
    }
    rep.pass = rep.paths_checked > 0 && rep.mismatches == 0;
    return rep;
}

CompetitionInterface competition_interface_plus(const BoundaryLpp& blpp, int64_t m) {
    if (!blpp.plus_side)
        throw std::domain_error("competition_interface_plus: needs a plus-side process");
    const auto& ys = blpp.boundary.sites;
    if (m < 0 || m + 1 >= static_cast<int64_t>(ys.size()))
        throw std::domain_error("competition_interface_plus: m outside the stored boundary");

    CompetitionInterface ci;
    const double hm = blpp.value(ys[static_cast<size_t>(m)]);
    const double hm1 = blpp.value(ys[static_cast<size_t>(m + 1)]);
    if (hm == hm1) ++ci.tie_count;
    Site cur = hm < hm1 ? ys[static_cast<size_t>(m)] : ys[static_cast<size_t>(m + 1)];
    ci.phi.push_back(cur);
    while (true) {
        const Site a = cur + e1, b = cur + e2;
        if (!blpp.box.contains(a) || !blpp.box.contains(b) || !blpp.has_value(a) ||
            !blpp.has_value(b)) {
            ci.truncated = true;
            break;
        }
        const double ha = blpp.value(a), hb = blpp.value(b);
        if (ha == hb) ++ci.tie_count;
        cur = ha < hb ? a : b;
        ci.phi.push_back(cur);
    }
    return ci;
}

CompetitionInterface competition_interface_minus(const BoundaryLpp& blpp, int64_t m) {
    if (blpp.plus_side)
        throw std::domain_error("competition_interface_minus: needs a minus-side process");
    const auto& ys = blpp.boundary.sites;
    if (m < 0 || m >= static_cast<int64_t>(ys.size()))
        throw std::domain_error("competition_interface_minus: m outside the stored boundary");

    CompetitionInterface ci;
    Site cur = ys[static_cast<size_t>(m)];
    ci.phi.push_back(cur);
    while (true) {
        const Site a = cur - e1, b = cur - e2;
        if (!blpp.box.contains(a) || !blpp.box.contains(b) || !blpp.has_value(a) ||
            !blpp.has_value(b)) {
            ci.truncated = true;
            break;
        }
        const double ha = blpp.value(a), hb = blpp.value(b);
        if (ha == hb) ++ci.tie_count;
        cur = ha < hb ? a : b;
        ci.phi.push_back(cur);
    }
    return ci;
}

InterfaceGeodesicReport check_interface_is_geodesic(const CompetitionInterface& ci,
                                                    const BusemannField& field) {
    InterfaceGeodesicReport rep;
    if (ci.phi.empty()) return rep;
    const ArrowField arrows = arrow_field(field);
    const GeodesicPath g =
        follow_geodesic(arrows, ci.phi.front(), static_cast<int64_t>(ci.phi.size()) - 1);
    const size_t n = std::min(g.sites.size(), ci.phi.size());
    for (size_t k = 0; k < n; ++k) {
        ++rep.steps_compared;
        if (g.sites[k] != ci.phi[k]) ++rep.mismatches;
    }
    rep.pass = rep.steps_compared > 0 && rep.mismatches == 0;
    return rep;
}

SeparationReport check_separation(const BoundaryLpp& blpp, const CompetitionInterface& ci,
                                  int64_t m, int64_t samples, uint64_t seed) {
    SeparationReport rep;
    if (ci.phi.empty()) return rep;
    const LatticeWindow& box = blpp.box;
    const RegionMask mask(blpp.boundary, box);

    // interface site per antidiagonal level
    std::unordered_map<int64_t, Site> phi_at;
    for (const Site& s : ci.phi) phi_at[s.x1 + s.x2] = s;

    for (int64_t t = 0; t < samples; ++t) {
        const auto r = [&](int64_t lane, int64_t span) {
            return static_cast<int64_t>(rng::site_hash(seed, Site{t, lane}) %
                                        static_cast<uint64_t>(span));
        };
        const Site x{box.lo.x1 + r(0, box.width()), box.lo.x2 + r(1, box.height())};
        if (mask.zone(x) != Zone::Plus || !blpp.has_value(x)) continue;
        const auto it = phi_at.find(x.x1 + x.x2);
        if (it == phi_at.end() || x == it->second) continue;
        ++rep.sites_checked;
        const int32_t root = blpp.root_at(x);
        const bool left_of_interface = x.x1 < it->second.x1;
        if (left_of_interface ? root > m : root <= m) ++rep.violations;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

} // namespace cgm
