#include "cgm/verification.hpp"

#include <algorithm>
#include <cmath>

#include "cgm/competition.hpp"
#include "cgm/parallel.hpp"

namespace cgm {

OracleEquivalenceReport run_oracle_equivalence(int64_t max_side, int64_t seeds, uint64_t seed) {
    OracleEquivalenceReport rep;
    struct Slot {
        double dev = 0.0;
        int64_t mismatches = 0;
        int64_t ties = 0;
        int64_t cases = 0;
    };
    std::vector<Slot> slots(static_cast<size_t>(seeds));
    parallel_for(seeds, [&](int64_t sd) {
        Slot& s = slots[static_cast<size_t>(sd)];
        const uint64_t rs = rng::replica_seed(seed, static_cast<uint64_t>(sd));
        for (int64_t m = 1; m <= max_side; ++m) {
            for (int64_t n = 1; n <= max_side; ++n) {
                const LatticeWindow win{{0, 0}, {m - 1, n - 1}};
                const WeightField w(rs ^ static_cast<uint64_t>(m * 131 + n), win);
                const LppTable t = forward_lpp(w, {0, 0}, win);
                int64_t ties = 0;
                const GeodesicPath dp = backtrack_geodesic(t, win.lo, win.hi, &ties);
                const BruteForceResult bf = brute_force_lpp(w, win.lo, win.hi);
                const double denom = std::max(std::abs(bf.value), 1.0);
                s.dev = std::max(s.dev, std::abs(t.values(win.hi) - bf.value) / denom);
                if (dp.sites != bf.path.sites) ++s.mismatches;
                s.ties += ties;
                ++s.cases;
            }
        }
    });
    for (const auto& s : slots) {
        rep.cases += s.cases;
        rep.max_relative_deviation = std::max(rep.max_relative_deviation, s.dev);
        rep.path_mismatches += s.mismatches;
        rep.float_ties += s.ties;
    }
    rep.gates.push_back(
        make_gate("oracle_value_relative_deviation", rep.max_relative_deviation, 0.0, 1e-9));
    rep.gates.push_back(make_gate("oracle_path_mismatches",
                                  static_cast<double>(rep.path_mismatches), 0.0, 0.0));
    return rep;
}

StationaryStructureReport run_stationary_structure(double alpha, int64_t m, int64_t n,
                                                   int64_t seeds, uint64_t seed) {
    StationaryStructureReport rep;
    rep.alpha = alpha;
    rep.m = m;
    rep.n = n;
    rep.seeds = seeds;
    std::vector<double> structural(static_cast<size_t>(seeds), 0.0);
    std::vector<double> increment(static_cast<size_t>(seeds), 0.0);
    parallel_for(seeds, [&](int64_t sd) {
        const StationarySystem sys(alpha, rng::replica_seed(seed, static_cast<uint64_t>(sd)), m, n);
        structural[static_cast<size_t>(sd)] = sys.max_structural_residual();
        increment[static_cast<size_t>(sd)] = stationary_lpp(sys).max_increment_residual;
    });
    rep.max_structural_residual = *std::max_element(structural.begin(), structural.end());
    rep.max_increment_residual = *std::max_element(increment.begin(), increment.end());
    rep.gates.push_back(
        make_gate("stationary_structural_residual", rep.max_structural_residual, 0.0, 1e-12));
    rep.gates.push_back(
        make_gate("stationary_increment_residual", rep.max_increment_residual, 0.0, 1e-12));
    return rep;
}

StationaryMeanReport run_stationary_mean(double alpha, int64_t k, int64_t replicas,
                                         uint64_t seed) {
    StationaryMeanReport rep;
    rep.alpha = alpha;
    rep.k = k;
    rep.replicas = replicas;
    rep.target = static_cast<double>(k) / alpha + static_cast<double>(k) / (1.0 - alpha);
    std::vector<double> values(static_cast<size_t>(replicas), 0.0);
    parallel_for(replicas, [&](int64_t r) {
        const StationarySystem sys(alpha, rng::replica_seed(seed, static_cast<uint64_t>(r)), k, k);
        values[static_cast<size_t>(r)] = stationary_lpp(sys).g({k, k});
    });
    const auto s = stats::summarize(values);
    rep.mean = s.mean;
    rep.se = s.se;
    rep.gates.push_back(make_gate("stationary_mean_g", rep.mean, rep.target - 3.0 * rep.se,
                                  rep.target + 3.0 * rep.se));
    return rep;
}

BusemannIdentityReport run_busemann_identities(double alpha, int64_t N, int64_t extent,
                                               int64_t seeds, int64_t paths, uint64_t seed) {
    BusemannIdentityReport rep;
    rep.alpha = alpha;
    rep.horizon = N;
    rep.extent = extent;
    rep.seeds = seeds;

    struct Slot {
        double recovery = 0.0, square = 0.0, arrow = 0.0, geod = 0.0, dual = 0.0;
        int64_t mono = 0, refl = 0;
    };
    std::vector<Slot> slots(static_cast<size_t>(seeds));
    parallel_for(seeds, [&](int64_t sd) {
        Slot& s = slots[static_cast<size_t>(sd)];
        const uint64_t rs = rng::replica_seed(seed, static_cast<uint64_t>(sd));
        const BusemannField f = make_busemann_field(alpha, N, rs, extent);
        s.recovery = f.max_recovery_residual();
        s.square = f.max_unit_square_residual();

        const GeodesicIdentityReport gi = check_geodesic_identities(f, paths, 40, rs);
        s.arrow = gi.max_arrow_weight_residual;
        s.geod = gi.max_geodesic_lpp_residual;
        s.dual = gi.max_dual_weight_residual;
        s.refl = check_reflection_identity(f).mismatches;

        // single-step terminal moves, same weights
        const Site v = f.terminal();
        const LatticeWindow w1{f.window().lo, v + e1};
        const LatticeWindow w2{f.window().lo, v + e2};
        s.mono += check_direction_monotonicity(f.weights().with_window(w1), v, v + e1, w1).violations;
        s.mono += check_direction_monotonicity(f.weights().with_window(w2), v, v + e2, w2).violations;
    });

    for (const auto& s : slots) {
        rep.max_recovery_residual = std::max(rep.max_recovery_residual, s.recovery);
        rep.max_unit_square_residual = std::max(rep.max_unit_square_residual, s.square);
        rep.max_arrow_weight_residual = std::max(rep.max_arrow_weight_residual, s.arrow);
        rep.max_geodesic_lpp_residual = std::max(rep.max_geodesic_lpp_residual, s.geod);
        rep.max_dual_weight_residual = std::max(rep.max_dual_weight_residual, s.dual);
        rep.monotonicity_violations += s.mono;
        rep.reflection_mismatches += s.refl;
    }
    rep.gates.push_back(make_gate("busemann_recovery_residual", rep.max_recovery_residual, 0.0, 1e-9));
    rep.gates.push_back(
        make_gate("busemann_unit_square_residual", rep.max_unit_square_residual, 0.0, 1e-9));
    rep.gates.push_back(make_gate("busemann_monotonicity_violations",
                                  static_cast<double>(rep.monotonicity_violations), 0.0, 0.0));
    rep.gates.push_back(
        make_gate("busemann_arrow_weight_residual", rep.max_arrow_weight_residual, 0.0, 1e-9));
    rep.gates.push_back(
        make_gate("busemann_geodesic_lpp_residual", rep.max_geodesic_lpp_residual, 0.0, 1e-9));
    rep.gates.push_back(
        make_gate("busemann_dual_weight_residual", rep.max_dual_weight_residual, 0.0, 1e-9));
    rep.gates.push_back(make_gate("busemann_reflection_mismatches",
                                  static_cast<double>(rep.reflection_mismatches), 0.0, 0.0));
    return rep;
}

TreeDualityReport run_tree_duality(double alpha, int64_t N, int64_t extent, int64_t seeds,
                                   int64_t pairs, uint64_t seed) {
    TreeDualityReport rep;
    rep.alpha = alpha;
    rep.horizon = N;
    rep.extent = extent;
    rep.seeds = seeds;

    struct Slot {
        int64_t edges = 0, xorv = 0, cross = 0, pairs = 0;
        double freq_primal = 0.0, freq_dual = 0.0;
    };
    std::vector<Slot> slots(static_cast<size_t>(seeds));
    parallel_for(seeds, [&](int64_t sd) {
        Slot& s = slots[static_cast<size_t>(sd)];
        const uint64_t rs = rng::replica_seed(seed, static_cast<uint64_t>(sd));
        const BusemannField f = make_busemann_field(alpha, N, rs, extent);
        const ArrowField arrows = arrow_field(f);
        const DualTreeResult dt = dual_tree(arrows);
        const XorDualityReport xr = check_xor_duality(arrows, dt.edges);
        s.edges = xr.edges_checked;
        s.xorv = xr.violations;
        const NonCrossingReport nc = check_non_crossing(arrows, pairs, rs);
        s.cross = nc.crossings;
        s.pairs = nc.pairs_checked;
        s.freq_primal = arrows.e1_frequency();

        const SouthwestArrowField sw = southwest_arrows(f);
        int64_t n1 = 0, nt = 0;
        const LatticeWindow& sww = sw.window();
        for (int64_t x2 = sww.lo.x2; x2 <= sww.hi.x2; ++x2)
            for (int64_t x1 = sww.lo.x1; x1 <= sww.hi.x1; ++x1) {
                if (sw.arrow({x1, x2}) == Step::E1) ++n1;
                ++nt;
            }
        s.freq_dual = static_cast<double>(n1) / static_cast<double>(nt);
    });

    std::vector<double> fp, fd;
    for (const auto& s : slots) {
        rep.edges_checked += s.edges;
        rep.xor_violations += s.xorv;
        rep.crossings += s.cross;
        rep.pairs_checked += s.pairs;
        fp.push_back(s.freq_primal);
        fd.push_back(s.freq_dual);
    }
    const auto sp = stats::summarize(fp);
    const auto sdl = stats::summarize(fd);
    rep.primal_e1_frequency = sp.mean;
    rep.dual_e1_frequency = sdl.mean;
    rep.frequency_diff_se = std::sqrt(sp.se * sp.se + sdl.se * sdl.se);

    rep.gates.push_back(
        make_gate("xor_duality_violations", static_cast<double>(rep.xor_violations), 0.0, 0.0));
    rep.gates.push_back(make_gate("non_crossing_violations", static_cast<double>(rep.crossings),
                                  0.0, 0.0));
    rep.gates.push_back(make_gate("dual_frequency_agreement",
                                  rep.primal_e1_frequency - rep.dual_e1_frequency,
                                  -3.0 * rep.frequency_diff_se, 3.0 * rep.frequency_diff_se));
    return rep;
}

CompetitionReport run_competition_interface(double alpha, int64_t N, int64_t box_side,
                                            int64_t seeds, int64_t samples, uint64_t seed) {
    CompetitionReport rep;
    rep.alpha = alpha;
    rep.horizon = N;
    rep.box_side = box_side;
    rep.seeds = seeds;

    const int64_t S = box_side;
    const int64_t extent = 4 * S + 8;
    struct Slot {
        double plus = 0.0, minus = 0.0;
        int64_t pchk = 0, pexc = 0, mchk = 0, mexc = 0;
        int64_t paths = 0, iface = 0, sep = 0, rev = 0, ties = 0;
    };
    std::vector<Slot> slots(static_cast<size_t>(seeds));
    parallel_for(seeds, [&](int64_t sd) {
        Slot& s = slots[static_cast<size_t>(sd)];
        const uint64_t rs = rng::replica_seed(seed, static_cast<uint64_t>(sd));
        const BusemannField f = make_busemann_field(alpha, N, rs, extent);
        const LatticeWindow tw = f.trusted();
        const Site center{tw.lo.x1 + extent / 2, tw.lo.x2 + extent / 2};
        const LatticeWindow box{center - Site{S / 2, S / 2}, center + Site{S / 2, S / 2}};

        const DownRightPath staircase = staircase_path(center, 2 * S);
        const DualWeightField dual = dual_weights(f);

        const BoundaryLpp hp = boundary_lpp_plus(f, dual, staircase, box);
        const BoundaryIdentityReport ip = check_boundary_identity(hp, f);
        s.plus = ip.max_residual;
        s.pchk = ip.sites_checked;
        s.pexc = ip.sites_excluded;
        s.ties += hp.tie_count;

        const BoundaryLpp hm = boundary_lpp_minus(f.weights(), f, staircase, box);
        const BoundaryIdentityReport im = check_boundary_identity(hm, f);
        s.minus = im.max_residual;
        s.mchk = im.sites_checked;
        s.mexc = im.sites_excluded;
        s.ties += hm.tie_count;

        s.paths += check_boundary_paths(hp, f, samples, rs).mismatches;
        s.paths += check_boundary_paths(hm, f, samples, rs ^ 0x7f4a7c15).mismatches;

        const int64_t m = 2 * (2 * S); // index of the staircase center
        const CompetitionInterface ci = competition_interface_plus(hp, m);
        s.ties += ci.tie_count;
        s.iface += check_interface_is_geodesic(ci, f).mismatches;
        s.sep += check_separation(hp, ci, m, samples, rs).violations;

        // reversed corner: interface of the minus process from a corner
        // boundary equals the southwest geodesic from the corner
        {
            DownRightPath cornerb;
            const int64_t K = 2 * S;
            for (int64_t k = -K; k <= 0; ++k) cornerb.sites.push_back({center.x1 + k, center.x2});
            for (int64_t k = 1; k <= K; ++k) cornerb.sites.push_back({center.x1, center.x2 - k});
            const LatticeWindow cbox{center - Site{S, S}, center};
            const BoundaryLpp hc = boundary_lpp_minus(f.weights(), f, cornerb, cbox);
            const CompetitionInterface cm = competition_interface_minus(hc, K);
            const SouthwestArrowField sw = southwest_arrows(f);
            const std::vector<Site> swp =
                follow_southwest(sw, center, static_cast<int64_t>(cm.phi.size()) - 1);
            const size_t len = std::min(cm.phi.size(), swp.size());
            for (size_t k = 0; k < len; ++k)
                if (cm.phi[k] != swp[k]) ++s.rev;
        }
    });

    for (const auto& s : slots) {
        rep.max_plus_residual = std::max(rep.max_plus_residual, s.plus);
        rep.max_minus_residual = std::max(rep.max_minus_residual, s.minus);
        rep.plus_sites_checked += s.pchk;
        rep.plus_sites_excluded += s.pexc;
        rep.minus_sites_checked += s.mchk;
        rep.minus_sites_excluded += s.mexc;
        rep.path_mismatches += s.paths;
        rep.interface_mismatches += s.iface;
        rep.separation_violations += s.sep;
        rep.reversal_mismatches += s.rev;
        rep.float_ties += s.ties;
    }
    rep.gates.push_back(make_gate("hplus_identity_residual", rep.max_plus_residual, 0.0, 1e-9));
    rep.gates.push_back(make_gate("hminus_identity_residual", rep.max_minus_residual, 0.0, 1e-9));
    rep.gates.push_back(
        make_gate("boundary_path_mismatches", static_cast<double>(rep.path_mismatches), 0.0, 0.0));
    rep.gates.push_back(make_gate("interface_geodesic_mismatches",
                                  static_cast<double>(rep.interface_mismatches), 0.0, 0.0));
    rep.gates.push_back(make_gate("separation_violations",
                                  static_cast<double>(rep.separation_violations), 0.0, 0.0));
    rep.gates.push_back(make_gate("reversed_corner_mismatches",
                                  static_cast<double>(rep.reversal_mismatches), 0.0, 0.0));
    return rep;
}

OrderingRunReport run_direction_ordering(double alpha_low, double alpha_high, int64_t N,
                                         int64_t extent, int64_t seeds, int64_t paths,
                                         uint64_t seed) {
    OrderingRunReport rep;
    rep.alpha_low = alpha_low;
    rep.alpha_high = alpha_high;
    rep.seeds = seeds;
    std::vector<int64_t> iv(static_cast<size_t>(seeds), 0);
    std::vector<int64_t> pv(static_cast<size_t>(seeds), 0);
    parallel_for(seeds, [&](int64_t sd) {
        const OrderingReport r = check_direction_ordering(
            alpha_low, alpha_high, N, rng::replica_seed(seed, static_cast<uint64_t>(sd)), extent,
            paths);
        iv[static_cast<size_t>(sd)] = r.increment_violations;
        pv[static_cast<size_t>(sd)] = r.path_violations;
    });
    for (int64_t sd = 0; sd < seeds; ++sd) {
        rep.increment_violations += iv[static_cast<size_t>(sd)];
        rep.path_violations += pv[static_cast<size_t>(sd)];
    }
    rep.gates.push_back(make_gate("ordering_increment_violations",
                                  static_cast<double>(rep.increment_violations), 0.0, 0.0));
    rep.gates.push_back(make_gate("ordering_path_violations",
                                  static_cast<double>(rep.path_violations), 0.0, 0.0));
    return rep;
}

} // namespace cgm
