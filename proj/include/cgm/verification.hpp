#pragma once

#include <cstdint>
#include <vector>

#include "cgm/experiments.hpp"

namespace cgm {

// Exhaustive-path cross-check of the max-plus recursion: value and argmax
// path against enumeration, on every window up to max_side x max_side.
struct OracleEquivalenceReport {
    int64_t cases = 0;
    double max_relative_deviation = 0.0;
    int64_t path_mismatches = 0;
    int64_t float_ties = 0;
    std::vector<Gate> gates;
};
OracleEquivalenceReport run_oracle_equivalence(int64_t max_side, int64_t seeds, uint64_t seed);

// Structural and increment identities of the boundary-driven quadrant.
struct StationaryStructureReport {
    double alpha = 0.0;
    int64_t m = 0, n = 0, seeds = 0;
    double max_structural_residual = 0.0;
    double max_increment_residual = 0.0;
    std::vector<Gate> gates;
};
StationaryStructureReport run_stationary_structure(double alpha, int64_t m, int64_t n,
                                                   int64_t seeds, uint64_t seed);

// Monte Carlo mean of the boundary-augmented passage value at (k,k) against
// the exact k/alpha + k/(1-alpha).
struct StationaryMeanReport {
    double alpha = 0.0;
    int64_t k = 0, replicas = 0;
    double mean = 0.0, se = 0.0, target = 0.0;
    std::vector<Gate> gates;
};
StationaryMeanReport run_stationary_mean(double alpha, int64_t k, int64_t replicas, uint64_t seed);

// Exact pre-limit identities of the finite-horizon field: recovery,
// unit-square additivity, terminal monotonicity, arrow-weight, geodesic and
// dual-weight identities.
struct BusemannIdentityReport {
    double alpha = 0.0;
    int64_t horizon = 0, extent = 0, seeds = 0;
    double max_recovery_residual = 0.0;
    double max_unit_square_residual = 0.0;
    int64_t monotonicity_violations = 0;
    double max_arrow_weight_residual = 0.0;
    double max_geodesic_lpp_residual = 0.0;
    double max_dual_weight_residual = 0.0;
    int64_t reflection_mismatches = 0;
    std::vector<Gate> gates;
};
BusemannIdentityReport run_busemann_identities(double alpha, int64_t N, int64_t extent,
                                               int64_t seeds, int64_t paths, uint64_t seed);

// Edge duality and non-crossing of the geodesic tree and its dual; marginal
// frequency agreement between the primal and reflected-dual arrow processes.
struct TreeDualityReport {
    double alpha = 0.0;
    int64_t horizon = 0, extent = 0, seeds = 0;
    int64_t edges_checked = 0;
    int64_t xor_violations = 0;
    int64_t crossings = 0;
    int64_t pairs_checked = 0;
    double primal_e1_frequency = 0.0;
    double dual_e1_frequency = 0.0;
    double frequency_diff_se = 0.0;
    std::vector<Gate> gates;
};
TreeDualityReport run_tree_duality(double alpha, int64_t N, int64_t extent, int64_t seeds,
                                   int64_t pairs, uint64_t seed);

// Boundary LPP on a staircase: exact recovery of Busemann differences on both
// sides, maximizing-path and interface characterizations, separation, and the
// reversed corner special case.
struct CompetitionReport {
    double alpha = 0.0;
    int64_t horizon = 0, box_side = 0, seeds = 0;
    double max_plus_residual = 0.0;
    double max_minus_residual = 0.0;
    int64_t plus_sites_checked = 0, plus_sites_excluded = 0;
    int64_t minus_sites_checked = 0, minus_sites_excluded = 0;
    int64_t path_mismatches = 0;
    int64_t interface_mismatches = 0;
    int64_t separation_violations = 0;
    int64_t reversal_mismatches = 0;
    int64_t float_ties = 0;
    std::vector<Gate> gates;
};
CompetitionReport run_competition_interface(double alpha, int64_t N, int64_t box_side,
                                            int64_t seeds, int64_t samples, uint64_t seed);

// Ordering of geodesics across directions on shared weights.
struct OrderingRunReport {
    double alpha_low = 0.0, alpha_high = 0.0;
    int64_t seeds = 0;
    int64_t increment_violations = 0;
    int64_t path_violations = 0;
    std::vector<Gate> gates;
};
OrderingRunReport run_direction_ordering(double alpha_low, double alpha_high, int64_t N,
                                         int64_t extent, int64_t seeds, int64_t paths,
                                         uint64_t seed);

} // namespace cgm
