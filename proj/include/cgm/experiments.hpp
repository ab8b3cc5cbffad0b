#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cgm/busemann.hpp"
#include "cgm/geodesics.hpp"
#include "cgm/lattice.hpp"

namespace cgm {

// Machine-readable pass/fail record: observed value against a closed band.
struct Gate {
    std::string name;
    double observed = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool pass = false;
};
Gate make_gate(std::string name, double observed, double lo, double hi);
bool all_pass(const std::vector<Gate>& gates);

// Desk-scale defaults shared by the CLI and the verification suite.
struct Defaults {
    static constexpr double alpha = 0.5;
    static constexpr int64_t horizon = 400;
    static constexpr int64_t replicas = 200;
    static constexpr uint64_t seed = 1;
    static constexpr int64_t bootstrap_block = 32;
    static constexpr int64_t bootstrap_resamples = 200;
};

// ---- shape theorem -------------------------------------------------------

struct ShapeReport {
    std::vector<int64_t> sizes;
    int64_t seeds = 0;
    // max over the antidiagonal |x|_1 = N of |G(0,x) - g(x)| / N, per size:
    std::vector<double> max_gap;        // max over seeds
    std::vector<double> mean_gap;       // mean over seeds
    double paired_decrease_rate = 0.0;  // fraction of seeds with gap(last) < gap(first)
    std::vector<Gate> gates;
};
ShapeReport run_shape_convergence(const std::vector<int64_t>& sizes, int64_t seeds,
                                  uint64_t seed, double max_gap_bound = 0.15);

// ---- first-step law ------------------------------------------------------

struct FirstStepReport {
    double alpha = 0.0;
    double u1 = 0.0;
    int64_t horizon = 0;
    int64_t replicas = 0;
    int64_t arrow_samples = 0;
    double e1_frequency = 0.0;
    double bootstrap_se = 0.0;
    double effective_samples = 0.0;
    double geodesic_e1_density = 0.0; // along single geodesics, fixed-length walks
    double geodesic_density_se = 0.0;
    double geodesic_truncation_rate = 0.0; // walks dropped at the trust boundary
    std::vector<Gate> gates;
};
FirstStepReport run_first_step(double alpha, int64_t N, int64_t replicas, uint64_t seed);

// ---- {s,c,h,v} Markov chain ----------------------------------------------

using Matrix4 = std::array<std::array<double, 4>, 4>;

// Transition matrix and invariant law in state order (s, c, h, v).
Matrix4 markov_target_matrix(double alpha);
std::array<double, 4> markov_invariant(double alpha);

// Relabeling of the i.i.d. step pair (a_{j-1}, a_j), a in {e1,e2}, to the
// point class of the site between them.
PointClass class_of_step_pair(Step prev, Step cur);

struct MarkovReport {
    double alpha = 0.0;
    int64_t horizon = 0;
    int64_t replicas = 0;
    int64_t transitions = 0;
    Matrix4 counts{};    // raw transition counts
    Matrix4 empirical{}; // row-normalized
    Matrix4 target{};
    std::array<double, 4> class_frequency{};
    std::array<double, 4> class_se{}; // across replicas
    std::array<double, 4> invariant_target{};
    double max_matrix_deviation = 0.0;
    // independent oracle: i.i.d. Bernoulli(alpha) steps fed through the same
    // relabeling, same chain length
    Matrix4 oracle_empirical{};
    double oracle_max_deviation = 0.0;
    std::vector<Gate> gates;
};
// strip_t_mult moves the sample strip away from the terminal in units of the
// minimal trusted distance; class frequencies carry an O(t^{-2/3}) horizon
// bias, so chains near the 3-SE gate need a large multiplier.
MarkovReport run_markov_chain(double alpha, int64_t N, int64_t chain_length, uint64_t seed,
                              double matrix_tolerance = 0.02, double strip_t_mult = 10.0);

struct SourceDensityScan {
    std::vector<double> alphas;
    std::vector<double> source_frequency;
    double argmax_alpha = 0.0;
    std::vector<Gate> gates;
};
SourceDensityScan run_source_density_scan(const std::vector<double>& alphas, int64_t N,
                                          int64_t min_samples, uint64_t seed);

// ---- midpoint problem ----------------------------------------------------

struct MidpointReport {
    double alpha = 0.0;
    std::vector<int64_t> n_list;
    int64_t batches = 0;
    int64_t replicas_per_batch = 0;
    std::vector<double> hit_probability; // pooled P{0 on the geodesic}, per n
    std::vector<double> hit_se;
    double strict_decrease_batch_rate = 0.0;
    double brute_force_p2 = 0.0; // exhaustive-path probability at n = 2
    double dp_p2 = 0.0;
    double translation_p = 0.0; // first n, key-shifted picture
    std::vector<Gate> gates;
};
MidpointReport run_midpoint(double alpha, const std::vector<int64_t>& n_list, int64_t batches,
                            int64_t replicas_per_batch, uint64_t seed);

// ---- arrow stability across horizons -------------------------------------

struct ArrowStabilityReport {
    double alpha = 0.0;
    int64_t horizon = 0;
    double factor = 0.0;
    int64_t replicas = 0;
    std::vector<int64_t> bucket_lo;     // distance-to-terminal buckets [lo, 2 lo)
    std::vector<double> agreement;      // per bucket
    std::vector<int64_t> bucket_count;
    double agreement_at_margin = 0.0; // over distances [N/4, N/2]
    int64_t suggested_margin = 0; // smallest bucket floor with agreement >= 0.95
    std::vector<Gate> gates;
};
ArrowStabilityReport run_arrow_stability(double alpha, int64_t N, double factor,
                                         int64_t replicas, uint64_t seed);

// ---- coalescence and clusters --------------------------------------------

struct CoalescenceReport {
    double alpha = 0.0;
    int64_t horizon = 0;
    int64_t window_extent = 0;
    int64_t trials = 0;
    double coalesced_rate = 0.0;       // before leaving the trusted window
    double mean_steps = 0.0;           // among coalesced pairs
    std::vector<int64_t> survival_k;   // cluster-size thresholds
    std::vector<double> survival_rate; // P(|C| > k), window-truncated proxy
    double truncated_cluster_rate = 0.0;
    std::vector<Gate> gates;
};
CoalescenceReport run_coalescence(double alpha, int64_t N, int64_t window_extent, int64_t trials,
                                  uint64_t seed);

// ---- cocycle sublinearity diagnostic (no gate) ----------------------------

struct SublinearityReport {
    double alpha = 0.0;
    std::vector<int64_t> n_list;
    std::vector<double> max_ratio; // max_{|x|_1 <= n} |B(0,x) - grad g(u) . x| / n
};
SublinearityReport run_cocycle_sublinearity(double alpha, const std::vector<int64_t>& n_list,
                                            uint64_t seed);

} // namespace cgm
