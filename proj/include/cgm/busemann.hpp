#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cgm/lattice.hpp"
#include "cgm/lpp.hpp"
#include "cgm/rng.hpp"
#include "cgm/stationary.hpp"
#include "cgm/stats.hpp"

namespace cgm {

// Finite-horizon increment field anchored at a terminal site v:
//   B(x,y) = G(x,v) - G(y,v)
// from a single backward sweep. Additivity is exact by construction; the
// recovery identity Y(x) = B(x,x+e1) /\ B(x,x+e2) holds at every interior
// site, not just in the limit. Statistics are only to be read inside the
// trusted sub-window (sites with v - x >= margin in both coordinates), where
// the terminal no longer distorts increments.
class BusemannField {
  public:
    BusemannField(const WeightField& weights, Site terminal, LatticeWindow window,
                  int64_t margin);

    Site terminal() const { return terminal_; }
    const LatticeWindow& window() const { return window_; }
    int64_t margin() const { return margin_; }
    const WeightField& weights() const { return weights_; }

    // G(x, terminal)
    double g(Site x) const { return g_.at_checked(x); }
    // B(x, x+e1): defined for x <= terminal - e1
    double b1(Site x) const { return g_.at_checked(x) - g_.at_checked(x + e1); }
    // B(x, x+e2): defined for x <= terminal - e2
    double b2(Site x) const { return g_.at_checked(x) - g_.at_checked(x + e2); }
    // B(x, y) for any two window sites
    double b(Site x, Site y) const { return g_.at_checked(x) - g_.at_checked(y); }

    LatticeWindow trusted() const;
    bool has_trusted() const;

    // Largest |Y(x) - b1(x) /\ b2(x)| over sites with x+e1, x+e2 <= terminal.
    double max_recovery_residual() const;
    // Largest |b1(x) + b2(x+e1) - b2(x) - b1(x+e2)| over interior unit squares.
    double max_unit_square_residual() const;

  private:
    WeightField weights_;
    Site terminal_;
    LatticeWindow window_;
    int64_t margin_;
    Grid g_;
};

// Terminal for horizon N in direction u(alpha): round-half-up per coordinate,
// then restore |v|_1 = N by taking the excess from the larger coordinate.
Site direction_terminal(double alpha, int64_t N);

// Field whose trusted window is the square of side `extent+1` ending at
// terminal - margin*(1,1); margin defaults to N/4.
BusemannField make_busemann_field(double alpha, int64_t N, uint64_t seed, int64_t extent,
                                  std::optional<int64_t> margin = std::nullopt);

// Cocycle checks: exact additivity (unit squares and random staircase path
// pairs) plus a statistical translation check (field means under a hash-key
// shift agree within 3 SE across replicas).
struct CocycleReport {
    double max_unit_square_residual = 0.0;
    double max_path_pair_residual = 0.0; // staircase vs staircase between same endpoints
    int64_t path_pairs = 0;
    double mean_b1 = 0.0;
    double mean_b1_shifted = 0.0;
    double shift_diff_se = 0.0;
    bool additivity_pass = false;
    bool stationarity_pass = false;
};
CocycleReport check_cocycle(double alpha, int64_t N, uint64_t seed, int64_t extent,
                            int64_t path_pairs, int64_t shift_replicas);

// Sitewise terminal-monotonicity of increments between two comparable
// terminals (v_right = v_left + k e1 or + k e2), on shared weights:
// moving the terminal toward e1 lowers B1 and raises B2; toward e2 the
// reverse.
struct DirectionMonotonicityReport {
    int64_t sites_checked = 0;
    int64_t violations = 0;
    double worst = 0.0; // most negative ordering margin observed
    bool pass = false;
};
DirectionMonotonicityReport check_direction_monotonicity(const WeightField& weights, Site v_left,
                                                         Site v_right, LatticeWindow window,
                                                         double slack = 1e-9);

// Sampling geometry for distributional statistics: an antidiagonal strip
// centered on the ray from the terminal in direction -u, far enough out that
// every sample site clears the trust margin, and narrow enough that the
// direction from sample to terminal stays within width_frac of u. Along the
// strip the B1/B2 values are asymptotically i.i.d., which makes them the
// natural KS sample.
struct StatStrip {
    Site center;          // ray point v - round(t* u)
    int64_t halfwidth;    // sites center + j(e1-e2), |j| <= halfwidth
    int64_t t_star;       // ray parameter of the center
    LatticeWindow window; // DP window enclosing the strip and terminal
    std::vector<Site> sites() const;
};
StatStrip make_stat_strip(double alpha, int64_t N, double t_mult = 1.3,
                          double width_frac = 0.05);

struct MarginalReport {
    double alpha = 0.0;
    int64_t horizon = 0;
    int64_t replicas = 0;
    int64_t samples_per_replica = 0;
    double mean_b1 = 0.0, mean_b2 = 0.0;
    double se_b1 = 0.0, se_b2 = 0.0;
    double target_b1 = 0.0, target_b2 = 0.0; // 1/alpha, 1/(1-alpha)
    double ks_pass_rate_b1 = 0.0, ks_pass_rate_b2 = 0.0; // per-replica KS at 5%
    double mean_bias_b1 = 0.0; // (mean - target)/target
    bool pass = false;         // means within 5% and KS pass rates >= 0.9
};
MarginalReport marginal_statistics(double alpha, int64_t N, int64_t replicas, uint64_t seed);

// Dual weights X(x) = B(x-e1,x) /\ B(x-e2,x) and the reflected family
// tildeY(x) = X(-x).
struct DualWeightField {
    Grid x; // on [window.lo + e1 + e2, terminal]
    double tilde_y(Site s) const { return x.at_checked(-s); }
};
DualWeightField dual_weights(const BusemannField& field);

struct DualMarginalReport {
    int64_t replicas = 0;
    double ks_pass_rate = 0.0; // per-replica KS of X vs Exp(1) at 5%
    double mean_x = 0.0;
    bool pass = false;
};
DualMarginalReport dual_weight_statistics(double alpha, int64_t N, int64_t replicas,
                                          uint64_t seed);

} // namespace cgm
