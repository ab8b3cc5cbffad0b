#pragma once

#include <cstdint>
#include <vector>

#include "cgm/lattice.hpp"
#include "cgm/rng.hpp"
#include "cgm/stats.hpp"

namespace cgm {

// Bijection between interior directions u = (u1, 1-u1) and the boundary
// parameter alpha in (0,1):
//   u1 = alpha^2 / ((1-alpha)^2 + alpha^2),  alpha = sqrt(u1)/(sqrt(u1)+sqrt(1-u1)).
double alpha_of_direction(double u1);
double direction_of_alpha(double alpha);

struct DirectionParam {
    double u1;
    double alpha;
    static DirectionParam from_alpha(double alpha);
    static DirectionParam from_u1(double u1);
};

// One local update of the boundary-driven pair recursion:
//   I = zeta + (I_south - J_west)^+ ,  J = zeta + (I_south - J_west)^- ,
//   eta = I_south /\ J_west.
struct StationaryStep {
    double i;
    double j;
    double eta;
};
StationaryStep stationary_step(double zeta, double i_south, double j_west);

// Boundary-driven system on the quadrant [0,m] x [0,n]:
//   I(i,0) ~ Exp(alpha) on the x-axis, J(0,j) ~ Exp(1-alpha) on the y-axis,
//   zeta ~ Exp(1) in the bulk (all on independent seed lanes), interior filled
//   northeast-inductively. eta is the recovered Exp(1) field on
//   [0,m-1] x [0,n-1].
class StationarySystem {
  public:
    StationarySystem(double alpha, uint64_t seed, int64_t m, int64_t n);

    double alpha() const { return alpha_; }
    int64_t m() const { return m_; }
    int64_t n() const { return n_; }
    uint64_t seed() const { return seed_; }

    // I on sites with x1 >= 1, x2 >= 0; J on sites with x2 >= 1, x1 >= 0.
    double I(Site s) const { return i_.at_checked(s); }
    double J(Site s) const { return j_.at_checked(s); }
    double zeta(Site s) const { return zeta_.at_checked(s); } // bulk only
    double eta(Site s) const { return eta_.at_checked(s); }

    const Grid& eta_grid() const { return eta_; }

    // Largest absolute residual of the four structural equations over the
    // filled quadrant. Zero up to roundoff for every built system.
    double max_structural_residual() const;

  private:
    double alpha_;
    uint64_t seed_;
    int64_t m_, n_;
    Grid i_, j_, zeta_, eta_;
};

// Boundary-augmented passage values on the quadrant: G(0,0) = 0, axis values
// are partial sums of the boundary weights, bulk follows
// G(x) = zeta(x) + G(x-e1) v G(x-e2). Accumulated in extended precision so
// increment checks resolve at 1e-12.
struct StationaryLpp {
    Grid g; // on [0,m] x [0,n]
    // Largest |G(x)-G(x-e1) - I(x)| and |G(x)-G(x-e2) - J(x)| over the bulk.
    double max_increment_residual = 0.0;
};
StationaryLpp stationary_lpp(const StationarySystem& sys);

// Distributional checks along a down-right path: marginal KS for the edge
// variables (I-edges vs Exp(alpha), J-edges vs Exp(1-alpha)), pairwise edge
// correlations, and correlations between edges and eta strictly southwest of
// the path. Replicas rebuild the system on independent sub-seeds.
struct DownRightLawReport {
    int64_t replicas = 0;
    int64_t i_edges = 0;
    int64_t j_edges = 0;
    double ks_i = 0.0;             // pooled KS of I-edges vs Exp(alpha)
    double ks_j = 0.0;             // pooled KS of J-edges vs Exp(1-alpha)
    double ks_i_critical = 0.0;    // 5% critical value for the pooled sample
    double ks_j_critical = 0.0;
    double per_replica_pass_rate = 0.0; // fraction of replicas passing both KS at 1%
    double max_abs_edge_correlation = 0.0;
    double max_abs_eta_correlation = 0.0;
    double correlation_bound = 0.0; // 4/sqrt(replicas)
    bool pass = false;
};
DownRightLawReport check_downright_law(double alpha, uint64_t seed, int64_t m, int64_t n,
                                       const DownRightPath& path, int64_t replicas);

} // namespace cgm
