#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "cgm/busemann.hpp"
#include "cgm/lattice.hpp"

namespace cgm {

// Per-site step choice driven by a Busemann field: e1 iff B(x,x+e1) <=
// B(x,x+e2), exact float ties to e1. Defined on the field's trusted window.
class ArrowField {
  public:
    ArrowField(LatticeWindow window, Site terminal)
        : window_(window), terminal_(terminal),
          dir_(static_cast<size_t>(window.area()), 0) {}

    Step arrow(Site s) const {
        return static_cast<Step>(dir_[static_cast<size_t>(window_.index(s))]);
    }
    void set(Site s, Step st) { dir_[static_cast<size_t>(window_.index(s))] = static_cast<uint8_t>(st); }

    const LatticeWindow& window() const { return window_; }
    Site terminal() const { return terminal_; }
    int64_t tie_count() const { return ties_; }
    void set_tie_count(int64_t t) { ties_ = t; }

    double e1_frequency() const;

  private:
    LatticeWindow window_;
    Site terminal_;
    std::vector<uint8_t> dir_;
    int64_t ties_ = 0;
};

ArrowField arrow_field(const BusemannField& field);

// Follow arrows from x until the window is left or max_steps is reached.
GeodesicPath follow_geodesic(const ArrowField& arrows, Site x, int64_t max_steps);

// Southwest steps: -e1 iff B(x-e1,x) <= B(x-e2,x), ties to -e1. Defined where
// both southwest increments exist inside the trusted window.
class SouthwestArrowField {
  public:
    SouthwestArrowField(LatticeWindow window, Site terminal)
        : window_(window), terminal_(terminal),
          dir_(static_cast<size_t>(window.area()), 0) {}

    // returns the step taken: -e1 or -e2, encoded as Step of the mirrored walk
    Step arrow(Site s) const {
        return static_cast<Step>(dir_[static_cast<size_t>(window_.index(s))]);
    }
    void set(Site s, Step st) { dir_[static_cast<size_t>(window_.index(s))] = static_cast<uint8_t>(st); }
    const LatticeWindow& window() const { return window_; }
    Site terminal() const { return terminal_; }

  private:
    LatticeWindow window_;
    Site terminal_;
    std::vector<uint8_t> dir_;
};

SouthwestArrowField southwest_arrows(const BusemannField& field);

// Walk order (down-left) from x.
std::vector<Site> follow_southwest(const SouthwestArrowField& arrows, Site x, int64_t max_steps);

// Dual arrows live at x + (1/2,1/2), stored on the base site; the dual arrow
// is -e_k exactly when the primal arrow at x is e_k.
class DualArrowField {
  public:
    explicit DualArrowField(const ArrowField& primal) : primal_(&primal) {}
    // step of the dual walk at dual site x+(1/2,1/2): -e1 or -e2 (as Step index)
    Step arrow(Site base) const { return primal_->arrow(base); }
    const LatticeWindow& base_window() const { return primal_->window(); }

  private:
    const ArrowField* primal_;
};

// Edge sets of the geodesic tree and its dual within the trusted window.
// Primal edge {x, x+e_k} is keyed on x; dual edge {z-e_k, z} with z = x+(1/2,1/2)
// is keyed on its generator base site x.
struct GeodesicTreeEdges {
    std::unordered_set<uint64_t> primal; // key = site_key(x)*2 + k-1 for edge {x, x+e_k}
    std::unordered_set<uint64_t> dual;   // key = site_key(x)*2 + k-1 for dual edge {x+d-e_k, x+d}

    static uint64_t edge_key(Site a, Step k) {
        return site_key(a) * 2 + static_cast<uint64_t>(k);
    }
};

struct DualTreeResult {
    DualArrowField dual;
    GeodesicTreeEdges edges;
};
DualTreeResult dual_tree(const ArrowField& arrows);

// Interior-edge duality: e in tree xor e* in dual tree, checked over every
// edge whose endpoints and dual generator all lie in the window.
struct XorDualityReport {
    int64_t edges_checked = 0;
    int64_t violations = 0;
    bool pass = false;
};
XorDualityReport check_xor_duality(const ArrowField& arrows, const GeodesicTreeEdges& edges);

// No sampled primal geodesic may cross a sampled dual geodesic.
struct NonCrossingReport {
    int64_t pairs_checked = 0;
    int64_t crossings = 0;
    bool pass = false;
};
NonCrossingReport check_non_crossing(const ArrowField& arrows, int64_t pairs, uint64_t seed);

struct CoalescenceResult {
    std::optional<Site> meet;
    int64_t steps = 0; // arrow steps taken from the later-merging start
};
CoalescenceResult coalescence(const ArrowField& arrows, Site x, Site y);

// Local configuration of the two arrows feeding a site.
enum class PointClass : uint8_t { Source = 0, Coalescence = 1, Horizontal = 2, Vertical = 3 };

char point_class_code(PointClass c);

// Classification from the pair (arrow(z-e1), arrow(z-e2)):
//   (e2,e1) -> source, (e1,e2) -> coalescence, (e1,e1) -> horizontal,
//   (e2,e2) -> vertical.
PointClass classify_site(Step at_z_minus_e1, Step at_z_minus_e2);

// Classes along the antidiagonal x1 + x2 = diag_sum for sites
// z_j = (j, diag_sum - j), j in [j_lo, j_hi].
std::vector<PointClass> classify_points(const ArrowField& arrows, int64_t diag_sum, int64_t j_lo,
                                        int64_t j_hi);

struct BackwardCluster {
    std::vector<Site> sites; // includes the root
    bool truncated = false;  // cluster touched the window boundary
};
BackwardCluster backward_cluster(const ArrowField& arrows, Site x);

// Exact identity residuals on one field (all algebraic consequences of
// recovery + additivity, so they hold pre-limit):
//   weight identity    Y(x) = B(x, x+arrow(x))
//   geodesic identity  G(p_m, p_n) = B(p_m, p_n) + Y(p_n)
//   dual identity      X(x) = B(sw-target(x), x)
struct GeodesicIdentityReport {
    double max_arrow_weight_residual = 0.0; // bg-style weight identity
    double max_geodesic_lpp_residual = 0.0; // against an independent forward DP
    double max_dual_weight_residual = 0.0;
    int64_t paths_checked = 0;
    bool pass = false;
};
GeodesicIdentityReport check_geodesic_identities(const BusemannField& field, int64_t paths,
                                                 int64_t path_steps, uint64_t seed);

// Southwest arrows of the field, read through reflection, equal forward
// arrows of the reflected increment family; exact on shared weights.
struct ReflectionReport {
    int64_t sites_checked = 0;
    int64_t mismatches = 0;
    bool pass = false;
};
ReflectionReport check_reflection_identity(const BusemannField& field);

// For alpha < alpha', on shared weights, the alpha'-geodesic from x stays
// weakly right/below the alpha-geodesic, and sitewise B1' <= B1, B2' >= B2.
struct OrderingReport {
    int64_t sites_checked = 0;
    int64_t increment_violations = 0;
    int64_t path_violations = 0;
    bool pass = false;
};
OrderingReport check_direction_ordering(double alpha_low, double alpha_high, int64_t N,
                                        uint64_t seed, int64_t extent, int64_t paths);

} // namespace cgm
