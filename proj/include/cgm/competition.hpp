#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cgm/busemann.hpp"
#include "cgm/geodesics.hpp"
#include "cgm/lattice.hpp"

namespace cgm {

enum class Zone : uint8_t { Outside = 0, Boundary = 1, Plus = 2, Minus = 3 };

// Splits a box into the boundary staircase and the regions northeast (Plus)
// and southwest (Minus) of it. A site's zone is decided by which side of the
// staircase its (1,1)-diagonal crossing falls on; diagonals the stored slice
// does not cut are Outside.
class RegionMask {
  public:
    RegionMask(const DownRightPath& boundary, LatticeWindow box);

    Zone zone(Site s) const { return zone_[static_cast<size_t>(box_.index(s))]; }
    int32_t boundary_index(Site s) const {
        return bidx_[static_cast<size_t>(box_.index(s))];
    }
    const LatticeWindow& box() const { return box_; }

  private:
    LatticeWindow box_;
    std::vector<Zone> zone_;
    std::vector<int32_t> bidx_;
};

// Boundary LPP: Busemann values along a down-right boundary slice, dual
// weights in the bulk. For every site whose southwest geodesic reaches the
// stored slice, H(x) recovers B(y0, x) exactly.
struct BoundaryLpp {
    DownRightPath boundary;
    LatticeWindow box;
    bool plus_side = true;
    Site y0; // reference boundary point (index 0)
    Grid h;
    std::vector<uint8_t> computed; // H defined at site
    std::vector<int32_t> root;     // boundary index the maximizing path starts from
    int64_t tie_count = 0;

    bool has_value(Site s) const { return computed[static_cast<size_t>(box.index(s))] != 0; }
    double value(Site s) const { return h(s); }
    int32_t root_at(Site s) const { return root[static_cast<size_t>(box.index(s))]; }
};

BoundaryLpp boundary_lpp_plus(const BusemannField& field, const DualWeightField& dual,
                              const DownRightPath& boundary, LatticeWindow box);

BoundaryLpp boundary_lpp_minus(const WeightField& weights, const BusemannField& field,
                               const DownRightPath& boundary, LatticeWindow box);

// Exactness of H against the Busemann difference it must reproduce,
// restricted to sites whose geodesic provably reaches the stored slice.
struct BoundaryIdentityReport {
    int64_t sites_checked = 0;
    int64_t sites_excluded = 0; // geodesic exits the box before hitting the slice
    double max_residual = 0.0;
    bool pass = false;
};
BoundaryIdentityReport check_boundary_identity(const BoundaryLpp& blpp,
                                               const BusemannField& field);

// Maximizing path of H+ from x, reversed, must equal the southwest geodesic
// from x stopped at the boundary (and the forward geodesic for H-).
struct BoundaryPathReport {
    int64_t paths_checked = 0;
    int64_t mismatches = 0;
    bool pass = false;
};
BoundaryPathReport check_boundary_paths(const BoundaryLpp& blpp, const BusemannField& field,
                                        int64_t samples, uint64_t seed);

// Up-right interface separating the H+ geodesic roots {y_k : k <= m} from
// {y_k : k >= m+1}.
struct CompetitionInterface {
    std::vector<Site> phi;
    bool truncated = false; // left the computed region
    int64_t tie_count = 0;
};
CompetitionInterface competition_interface_plus(const BoundaryLpp& blpp, int64_t m);

// Interface of the minus-side process emanating from boundary index m,
// following minimal H- into the Minus region (a down-left path).
CompetitionInterface competition_interface_minus(const BoundaryLpp& blpp, int64_t m);

// The plus interface coincides edge-for-edge with the forward geodesic from
// its first site.
struct InterfaceGeodesicReport {
    int64_t steps_compared = 0;
    int64_t mismatches = 0;
    bool pass = false;
};
InterfaceGeodesicReport check_interface_is_geodesic(const CompetitionInterface& ci,
                                                    const BusemannField& field);

// Sampled Plus sites must root on the side of the interface they sit on.
struct SeparationReport {
    int64_t sites_checked = 0;
    int64_t violations = 0;
    bool pass = false;
};
SeparationReport check_separation(const BoundaryLpp& blpp, const CompetitionInterface& ci,
                                  int64_t m, int64_t samples, uint64_t seed);

} // namespace cgm
