#pragma once

#include <string>
#include <vector>

#include "cgm/geodesics.hpp"

namespace cgm::cli {

// Static SVG of the geodesic tree: primal out-edges in one stroke class, dual
// out-edges in another, an optional interface polyline highlighted. Pure
// function of its inputs.
std::string render_tree_svg(const ArrowField& arrows, const std::vector<Site>& interface_path,
                            int cell_px = 12);

} // namespace cgm::cli
