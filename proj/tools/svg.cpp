#include "svg.hpp"

#include <sstream>

namespace cgm::cli {

std::string render_tree_svg(const ArrowField& arrows, const std::vector<Site>& interface_path,
                            int cell_px) {
    const LatticeWindow& w = arrows.window();
    const int pad = cell_px;
    const auto sx = [&](double x1) { return pad + (x1 - static_cast<double>(w.lo.x1)) * cell_px; };
    const auto sy = [&](double x2) { return pad + (static_cast<double>(w.hi.x2) - x2) * cell_px; };
    const double width = 2.0 * pad + static_cast<double>(w.width() - 1) * cell_px;
    const double height = 2.0 * pad + static_cast<double>(w.height() - 1) * cell_px;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<style>.primal{stroke:#555;stroke-width:1.4}"
        << ".dual{stroke:#cc4444;stroke-width:1;stroke-dasharray:3 2}"
        << ".interface{stroke:#0066cc;stroke-width:2.5;fill:none}</style>\n";

    svg << "<g class=\"primal\">\n";
    for (int64_t x2 = w.lo.x2; x2 <= w.hi.x2; ++x2)
        for (int64_t x1 = w.lo.x1; x1 <= w.hi.x1; ++x1) {
            const Site x{x1, x2};
            const Site t = x + step_vector(arrows.arrow(x));
            if (!w.contains(t)) continue;
            svg << "<line x1=\"" << sx(static_cast<double>(x.x1)) << "\" y1=\""
                << sy(static_cast<double>(x.x2)) << "\" x2=\"" << sx(static_cast<double>(t.x1))
                << "\" y2=\"" << sy(static_cast<double>(t.x2)) << "\"/>\n";
        }
    svg << "</g>\n";

    // dual arrows at x+(1/2,1/2), descending opposite to the primal arrow
    svg << "<g class=\"dual\">\n";
    for (int64_t x2 = w.lo.x2; x2 <= w.hi.x2; ++x2)
        for (int64_t x1 = w.lo.x1; x1 <= w.hi.x1; ++x1) {
            const Site x{x1, x2};
            const Site d = step_vector(arrows.arrow(x));
            const double zx = static_cast<double>(x.x1) + 0.5;
            const double zy = static_cast<double>(x.x2) + 0.5;
            const double tx = zx - static_cast<double>(d.x1);
            const double ty = zy - static_cast<double>(d.x2);
            if (tx < static_cast<double>(w.lo.x1) || ty < static_cast<double>(w.lo.x2)) continue;
            svg << "<line x1=\"" << sx(zx) << "\" y1=\"" << sy(zy) << "\" x2=\"" << sx(tx)
                << "\" y2=\"" << sy(ty) << "\"/>\n";
        }
    svg << "</g>\n";

    if (!interface_path.empty()) {
        svg << "<polyline class=\"interface\" points=\"";
        for (const Site& s : interface_path)
            svg << sx(static_cast<double>(s.x1)) << "," << sy(static_cast<double>(s.x2)) << " ";
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace cgm::cli
