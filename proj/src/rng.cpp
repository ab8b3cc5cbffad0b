#include "cgm/rng.hpp"

#include <cmath>

namespace cgm {

double exp_sample(uint64_t seed, Site site, double rate) {
    if (!(rate > 0.0)) throw std::domain_error("exp_sample: rate must be positive");
    const double u = rng::to_unit(rng::site_hash(seed, site));
    return -std::log(u) / rate;
}

WeightField::WeightField(uint64_t seed, LatticeWindow window, double rate, Site shift)
    : seed_(seed), window_(window), rate_(rate), shift_(shift) {
    if (!(rate > 0.0)) throw std::domain_error("WeightField: rate must be positive");
}

double WeightField::operator()(Site s) const { return exp_sample(seed_, s + shift_, rate_); }

double WeightField::at(Site s) const {
    if (!window_.contains(s))
        throw std::domain_error("WeightField: site " + to_string(s) + " outside window");
    return (*this)(s);
}

WeightField WeightField::shifted(Site z) const {
    return WeightField(seed_, window_, rate_, shift_ + z);
}

WeightField WeightField::with_window(LatticeWindow w) const {
    return WeightField(seed_, w, rate_, shift_);
}

WeightField make_weight_field(uint64_t seed, LatticeWindow window, double rate) {
    return WeightField(seed, window, rate);
}

DownRightPath staircase_path(Site center, int64_t halfwidth) {
    DownRightPath p;
    // start at the top-left end: center + halfwidth*(e2-e1), descend by
    // alternating e1, -e2 so every antidiagonal site center + j*(e1-e2) is hit.
    Site s{center.x1 - halfwidth, center.x2 + halfwidth};
    p.sites.push_back(s);
    for (int64_t j = -halfwidth; j < halfwidth; ++j) {
        s = s + e1;
        p.sites.push_back(s);
        s = s - e2;
        p.sites.push_back(s);
    }
    return p;
}

} // namespace cgm
