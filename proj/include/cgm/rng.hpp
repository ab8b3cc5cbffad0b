#pragma once

#include <cstdint>
#include <stdexcept>

#include "cgm/lattice.hpp"

namespace cgm {

// Stateless counter-based sampling: every draw is a pure function of
// (seed, site, rate), so fields can be re-queried, sub-windowed and evaluated
// from any number of threads with identical results.

namespace rng {

// 64-bit finalizer (murmur3 variant); full avalanche.
constexpr uint64_t mix64(uint64_t z) {
    z ^= z >> 33;
    z *= 0xff51afd7ed558ccdULL;
    z ^= z >> 33;
    z *= 0xc4ceb9fe1a85ec53ULL;
    z ^= z >> 33;
    return z;
}

// Hash of (seed, site): coordinates are absorbed with distinct odd
// multipliers so (x1,x2) and (x2,x1) decorrelate.
constexpr uint64_t site_hash(uint64_t seed, Site s) {
    uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (static_cast<uint64_t>(s.x1) * 0xbf58476d1ce4e5b9ULL));
    h = mix64(h ^ (static_cast<uint64_t>(s.x2) * 0x94d049bb133111ebULL));
    return h;
}

// Uniform in (0,1): 53-bit mantissa, floored at 2^-64 so -log stays finite.
constexpr double to_unit(uint64_t h) {
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    return u < 0x1.0p-64 ? 0x1.0p-64 : u;
}

// Independent seed lanes: boundary and bulk fields of one system share a user
// seed but must be mutually independent.
enum class Lane : uint64_t {
    Bulk = 0,
    BoundaryI = 0x49e1c5c97f2ab9d1ULL,
    BoundaryJ = 0x4a8ad5741f5e31c3ULL,
    Replica = 0x6c62272e07bb0142ULL,
    Oracle = 0x27d4eb2f165667c5ULL,
};

constexpr uint64_t lane_seed(uint64_t seed, Lane lane) {
    return lane == Lane::Bulk ? seed : mix64(seed ^ static_cast<uint64_t>(lane));
}

// Per-replica sub-seed for independent Monte Carlo repetitions.
constexpr uint64_t replica_seed(uint64_t seed, uint64_t replica) {
    return mix64(lane_seed(seed, Lane::Replica) + 0x632be59bd9b4e019ULL * (replica + 1));
}

} // namespace rng

// Exp(rate) draw keyed by (seed, site). Inverse CDF of the survival function:
// -ln(U)/rate with U uniform in (0,1).
double exp_sample(uint64_t seed, Site site, double rate);

// Lazily evaluated i.i.d. Exp(rate) field over a window. Values depend only on
// (seed, site + shift, rate); two fields with the same key agree wherever
// their windows overlap.
class WeightField {
  public:
    WeightField(uint64_t seed, LatticeWindow window, double rate = 1.0, Site shift = {0, 0});

    double operator()(Site s) const;         // unchecked
    double at(Site s) const;                 // window-checked
    bool in_window(Site s) const { return window_.contains(s); }

    uint64_t seed() const { return seed_; }
    double rate() const { return rate_; }
    const LatticeWindow& window() const { return window_; }
    Site shift() const { return shift_; }

    // Same ω viewed from a translated origin: shifted(z)(x) == (*this)(x + z).
    WeightField shifted(Site z) const;
    // Same key, different window (sub-windowing or growth).
    WeightField with_window(LatticeWindow w) const;

  private:
    uint64_t seed_;
    LatticeWindow window_;
    double rate_;
    Site shift_;
};

WeightField make_weight_field(uint64_t seed, LatticeWindow window, double rate = 1.0);

} // namespace cgm
