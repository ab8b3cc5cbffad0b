#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgm {

// Lattice site with integer coordinates. Coordinatewise partial order.
struct Site {
    int64_t x1 = 0;
    int64_t x2 = 0;

    friend constexpr bool operator==(Site a, Site b) { return a.x1 == b.x1 && a.x2 == b.x2; }
    friend constexpr bool operator!=(Site a, Site b) { return !(a == b); }
    friend constexpr Site operator+(Site a, Site b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
    friend constexpr Site operator-(Site a, Site b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
    constexpr Site operator-() const { return {-x1, -x2}; }
};

inline constexpr Site e1{1, 0};
inline constexpr Site e2{0, 1};

// a <= b coordinatewise
constexpr bool leq(Site a, Site b) { return a.x1 <= b.x1 && a.x2 <= b.x2; }

constexpr int64_t l1_dist(Site a, Site b) {
    const int64_t d1 = a.x1 > b.x1 ? a.x1 - b.x1 : b.x1 - a.x1;
    const int64_t d2 = a.x2 > b.x2 ? a.x2 - b.x2 : b.x2 - a.x2;
    return d1 + d2;
}

inline std::string to_string(Site s) {
    return "(" + std::to_string(s.x1) + "," + std::to_string(s.x2) + ")";
}

// Closed rectangle of lattice sites, both corners inclusive.
struct LatticeWindow {
    Site lo;
    Site hi;

    LatticeWindow() = default;
    LatticeWindow(Site lo_, Site hi_) : lo(lo_), hi(hi_) {
        if (!leq(lo, hi))
            throw std::domain_error("LatticeWindow: lo must be <= hi, got lo=" + cgm::to_string(lo_) +
                                    " hi=" + cgm::to_string(hi_));
    }

    int64_t width() const { return hi.x1 - lo.x1 + 1; }
    int64_t height() const { return hi.x2 - lo.x2 + 1; }
    int64_t area() const { return width() * height(); }
    bool contains(Site s) const { return leq(lo, s) && leq(s, hi); }

    // Row-major index, x1 fastest.
    int64_t index(Site s) const { return (s.x2 - lo.x2) * width() + (s.x1 - lo.x1); }
    Site site_at(int64_t idx) const {
        return {lo.x1 + idx % width(), lo.x2 + idx / width()};
    }

    friend bool operator==(const LatticeWindow& a, const LatticeWindow& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

// Dense double field over a window.
class Grid {
  public:
    Grid() = default;
    Grid(LatticeWindow w, double fill = 0.0) : win_(w), data_(static_cast<size_t>(w.area()), fill) {}

    double operator()(Site s) const { return data_[static_cast<size_t>(win_.index(s))]; }
    double& operator()(Site s) { return data_[static_cast<size_t>(win_.index(s))]; }
    double at_checked(Site s) const {
        if (!win_.contains(s)) throw std::domain_error("Grid: site " + cgm::to_string(s) + " outside window");
        return (*this)(s);
    }

    const LatticeWindow& window() const { return win_; }
    const std::vector<double>& values() const { return data_; }

  private:
    LatticeWindow win_;
    std::vector<double> data_;
};

// Unit step of an up-right path.
enum class Step : uint8_t { E1 = 0, E2 = 1 };

constexpr Site step_vector(Step s) { return s == Step::E1 ? e1 : e2; }

// Up-right nearest-neighbor path; sites.size() == steps.size() + 1.
struct GeodesicPath {
    std::vector<Site> sites;
    std::vector<Step> steps;

    bool valid() const {
        if (sites.empty() || sites.size() != steps.size() + 1) return false;
        for (size_t k = 0; k < steps.size(); ++k)
            if (sites[k] + step_vector(steps[k]) != sites[k + 1]) return false;
        return true;
    }
    size_t length() const { return steps.size(); }
};

// Finite slice of a down-right path: consecutive increments in {e1, -e2}.
struct DownRightPath {
    std::vector<Site> sites;

    void validate() const {
        if (sites.empty()) throw std::domain_error("DownRightPath: empty");
        for (size_t k = 1; k < sites.size(); ++k) {
            const Site d = sites[k] - sites[k - 1];
            if (!(d == e1 || d == Site{0, -1}))
                throw std::domain_error("DownRightPath: step " + std::to_string(k) +
                                        " not in {e1, -e2}");
        }
    }
};

// Down-right staircase through `center`, alternating e1 and -e2 steps,
// visiting the antidiagonal sites center + j*(e1-e2) for |j| <= halfwidth.
DownRightPath staircase_path(Site center, int64_t halfwidth);

// Packs a site into a 64-bit key (coordinates must fit in 32 bits).
constexpr uint64_t site_key(Site s) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(static_cast<int32_t>(s.x1))) << 32) |
           static_cast<uint64_t>(static_cast<uint32_t>(static_cast<int32_t>(s.x2)));
}

} // namespace cgm
