#include "cgm/busemann.hpp"

#include <algorithm>
#include <cmath>

namespace cgm {

BusemannField::BusemannField(const WeightField& weights, Site terminal, LatticeWindow window,
                             int64_t margin)
    : weights_(weights), terminal_(terminal), window_(window), margin_(margin) {
    if (window.hi != terminal)
        throw std::domain_error("BusemannField: window.hi must equal the terminal");
    if (margin < 1) throw std::domain_error("BusemannField: margin must be >= 1");
    g_ = backward_lpp(weights_, terminal_, window_).values;
}

LatticeWindow BusemannField::trusted() const {
    if (!has_trusted()) throw std::domain_error("BusemannField: empty trusted window");
    return LatticeWindow(window_.lo, terminal_ - Site{margin_, margin_});
}

bool BusemannField::has_trusted() const {
    return leq(window_.lo, terminal_ - Site{margin_, margin_});
}

double BusemannField::max_recovery_residual() const {
    double worst = 0.0;
    for (int64_t x2 = window_.lo.x2; x2 < window_.hi.x2; ++x2)
        for (int64_t x1 = window_.lo.x1; x1 < window_.hi.x1; ++x1) {
            const Site x{x1, x2};
            worst = std::max(worst, std::abs(weights_(x) - std::min(b1(x), b2(x))));
        }
    return worst;
}

double BusemannField::max_unit_square_residual() const {
    double worst = 0.0;
    for (int64_t x2 = window_.lo.x2; x2 < window_.hi.x2; ++x2)
        for (int64_t x1 = window_.lo.x1; x1 < window_.hi.x1; ++x1) {
            const Site x{x1, x2};
            worst = std::max(worst, std::abs(b1(x) + b2(x + e1) - b2(x) - b1(x + e2)));
        }
    return worst;
}

Site direction_terminal(double alpha, int64_t N) {
    const double u1 = direction_of_alpha(alpha);
    int64_t v1 = static_cast<int64_t>(std::floor(static_cast<double>(N) * u1 + 0.5));
    int64_t v2 = static_cast<int64_t>(std::floor(static_cast<double>(N) * (1.0 - u1) + 0.5));
    while (v1 + v2 > N) (v1 >= v2 ? v1 : v2) -= 1;
    while (v1 + v2 < N) (v1 >= v2 ? v1 : v2) += 1;
    return {v1, v2};
}

BusemannField make_busemann_field(double alpha, int64_t N, uint64_t seed, int64_t extent,
                                  std::optional<int64_t> margin) {
    const int64_t m = margin.value_or(std::max<int64_t>(N / 4, 1));
    const Site v = direction_terminal(alpha, N);
    const Site lo = v - Site{m + extent, m + extent};
    const WeightField w(seed, LatticeWindow(lo, v));
    return BusemannField(w, v, LatticeWindow(lo, v), m);
}

namespace {

// Staircase from x up-right to y: run1 of e1 then e2 (or the transpose),
// randomized per pair; both orders must give the same B-sum.
double path_sum(const BusemannField& f, const std::vector<Site>& sites) {
    double acc = 0.0;
    for (size_t k = 0; k + 1 < sites.size(); ++k) {
        const Site d = sites[k + 1] - sites[k];
        acc += d == e1 ? f.b1(sites[k]) : f.b2(sites[k]);
    }
    return acc;
}

std::vector<Site> monotone_path(Site x, Site y, bool e1_first) {
    std::vector<Site> s{x};
    Site cur = x;
    const auto push_run = [&](Site dir, int64_t count) {
        for (int64_t i = 0; i < count; ++i) {
            cur = cur + dir;
            s.push_back(cur);
        }
    };
    if (e1_first) {
        push_run(e1, y.x1 - x.x1);
        push_run(e2, y.x2 - x.x2);
    } else {
        push_run(e2, y.x2 - x.x2);
        push_run(e1, y.x1 - x.x1);
    }
    return s;
}

} // namespace

CocycleReport check_cocycle(double alpha, int64_t N, uint64_t seed, int64_t extent,
                            int64_t path_pairs, int64_t shift_replicas) {
    CocycleReport rep;
    const BusemannField f = make_busemann_field(alpha, N, seed, extent);
    rep.max_unit_square_residual = f.max_unit_square_residual();

    const LatticeWindow tw = f.trusted();
    const uint64_t pick = rng::lane_seed(seed, rng::Lane::Oracle);
    for (int64_t p = 0; p < path_pairs; ++p) {
        const auto r = [&](int64_t lane, int64_t span) {
            return static_cast<int64_t>(rng::site_hash(pick, Site{p, lane}) %
                                        static_cast<uint64_t>(span));
        };
        const Site x{tw.lo.x1 + r(0, tw.width() / 2), tw.lo.x2 + r(1, tw.height() / 2)};
        const Site y{x.x1 + 1 + r(2, tw.hi.x1 - x.x1), x.x2 + 1 + r(3, tw.hi.x2 - x.x2)};
        const double s1 = path_sum(f, monotone_path(x, y, true));
        const double s2 = path_sum(f, monotone_path(x, y, false));
        rep.max_path_pair_residual = std::max(rep.max_path_pair_residual, std::abs(s1 - s2));
        rep.max_path_pair_residual =
            std::max(rep.max_path_pair_residual, std::abs(s1 - f.b(x, y)));
    }
    rep.path_pairs = path_pairs;

    // translation check: same construction on a key-shifted field
    std::vector<double> base_means, shifted_means;
    const Site shift{37, -23};
    for (int64_t r = 0; r < shift_replicas; ++r) {
        const uint64_t rs = rng::replica_seed(seed, static_cast<uint64_t>(r));
        const BusemannField a = make_busemann_field(alpha, N, rs, extent);
        const WeightField ws = a.weights().shifted(shift);
        const BusemannField b(ws, a.terminal(), a.window(), a.margin());
        const LatticeWindow t = a.trusted();
        double sa = 0.0, sb = 0.0;
        int64_t n = 0;
        for (int64_t x2 = t.lo.x2; x2 <= t.hi.x2; x2 += 4)
            for (int64_t x1 = t.lo.x1; x1 <= t.hi.x1; x1 += 4) {
                sa += a.b1({x1, x2});
                sb += b.b1({x1, x2});
                ++n;
            }
        base_means.push_back(sa / static_cast<double>(n));
        shifted_means.push_back(sb / static_cast<double>(n));
    }
    const auto sa = stats::summarize(base_means);
    const auto sb = stats::summarize(shifted_means);
    rep.mean_b1 = sa.mean;
    rep.mean_b1_shifted = sb.mean;
    rep.shift_diff_se = std::sqrt(sa.se * sa.se + sb.se * sb.se);
    rep.additivity_pass =
        rep.max_unit_square_residual < 1e-9 && rep.max_path_pair_residual < 1e-9;
    rep.stationarity_pass = std::abs(rep.mean_b1 - rep.mean_b1_shifted) <= 3.0 * rep.shift_diff_se;
    return rep;
}

DirectionMonotonicityReport check_direction_monotonicity(const WeightField& weights, Site v_left,
                                                         Site v_right, LatticeWindow window,
                                                         double slack) {
    const Site d = v_right - v_left;
    const bool e1_chain = d.x2 == 0 && d.x1 > 0;
    const bool e2_chain = d.x1 == 0 && d.x2 > 0;
    if (!e1_chain && !e2_chain)
        throw std::domain_error(
            "check_direction_monotonicity: terminals must differ by a chain of e1 or of e2 steps");

    const LppTable gl = backward_lpp(weights, v_left, LatticeWindow(window.lo, v_left));
    const LppTable gr = backward_lpp(weights, v_right, LatticeWindow(window.lo, v_right));

    DirectionMonotonicityReport rep;
    const Site hi = v_left - e1 - e2; // b1 and b2 both defined up to here for both terminals
    for (int64_t x2 = window.lo.x2; x2 <= hi.x2; ++x2) {
        for (int64_t x1 = window.lo.x1; x1 <= hi.x1; ++x1) {
            const Site x{x1, x2};
            const double i_l = gl.values(x) - gl.values(x + e1);
            const double i_r = gr.values(x) - gr.values(x + e1);
            const double j_l = gl.values(x) - gl.values(x + e2);
            const double j_r = gr.values(x) - gr.values(x + e2);
            // e1 chain: I falls, J rises; e2 chain: I rises, J falls.
            const double m1 = e1_chain ? i_l - i_r : i_r - i_l;
            const double m2 = e1_chain ? j_r - j_l : j_l - j_r;
            const double margin = std::min(m1, m2);
            ++rep.sites_checked;
            if (margin < -slack) ++rep.violations;
            rep.worst = std::min(rep.worst, margin);
        }
    }
    rep.pass = rep.violations == 0;
    return rep;
}

std::vector<Site> StatStrip::sites() const {
    std::vector<Site> s;
    s.reserve(static_cast<size_t>(2 * halfwidth + 1));
    for (int64_t j = -halfwidth; j <= halfwidth; ++j)
        s.push_back({center.x1 + j, center.x2 - j});
    return s;
}

StatStrip make_stat_strip(double alpha, int64_t N, double t_mult, double width_frac) {
    const double u1 = direction_of_alpha(alpha);
    const double umin = std::min(u1, 1.0 - u1);
    const int64_t margin = std::max<int64_t>(N / 4, 1);
    const double t_min = static_cast<double>(margin) / umin;
    const int64_t t_star = static_cast<int64_t>(std::ceil(t_mult * t_min));

    StatStrip strip;
    strip.t_star = t_star;
    const Site v = direction_terminal(alpha, N);
    const int64_t d1 = static_cast<int64_t>(std::floor(static_cast<double>(t_star) * u1 + 0.5));
    const int64_t d2 = t_star - d1;
    // strip ends must clear the trust margin and stay below the terminal
    const int64_t cap = std::min(d1, d2) - margin;
    if (cap < 4)
        throw std::domain_error("make_stat_strip: horizon too small for a trusted strip");
    strip.halfwidth =
        std::min(cap, std::max<int64_t>(8, static_cast<int64_t>(width_frac *
                                                                static_cast<double>(t_star))));
    strip.center = v - Site{d1, d2};
    const Site lo{strip.center.x1 - strip.halfwidth - 2, strip.center.x2 - strip.halfwidth - 2};
    strip.window = LatticeWindow(lo, v);
    return strip;
}

MarginalReport marginal_statistics(double alpha, int64_t N, int64_t replicas, uint64_t seed) {
    MarginalReport rep;
    rep.alpha = alpha;
    rep.horizon = N;
    rep.replicas = replicas;
    rep.target_b1 = 1.0 / alpha;
    rep.target_b2 = 1.0 / (1.0 - alpha);

    const StatStrip strip = make_stat_strip(alpha, N);
    const std::vector<Site> sites = strip.sites();
    rep.samples_per_replica = static_cast<int64_t>(sites.size());

    std::vector<double> all_b1, all_b2;
    int64_t pass_b1 = 0, pass_b2 = 0;
    for (int64_t r = 0; r < replicas; ++r) {
        const uint64_t rs = rng::replica_seed(seed, static_cast<uint64_t>(r));
        const WeightField w(rs, strip.window);
        const BusemannField f(w, strip.window.hi, strip.window, std::max<int64_t>(N / 4, 1));
        std::vector<double> v1, v2;
        v1.reserve(sites.size());
        v2.reserve(sites.size());
        for (const Site& s : sites) {
            v1.push_back(f.b1(s));
            v2.push_back(f.b2(s));
        }
        if (stats::ks_statistic_exp(v1, alpha) < stats::ks_critical(v1.size())) ++pass_b1;
        if (stats::ks_statistic_exp(v2, 1.0 - alpha) < stats::ks_critical(v2.size())) ++pass_b2;
        all_b1.insert(all_b1.end(), v1.begin(), v1.end());
        all_b2.insert(all_b2.end(), v2.begin(), v2.end());
    }
    const auto s1 = stats::summarize(all_b1);
    const auto s2 = stats::summarize(all_b2);
    rep.mean_b1 = s1.mean;
    rep.mean_b2 = s2.mean;
    rep.se_b1 = s1.se;
    rep.se_b2 = s2.se;
    rep.ks_pass_rate_b1 = static_cast<double>(pass_b1) / static_cast<double>(replicas);
    rep.ks_pass_rate_b2 = static_cast<double>(pass_b2) / static_cast<double>(replicas);
    rep.mean_bias_b1 = (rep.mean_b1 - rep.target_b1) / rep.target_b1;
    rep.pass = std::abs(rep.mean_b1 - rep.target_b1) <= 0.05 * rep.target_b1 &&
               std::abs(rep.mean_b2 - rep.target_b2) <= 0.05 * rep.target_b2 &&
               rep.ks_pass_rate_b1 >= 0.9 && rep.ks_pass_rate_b2 >= 0.9;
    return rep;
}

DualWeightField dual_weights(const BusemannField& field) {
    const LatticeWindow w = field.window();
    if (w.width() < 2 || w.height() < 2)
        throw std::domain_error("dual_weights: window too small");
    DualWeightField d{Grid(LatticeWindow(w.lo + e1 + e2, w.hi))};
    for (int64_t x2 = w.lo.x2 + 1; x2 <= w.hi.x2; ++x2)
        for (int64_t x1 = w.lo.x1 + 1; x1 <= w.hi.x1; ++x1) {
            const Site x{x1, x2};
            d.x(x) = std::min(field.b1(x - e1), field.b2(x - e2));
        }
    return d;
}

DualMarginalReport dual_weight_statistics(double alpha, int64_t N, int64_t replicas,
                                          uint64_t seed) {
    DualMarginalReport rep;
    rep.replicas = replicas;
    const StatStrip strip = make_stat_strip(alpha, N);
    const std::vector<Site> sites = strip.sites();

    std::vector<double> pooled;
    int64_t pass = 0;
    for (int64_t r = 0; r < replicas; ++r) {
        const uint64_t rs = rng::replica_seed(seed, static_cast<uint64_t>(r));
        const WeightField w(rs, strip.window);
        const BusemannField f(w, strip.window.hi, strip.window, std::max<int64_t>(N / 4, 1));
        std::vector<double> xs;
        xs.reserve(sites.size());
        for (const Site& s : sites) xs.push_back(std::min(f.b1(s - e1), f.b2(s - e2)));
        if (stats::ks_statistic_exp(xs, 1.0) < stats::ks_critical(xs.size())) ++pass;
        pooled.insert(pooled.end(), xs.begin(), xs.end());
    }
    rep.ks_pass_rate = static_cast<double>(pass) / static_cast<double>(replicas);
    rep.mean_x = stats::summarize(pooled).mean;
    rep.pass = rep.ks_pass_rate >= 0.9;
    return rep;
}

} // namespace cgm
