#include "cgm/stationary.hpp"

#include <algorithm>
#include <cmath>

namespace cgm {

double alpha_of_direction(double u1) {
    if (!(u1 > 0.0 && u1 < 1.0)) throw std::domain_error("alpha_of_direction: u1 must be in (0,1)");
    const double s = std::sqrt(u1);
    return s / (s + std::sqrt(1.0 - u1));
}

double direction_of_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("direction_of_alpha: alpha must be in (0,1)");
    const double a2 = alpha * alpha;
    const double b2 = (1.0 - alpha) * (1.0 - alpha);
    return a2 / (a2 + b2);
}

DirectionParam DirectionParam::from_alpha(double alpha) {
    return {direction_of_alpha(alpha), alpha};
}

DirectionParam DirectionParam::from_u1(double u1) { return {u1, alpha_of_direction(u1)}; }

StationaryStep stationary_step(double zeta, double i_south, double j_west) {
    const double d = i_south - j_west;
    return {zeta + std::max(d, 0.0), zeta + std::max(-d, 0.0), std::min(i_south, j_west)};
}

StationarySystem::StationarySystem(double alpha, uint64_t seed, int64_t m, int64_t n)
    : alpha_(alpha), seed_(seed), m_(m), n_(n),
      i_(LatticeWindow{{1, 0}, {m, n}}), j_(LatticeWindow{{0, 1}, {m, n}}),
      zeta_(LatticeWindow{{1, 1}, {m, n}}), eta_(LatticeWindow{{0, 0}, {m - 1, n - 1}}) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("StationarySystem: alpha must be in (0,1)");
    if (m < 1 || n < 1) throw std::domain_error("StationarySystem: need m, n >= 1");

    const uint64_t seed_i = rng::lane_seed(seed, rng::Lane::BoundaryI);
    const uint64_t seed_j = rng::lane_seed(seed, rng::Lane::BoundaryJ);
    const uint64_t seed_z = rng::lane_seed(seed, rng::Lane::Bulk);

    for (int64_t i = 1; i <= m; ++i) i_({i, 0}) = exp_sample(seed_i, {i, 0}, alpha);
    for (int64_t j = 1; j <= n; ++j) j_({0, j}) = exp_sample(seed_j, {0, j}, 1.0 - alpha);
    for (int64_t j = 1; j <= n; ++j)
        for (int64_t i = 1; i <= m; ++i) zeta_({i, j}) = exp_sample(seed_z, {i, j}, 1.0);

    for (int64_t j = 1; j <= n; ++j) {
        for (int64_t i = 1; i <= m; ++i) {
            const Site x{i, j};
            const StationaryStep s = stationary_step(zeta_(x), i_(x - e2), j_(x - e1));
            i_(x) = s.i;
            j_(x) = s.j;
            eta_(x - e1 - e2) = s.eta;
        }
    }
}

double StationarySystem::max_structural_residual() const {
    double worst = 0.0;
    for (int64_t j = 1; j <= n_; ++j) {
        for (int64_t i = 1; i <= m_; ++i) {
            const Site x{i, j};
            const double is = i_(x - e2), jw = j_(x - e1), z = zeta_(x);
            const double d = is - jw;
            worst = std::max(worst, std::abs(eta_(x - e1 - e2) - std::min(is, jw)));
            worst = std::max(worst, std::abs(i_(x) - (z + std::max(d, 0.0))));
            worst = std::max(worst, std::abs(j_(x) - (z + std::max(-d, 0.0))));
            worst = std::max(worst, std::abs(z - std::min(i_(x), j_(x))));
        }
    }
    return worst;
}

StationaryLpp stationary_lpp(const StationarySystem& sys) {
    const int64_t m = sys.m(), n = sys.n();
    const LatticeWindow win{{0, 0}, {m, n}};
    std::vector<long double> acc(static_cast<size_t>(win.area()), 0.0L);
    const auto ix = [&](int64_t i, int64_t j) { return static_cast<size_t>(win.index({i, j})); };

    acc[ix(0, 0)] = 0.0L;
    for (int64_t i = 1; i <= m; ++i) acc[ix(i, 0)] = acc[ix(i - 1, 0)] + sys.I({i, 0});
    for (int64_t j = 1; j <= n; ++j) acc[ix(0, j)] = acc[ix(0, j - 1)] + sys.J({0, j});
    for (int64_t j = 1; j <= n; ++j)
        for (int64_t i = 1; i <= m; ++i)
            acc[ix(i, j)] = sys.zeta({i, j}) + std::max(acc[ix(i - 1, j)], acc[ix(i, j - 1)]);

    StationaryLpp out{Grid(win), 0.0};
    for (int64_t j = 0; j <= n; ++j)
        for (int64_t i = 0; i <= m; ++i) out.g({i, j}) = static_cast<double>(acc[ix(i, j)]);

    for (int64_t j = 1; j <= n; ++j) {
        for (int64_t i = 1; i <= m; ++i) {
            const Site x{i, j};
            out.max_increment_residual =
                std::max(out.max_increment_residual,
                         std::abs(out.g(x) - out.g(x - e1) - sys.I(x)));
            out.max_increment_residual =
                std::max(out.max_increment_residual,
                         std::abs(out.g(x) - out.g(x - e2) - sys.J(x)));
        }
    }
    return out;
}

namespace {

// Edge variables along a down-right path: step e1 into x reads I(x), step -e2
// from x reads J(x).
struct PathEdges {
    std::vector<Site> i_sites;
    std::vector<Site> j_sites;
};

PathEdges edge_sites(const DownRightPath& path) {
    path.validate();
    PathEdges e;
    for (size_t k = 1; k < path.sites.size(); ++k) {
        const Site d = path.sites[k] - path.sites[k - 1];
        if (d == e1)
            e.i_sites.push_back(path.sites[k]);
        else
            e.j_sites.push_back(path.sites[k - 1]);
    }
    return e;
}

} // namespace

DownRightLawReport check_downright_law(double alpha, uint64_t seed, int64_t m, int64_t n,
                                       const DownRightPath& path, int64_t replicas) {
    const PathEdges edges = edge_sites(path);
    const LatticeWindow quadrant{{0, 0}, {m, n}};
    for (const Site& s : path.sites)
        if (!quadrant.contains(s))
            throw std::domain_error("check_downright_law: path exits the quadrant");
    for (const Site& s : edges.i_sites)
        if (s.x1 < 1) throw std::domain_error("check_downright_law: I-edge needs x1 >= 1");
    for (const Site& s : edges.j_sites)
        if (s.x2 < 1) throw std::domain_error("check_downright_law: J-edge needs x2 >= 1");

    // eta probes strictly southwest of the path (eta lives on [0,m-1]x[0,n-1])
    std::vector<Site> eta_sites;
    for (size_t k = 0; k < path.sites.size(); k += 2) {
        const Site s = path.sites[k] - e1 - e2 - e1 - e2;
        if (s.x1 >= 0 && s.x2 >= 0 && s.x1 <= m - 1 && s.x2 <= n - 1) eta_sites.push_back(s);
    }

    const size_t ne = edges.i_sites.size() + edges.j_sites.size();
    std::vector<std::vector<double>> edge_samples(ne);
    std::vector<std::vector<double>> eta_samples(eta_sites.size());
    std::vector<double> pooled_i, pooled_j;
    int64_t replica_pass = 0;

    for (int64_t r = 0; r < replicas; ++r) {
        const StationarySystem sys(alpha, rng::replica_seed(seed, static_cast<uint64_t>(r)), m, n);
        std::vector<double> vi, vj;
        vi.reserve(edges.i_sites.size());
        vj.reserve(edges.j_sites.size());
        size_t col = 0;
        for (const Site& s : edges.i_sites) {
            const double v = sys.I(s);
            vi.push_back(v);
            edge_samples[col++].push_back(v);
        }
        for (const Site& s : edges.j_sites) {
            const double v = sys.J(s);
            vj.push_back(v);
            edge_samples[col++].push_back(v);
        }
        for (size_t q = 0; q < eta_sites.size(); ++q) eta_samples[q].push_back(sys.eta(eta_sites[q]));
        pooled_i.insert(pooled_i.end(), vi.begin(), vi.end());
        pooled_j.insert(pooled_j.end(), vj.begin(), vj.end());

        const bool ok_i = vi.empty() || stats::ks_statistic_exp(vi, alpha) <
                                            stats::ks_critical(vi.size(), 0.01);
        const bool ok_j = vj.empty() || stats::ks_statistic_exp(vj, 1.0 - alpha) <
                                            stats::ks_critical(vj.size(), 0.01);
        if (ok_i && ok_j) ++replica_pass;
    }

    DownRightLawReport rep;
    rep.replicas = replicas;
    rep.i_edges = static_cast<int64_t>(edges.i_sites.size());
    rep.j_edges = static_cast<int64_t>(edges.j_sites.size());
    rep.ks_i = pooled_i.empty() ? 0.0 : stats::ks_statistic_exp(pooled_i, alpha);
    rep.ks_j = pooled_j.empty() ? 0.0 : stats::ks_statistic_exp(pooled_j, 1.0 - alpha);
    rep.ks_i_critical = pooled_i.empty() ? 0.0 : stats::ks_critical(pooled_i.size());
    rep.ks_j_critical = pooled_j.empty() ? 0.0 : stats::ks_critical(pooled_j.size());
    rep.per_replica_pass_rate =
        replicas > 0 ? static_cast<double>(replica_pass) / static_cast<double>(replicas) : 0.0;

    for (size_t a = 0; a < edge_samples.size(); ++a)
        for (size_t b = a + 1; b < edge_samples.size(); ++b)
            rep.max_abs_edge_correlation =
                std::max(rep.max_abs_edge_correlation,
                         std::abs(stats::correlation(edge_samples[a], edge_samples[b])));
    for (const auto& es : eta_samples)
        for (const auto& edge : edge_samples)
            rep.max_abs_eta_correlation = std::max(
                rep.max_abs_eta_correlation, std::abs(stats::correlation(es, edge)));

    rep.correlation_bound = 4.0 / std::sqrt(static_cast<double>(std::max<int64_t>(replicas, 1)));
    rep.pass = rep.ks_i < rep.ks_i_critical && rep.ks_j < rep.ks_j_critical &&
               rep.max_abs_edge_correlation < rep.correlation_bound &&
               rep.max_abs_eta_correlation < rep.correlation_bound &&
               rep.per_replica_pass_rate >= 0.95;
    return rep;
}

} // namespace cgm
