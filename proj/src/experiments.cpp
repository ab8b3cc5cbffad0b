#include "cgm/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "cgm/lpp.hpp"
#include "cgm/parallel.hpp"
#include "cgm/stats.hpp"

namespace cgm {

Gate make_gate(std::string name, double observed, double lo, double hi) {
    Gate g;
    g.name = std::move(name);
    g.observed = observed;
    g.lo = lo;
    g.hi = hi;
    g.pass = observed >= lo && observed <= hi;
    return g;
}

bool all_pass(const std::vector<Gate>& gates) {
    for (const Gate& g : gates)
        if (!g.pass) return false;
    return true;
}

// ---- shape theorem -------------------------------------------------------

ShapeReport run_shape_convergence(const std::vector<int64_t>& sizes, int64_t seeds, uint64_t seed,
                                  double max_gap_bound) {
    if (sizes.empty() || !std::is_sorted(sizes.begin(), sizes.end()))
        throw std::domain_error("run_shape_convergence: sizes must be ascending");
    ShapeReport rep;
    rep.sizes = sizes;
    rep.seeds = seeds;

    const int64_t ns = static_cast<int64_t>(sizes.size());
    std::vector<double> gap(static_cast<size_t>(ns * seeds), 0.0);
    parallel_for(ns * seeds, [&](int64_t job) {
        const int64_t si = job / seeds;
        const int64_t sd = job % seeds;
        const int64_t N = sizes[static_cast<size_t>(si)];
        const WeightField w(rng::replica_seed(seed, static_cast<uint64_t>(sd)),
                            LatticeWindow{{0, 0}, {N, N}});
        const LppTable t = forward_lpp(w, {0, 0}, w.window());
        double worst = 0.0;
        for (int64_t i = 0; i <= N; ++i) {
            const double g = shape_function(static_cast<double>(i), static_cast<double>(N - i));
            worst = std::max(worst, std::abs(t.values({i, N - i}) - g) / static_cast<double>(N));
        }
        gap[static_cast<size_t>(job)] = worst;
    });

    rep.max_gap.resize(sizes.size(), 0.0);
    rep.mean_gap.resize(sizes.size(), 0.0);
    for (int64_t si = 0; si < ns; ++si) {
        double mx = 0.0, mean = 0.0;
        for (int64_t sd = 0; sd < seeds; ++sd) {
            const double v = gap[static_cast<size_t>(si * seeds + sd)];
            mx = std::max(mx, v);
            mean += v;
        }
        rep.max_gap[static_cast<size_t>(si)] = mx;
        rep.mean_gap[static_cast<size_t>(si)] = mean / static_cast<double>(seeds);
    }

    int64_t decreased = 0;
    for (int64_t sd = 0; sd < seeds; ++sd)
        if (gap[static_cast<size_t>((ns - 1) * seeds + sd)] < gap[static_cast<size_t>(sd)])
            ++decreased;
    rep.paired_decrease_rate = static_cast<double>(decreased) / static_cast<double>(seeds);

    rep.gates.push_back(
        make_gate("shape_max_gap_at_largest_size", rep.max_gap.back(), 0.0, max_gap_bound));
    rep.gates.push_back(make_gate("shape_paired_decrease_rate", rep.paired_decrease_rate, 0.9, 1.0));
    return rep;
}

// ---- first-step law ------------------------------------------------------

FirstStepReport run_first_step(double alpha, int64_t N, int64_t replicas, uint64_t seed) {
    FirstStepReport rep;
    rep.alpha = alpha;
    rep.u1 = direction_of_alpha(alpha);
    rep.horizon = N;
    rep.replicas = replicas;

    const StatStrip strip = make_stat_strip(alpha, N);
    const std::vector<Site> sites = strip.sites();
    const int64_t margin = std::max<int64_t>(N / 4, 1);

    // fixed-length walks for the along-geodesic density: stopping at the
    // trust boundary would select on the step counts, so walk a pre-set
    // number of steps from a deeper strip and drop the rare truncated paths
    const StatStrip walk_strip = make_stat_strip(alpha, N, 3.0);
    const Site wv = walk_strip.window.hi;
    const double slack1 =
        static_cast<double>(wv.x1 - walk_strip.center.x1 - margin) / rep.u1;
    const double slack2 =
        static_cast<double>(wv.x2 - walk_strip.center.x2 - margin) / (1.0 - rep.u1);
    const int64_t fixed_steps =
        std::max<int64_t>(16, static_cast<int64_t>(0.7 * std::min(slack1, slack2)));

    std::vector<std::vector<double>> indicator(static_cast<size_t>(replicas));
    std::vector<double> geo_density(static_cast<size_t>(replicas), -1.0);
    parallel_for(replicas, [&](int64_t r) {
        const uint64_t rs = rng::replica_seed(seed, static_cast<uint64_t>(r));
        const WeightField w(rs, strip.window);
        const BusemannField f(w, strip.window.hi, strip.window, margin);
        std::vector<double> ind;
        ind.reserve(sites.size());
        for (const Site& s : sites) ind.push_back(f.b1(s) <= f.b2(s) ? 1.0 : 0.0);
        indicator[static_cast<size_t>(r)] = std::move(ind);

        const WeightField w2(rs, walk_strip.window);
        const BusemannField f2(w2, walk_strip.window.hi, walk_strip.window, margin);
        const ArrowField arrows = arrow_field(f2);
        const GeodesicPath path = follow_geodesic(arrows, walk_strip.center, fixed_steps);
        if (static_cast<int64_t>(path.steps.size()) == fixed_steps) {
            int64_t n1 = 0;
            for (Step s : path.steps)
                if (s == Step::E1) ++n1;
            geo_density[static_cast<size_t>(r)] =
                static_cast<double>(n1) / static_cast<double>(path.steps.size());
        }
    });

    std::vector<double> pooled;
    pooled.reserve(static_cast<size_t>(replicas) * sites.size());
    for (const auto& v : indicator) pooled.insert(pooled.end(), v.begin(), v.end());
    rep.arrow_samples = static_cast<int64_t>(pooled.size());
    rep.e1_frequency = stats::summarize(pooled).mean;
    rep.bootstrap_se = stats::block_bootstrap_se(
        pooled, static_cast<size_t>(Defaults::bootstrap_block),
        static_cast<size_t>(Defaults::bootstrap_resamples), rng::lane_seed(seed, rng::Lane::Oracle));
    rep.effective_samples = stats::effective_sample_size(pooled, rep.bootstrap_se);

    std::vector<double> densities;
    for (double d : geo_density)
        if (d >= 0.0) densities.push_back(d);
    const auto ds = stats::summarize(densities);
    rep.geodesic_e1_density = ds.mean;
    rep.geodesic_density_se = ds.se;
    rep.geodesic_truncation_rate =
        1.0 - static_cast<double>(densities.size()) / static_cast<double>(replicas);

    rep.gates.push_back(make_gate("first_step_frequency_vs_alpha", rep.e1_frequency,
                                  alpha - 3.0 * rep.bootstrap_se, alpha + 3.0 * rep.bootstrap_se));
    rep.gates.push_back(make_gate("geodesic_e1_density_vs_u1", rep.geodesic_e1_density,
                                  rep.u1 - 3.0 * ds.se, rep.u1 + 3.0 * ds.se));
    if (std::abs(rep.u1 - alpha) > 1e-9) {
        // alpha and u1 differ off the diagonal; the density must resolve that
        rep.gates.push_back(make_gate("geodesic_density_separated_from_alpha",
                                      std::abs(rep.geodesic_e1_density - alpha) /
                                          std::max(ds.se, 1e-12),
                                      3.0, std::numeric_limits<double>::infinity()));
    }
    return rep;
}

// ---- {s,c,h,v} Markov chain ----------------------------------------------

Matrix4 markov_target_matrix(double alpha) {
    const double a = alpha, b = 1.0 - alpha;
    // state order (s, c, h, v)
    return Matrix4{{{0.0, b, a, 0.0}, {a, 0.0, 0.0, b}, {0.0, b, a, 0.0}, {a, 0.0, 0.0, b}}};
}

std::array<double, 4> markov_invariant(double alpha) {
    const double a = alpha, b = 1.0 - alpha;
    return {a * b, a * b, a * a, b * b};
}

PointClass class_of_step_pair(Step prev, Step cur) {
    // prev is the arrow below-left of the site, cur the one below-right:
    // the site between steps (a_{j-1}, a_j) is classified as if those arrows
    // fed it
    return classify_site(prev, cur);
}

MarkovReport run_markov_chain(double alpha, int64_t N, int64_t chain_length, uint64_t seed,
                              double matrix_tolerance, double strip_t_mult) {
    MarkovReport rep;
    rep.alpha = alpha;
    rep.horizon = N;
    rep.target = markov_target_matrix(alpha);
    rep.invariant_target = markov_invariant(alpha);

    const StatStrip strip = make_stat_strip(alpha, N, strip_t_mult);
    const int64_t per_replica = 2 * strip.halfwidth; // transitions per strip
    const int64_t replicas = (chain_length + per_replica - 1) / per_replica;
    rep.replicas = replicas;
    const int64_t margin = std::max<int64_t>(N / 4, 1);

    struct Slot {
        std::array<std::array<int64_t, 4>, 4> counts{};
        std::array<int64_t, 4> classes{};
    };
    std::vector<Slot> slots(static_cast<size_t>(replicas));
    parallel_for(replicas, [&](int64_t r) {
        const uint64_t rs = rng::replica_seed(seed, static_cast<uint64_t>(r));
        const WeightField w(rs, strip.window);
        const BusemannField f(w, strip.window.hi, strip.window, margin);
        const ArrowField arrows = arrow_field(f);
        const int64_t diag = strip.center.x1 + strip.center.x2;
        const std::vector<PointClass> cls =
            classify_points(arrows, diag, strip.center.x1 - strip.halfwidth,
                            strip.center.x1 + strip.halfwidth);
        Slot& s = slots[static_cast<size_t>(r)];
        for (size_t k = 0; k < cls.size(); ++k) {
            ++s.classes[static_cast<size_t>(cls[k])];
            if (k > 0)
                ++s.counts[static_cast<size_t>(cls[k - 1])][static_cast<size_t>(cls[k])];
        }
    });

    std::array<std::array<int64_t, 4>, 4> counts{};
    std::array<int64_t, 4> classes{};
    std::array<std::vector<double>, 4> class_freq_by_replica;
    int64_t transitions = 0, class_total = 0;
    for (const Slot& s : slots) {
        int64_t replica_sites = 0;
        for (int a = 0; a < 4; ++a) replica_sites += s.classes[static_cast<size_t>(a)];
        for (int a = 0; a < 4; ++a) {
            classes[static_cast<size_t>(a)] += s.classes[static_cast<size_t>(a)];
            class_freq_by_replica[static_cast<size_t>(a)].push_back(
                static_cast<double>(s.classes[static_cast<size_t>(a)]) /
                static_cast<double>(replica_sites));
            for (int b = 0; b < 4; ++b) {
                counts[static_cast<size_t>(a)][static_cast<size_t>(b)] +=
                    s.counts[static_cast<size_t>(a)][static_cast<size_t>(b)];
                transitions += s.counts[static_cast<size_t>(a)][static_cast<size_t>(b)];
            }
        }
        class_total += replica_sites;
    }
    rep.transitions = transitions;

    for (int a = 0; a < 4; ++a) {
        int64_t row = 0;
        for (int b = 0; b < 4; ++b) row += counts[static_cast<size_t>(a)][static_cast<size_t>(b)];
        for (int b = 0; b < 4; ++b) {
            rep.counts[static_cast<size_t>(a)][static_cast<size_t>(b)] =
                static_cast<double>(counts[static_cast<size_t>(a)][static_cast<size_t>(b)]);
            rep.empirical[static_cast<size_t>(a)][static_cast<size_t>(b)] =
                row > 0 ? static_cast<double>(counts[static_cast<size_t>(a)][static_cast<size_t>(b)]) /
                              static_cast<double>(row)
                        : 0.0;
            rep.max_matrix_deviation = std::max(
                rep.max_matrix_deviation,
                std::abs(rep.empirical[static_cast<size_t>(a)][static_cast<size_t>(b)] -
                         rep.target[static_cast<size_t>(a)][static_cast<size_t>(b)]));
        }
        rep.class_frequency[static_cast<size_t>(a)] =
            static_cast<double>(classes[static_cast<size_t>(a)]) / static_cast<double>(class_total);
        rep.class_se[static_cast<size_t>(a)] =
            stats::summarize(class_freq_by_replica[static_cast<size_t>(a)]).se;
    }

    // independent oracle: i.i.d. steps through the same relabeling
    {
        const uint64_t os = rng::lane_seed(seed, rng::Lane::Oracle);
        std::array<std::array<int64_t, 4>, 4> oc{};
        Step prev = rng::to_unit(rng::site_hash(os, {0, 0})) < alpha ? Step::E1 : Step::E2;
        PointClass prev_cls{};
        bool have_prev = false;
        for (int64_t j = 1; j <= transitions + 1; ++j) {
            const Step cur = rng::to_unit(rng::site_hash(os, {j, 0})) < alpha ? Step::E1 : Step::E2;
            const PointClass c = class_of_step_pair(prev, cur);
            if (have_prev) ++oc[static_cast<size_t>(prev_cls)][static_cast<size_t>(c)];
            prev_cls = c;
            have_prev = true;
            prev = cur;
        }
        for (int a = 0; a < 4; ++a) {
            int64_t row = 0;
            for (int b = 0; b < 4; ++b) row += oc[static_cast<size_t>(a)][static_cast<size_t>(b)];
            for (int b = 0; b < 4; ++b) {
                rep.oracle_empirical[static_cast<size_t>(a)][static_cast<size_t>(b)] =
                    row > 0 ? static_cast<double>(oc[static_cast<size_t>(a)][static_cast<size_t>(b)]) /
                                  static_cast<double>(row)
                            : 0.0;
                rep.oracle_max_deviation = std::max(
                    rep.oracle_max_deviation,
                    std::abs(rep.oracle_empirical[static_cast<size_t>(a)][static_cast<size_t>(b)] -
                             rep.target[static_cast<size_t>(a)][static_cast<size_t>(b)]));
            }
        }
    }

    rep.gates.push_back(
        make_gate("markov_matrix_max_deviation", rep.max_matrix_deviation, 0.0, matrix_tolerance));
    const char* names[4] = {"s", "c", "h", "v"};
    for (int a = 0; a < 4; ++a) {
        const double se = rep.class_se[static_cast<size_t>(a)];
        rep.gates.push_back(make_gate(std::string("markov_invariant_") + names[a],
                                      rep.class_frequency[static_cast<size_t>(a)],
                                      rep.invariant_target[static_cast<size_t>(a)] - 3.0 * se,
                                      rep.invariant_target[static_cast<size_t>(a)] + 3.0 * se));
    }
    rep.gates.push_back(make_gate("markov_oracle_max_deviation", rep.oracle_max_deviation, 0.0,
                                  matrix_tolerance));
    return rep;
}

SourceDensityScan run_source_density_scan(const std::vector<double>& alphas, int64_t N,
                                          int64_t min_samples, uint64_t seed) {
    SourceDensityScan rep;
    rep.alphas = alphas;
    rep.source_frequency.resize(alphas.size(), 0.0);

    for (size_t ai = 0; ai < alphas.size(); ++ai) {
        const double alpha = alphas[ai];
        const StatStrip strip = make_stat_strip(alpha, N, 2.5);
        const int64_t per_replica = 2 * strip.halfwidth + 1;
        const int64_t replicas = (min_samples + per_replica - 1) / per_replica;
        const int64_t margin = std::max<int64_t>(N / 4, 1);
        std::vector<int64_t> src(static_cast<size_t>(replicas), 0);
        std::vector<int64_t> tot(static_cast<size_t>(replicas), 0);
        parallel_for(replicas, [&](int64_t r) {
            const uint64_t rs =
                rng::replica_seed(seed ^ (0x9e3779b9ULL * (ai + 1)), static_cast<uint64_t>(r));
            const WeightField w(rs, strip.window);
            const BusemannField f(w, strip.window.hi, strip.window, margin);
            const ArrowField arrows = arrow_field(f);
            const int64_t diag = strip.center.x1 + strip.center.x2;
            const auto cls = classify_points(arrows, diag, strip.center.x1 - strip.halfwidth,
                                             strip.center.x1 + strip.halfwidth);
            for (PointClass c : cls)
                if (c == PointClass::Source) ++src[static_cast<size_t>(r)];
            tot[static_cast<size_t>(r)] += static_cast<int64_t>(cls.size());
        });
        int64_t s = 0, t = 0;
        for (int64_t r = 0; r < replicas; ++r) {
            s += src[static_cast<size_t>(r)];
            t += tot[static_cast<size_t>(r)];
        }
        rep.source_frequency[ai] = static_cast<double>(s) / static_cast<double>(t);
    }

    size_t best = 0;
    for (size_t ai = 1; ai < alphas.size(); ++ai)
        if (rep.source_frequency[ai] > rep.source_frequency[best]) best = ai;
    rep.argmax_alpha = alphas[best];

    size_t nearest_half = 0;
    for (size_t ai = 1; ai < alphas.size(); ++ai)
        if (std::abs(alphas[ai] - 0.5) < std::abs(alphas[nearest_half] - 0.5)) nearest_half = ai;
    rep.gates.push_back(make_gate("source_density_argmax_alpha", rep.argmax_alpha,
                                  alphas[nearest_half] - 1e-9, alphas[nearest_half] + 1e-9));
    return rep;
}

// ---- midpoint problem ----------------------------------------------------

namespace {

bool geodesic_hits_origin(const WeightField& w, Site v) {
    const LatticeWindow win{-v, v};
    const LppTable t = forward_lpp(w, -v, win);
    const GeodesicPath p = backtrack_geodesic(t, -v, v);
    for (const Site& s : p.sites)
        if (s == Site{0, 0}) return true;
    return false;
}

bool brute_force_hits_origin(const WeightField& w, Site v) {
    const BruteForceResult r = brute_force_lpp(w, -v, v);
    for (const Site& s : r.path.sites)
        if (s == Site{0, 0}) return true;
    return false;
}

} // namespace

MidpointReport run_midpoint(double alpha, const std::vector<int64_t>& n_list, int64_t batches,
                            int64_t replicas_per_batch, uint64_t seed) {
    if (n_list.empty() || !std::is_sorted(n_list.begin(), n_list.end()))
        throw std::domain_error("run_midpoint: n_list must be ascending");
    MidpointReport rep;
    rep.alpha = alpha;
    rep.n_list = n_list;
    rep.batches = batches;
    rep.replicas_per_batch = replicas_per_batch;

    const int64_t R = batches * replicas_per_batch;
    const size_t nn = n_list.size();
    std::vector<Site> terminals;
    for (int64_t n : n_list) terminals.push_back(direction_terminal(alpha, n));
    const Site v2 = direction_terminal(alpha, 2);
    const Site shift{37, -23};

    // per replica: hit indicators for each n, the n=2 pair, the shifted run
    std::vector<std::vector<double>> hits(nn, std::vector<double>(static_cast<size_t>(R), 0.0));
    std::vector<double> hit2_dp(static_cast<size_t>(R), 0.0);
    std::vector<double> hit2_bf(static_cast<size_t>(R), 0.0);
    std::vector<double> hit_shift(static_cast<size_t>(R), 0.0);
    parallel_for(R, [&](int64_t r) {
        const uint64_t rs = rng::replica_seed(seed, static_cast<uint64_t>(r));
        for (size_t k = 0; k < nn; ++k) {
            const Site v = terminals[k];
            const WeightField w(rs, LatticeWindow{-v, v});
            if (geodesic_hits_origin(w, v)) hits[k][static_cast<size_t>(r)] = 1.0;
        }
        {
            const WeightField w(rs, LatticeWindow{-v2, v2});
            if (geodesic_hits_origin(w, v2)) hit2_dp[static_cast<size_t>(r)] = 1.0;
            const uint64_t bs = rng::replica_seed(rng::lane_seed(seed, rng::Lane::Oracle),
                                                  static_cast<uint64_t>(r));
            const WeightField wb(bs, LatticeWindow{-v2, v2});
            if (brute_force_hits_origin(wb, v2)) hit2_bf[static_cast<size_t>(r)] = 1.0;
        }
        {
            const Site v = terminals[0];
            const WeightField w =
                WeightField(rs, LatticeWindow{-v, v}).shifted(shift);
            if (geodesic_hits_origin(w, v)) hit_shift[static_cast<size_t>(r)] = 1.0;
        }
    });

    rep.hit_probability.resize(nn);
    rep.hit_se.resize(nn);
    for (size_t k = 0; k < nn; ++k) {
        const auto s = stats::summarize(hits[k]);
        rep.hit_probability[k] = s.mean;
        rep.hit_se[k] = s.se;
    }
    rep.dp_p2 = stats::summarize(hit2_dp).mean;
    rep.brute_force_p2 = stats::summarize(hit2_bf).mean;
    rep.translation_p = stats::summarize(hit_shift).mean;

    int64_t strict = 0;
    for (int64_t b = 0; b < batches; ++b) {
        bool ok = true;
        for (size_t k = 0; k + 1 < nn; ++k) {
            double pa = 0.0, pb = 0.0;
            for (int64_t r = b * replicas_per_batch; r < (b + 1) * replicas_per_batch; ++r) {
                pa += hits[k][static_cast<size_t>(r)];
                pb += hits[k + 1][static_cast<size_t>(r)];
            }
            if (!(pb < pa)) ok = false;
        }
        if (ok) ++strict;
    }
    rep.strict_decrease_batch_rate = static_cast<double>(strict) / static_cast<double>(batches);

    rep.gates.push_back(
        make_gate("midpoint_strict_decrease_batch_rate", rep.strict_decrease_batch_rate, 0.9, 1.0));
    rep.gates.push_back(make_gate("midpoint_final_vs_first_ratio",
                                  rep.hit_probability.back() /
                                      std::max(rep.hit_probability.front(), 1e-12),
                                  0.0, 0.5));
    // paired noise band for consecutive sizes
    for (size_t k = 0; k + 1 < nn; ++k) {
        std::vector<double> diff(static_cast<size_t>(R));
        for (int64_t r = 0; r < R; ++r)
            diff[static_cast<size_t>(r)] =
                hits[k + 1][static_cast<size_t>(r)] - hits[k][static_cast<size_t>(r)];
        const auto sd = stats::summarize(diff);
        rep.gates.push_back(make_gate("midpoint_nonincreasing_" + std::to_string(n_list[k]) + "_" +
                                          std::to_string(n_list[k + 1]),
                                      sd.mean, -1.0, 3.0 * sd.se));
    }
    {
        const double se = std::sqrt(stats::summarize(hit2_dp).se * stats::summarize(hit2_dp).se +
                                    stats::summarize(hit2_bf).se * stats::summarize(hit2_bf).se);
        rep.gates.push_back(make_gate("midpoint_bruteforce_match_n2",
                                      rep.dp_p2 - rep.brute_force_p2, -3.0 * se, 3.0 * se));
    }
    {
        const double se =
            std::sqrt(rep.hit_se.front() * rep.hit_se.front() +
                      stats::summarize(hit_shift).se * stats::summarize(hit_shift).se);
        rep.gates.push_back(make_gate("midpoint_translation_invariance",
                                      rep.translation_p - rep.hit_probability.front(),
                                      -3.0 * se, 3.0 * se));
    }
    return rep;
}

// ---- arrow stability -----------------------------------------------------

ArrowStabilityReport run_arrow_stability(double alpha, int64_t N, double factor, int64_t replicas,
                                         uint64_t seed) {
    if (!(factor > 1.0)) throw std::domain_error("run_arrow_stability: factor must exceed 1");
    ArrowStabilityReport rep;
    rep.alpha = alpha;
    rep.horizon = N;
    rep.factor = factor;
    rep.replicas = replicas;

    const Site vs = direction_terminal(alpha, N);
    const Site vb = direction_terminal(alpha, static_cast<int64_t>(std::llround(
                                                  factor * static_cast<double>(N))));
    const int64_t L = std::max<int64_t>(N / 2, 8);
    const Site lo = vs - Site{L, L};

    int64_t nbuckets = 0;
    while ((int64_t{1} << nbuckets) < L) ++nbuckets;
    rep.bucket_lo.resize(static_cast<size_t>(nbuckets));
    for (int64_t b = 0; b < nbuckets; ++b) rep.bucket_lo[static_cast<size_t>(b)] = int64_t{1} << b;

    std::vector<std::vector<int64_t>> agree(static_cast<size_t>(replicas),
                                            std::vector<int64_t>(static_cast<size_t>(nbuckets), 0));
    std::vector<std::vector<int64_t>> total(static_cast<size_t>(replicas),
                                            std::vector<int64_t>(static_cast<size_t>(nbuckets), 0));
    std::vector<int64_t> margin_agree(static_cast<size_t>(replicas), 0);
    std::vector<int64_t> margin_total(static_cast<size_t>(replicas), 0);
    parallel_for(replicas, [&](int64_t r) {
        const uint64_t rs = rng::replica_seed(seed, static_cast<uint64_t>(r));
        const WeightField ws(rs, LatticeWindow{lo, vs});
        const BusemannField fs(ws, vs, LatticeWindow{lo, vs}, 1);
        const WeightField wbig(rs, LatticeWindow{lo, vb});
        const BusemannField fb(wbig, vb, LatticeWindow{lo, vb}, 1);
        for (int64_t x2 = lo.x2; x2 < vs.x2; ++x2)
            for (int64_t x1 = lo.x1; x1 < vs.x1; ++x1) {
                const Site x{x1, x2};
                const int64_t d = std::min(vs.x1 - x1, vs.x2 - x2);
                int64_t b = 0;
                while (b + 1 < nbuckets && (int64_t{2} << b) <= d) ++b;
                const bool a_small = fs.b1(x) <= fs.b2(x);
                const bool a_big = fb.b1(x) <= fb.b2(x);
                ++total[static_cast<size_t>(r)][static_cast<size_t>(b)];
                if (a_small == a_big) ++agree[static_cast<size_t>(r)][static_cast<size_t>(b)];
                if (d >= N / 4 && d <= N / 2) {
                    ++margin_total[static_cast<size_t>(r)];
                    if (a_small == a_big) ++margin_agree[static_cast<size_t>(r)];
                }
            }
    });

    rep.agreement.resize(static_cast<size_t>(nbuckets), 0.0);
    rep.bucket_count.resize(static_cast<size_t>(nbuckets), 0);
    for (int64_t b = 0; b < nbuckets; ++b) {
        int64_t a = 0, t = 0;
        for (int64_t r = 0; r < replicas; ++r) {
            a += agree[static_cast<size_t>(r)][static_cast<size_t>(b)];
            t += total[static_cast<size_t>(r)][static_cast<size_t>(b)];
        }
        rep.bucket_count[static_cast<size_t>(b)] = t;
        rep.agreement[static_cast<size_t>(b)] = t > 0 ? static_cast<double>(a) / static_cast<double>(t) : 0.0;
    }

    rep.suggested_margin = rep.bucket_lo.back();
    for (int64_t b = 0; b < nbuckets; ++b)
        if (rep.agreement[static_cast<size_t>(b)] >= 0.95) {
            rep.suggested_margin = rep.bucket_lo[static_cast<size_t>(b)];
            break;
        }

    int64_t ma = 0, mt = 0;
    for (int64_t r = 0; r < replicas; ++r) {
        ma += margin_agree[static_cast<size_t>(r)];
        mt += margin_total[static_cast<size_t>(r)];
    }
    rep.agreement_at_margin = mt > 0 ? static_cast<double>(ma) / static_cast<double>(mt) : 0.0;
    rep.gates.push_back(
        make_gate("arrow_agreement_at_default_margin", rep.agreement_at_margin, 0.95, 1.0));
    double worst_drop = 0.0;
    for (int64_t b = 0; b + 1 < nbuckets; ++b) {
        const auto se = [&](int64_t i) {
            const double f = rep.agreement[static_cast<size_t>(i)];
            const double n = std::max<double>(1.0, static_cast<double>(
                                                       rep.bucket_count[static_cast<size_t>(i)]));
            return std::sqrt(std::max(f * (1.0 - f), 1e-12) / n);
        };
        const double slack = 0.02 + 2.0 * (se(b) + se(b + 1));
        worst_drop = std::max(worst_drop, rep.agreement[static_cast<size_t>(b)] -
                                              rep.agreement[static_cast<size_t>(b + 1)] - slack);
    }
    rep.gates.push_back(make_gate("arrow_agreement_monotone_within_noise", worst_drop, -1.0, 0.0));
    return rep;
}

// ---- coalescence and clusters --------------------------------------------

CoalescenceReport run_coalescence(double alpha, int64_t N, int64_t window_extent, int64_t trials,
                                  uint64_t seed) {
    CoalescenceReport rep;
    rep.alpha = alpha;
    rep.horizon = N;
    rep.window_extent = window_extent;
    rep.trials = trials;
    rep.survival_k = {10, 100, 1000};

    struct Slot {
        int coalesced = 0;
        int64_t steps = 0;
        std::array<int64_t, 3> over{};
        int64_t clusters = 0;
        int64_t truncated = 0;
    };
    std::vector<Slot> slots(static_cast<size_t>(trials));
    parallel_for(trials, [&](int64_t t) {
        const uint64_t rs = rng::replica_seed(seed, static_cast<uint64_t>(t));
        const BusemannField f = make_busemann_field(alpha, N, rs, window_extent);
        const ArrowField arrows = arrow_field(f);
        const LatticeWindow tw = arrows.window();

        Slot& s = slots[static_cast<size_t>(t)];
        const Site x = tw.lo;
        const CoalescenceResult c = coalescence(arrows, x, x + e2);
        if (c.meet) {
            s.coalesced = 1;
            s.steps = c.steps;
        }

        // cluster-size survival sampled on a coarse interior grid
        const int64_t inset = window_extent / 4;
        const int64_t spacing = std::max<int64_t>(window_extent / 8, 1);
        for (int64_t gx = tw.lo.x1 + inset; gx <= tw.hi.x1 - inset; gx += spacing)
            for (int64_t gy = tw.lo.x2 + inset; gy <= tw.hi.x2 - inset; gy += spacing) {
                const BackwardCluster c2 = backward_cluster(arrows, {gx, gy});
                ++s.clusters;
                if (c2.truncated) ++s.truncated;
                for (size_t k = 0; k < rep.survival_k.size(); ++k)
                    if (static_cast<int64_t>(c2.sites.size()) > rep.survival_k[k]) ++s.over[k];
            }
    });

    int64_t coalesced = 0, steps = 0, clusters = 0, truncated = 0;
    std::array<int64_t, 3> over{};
    for (const Slot& s : slots) {
        coalesced += s.coalesced;
        steps += s.steps;
        clusters += s.clusters;
        truncated += s.truncated;
        for (size_t k = 0; k < over.size(); ++k) over[k] += s.over[k];
    }
    rep.coalesced_rate = static_cast<double>(coalesced) / static_cast<double>(trials);
    rep.mean_steps = coalesced > 0 ? static_cast<double>(steps) / static_cast<double>(coalesced) : 0.0;
    rep.truncated_cluster_rate =
        clusters > 0 ? static_cast<double>(truncated) / static_cast<double>(clusters) : 0.0;
    for (size_t k = 0; k < over.size(); ++k)
        rep.survival_rate.push_back(static_cast<double>(over[k]) / static_cast<double>(clusters));

    rep.gates.push_back(make_gate("coalescence_rate", rep.coalesced_rate, 0.95, 1.0));
    bool strict = true;
    for (size_t k = 0; k + 1 < rep.survival_rate.size(); ++k)
        if (!(rep.survival_rate[k] > rep.survival_rate[k + 1])) strict = false;
    rep.gates.push_back(make_gate("cluster_survival_strictly_decreasing", strict ? 1.0 : 0.0, 1.0, 1.0));
    return rep;
}

// ---- cocycle sublinearity diagnostic ---------------------------------------

SublinearityReport run_cocycle_sublinearity(double alpha, const std::vector<int64_t>& n_list,
                                            uint64_t seed) {
    SublinearityReport rep;
    rep.alpha = alpha;
    rep.n_list = n_list;
    const int64_t n_max = *std::max_element(n_list.begin(), n_list.end());
    const int64_t N = 8 * n_max;
    const Site v = direction_terminal(alpha, N);
    const Site lo{-n_max - 2, -n_max - 2};
    const WeightField w(seed, LatticeWindow{lo, v});
    const BusemannField f(w, v, LatticeWindow{lo, v}, 1);
    const auto [g1, g2] = shape_gradient(direction_of_alpha(alpha), 1.0 - direction_of_alpha(alpha));

    for (int64_t n : n_list) {
        double worst = 0.0;
        for (int64_t x1 = -n; x1 <= n; ++x1) {
            const int64_t rem = n - std::abs(x1);
            for (int64_t x2 = -rem; x2 <= rem; ++x2) {
                const Site x{x1, x2};
                const double b = f.b({0, 0}, x);
                const double lin = g1 * static_cast<double>(x1) + g2 * static_cast<double>(x2);
                worst = std::max(worst, std::abs(b - lin) / static_cast<double>(n));
            }
        }
        rep.max_ratio.push_back(worst);
    }
    return rep;
}

} // namespace cgm
