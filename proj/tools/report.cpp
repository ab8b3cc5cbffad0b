#include "report.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

namespace cgm::cli {

Json to_json(const Gate& g) {
    return Json{{"name", g.name}, {"observed", g.observed}, {"lo", g.lo}, {"hi", g.hi},
                {"pass", g.pass}};
}

Json gates_json(const std::vector<Gate>& gates) {
    Json arr = Json::array();
    for (const Gate& g : gates) arr.push_back(to_json(g));
    return arr;
}

Json to_json(const RunConfig& cfg) {
    return Json{{"alpha", cfg.alpha},       {"n", cfg.n},     {"replicas", cfg.replicas},
                {"seed", cfg.seed},         {"threads", cfg.threads},
                {"length", cfg.length}};
}

namespace {

Json matrix_json(const Matrix4& m) {
    Json rows = Json::array();
    for (const auto& row : m) rows.push_back(Json(row));
    return rows;
}

} // namespace

Json to_json(const ShapeReport& r) {
    return Json{{"sizes", r.sizes},
                {"seeds", r.seeds},
                {"max_gap", r.max_gap},
                {"mean_gap", r.mean_gap},
                {"paired_decrease_rate", r.paired_decrease_rate}};
}

Json to_json(const FirstStepReport& r) {
    return Json{{"alpha", r.alpha},
                {"u1", r.u1},
                {"horizon", r.horizon},
                {"replicas", r.replicas},
                {"arrow_samples", r.arrow_samples},
                {"e1_frequency", r.e1_frequency},
                {"bootstrap_se", r.bootstrap_se},
                {"effective_samples", r.effective_samples},
                {"geodesic_e1_density", r.geodesic_e1_density},
                {"geodesic_density_se", r.geodesic_density_se},
                {"geodesic_truncation_rate", r.geodesic_truncation_rate}};
}

Json to_json(const MarkovReport& r) {
    return Json{{"alpha", r.alpha},
                {"horizon", r.horizon},
                {"replicas", r.replicas},
                {"transitions", r.transitions},
                {"counts", matrix_json(r.counts)},
                {"empirical", matrix_json(r.empirical)},
                {"target", matrix_json(r.target)},
                {"class_frequency", Json(r.class_frequency)},
                {"class_se", Json(r.class_se)},
                {"invariant_target", Json(r.invariant_target)},
                {"max_matrix_deviation", r.max_matrix_deviation},
                {"oracle_empirical", matrix_json(r.oracle_empirical)},
                {"oracle_max_deviation", r.oracle_max_deviation}};
}

Json to_json(const SourceDensityScan& r) {
    return Json{{"alphas", r.alphas},
                {"source_frequency", r.source_frequency},
                {"argmax_alpha", r.argmax_alpha}};
}

Json to_json(const MidpointReport& r) {
    return Json{{"alpha", r.alpha},
                {"n_list", r.n_list},
                {"batches", r.batches},
                {"replicas_per_batch", r.replicas_per_batch},
                {"hit_probability", r.hit_probability},
                {"hit_se", r.hit_se},
                {"strict_decrease_batch_rate", r.strict_decrease_batch_rate},
                {"dp_p2", r.dp_p2},
                {"brute_force_p2", r.brute_force_p2},
                {"translation_p", r.translation_p}};
}

Json to_json(const ArrowStabilityReport& r) {
    return Json{{"alpha", r.alpha},
                {"horizon", r.horizon},
                {"factor", r.factor},
                {"replicas", r.replicas},
                {"bucket_lo", r.bucket_lo},
                {"agreement", r.agreement},
                {"bucket_count", r.bucket_count},
                {"agreement_at_margin", r.agreement_at_margin},
                {"suggested_margin", r.suggested_margin}};
}

Json to_json(const CoalescenceReport& r) {
    return Json{{"alpha", r.alpha},
                {"horizon", r.horizon},
                {"window_extent", r.window_extent},
                {"trials", r.trials},
                {"coalesced_rate", r.coalesced_rate},
                {"mean_steps", r.mean_steps},
                {"survival_k", r.survival_k},
                {"survival_rate", r.survival_rate},
                {"truncated_cluster_rate", r.truncated_cluster_rate}};
}

Json to_json(const SublinearityReport& r) {
    return Json{{"alpha", r.alpha}, {"n_list", r.n_list}, {"max_ratio", r.max_ratio}};
}

Json to_json(const MarginalReport& r) {
    return Json{{"alpha", r.alpha},
                {"horizon", r.horizon},
                {"replicas", r.replicas},
                {"samples_per_replica", r.samples_per_replica},
                {"mean_b1", r.mean_b1},
                {"mean_b2", r.mean_b2},
                {"se_b1", r.se_b1},
                {"se_b2", r.se_b2},
                {"target_b1", r.target_b1},
                {"target_b2", r.target_b2},
                {"ks_pass_rate_b1", r.ks_pass_rate_b1},
                {"ks_pass_rate_b2", r.ks_pass_rate_b2},
                {"mean_bias_b1", r.mean_bias_b1},
                {"pass", r.pass}};
}

Json to_json(const DualMarginalReport& r) {
    return Json{{"replicas", r.replicas},
                {"ks_pass_rate", r.ks_pass_rate},
                {"mean_x", r.mean_x},
                {"pass", r.pass}};
}

Json to_json(const CocycleReport& r) {
    return Json{{"max_unit_square_residual", r.max_unit_square_residual},
                {"max_path_pair_residual", r.max_path_pair_residual},
                {"path_pairs", r.path_pairs},
                {"mean_b1", r.mean_b1},
                {"mean_b1_shifted", r.mean_b1_shifted},
                {"shift_diff_se", r.shift_diff_se},
                {"additivity_pass", r.additivity_pass},
                {"stationarity_pass", r.stationarity_pass}};
}

Json to_json(const DownRightLawReport& r) {
    return Json{{"replicas", r.replicas},
                {"i_edges", r.i_edges},
                {"j_edges", r.j_edges},
                {"ks_i", r.ks_i},
                {"ks_j", r.ks_j},
                {"ks_i_critical", r.ks_i_critical},
                {"ks_j_critical", r.ks_j_critical},
                {"per_replica_pass_rate", r.per_replica_pass_rate},
                {"max_abs_edge_correlation", r.max_abs_edge_correlation},
                {"max_abs_eta_correlation", r.max_abs_eta_correlation},
                {"correlation_bound", r.correlation_bound},
                {"pass", r.pass}};
}

Json to_json(const OracleEquivalenceReport& r) {
    return Json{{"cases", r.cases},
                {"max_relative_deviation", r.max_relative_deviation},
                {"path_mismatches", r.path_mismatches},
                {"float_ties", r.float_ties}};
}

Json to_json(const StationaryStructureReport& r) {
    return Json{{"alpha", r.alpha},
                {"m", r.m},
                {"n", r.n},
                {"seeds", r.seeds},
                {"max_structural_residual", r.max_structural_residual},
                {"max_increment_residual", r.max_increment_residual}};
}

Json to_json(const StationaryMeanReport& r) {
    return Json{{"alpha", r.alpha}, {"k", r.k},   {"replicas", r.replicas},
                {"mean", r.mean},   {"se", r.se}, {"target", r.target}};
}

Json to_json(const BusemannIdentityReport& r) {
    return Json{{"alpha", r.alpha},
                {"horizon", r.horizon},
                {"extent", r.extent},
                {"seeds", r.seeds},
                {"max_recovery_residual", r.max_recovery_residual},
                {"max_unit_square_residual", r.max_unit_square_residual},
                {"monotonicity_violations", r.monotonicity_violations},
                {"max_arrow_weight_residual", r.max_arrow_weight_residual},
                {"max_geodesic_lpp_residual", r.max_geodesic_lpp_residual},
                {"max_dual_weight_residual", r.max_dual_weight_residual},
                {"reflection_mismatches", r.reflection_mismatches}};
}

Json to_json(const TreeDualityReport& r) {
    return Json{{"alpha", r.alpha},
                {"horizon", r.horizon},
                {"extent", r.extent},
                {"seeds", r.seeds},
                {"edges_checked", r.edges_checked},
                {"xor_violations", r.xor_violations},
                {"crossings", r.crossings},
                {"pairs_checked", r.pairs_checked},
                {"primal_e1_frequency", r.primal_e1_frequency},
                {"dual_e1_frequency", r.dual_e1_frequency},
                {"frequency_diff_se", r.frequency_diff_se}};
}

Json to_json(const CompetitionReport& r) {
    return Json{{"alpha", r.alpha},
                {"horizon", r.horizon},
                {"box_side", r.box_side},
                {"seeds", r.seeds},
                {"max_plus_residual", r.max_plus_residual},
                {"max_minus_residual", r.max_minus_residual},
                {"plus_sites_checked", r.plus_sites_checked},
                {"plus_sites_excluded", r.plus_sites_excluded},
                {"minus_sites_checked", r.minus_sites_checked},
                {"minus_sites_excluded", r.minus_sites_excluded},
                {"path_mismatches", r.path_mismatches},
                {"interface_mismatches", r.interface_mismatches},
                {"separation_violations", r.separation_violations},
                {"reversal_mismatches", r.reversal_mismatches},
                {"float_ties", r.float_ties}};
}

Json to_json(const OrderingRunReport& r) {
    return Json{{"alpha_low", r.alpha_low},
                {"alpha_high", r.alpha_high},
                {"seeds", r.seeds},
                {"increment_violations", r.increment_violations},
                {"path_violations", r.path_violations}};
}

Json make_manifest(const std::string& command, const RunConfig& cfg, Json data,
                   const std::vector<Gate>& gates, const std::string& started,
                   const std::string& finished) {
    Json m;
    m["schema_version"] = kSchemaVersion;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["command"] = command;
    m["config"] = to_json(cfg);
    m["seed"] = cfg.seed;
    m["started_at"] = started;
    m["finished_at"] = finished;
    m["data"] = std::move(data);
    m["gates"] = gates_json(gates);
    m["all_pass"] = all_pass(gates);
    return m;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string csv_encode(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            const std::string& f = row[i];
            const bool quote = f.find_first_of(",\"\r\n") != std::string::npos;
            if (i) out += ',';
            if (quote) {
                out += '"';
                for (char c : f) {
                    if (c == '"') out += '"';
                    out += c;
                }
                out += '"';
            } else {
                out += f;
            }
        }
        out += "\r\n";
    }
    return out;
}

} // namespace cgm::cli
