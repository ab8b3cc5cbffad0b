#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cgm/competition.hpp"
#include "cgm/lpp.hpp"
#include "cgm/parallel.hpp"
#include "config.hpp"
#include "report.hpp"
#include "svg.hpp"

namespace cli = cgm::cli;
using cgm::Gate;
using cli::Json;

namespace {

struct CommandResult {
    Json data;
    std::vector<Gate> gates;
};

void append(std::vector<Gate>& dst, const std::vector<Gate>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

int64_t identity_seeds(const cli::RunConfig& cfg) {
    return std::clamp<int64_t>(cfg.replicas / 10, 4, 20);
}

// ---- per-command runners --------------------------------------------------

CommandResult cmd_lpp(const cli::RunConfig& cfg) {
    CommandResult res;
    const auto oracle = cgm::run_oracle_equivalence(4, std::min<int64_t>(cfg.replicas, 100), cfg.seed);
    res.data["oracle"] = cli::to_json(oracle);
    res.gates = oracle.gates;

    res.gates.push_back(cgm::make_gate("shape_g_1_1", cgm::shape_function(1, 1), 4.0, 4.0));
    res.gates.push_back(cgm::make_gate("shape_g_4_1", cgm::shape_function(4, 1), 9.0, 9.0));
    const double u1 = cgm::direction_of_alpha(cfg.alpha);
    const auto [g1, g2] = cgm::shape_gradient(u1, 1.0 - u1);
    res.gates.push_back(
        cgm::make_gate("shape_gradient_e1", g1, 1.0 / cfg.alpha - 1e-12, 1.0 / cfg.alpha + 1e-12));
    res.gates.push_back(cgm::make_gate("shape_gradient_e2", g2, 1.0 / (1.0 - cfg.alpha) - 1e-12,
                                       1.0 / (1.0 - cfg.alpha) + 1e-12));
    return res;
}

CommandResult cmd_stationary(const cli::RunConfig& cfg) {
    CommandResult res;
    const int64_t side = std::min<int64_t>(cfg.n, 200);
    const auto structure =
        cgm::run_stationary_structure(cfg.alpha, side, side, identity_seeds(cfg), cfg.seed);
    res.data["structure"] = cli::to_json(structure);
    res.gates = structure.gates;

    const auto mean = cgm::run_stationary_mean(cfg.alpha, 50, 10 * cfg.replicas, cfg.seed);
    res.data["mean"] = cli::to_json(mean);
    append(res.gates, mean.gates);

    const cgm::DownRightPath staircase = cgm::staircase_path({30, 30}, 10);
    const auto law = cgm::check_downright_law(cfg.alpha, cfg.seed, 60, 60, staircase,
                                              std::min<int64_t>(cfg.replicas, 500));
    res.data["downright_law"] = cli::to_json(law);
    res.gates.push_back(cgm::make_gate("downright_ks_i", law.ks_i, 0.0, law.ks_i_critical));
    res.gates.push_back(cgm::make_gate("downright_ks_j", law.ks_j, 0.0, law.ks_j_critical));
    res.gates.push_back(cgm::make_gate("downright_edge_correlation", law.max_abs_edge_correlation,
                                       0.0, law.correlation_bound));
    res.gates.push_back(cgm::make_gate("downright_eta_correlation", law.max_abs_eta_correlation,
                                       0.0, law.correlation_bound));
    return res;
}

CommandResult cmd_busemann(const cli::RunConfig& cfg) {
    CommandResult res;
    const auto ident = cgm::run_busemann_identities(cfg.alpha, cfg.n, std::min<int64_t>(cfg.n, 400),
                                                    identity_seeds(cfg), 100, cfg.seed);
    res.data["identities"] = cli::to_json(ident);
    res.gates = ident.gates;

    const auto marg = cgm::marginal_statistics(cfg.alpha, cfg.n, cfg.replicas, cfg.seed);
    res.data["marginals"] = cli::to_json(marg);
    res.gates.push_back(cgm::make_gate("busemann_mean_b1", marg.mean_b1, 0.95 * marg.target_b1,
                                       1.05 * marg.target_b1));
    res.gates.push_back(cgm::make_gate("busemann_mean_b2", marg.mean_b2, 0.95 * marg.target_b2,
                                       1.05 * marg.target_b2));
    res.gates.push_back(cgm::make_gate("busemann_ks_rate_b1", marg.ks_pass_rate_b1, 0.9, 1.0));
    res.gates.push_back(cgm::make_gate("busemann_ks_rate_b2", marg.ks_pass_rate_b2, 0.9, 1.0));

    const auto dual = cgm::dual_weight_statistics(cfg.alpha, cfg.n,
                                                  std::min<int64_t>(cfg.replicas, 100), cfg.seed);
    res.data["dual_weights"] = cli::to_json(dual);
    res.gates.push_back(cgm::make_gate("dual_ks_rate", dual.ks_pass_rate, 0.9, 1.0));

    const auto coc = cgm::check_cocycle(cfg.alpha, cfg.n, cfg.seed, std::min<int64_t>(cfg.n / 2, 120),
                                        100, std::min<int64_t>(cfg.replicas, 40));
    res.data["cocycle"] = cli::to_json(coc);
    res.gates.push_back(
        cgm::make_gate("cocycle_unit_square", coc.max_unit_square_residual, 0.0, 1e-9));
    res.gates.push_back(cgm::make_gate("cocycle_path_pairs", coc.max_path_pair_residual, 0.0, 1e-9));
    res.gates.push_back(cgm::make_gate("cocycle_shift_mean_diff", coc.mean_b1 - coc.mean_b1_shifted,
                                       -3.0 * coc.shift_diff_se, 3.0 * coc.shift_diff_se));
    return res;
}

CommandResult cmd_trees(const cli::RunConfig& cfg) {
    CommandResult res;
    const auto duality =
        cgm::run_tree_duality(cfg.alpha, cfg.n, 60, identity_seeds(cfg), 100, cfg.seed);
    res.data["duality"] = cli::to_json(duality);
    res.gates = duality.gates;

    const auto ordering =
        cgm::run_direction_ordering(cfg.alpha, std::min(cfg.alpha + 0.15, 0.9), cfg.n, 80,
                                    std::min<int64_t>(identity_seeds(cfg), 8), 40, cfg.seed);
    res.data["ordering"] = cli::to_json(ordering);
    append(res.gates, ordering.gates);

    const auto coal = cgm::run_coalescence(cfg.alpha, cfg.n, std::min<int64_t>(cfg.n, 400),
                                           cfg.replicas, cfg.seed);
    res.data["coalescence"] = cli::to_json(coal);
    append(res.gates, coal.gates);
    return res;
}

CommandResult cmd_classify(const cli::RunConfig& cfg) {
    CommandResult res;
    auto markov = cgm::run_markov_chain(cfg.alpha, cfg.n, cfg.length, cfg.seed);
    res.data["classes"] = cli::to_json(markov);
    for (const Gate& g : markov.gates)
        if (g.name.rfind("markov_invariant_", 0) == 0) res.gates.push_back(g);
    return res;
}

CommandResult cmd_markov(const cli::RunConfig& cfg) {
    CommandResult res;
    const auto markov = cgm::run_markov_chain(cfg.alpha, cfg.n, cfg.length, cfg.seed);
    res.data["markov"] = cli::to_json(markov);
    res.gates = markov.gates;
    return res;
}

CommandResult cmd_midpoint(const cli::RunConfig& cfg) {
    CommandResult res;
    const auto mid =
        cgm::run_midpoint(cfg.alpha, {20, 80, 320}, 10, std::max<int64_t>(cfg.replicas / 2, 20),
                          cfg.seed);
    res.data["midpoint"] = cli::to_json(mid);
    res.gates = mid.gates;
    return res;
}

CommandResult cmd_shape(const cli::RunConfig& cfg) {
    CommandResult res;
    // the 0.15 gap bound is calibrated for the top size >= 1000
    const auto shape = cgm::run_shape_convergence({100, std::max<int64_t>(cfg.n, 1000)}, 20,
                                                  cfg.seed);
    res.data["shape"] = cli::to_json(shape);
    res.gates = shape.gates;
    return res;
}

CommandResult cmd_ci(const cli::RunConfig& cfg) {
    CommandResult res;
    const auto comp =
        cgm::run_competition_interface(cfg.alpha, cfg.n, 60, identity_seeds(cfg), 500, cfg.seed);
    res.data["competition"] = cli::to_json(comp);
    res.gates = comp.gates;
    return res;
}

CommandResult cmd_verify_all(const cli::RunConfig& cfg) {
    CommandResult res;
    const CommandResult parts[] = {cmd_lpp(cfg),     cmd_stationary(cfg), cmd_busemann(cfg),
                                   cmd_trees(cfg),   cmd_markov(cfg),     cmd_midpoint(cfg),
                                   cmd_shape(cfg),   cmd_ci(cfg)};
    const char* names[] = {"lpp", "stationary", "busemann", "trees",
                           "markov", "midpoint", "shape", "ci"};
    for (size_t i = 0; i < std::size(parts); ++i) {
        res.data[names[i]] = parts[i].data;
        append(res.gates, parts[i].gates);
    }
    // gate-free diagnostics
    const auto sub = cgm::run_cocycle_sublinearity(cfg.alpha, {16, 32, 64, 128}, cfg.seed);
    res.data["sublinearity"] = cli::to_json(sub);
    const auto stab = cgm::run_arrow_stability(cfg.alpha, std::min<int64_t>(cfg.n, 200), 2.0,
                                               std::min<int64_t>(cfg.replicas / 10, 20), cfg.seed);
    res.data["arrow_stability"] = cli::to_json(stab);
    append(res.gates, stab.gates);
    return res;
}

std::string render_trees_svg(const cli::RunConfig& cfg) {
    const int64_t extent = std::min<int64_t>(cfg.n / 5, 40);
    const cgm::BusemannField field =
        cgm::make_busemann_field(cfg.alpha, cfg.n, cfg.seed, extent);
    const cgm::ArrowField arrows = cgm::arrow_field(field);

    // a short interface through the middle of the rendered window
    const cgm::LatticeWindow tw = arrows.window();
    const cgm::Site center{tw.lo.x1 + extent / 2, tw.lo.x2 + extent / 2};
    const cgm::DownRightPath staircase = cgm::staircase_path(center, extent / 2);
    const cgm::DualWeightField dual = cgm::dual_weights(field);
    const cgm::LatticeWindow box{tw.lo, tw.hi};
    const cgm::BoundaryLpp hp = cgm::boundary_lpp_plus(field, dual, staircase, box);
    const cgm::CompetitionInterface ci =
        cgm::competition_interface_plus(hp, static_cast<int64_t>(staircase.sites.size()) / 2);
    return cli::render_tree_svg(arrows, ci.phi);
}

void emit_csv(const std::string& path, const std::string& command, const Json& data) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"command", "key", "value"});
    const std::function<void(const std::string&, const Json&)> walk = [&](const std::string& prefix,
                                                                          const Json& j) {
        if (j.is_object()) {
            for (auto it = j.begin(); it != j.end(); ++it)
                walk(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value());
        } else if (j.is_array()) {
            for (size_t i = 0; i < j.size(); ++i) walk(prefix + "[" + std::to_string(i) + "]", j[i]);
        } else {
            rows.push_back({command, prefix, j.dump()});
        }
    };
    walk("", data);
    cli::write_text(path, cli::csv_encode(rows));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corner growth model laboratory: stationary LPP systems, finite-horizon "
                 "Busemann fields, geodesic trees and their verification gates"};
    app.fallthrough();

    cli::RunConfig cfg = cli::apply_environment(cli::RunConfig{});
    std::string config_path, out_path, csv_path, svg_out;
    double alpha = cfg.alpha;
    int64_t n = cfg.n, replicas = cfg.replicas, length = cfg.length;
    uint64_t seed = cfg.seed;
    int threads = cfg.threads;

    app.add_option("--config", config_path, "key=value config file");
    const auto* opt_alpha = app.add_option("--alpha", alpha, "direction parameter in (0,1)");
    const auto* opt_n = app.add_option("--n", n, "horizon / lattice scale");
    const auto* opt_replicas = app.add_option("--replicas", replicas, "Monte Carlo replicas");
    const auto* opt_seed = app.add_option("--seed", seed, "base RNG seed");
    const auto* opt_threads = app.add_option("--threads", threads, "worker threads (0 = all)");
    const auto* opt_length = app.add_option("--length", length, "chain length (markov/classify)");
    app.add_option("--out", out_path, "write the JSON report here (default: stdout)");
    app.add_option("--csv", csv_path, "also write a flat CSV of the report data");

    std::map<std::string, std::function<CommandResult(const cli::RunConfig&)>> commands = {
        {"lpp", cmd_lpp},           {"stationary", cmd_stationary},
        {"busemann", cmd_busemann}, {"trees", cmd_trees},
        {"classify", cmd_classify}, {"markov", cmd_markov},
        {"midpoint", cmd_midpoint}, {"shape", cmd_shape},
        {"ci", cmd_ci},             {"verify-all", cmd_verify_all}};

    for (const auto& [name, fn] : commands)
        app.add_subcommand(name, "run the '" + name + "' verification suite");
    CLI::App* render = app.add_subcommand("render", "render tree figures");
    std::string render_what = "trees";
    render->add_option("what", render_what, "figure kind (trees)");
    render->add_option("--out", svg_out, "output SVG path")->required();

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty()) cfg = cli::load_config(config_path, cfg);
        if (opt_alpha->count()) cfg.alpha = alpha;
        if (opt_n->count()) cfg.n = n;
        if (opt_replicas->count()) cfg.replicas = replicas;
        if (opt_seed->count()) cfg.seed = seed;
        if (opt_threads->count()) cfg.threads = threads;
        if (opt_length->count()) cfg.length = length;
        cli::validate(cfg);
        if (cfg.threads > 0) setenv("CGM_THREADS", std::to_string(cfg.threads).c_str(), 1);

        if (render->parsed()) {
            if (render_what != "trees") throw cli::ConfigError("unknown render kind: " + render_what);
            cli::write_text(svg_out, render_trees_svg(cfg));
            return 0;
        }

        for (const auto& [name, fn] : commands) {
            const CLI::App* sub = app.get_subcommand(name);
            if (!sub->parsed()) continue;
            const std::string started = cli::timestamp_utc();
            const CommandResult result = fn(cfg);
            const std::string finished = cli::timestamp_utc();
            const Json manifest =
                cli::make_manifest(name, cfg, result.data, result.gates, started, finished);
            const std::string payload = manifest.dump(2) + "\n";
            if (out_path.empty())
                std::cout << payload;
            else
                cli::write_text(out_path, payload);
            if (!csv_path.empty()) emit_csv(csv_path, name, result.data);
            return cgm::all_pass(result.gates) ? 0 : 1;
        }
        throw cli::ConfigError("no subcommand selected");
    } catch (const cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
