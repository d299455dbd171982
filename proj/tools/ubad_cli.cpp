// Command-line front end: simulate / sweep / bounds / validate.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ubad/harness.hpp"
#include "ubad/io.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset_name;
    std::string out_dir;
    std::vector<std::string> policies;
    std::string solver;
    std::uint64_t seed = 0;
    int trials = -1;
    double beta = -1.0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--preset", args.preset_name,
                    "named configuration (fig1, fig1_small, fig2_left, "
                    "fig2_left_small, fig2_right, fig2_right_small, bounds)");
    cmd->add_option("--seed", args.seed, "master seed")->each([&](const std::string&) {
        args.seed_set = true;
    });
    cmd->add_option("--trials", args.trials, "trial count per sweep point");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--policy", args.policies, "policies to run (ubad, greedy, passive)")
        ->delimiter(',');
    cmd->add_option("--solver", args.solver, "completion solver (als | softimpute)");
    cmd->add_option("--beta", args.beta, "uncertainty weight for ubad");
}

ubad::ExperimentConfig build_config(const CommonArgs& args) {
    ubad::ExperimentConfig cfg;
    if (!args.preset_name.empty() && !args.config_path.empty())
        throw CLI::ValidationError("--config and --preset are mutually exclusive");
    if (!args.preset_name.empty())
        cfg = ubad::preset(args.preset_name);
    else if (!args.config_path.empty())
        cfg = ubad::load_config_file(args.config_path);
    // flag overrides
    if (args.seed_set) cfg.master_seed = args.seed;
    if (args.trials > 0) cfg.trials = args.trials;
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (!args.policies.empty()) {
        cfg.policies.clear();
        for (const auto& p : args.policies) cfg.policies.push_back(ubad::parse_policy(p));
    }
    if (!args.solver.empty())
        cfg.solver.kind = args.solver == "als"          ? ubad::SolverKind::Als
                          : args.solver == "softimpute" ? ubad::SolverKind::SoftImpute
                                                        : throw CLI::ValidationError(
                                                              "unknown solver '" +
                                                              args.solver + "'");
    if (args.beta >= 0.0) cfg.beta = args.beta;
    return cfg;
}

void print_summary(const ubad::ExperimentResult& res) {
    std::cout << "config " << res.manifest.config_hash_hex << ", "
              << res.manifest.trials.size() << " trials";
    if (res.manifest.failed_trials > 0)
        std::cout << " (" << res.manifest.failed_trials << " failed)";
    std::cout << '\n';
    for (const auto& cell : res.cells) {
        if (cell.curves.mean_error.empty()) continue;
        const std::size_t last = cell.curves.mean_error.size() - 1;
        std::cout << "  " << ubad::policy_name(cell.policy)
                  << " spread=" << ubad::fmt_double(cell.spread)
                  << " sigma_n=" << ubad::fmt_double(cell.sigma_n)
                  << " final_error=" << ubad::fmt_double(cell.curves.mean_error[last])
                  << " +/- " << ubad::fmt_double(cell.curves.stderr_error[last]) << '\n';
    }
    if (!res.out_dir.empty()) std::cout << "results written to " << res.out_dir << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"active peak detection experiments"};
    app.require_subcommand(1);

    CommonArgs sim_args, sweep_args, bounds_args;
    std::string validate_scratch;

    CLI::App* simulate = app.add_subcommand(
        "simulate", "run one configuration (single spread and noise level)");
    add_common(simulate, sim_args);

    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    add_common(sweep, sweep_args);

    CLI::App* bounds = app.add_subcommand(
        "bounds", "compute the theoretical error bounds and initialization checks");
    add_common(bounds, bounds_args);

    CLI::App* validate =
        app.add_subcommand("validate", "run the structural invariant self-tests");
    validate->add_option("--out", validate_scratch, "scratch directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            ubad::ExperimentConfig cfg = build_config(sim_args);
            if (cfg.spreads.size() != 1 || cfg.noise_levels.size() != 1)
                throw std::invalid_argument(
                    "simulate expects a single sweep point; use the sweep subcommand");
            print_summary(ubad::run_experiment(cfg));
        } else if (sweep->parsed()) {
            print_summary(ubad::run_experiment(build_config(sweep_args)));
        } else if (bounds->parsed()) {
            ubad::ExperimentConfig cfg = build_config(bounds_args);
            const auto rows = ubad::run_bounds(cfg);
            std::cout << "config " << ubad::to_hex(ubad::config_hash(cfg)) << '\n';
            for (const auto& r : rows) {
                std::cout << "  spread=" << ubad::fmt_double(r.spread)
                          << " sequential=" << ubad::fmt_double(r.sequential.value)
                          << " (excluded " << r.sequential.excluded_terms << ")"
                          << " closed_form=" << ubad::fmt_double(r.closed_form.value)
                          << " init_rate=" << ubad::fmt_double(r.init_bound.empirical_rate)
                          << " subspace_rate=" << ubad::fmt_double(r.subspace.rate)
                          << '\n';
            }
            if (!cfg.out_dir.empty())
                std::cout << "results written to " << cfg.out_dir << '\n';
        } else if (validate->parsed()) {
            if (!ubad::run_validation(std::cout, validate_scratch)) {
                std::cerr << "validation FAILED\n";
                return 2;
            }
            std::cout << "all validation checks passed\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
