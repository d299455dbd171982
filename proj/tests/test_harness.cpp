#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ubad/harness.hpp"
#include "ubad/io.hpp"

using namespace ubad;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.grid = {5.0, 12};
    cfg.spreads = {1.0};
    cfg.noise_levels = {0.0, 0.1};
    cfg.policies = {PolicyName::Greedy, PolicyName::Ubad};
    cfg.m = 6;
    cfg.trials = 3;
    cfg.master_seed = 777;
    cfg.out_dir.clear();
    return cfg;
}

} // namespace

TEST_CASE("preset: reference experiment parameters") {
    const ExperimentConfig fig1 = preset("fig1");
    CHECK(fig1.m == 50);
    CHECK(fig1.grid.side_length == 5.0);
    CHECK(fig1.grid.n == 100);
    CHECK(fig1.field_kind == FieldKind::Gaussian);
    CHECK(fig1.spreads == std::vector<double>{1.0});
    CHECK(fig1.noise_levels == std::vector<double>{0.0});
    CHECK(fig1.trials == 100);
    REQUIRE(fig1.policies.size() == 3);

    const ExperimentConfig left = preset("fig2_left");
    CHECK(left.field_kind == FieldKind::Laplacian);
    CHECK(left.m == 100);
    CHECK(left.spreads.size() == 5);

    const ExperimentConfig right = preset("fig2_right");
    CHECK(right.noise_levels.size() == 6);
    CHECK(right.m == 50);

    const ExperimentConfig small = preset("fig1_small");
    CHECK(small.grid.n == 40);
    CHECK(small.trials == 50);
    CHECK(small.m == 50);

    CHECK_THROWS_AS(preset("fig3"), std::invalid_argument);
}

TEST_CASE("config: JSON round trip") {
    ExperimentConfig cfg = tiny_config();
    cfg.solver.kind = SolverKind::SoftImpute;
    cfg.solver.lambda = 0.01;
    cfg.beta = 0.5;
    cfg.source.by_index = true;
    cfg.source.index = {3, 9};
    cfg.out_dir = "somewhere/else";
    const ExperimentConfig back = parse_config(serialize_config(cfg));
    CHECK(back == cfg);

    const ExperimentConfig pre = preset("fig2_left_small");
    CHECK(parse_config(serialize_config(pre)) == pre);
}

TEST_CASE("config: invalid configurations are rejected before running") {
    ExperimentConfig cfg = tiny_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    cfg = tiny_config();
    cfg.m = 12 * 12; // above n^2 - n
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    cfg = tiny_config();
    cfg.spreads.clear();
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    cfg = tiny_config();
    cfg.policies.clear();
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    cfg = tiny_config();
    cfg.source.by_index = true;
    cfg.source.index = {13, 1};
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("trial seeds: pure function of coordinates, stable under growth") {
    const auto s = derive_seed(42, 0, 3, 7);
    CHECK(s == derive_seed(42, 0, 3, 7));
    CHECK(s != derive_seed(43, 0, 3, 7));
    CHECK(s != derive_seed(42, 1, 3, 7));
    CHECK(s != derive_seed(42, 0, 4, 7));
    CHECK(s != derive_seed(42, 0, 3, 8));

    // adding trials must not disturb earlier seeds
    ExperimentConfig small = tiny_config();
    ExperimentConfig big = small;
    big.trials = small.trials + 2;
    const auto rs = run_experiment(small);
    const auto rb = run_experiment(big);
    REQUIRE(rb.manifest.trials.size() > rs.manifest.trials.size());
    for (const auto& rec : rs.manifest.trials) {
        bool found = false;
        for (const auto& other : rb.manifest.trials) {
            if (other.policy_index == rec.policy_index &&
                other.sweep_index == rec.sweep_index &&
                other.trial_index == rec.trial_index) {
                CHECK(other.seed == rec.seed);
                found = true;
                break;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("run_experiment: cell layout, curve lengths, determinism in memory") {
    const ExperimentConfig cfg = tiny_config();
    const ExperimentResult res = run_experiment(cfg);
    REQUIRE(res.cells.size() == 4); // 2 policies x 2 noise levels
    for (const auto& cell : res.cells) {
        CHECK(static_cast<int>(cell.traces.size()) == cfg.trials);
        CHECK(cell.failed_trials == 0);
        CHECK(cell.curves.mean_error.size() == static_cast<std::size_t>(cfg.m) + 1);
        CHECK(cell.curves.mean_running_sq.size() == static_cast<std::size_t>(cfg.m));
    }
    // same config, same seeds: identical aggregates
    const ExperimentResult res2 = run_experiment(cfg);
    for (std::size_t c = 0; c < res.cells.size(); ++c)
        CHECK(res.cells[c].curves.mean_error == res2.cells[c].curves.mean_error);
}

TEST_CASE("run_experiment: degenerate budget writes the init-only curve") {
    ExperimentConfig cfg = tiny_config();
    cfg.m = 0;
    cfg.trials = 1;
    cfg.noise_levels = {0.0};
    cfg.policies = {PolicyName::Ubad};
    const fs::path dir = fs::temp_directory_path() / "ubad_test_m0";
    fs::remove_all(dir);
    cfg.out_dir = dir.string();
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.cells.front().curves.mean_error.size() == 1);
    CHECK(fs::exists(dir / "curves.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
    // header + exactly one data row
    std::istringstream curves(slurp(dir / "curves.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(curves, line))
        if (!line.empty() && line[0] != '#' && line.rfind("policy,", 0) != 0) ++rows;
    CHECK(rows == 1);
    fs::remove_all(dir);
}

TEST_CASE("run_experiment: CSV outputs are byte-identical across reruns") {
    ExperimentConfig cfg = tiny_config();
    cfg.noise_levels = {0.05};
    const fs::path dir = fs::temp_directory_path() / "ubad_test_repro";
    fs::remove_all(dir);
    cfg.out_dir = dir.string();
    run_experiment(cfg);
    const std::string curves_a = slurp(dir / "curves.csv");
    const std::string summary_a = slurp(dir / "summary.csv");
    run_experiment(cfg);
    CHECK(slurp(dir / "curves.csv") == curves_a);
    CHECK(slurp(dir / "summary.csv") == summary_a);
    CHECK(!curves_a.empty());

    // row-count contracts: policies x sweeps x (m + 1) for curves,
    // policies x sweeps for the summary table
    std::istringstream in(curves_a);
    std::string line;
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line.rfind("policy,", 0) != 0) ++rows;
    CHECK(rows == static_cast<int>(cfg.policies.size()) * 1 * (cfg.m + 1));

    std::istringstream sin(summary_a);
    int summary_rows = 0;
    while (std::getline(sin, line))
        if (!line.empty() && line[0] != '#' && line.rfind("policy,", 0) != 0)
            ++summary_rows;
    CHECK(summary_rows == static_cast<int>(cfg.policies.size()));
    fs::remove_all(dir);
}

TEST_CASE("run_bounds: rows per sweep point, CSV written") {
    ExperimentConfig cfg = tiny_config();
    cfg.field_kind = FieldKind::Laplacian;
    cfg.spreads = {0.5, 1.0};
    cfg.trials = 20;
    const fs::path dir = fs::temp_directory_path() / "ubad_test_bounds";
    fs::remove_all(dir);
    cfg.out_dir = dir.string();
    const auto rows = run_bounds(cfg);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.sequential.value >= 0.0);
        CHECK(r.closed_form.value >= 0.0);
        CHECK(r.init_bound.trials == 20);
    }
    CHECK(fs::exists(dir / "bounds.csv"));
    fs::remove_all(dir);
}

TEST_CASE("config hash: independent of output directory, sensitive to content") {
    ExperimentConfig a = tiny_config();
    ExperimentConfig b = a;
    b.out_dir = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.master_seed += 1;
    CHECK(config_hash(a) != config_hash(b));
}
