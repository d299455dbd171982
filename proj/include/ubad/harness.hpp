#ifndef UBAD_HARNESS_HPP
#define UBAD_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ubad/analysis.hpp"
#include "ubad/field.hpp"
#include "ubad/policy.hpp"

namespace ubad {

inline constexpr const char* kVersion = "ubad 0.1.0";

/// Source position, either as a 1-based grid index or as a physical point
/// (snapped to the nearest grid center when the experiment runs).
struct SourceSpec {
    bool by_index = false;
    GridIndex index{1, 1};
    Point2 point{0.0, 0.0};

    friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

/// One experiment: a grid/field family, the policies to compare, the
/// sequential budget, and the trial/seed plan. `spreads` x `noise_levels`
/// forms the sweep; single-point runs use singleton lists.
struct ExperimentConfig {
    GridSpec grid{5.0, 100};
    FieldKind field_kind = FieldKind::Gaussian;
    std::vector<double> spreads{1.0};
    double amplitude = 1.0;
    SourceSpec source;
    std::vector<double> noise_levels{0.0};
    std::vector<PolicyName> policies{PolicyName::Passive, PolicyName::Greedy,
                                     PolicyName::Ubad};
    int m = 50;
    int trials = 100;
    std::uint64_t master_seed = 42;
    double beta = 1.0;    // Ubad uncertainty weight
    double c_const = 1.0; // unspecified constant in the bound formulas
    SolverConfig solver;
    bool passive_latin_init = true; // false: passive draws its initial set uniformly
    bool dump_observations = false; // write trial-0 observation sets
    std::string out_dir;            // empty: keep results in memory only

    void validate() const;
    GridIndex resolved_source() const; // snapped index

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

/// FNV-1a of the canonical serialized form.
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Reference experiment configurations (fig1, fig2_left, fig2_right, bounds) and
/// desk-scale *_small variants. Throws on unknown names.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

const char* policy_name(PolicyName p);
PolicyName parse_policy(const std::string& name);

struct TrialRecord {
    int policy_index = 0;
    int sweep_index = 0;
    int trial_index = 0;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
};

struct RunManifest {
    std::string config_hash_hex;
    std::string version;
    std::string started_at;
    std::string finished_at;
    int failed_trials = 0;
    std::vector<TrialRecord> trials;
};

/// Results for one (policy, sweep point) combination.
struct CellResult {
    PolicyName policy = PolicyName::Ubad;
    double spread = 1.0;
    double sigma_n = 0.0;
    int sweep_index = 0;
    std::vector<TrialTrace> traces; // successful trials, in trial order
    AggregateCurves curves;
    int failed_trials = 0;
};

struct ExperimentResult {
    std::vector<CellResult> cells; // policy-major, then sweep order
    RunManifest manifest;
    std::string out_dir;
};

/// Runs trials x policies x sweep points (OpenMP pool, deterministic
/// aggregation by trial index), writes curves.csv / summary.csv /
/// per-cell trace CSVs / manifest.json when out_dir is set. Re-running the
/// same config reproduces byte-identical CSVs.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Bound and initialization-check reports over the config's sweep; writes bounds.csv when
/// out_dir is set.
struct BoundsRow {
    double spread = 0.0;
    BoundReport sequential;
    BoundReport closed_form;
    InitBoundCheck init_bound;
    SubspaceCheckResult subspace;
};

std::vector<BoundsRow> run_bounds(const ExperimentConfig& cfg);

/// Structural invariant self-test suite (the `validate` subcommand):
/// Latin-squares structure, no-resample guarantee, Ubad(beta=0) == Greedy,
/// unimodality of synthesized fields, and bit-reproducibility of a full
/// fig1_small run. Prints one line per check; returns overall pass.
bool run_validation(std::ostream& out, const std::string& scratch_dir);

} // namespace ubad

#endif // UBAD_HARNESS_HPP
