#ifndef UBAD_POLICY_HPP
#define UBAD_POLICY_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ubad/completion.hpp"
#include "ubad/field.hpp"
#include "ubad/sampling.hpp"

namespace ubad {

enum class PolicyName { Ubad, Greedy, Passive };

/// Acquisition rule for the sequential stage. Ubad with beta = 0 selects
/// exactly like Greedy; Passive draws uniformly from the unobserved cells.
struct PolicyKind {
    PolicyName name = PolicyName::Ubad;
    double beta = 1.0; // uncertainty weight, used by Ubad only

    void validate() const;
};

enum class SolverKind { Als, SoftImpute };

/// Completion settings used after every sequential sample.
struct SolverConfig {
    SolverKind kind = SolverKind::Als;
    double tol = 1e-8;
    int max_iters = 500;
    double lambda = -1.0; // soft-impute threshold; < 0 = auto
    double svd_tol = 1e-8;
    int svd_iters = 500;
    kernels::Exec exec = kernels::Exec::Auto;

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// How the initial n samples are drawn.
enum class InitScheme { LatinSquares, UniformWithoutReplacement };

/// Mutable state of one sequential run: the sample set, the current rank-1
/// estimate, and the number of sequential samples taken so far.
struct LoopState {
    ObservationSet omega;
    Rank1Estimate estimate;
    int t = 0;
};

struct TrialStep {
    GridIndex selected;   // (i_t, j_t)
    GridIndex peak;       // s_hat_t, from the estimate before this selection
    double error = 0.0;   // physical-units distance to the true source
    bool solver_converged = true;
};

/// Record of one sequential run. steps has exactly m entries; the curve
/// value at t is the error of the peak estimate built from t sequential
/// samples (so curve size is m + 1, ending with the post-run estimate).
struct TrialTrace {
    GridIndex init_peak{0, 0}; // peak estimate right after initialization
    double init_error = 0.0;
    std::vector<TrialStep> steps;
    GridIndex final_peak{0, 0}; // peak of the estimate after all m samples
    double final_error = 0.0;
    int flagged_steps = 0; // completions that did not converge

    std::vector<double> error_curve() const; // m + 1 points
    /// Running mean of squared step errors: (1/t) sum_{tau<=t} error_tau^2,
    /// indexed t = 1..m.
    std::vector<double> running_mean_sq() const;
};

/// Argmax of |u_i v_j| over all cells, ties lexicographic.
GridIndex peak_estimate(const Rank1Estimate& est);

/// |u_i v_j| + beta * (u_i^2 + v_j^2).
double ubad_score(const Rank1Estimate& est, GridIndex idx, double beta);

/// Next cell to query, restricted to the unobserved set. Throws when the
/// grid is exhausted.
GridIndex select_next(const PolicyKind& kind, const LoopState& state, RandomStream& rng);

/// Full sequential run: Latin-squares initialization, then m rounds of
/// peak estimation, selection, query, and re-completion. Deterministic per
/// seed. Solver non-convergence is flagged in the trace, never thrown.
TrialTrace run_trial(const GridSpec& grid, const FieldModel& field,
                     const NoiseModel& noise, const PolicyKind& kind, int m,
                     const SolverConfig& solver, std::uint64_t seed,
                     InitScheme init = InitScheme::LatinSquares,
                     ObservationSet* out_observations = nullptr);

/// Trace CSV: trial_id,t,i_t,j_t,s_hat_i,s_hat_j,error (one row per step).
void write_trace_csv_rows(std::ostream& out, int trial_id, const TrialTrace& trace);

} // namespace ubad

#endif // UBAD_POLICY_HPP
