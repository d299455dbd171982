#include "ubad/policy.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ubad/analysis.hpp"
#include "ubad/io.hpp"

namespace ubad {

void PolicyKind::validate() const {
    if (beta < 0.0) throw std::invalid_argument("PolicyKind: beta must be >= 0");
}

std::vector<double> TrialTrace::error_curve() const {
    std::vector<double> curve;
    curve.reserve(steps.size() + 1);
    for (const auto& s : steps) curve.push_back(s.error);
    curve.push_back(final_error);
    return curve;
}

std::vector<double> TrialTrace::running_mean_sq() const {
    std::vector<double> out;
    out.reserve(steps.size());
    double acc = 0.0;
    for (std::size_t t = 0; t < steps.size(); ++t) {
        acc += steps[t].error * steps[t].error;
        out.push_back(acc / static_cast<double>(t + 1));
    }
    return out;
}

GridIndex peak_estimate(const Rank1Estimate& est) {
    const auto best = kernels::score_argmax(est.u_hat, est.v_hat, 0.0, nullptr,
                                            kernels::Exec::Auto);
    return {best.row + 1, best.col + 1};
}

double ubad_score(const Rank1Estimate& est, GridIndex idx, double beta) {
    const double ui = est.u_hat(idx.i - 1);
    const double vj = est.v_hat(idx.j - 1);
    return std::abs(ui * vj) + beta * (ui * ui + vj * vj);
}

GridIndex select_next(const PolicyKind& kind, const LoopState& state, RandomStream& rng) {
    kind.validate();
    const auto& omega = state.omega;
    const int n = omega.grid_size();
    const std::uint64_t free_cells =
        static_cast<std::uint64_t>(n) * n - static_cast<std::uint64_t>(omega.size());
    if (free_cells == 0)
        throw std::logic_error("select_next: observation set is full");

    if (kind.name == PolicyName::Passive) {
        // k-th unobserved cell in lexicographic order
        std::uint64_t k = rng.uniform_below(free_cells);
        const auto& mask = omega.mask();
        for (std::size_t flat = 0; flat < mask.size(); ++flat) {
            if (mask[flat]) continue;
            if (k == 0)
                return {static_cast<int>(flat) / n + 1, static_cast<int>(flat) % n + 1};
            --k;
        }
        throw std::logic_error("select_next: mask/count mismatch");
    }

    const double beta = kind.name == PolicyName::Greedy ? 0.0 : kind.beta;
    const auto best = kernels::score_argmax(state.estimate.u_hat, state.estimate.v_hat,
                                            beta, omega.mask().data(),
                                            kernels::Exec::Auto);
    if (best.row < 0) throw std::logic_error("select_next: no selectable cell");
    return {best.row + 1, best.col + 1};
}

namespace {

Rank1Estimate complete(const ObservationSet& omega, const SolverConfig& solver,
                       bool& converged) {
    if (solver.kind == SolverKind::Als) {
        AlsOptions opts;
        opts.max_iters = solver.max_iters;
        opts.tol = solver.tol;
        opts.svd_tol = solver.svd_tol;
        opts.svd_iters = solver.svd_iters;
        opts.exec = solver.exec;
        AlsResult res = rank1_als(omega, opts);
        converged = res.converged;
        return std::move(res.estimate);
    }
    SoftImputeOptions opts;
    opts.lambda = solver.lambda;
    opts.max_iters = solver.max_iters;
    opts.tol = solver.tol;
    SoftImputeResult si = soft_impute(omega, opts);
    // re-truncate the completed matrix to rank 1
    Rank1SvdResult top = rank1_svd(si.completed, solver.svd_tol, solver.svd_iters,
                                   solver.exec);
    converged = si.converged && top.converged;
    return scale_split(top.triple);
}

// n initial cells, uniform without replacement (ablation of the Latin design)
std::vector<GridIndex> uniform_init(int n, RandomStream& rng) {
    std::vector<int> flat(static_cast<std::size_t>(n) * n);
    for (std::size_t k = 0; k < flat.size(); ++k) flat[k] = static_cast<int>(k);
    // partial Fisher-Yates: first n entries form the sample
    for (int k = 0; k < n; ++k) {
        const auto r = k + static_cast<int>(rng.uniform_below(flat.size() - k));
        std::swap(flat[static_cast<std::size_t>(k)], flat[static_cast<std::size_t>(r)]);
    }
    std::vector<GridIndex> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        out[static_cast<std::size_t>(k)] = {flat[static_cast<std::size_t>(k)] / n + 1,
                                            flat[static_cast<std::size_t>(k)] % n + 1};
    return out;
}

} // namespace

TrialTrace run_trial(const GridSpec& grid, const FieldModel& field,
                     const NoiseModel& noise, const PolicyKind& kind, int m,
                     const SolverConfig& solver, std::uint64_t seed,
                     InitScheme init_scheme, ObservationSet* out_observations) {
    grid.validate();
    field.validate(grid);
    noise.validate();
    kind.validate();
    const int n = grid.n;
    if (m < 0 || static_cast<long long>(m) > static_cast<long long>(n) * n - n)
        throw std::invalid_argument("run_trial: m must satisfy 0 <= m <= n^2 - n");

    RandomStream rng(seed);
    const EnergyMatrix energy = synthesize(grid, field, solver.exec);

    LoopState state{ObservationSet(n), Rank1Estimate{}, 0};
    const auto init_indices = init_scheme == InitScheme::LatinSquares
                                  ? latin_init(n, rng)
                                  : uniform_init(n, rng);
    for (const GridIndex idx : init_indices)
        state.omega.add(idx, query(energy, idx, noise, rng));

    TrialTrace trace;
    bool init_converged = true;
    {
        const Rank1SvdResult init = rank1_svd(state.omega.masked_matrix(),
                                              solver.svd_tol, solver.svd_iters,
                                              solver.exec);
        init_converged = init.converged;
        state.estimate = scale_split(init.triple);
    }
    trace.init_peak = peak_estimate(state.estimate);
    trace.init_error = localization_error(trace.init_peak, energy.mode, grid);
    if (!init_converged) ++trace.flagged_steps;

    trace.steps.reserve(static_cast<std::size_t>(m));
    for (int t = 1; t <= m; ++t) {
        TrialStep step;
        step.peak = peak_estimate(state.estimate); // before this round's sample
        step.error = localization_error(step.peak, energy.mode, grid);
        step.selected = select_next(kind, state, rng);
        state.omega.add(step.selected, query(energy, step.selected, noise, rng));
        state.estimate = complete(state.omega, solver, step.solver_converged);
        state.t = t;
        if (!step.solver_converged) ++trace.flagged_steps;
        trace.steps.push_back(step);
    }
    trace.final_peak = peak_estimate(state.estimate);
    trace.final_error = localization_error(trace.final_peak, energy.mode, grid);
    if (out_observations) *out_observations = std::move(state.omega);
    return trace;
}

void write_trace_csv_rows(std::ostream& out, int trial_id, const TrialTrace& trace) {
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        const TrialStep& s = trace.steps[t];
        out << trial_id << ',' << (t + 1) << ',' << s.selected.i << ',' << s.selected.j
            << ',' << s.peak.i << ',' << s.peak.j << ',' << fmt_double(s.error) << '\n';
    }
}

} // namespace ubad
