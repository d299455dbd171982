#include "ubad/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "ubad/sampling.hpp"

namespace ubad {

double localization_error(GridIndex s_hat, GridIndex s_star, const GridSpec& grid) {
    const Point2 a = grid_center(grid, s_hat);
    const Point2 b = grid_center(grid, s_star);
    return std::hypot(a.x - b.x, a.y - b.y);
}

GapTable gap_table(const EnergyMatrix& energy) {
    const int n = energy.n();
    const Matrix& h = energy.values;
    const int mi = energy.mode.i - 1;
    const int mj = energy.mode.j - 1;
    GapTable out;
    out.delta_u.resize(n, n);
    out.delta_v.resize(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            out.delta_u(k, l) = h(mi, l) - h(k, l);
            out.delta_v(k, l) = h(k, mj) - h(k, l);
        }
    out.b = h.maxCoeff();
    return out;
}

BoundReport sequential_bound(const EnergyMatrix& energy, int m, double c_const) {
    if (m < 2) throw std::invalid_argument("sequential_bound: m must be >= 2");
    const int n = energy.n();
    const GapTable gaps = gap_table(energy);
    const Rank1SvdResult svd = rank1_svd(energy.values, 1e-12, 10000);
    const Vector& u = svd.triple.u;
    const Vector& v = svd.triple.v;

    BoundReport report;
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            const double du = gaps.delta_u(k, l);
            const double dv = gaps.delta_v(k, l);
            if (du <= 0.0 || dv <= 0.0) {
                ++report.excluded_terms;
                continue;
            }
            const double gamma_u = u(k) + 2.0 * gaps.b * du;
            const double gamma_v = v(l) + 2.0 * gaps.b * dv;
            const double di = static_cast<double>(k + 1 - energy.mode.i);
            const double dj = static_cast<double>(l + 1 - energy.mode.j);
            sum += (gamma_u / (du * du)) * (gamma_v / (dv * dv)) * (di * di + dj * dj);
        }
    const double logm = std::log(static_cast<double>(m));
    report.value = c_const * sum * logm * logm / static_cast<double>(m);
    return report;
}

BoundReport closed_form_bound(FieldKind kind, const GridSpec& grid, GridIndex s_star,
                              double spread, int m, double c_const) {
    if (m < 2) throw std::invalid_argument("closed_form_bound: m must be >= 2");
    if (!(spread > 0.0))
        throw std::invalid_argument("closed_form_bound: spread must be positive");
    grid.validate();
    const int n = grid.n;
    double sum = 0.0;
    for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) {
            const double di = static_cast<double>(k - s_star.i);
            const double dj = static_cast<double>(l - s_star.j);
            const double d2 = di * di + dj * dj;
            const double expo = kind == FieldKind::Gaussian
                                    ? d2 / (2.0 * n * spread)
                                    : std::sqrt(d2) / (2.0 * n * spread);
            sum += d2 * std::exp(expo);
        }
    const double logm = std::log(static_cast<double>(m));
    return {c_const * spread * logm * logm * sum, 0};
}

InitBoundCheck init_bound_check(const EnergyMatrix& energy, int trials,
                                RandomStream& rng, bool include_sigma) {
    if (trials < 1) throw std::invalid_argument("init_bound_check: trials must be >= 1");
    const int n = energy.n();
    const Rank1SvdResult svd = rank1_svd(energy.values, 1e-12, 10000);
    const double u_l1 = svd.triple.u.lpNorm<1>();
    const double v_l2 = svd.triple.v.norm();
    const double sigma = include_sigma ? svd.triple.sigma : 1.0;
    InitBoundCheck check;
    check.trials = trials;
    check.bound = 1.01 * (1.0 - 1.0 / n) * sigma * u_l1 * v_l2;

    for (int t = 0; t < trials; ++t) {
        Matrix residual = energy.values;
        for (const GridIndex idx : latin_init(n, rng))
            residual(idx.i - 1, idx.j - 1) = 0.0;
        const double norm = rank1_svd(residual, 1e-10, 5000).triple.sigma;
        if (norm > check.bound) ++check.violations;
    }
    check.empirical_rate =
        static_cast<double>(trials - check.violations) / static_cast<double>(trials);
    return check;
}

SubspaceCheckResult subspace_check(const EnergyMatrix& energy, int trials,
                                   RandomStream& rng) {
    if (trials < 1) throw std::invalid_argument("subspace_check: trials must be >= 1");
    const int n = energy.n();
    const Rank1SvdResult truth = rank1_svd(energy.values, 1e-12, 10000);
    SubspaceCheckResult out;
    int within = 0;
    for (int t = 0; t < trials; ++t) {
        ObservationSet omega(n);
        Matrix residual = energy.values;
        for (const GridIndex idx : latin_init(n, rng)) {
            omega.add(idx, energy.at(idx));
            residual(idx.i - 1, idx.j - 1) = 0.0;
        }
        const double r = rank1_svd(residual, 1e-10, 5000).triple.sigma;
        if (r >= truth.triple.sigma) {
            ++out.invalid_draws;
            continue;
        }
        ++out.valid_draws;
        const Rank1SvdResult est = rank1_svd(omega.masked_matrix(), 1e-10, 5000);
        const double gap = subspace_gap(truth.triple, est.triple);
        const double denom = truth.triple.sigma - r;
        if (gap <= 2.0 * r * r / (denom * denom)) ++within;
    }
    out.rate = out.valid_draws == 0
                   ? 0.0
                   : static_cast<double>(within) / static_cast<double>(out.valid_draws);
    return out;
}

AggregateCurves aggregate(const std::vector<TrialTrace>& traces) {
    if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
    const std::size_t m = traces.front().steps.size();
    for (const auto& t : traces)
        if (t.steps.size() != m)
            throw std::invalid_argument("aggregate: traces have mismatched lengths");

    const auto trials = static_cast<double>(traces.size());
    auto mean_stderr = [&](const std::vector<std::vector<double>>& series,
                           std::size_t count, std::vector<double>& mean,
                           std::vector<double>& se) {
        mean.assign(count, 0.0);
        se.assign(count, 0.0);
        for (std::size_t p = 0; p < count; ++p) {
            double acc = 0.0;
            for (const auto& s : series) acc += s[p];
            const double mu = acc / trials;
            double var = 0.0;
            for (const auto& s : series) {
                const double d = s[p] - mu;
                var += d * d;
            }
            mean[p] = mu;
            se[p] = series.size() > 1
                        ? std::sqrt(var / (trials - 1.0)) / std::sqrt(trials)
                        : 0.0;
        }
    };

    AggregateCurves out;
    out.trials = static_cast<int>(traces.size());
    std::vector<std::vector<double>> curves, runavgs;
    curves.reserve(traces.size());
    runavgs.reserve(traces.size());
    for (const auto& t : traces) {
        curves.push_back(t.error_curve());
        runavgs.push_back(t.running_mean_sq());
    }
    mean_stderr(curves, m + 1, out.mean_error, out.stderr_error);
    mean_stderr(runavgs, m, out.mean_running_sq, out.stderr_running_sq);
    return out;
}

} // namespace ubad
