// Acceptance suite: end-to-end checks of the experiment pipeline, printed
// one line per criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "ubad/analysis.hpp"
#include "ubad/harness.hpp"
#include "ubad/rng.hpp"

using namespace ubad;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> fn;
};

const CellResult* find_cell(const ExperimentResult& res, PolicyName p, int sweep) {
    for (const auto& cell : res.cells)
        if (cell.policy == p && cell.sweep_index == sweep) return &cell;
    return nullptr;
}

double combined_se(double a, double b) { return std::sqrt(a * a + b * b); }

// ---------------------------------------------------------------------------
// 1 + 2: fig1_small ordering and decay shape (shared runs)
// ---------------------------------------------------------------------------

ExperimentResult run_fig1_small() {
    ExperimentConfig cfg = preset("fig1_small");
    cfg.out_dir.clear();
    return run_experiment(cfg);
}

bool criterion_policy_ordering(const ExperimentResult& res, std::string& detail) {
    const CellResult* ubad_cell = find_cell(res, PolicyName::Ubad, 0);
    const CellResult* greedy = find_cell(res, PolicyName::Greedy, 0);
    const CellResult* passive = find_cell(res, PolicyName::Passive, 0);
    if (!ubad_cell || !greedy || !passive) {
        detail = "missing policy cells";
        return false;
    }
    const double mu_u = ubad_cell->curves.mean_error.back();
    const double mu_g = greedy->curves.mean_error.back();
    const double mu_p = passive->curves.mean_error.back();
    const double se_up = combined_se(ubad_cell->curves.stderr_error.back(),
                                     passive->curves.stderr_error.back());
    char buf[160];
    std::snprintf(buf, sizeof(buf), "final error ubad %.4f <= greedy %.4f <= passive %.4f, gap %.4f > se %.4f",
                  mu_u, mu_g, mu_p, mu_p - mu_u, se_up);
    detail = buf;
    return mu_u <= mu_g && mu_g <= mu_p && (mu_p - mu_u) > se_up;
}

bool criterion_decay_shape(const ExperimentResult& res, std::string& detail) {
    const CellResult* ubad_cell = find_cell(res, PolicyName::Ubad, 0);
    if (!ubad_cell) {
        detail = "missing ubad cell";
        return false;
    }
    const auto& ravg = ubad_cell->curves.mean_running_sq; // index t-1, t = 1..m
    double sxx = 0.0, sxy = 0.0;
    std::vector<double> xs, ys;
    for (int m = 10; m <= 50; ++m) {
        const double x = std::log(static_cast<double>(m)) *
                         std::log(static_cast<double>(m)) / m;
        const double y = ravg[static_cast<std::size_t>(m - 1)];
        xs.push_back(x);
        ys.push_back(y);
        sxx += x * x;
        sxy += x * y;
    }
    const double a = sxy / sxx;
    const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) /
                          static_cast<double>(ys.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t k = 0; k < ys.size(); ++k) {
        ss_res += (ys[k] - a * xs[k]) * (ys[k] - a * xs[k]);
        ss_tot += (ys[k] - mean_y) * (ys[k] - mean_y);
    }
    const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

    // exact log^2(m)/m factorization of the computable bound
    GridSpec g{5.0, 8};
    FieldModel f{FieldKind::Gaussian, 1.0, 1.0, {3, 5}};
    const EnergyMatrix h = synthesize(g, f);
    const double v100 = sequential_bound(h, 100, 1.0).value;
    const double v200 = sequential_bound(h, 200, 1.0).value;
    auto shape = [](double m) { return std::log(m) * std::log(m) / m; };
    const double ratio_err =
        std::abs(v200 / v100 - shape(200.0) / shape(100.0)) / (shape(200.0) / shape(100.0));

    char buf[120];
    std::snprintf(buf, sizeof(buf), "fit a=%.4g, R^2=%.3f (need >= 0.8); m-scaling rel err %.2e",
                  a, r2, ratio_err);
    detail = buf;
    return r2 >= 0.8 && ratio_err <= 1e-12;
}

// ---------------------------------------------------------------------------
// 3: Laplacian spread trend
// ---------------------------------------------------------------------------

double spearman_against_order(const std::vector<double>& values) {
    // rank correlation of values against their index order (no ties expected)
    const std::size_t n = values.size();
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n; ++i) {
        double r = 1.0;
        for (std::size_t j = 0; j < n; ++j)
            if (values[j] < values[i]) r += 1.0;
        ranks[i] = r;
    }
    const double mean_rank = (static_cast<double>(n) + 1.0) / 2.0;
    double num = 0.0, den_a = 0.0, den_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = ranks[i] - mean_rank;
        const double db = static_cast<double>(i + 1) - mean_rank;
        num += da * db;
        den_a += da * da;
        den_b += db * db;
    }
    return num / std::sqrt(den_a * den_b);
}

bool criterion_spread_trend(std::string& detail) {
    ExperimentConfig cfg = preset("fig2_left_small");
    cfg.policies = {PolicyName::Ubad};
    cfg.out_dir.clear();
    const ExperimentResult res = run_experiment(cfg);

    std::vector<double> means, ses, bounds;
    for (std::size_t s = 0; s < cfg.spreads.size(); ++s) {
        const CellResult* cell = find_cell(res, PolicyName::Ubad, static_cast<int>(s));
        if (!cell) {
            detail = "missing sweep cell";
            return false;
        }
        means.push_back(cell->curves.mean_error.back());
        ses.push_back(cell->curves.stderr_error.back());
        bounds.push_back(closed_form_bound(FieldKind::Laplacian, cfg.grid,
                                         cfg.resolved_source(), cfg.spreads[s], cfg.m,
                                         cfg.c_const)
                             .value);
    }
    bool adjacent_ok = true;
    for (std::size_t k = 0; k + 1 < means.size(); ++k)
        if (means[k + 1] < means[k] - combined_se(ses[k], ses[k + 1])) adjacent_ok = false;
    const double rho = spearman_against_order(means);
    const bool bounds_ok = std::is_sorted(bounds.begin(), bounds.end());

    const bool degenerate =
        *std::max_element(means.begin(), means.end()) == 0.0;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "means [%.3f %.3f %.3f %.3f %.3f], spearman %.2f (need >= 0.8), "
                  "adjacent %s, closed-form bound non-decreasing %s%s",
                  means[0], means[1], means[2], means[3], means[4], rho,
                  adjacent_ok ? "ok" : "violated", bounds_ok ? "yes" : "no",
                  degenerate ? " [noiseless runs at this scale localize exactly at "
                               "every gamma, so there is no trend to rank]"
                             : "");
    detail = buf;
    return adjacent_ok && rho >= 0.8 && bounds_ok;
}

// ---------------------------------------------------------------------------
// 4: noise robustness
// ---------------------------------------------------------------------------

bool criterion_noise_robustness(std::string& detail) {
    ExperimentConfig cfg = preset("fig2_right_small");
    cfg.out_dir.clear();
    const ExperimentResult res = run_experiment(cfg);

    bool robust_ok = true;
    for (std::size_t s = 0; s < cfg.noise_levels.size(); ++s) {
        const CellResult* u = find_cell(res, PolicyName::Ubad, static_cast<int>(s));
        const CellResult* g = find_cell(res, PolicyName::Greedy, static_cast<int>(s));
        if (!u || !g) {
            detail = "missing cells";
            return false;
        }
        const double se = combined_se(u->curves.stderr_error.back(),
                                      g->curves.stderr_error.back());
        if (u->curves.mean_error.back() > g->curves.mean_error.back() + se)
            robust_ok = false;
    }
    const CellResult* u0 = find_cell(res, PolicyName::Ubad, 0);
    const CellResult* p0 = find_cell(res, PolicyName::Passive, 0);
    const bool low_noise_ok =
        u0->curves.mean_error.back() < p0->curves.mean_error.back();

    const int last = static_cast<int>(cfg.noise_levels.size()) - 1;
    const CellResult* ul = find_cell(res, PolicyName::Ubad, last);
    const CellResult* pl = find_cell(res, PolicyName::Passive, last);
    const bool passive_overtakes =
        pl->curves.mean_error.back() < ul->curves.mean_error.back();

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "ubad <= greedy + se at all %zu levels: %s; low-noise ubad < passive: "
                  "%s; [info] passive overtakes at sigma_n=%.2g: %s",
                  cfg.noise_levels.size(), robust_ok ? "yes" : "no",
                  low_noise_ok ? "yes" : "no", cfg.noise_levels.back(),
                  passive_overtakes ? "yes" : "no");
    detail = buf;
    return robust_ok && low_noise_ok;
}

// ---------------------------------------------------------------------------
// 5: initialization bound Monte-Carlo
// ---------------------------------------------------------------------------

bool criterion_init_bound(std::string& detail) {
    std::string parts;
    bool ok = true;
    for (int n : {20, 50}) {
        GridSpec g{5.0, n};
        FieldModel f{FieldKind::Gaussian, 1.0, 1.0, snap_to_grid(g, {-0.5, 0.5})};
        const EnergyMatrix h = synthesize(g, f);
        RandomStream rng(derive_seed(2025, 5, static_cast<std::uint64_t>(n), 0));
        const InitBoundCheck check = init_bound_check(h, 200, rng);
        parts += "n=" + std::to_string(n) + " rate " + std::to_string(check.empirical_rate) + "  ";
        if (check.empirical_rate < 0.9) ok = false;
    }
    detail = parts + "(need >= 0.9)";
    return ok;
}

// ---------------------------------------------------------------------------
// 6: oracle equivalence
// ---------------------------------------------------------------------------

bool criterion_oracles(std::string& detail) {
    RandomStream rng(31415);
    double worst_bound = 0.0, worst_svd = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform_below(9));
        GridSpec g{1.0 + 4.0 * rng.unit_real(), n};
        const FieldKind kind =
            rng.uniform_below(2) ? FieldKind::Gaussian : FieldKind::Laplacian;
        GridIndex src{1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n))),
                      1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)))};
        FieldModel f{kind, 0.3 + 2.0 * rng.unit_real(), 0.5 + rng.unit_real(), src};
        const EnergyMatrix h = synthesize(g, f);
        const int m = 2 + static_cast<int>(rng.uniform_below(300));
        const double c = 0.5 + rng.unit_real();

        // brute-force recomputation, definition level
        Eigen::JacobiSVD<Matrix> svd(h.values,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
        Vector u = svd.matrixU().col(0);
        Vector v = svd.matrixV().col(0);
        if (u.sum() < 0) {
            u = -u;
            v = -v;
        }
        const double b = h.values.maxCoeff();
        const GapTable gt = gap_table(h);
        double t_sum = 0.0, c_sum = 0.0;
        for (int k = 1; k <= n; ++k)
            for (int l = 1; l <= n; ++l) {
                const double du = h.at({h.mode.i, l}) - h.at({k, l});
                const double dv = h.at({k, h.mode.j}) - h.at({k, l});
                const double d2 = static_cast<double>((k - src.i) * (k - src.i) +
                                                      (l - src.j) * (l - src.j));
                const double expo = kind == FieldKind::Gaussian
                                        ? d2 / (2.0 * n * f.spread)
                                        : std::sqrt(d2) / (2.0 * n * f.spread);
                c_sum += d2 * std::exp(expo);
                if (du > 0.0 && dv > 0.0)
                    t_sum += (u(k - 1) + 2 * b * du) / (du * du) *
                             ((v(l - 1) + 2 * b * dv) / (dv * dv)) * d2;

                // gap-table equality, exact
                if (gt.delta_u(k - 1, l - 1) != du || gt.delta_v(k - 1, l - 1) != dv) {
                    detail = "gap table mismatch";
                    return false;
                }
            }
        const double lm = std::log(static_cast<double>(m));
        const double t_want = c * t_sum * lm * lm / m;
        const double c_want = c * f.spread * lm * lm * c_sum;
        const double t_got = sequential_bound(h, m, c).value;
        const double c_got = closed_form_bound(kind, g, src, f.spread, m, c).value;
        worst_bound = std::max(worst_bound,
                               std::abs(t_got - t_want) / std::max(1.0, std::abs(t_want)));
        worst_bound = std::max(worst_bound,
                               std::abs(c_got - c_want) / std::max(1.0, std::abs(c_want)));
    }
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform_below(49));
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
        const double got = rank1_svd(m, 1e-12, 50000).triple.sigma;
        Eigen::JacobiSVD<Matrix> svd(m);
        const double want = svd.singularValues()(0);
        worst_svd = std::max(worst_svd, std::abs(got - want) / want);
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf),
                  "bound oracles rel err %.2e (need <= 1e-12), svd rel err %.2e (need <= 1e-8)",
                  worst_bound, worst_svd);
    detail = buf;
    return worst_bound <= 1e-12 && worst_svd <= 1e-8;
}

// ---------------------------------------------------------------------------
// 7: exact recovery end case
// ---------------------------------------------------------------------------

bool criterion_exact_recovery(std::string& detail) {
    RandomStream rng(6174);
    int passed = 0;
    const int instances = 100;
    for (int rep = 0; rep < instances; ++rep) {
        const int n = 1 + static_cast<int>(rng.uniform_below(30));
        GridSpec g{1.0 + 4.0 * rng.unit_real(), n};
        const FieldKind kind =
            rng.uniform_below(2) ? FieldKind::Gaussian : FieldKind::Laplacian;
        GridIndex src{1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n))),
                      1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)))};
        FieldModel f{kind, 0.2 + 2.0 * rng.unit_real(), 0.25 + 2.0 * rng.unit_real(), src};
        const EnergyMatrix h = synthesize(g, f);
        ObservationSet omega(n);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) omega.add({i, j}, h.at({i, j}));
        const AlsResult res = rank1_als(omega);
        const bool frob_ok =
            (res.estimate.matrix() - h.values).norm() <= 1e-8 * h.values.norm();
        const bool peak_ok = peak_estimate(res.estimate) == h.mode;
        if (frob_ok && peak_ok) ++passed;
    }
    detail = std::to_string(passed) + "/" + std::to_string(instances) +
             " instances recovered exactly";
    return passed == instances;
}

// ---------------------------------------------------------------------------
// 8: structural invariants (validate subcommand)
// ---------------------------------------------------------------------------

bool criterion_validate(std::string& detail) {
    std::ostringstream sink;
    const bool ok = run_validation(sink, "");
    detail = ok ? "all structural checks passed" : "failures:\n" + sink.str();
    return ok;
}

} // namespace

int main() {
    const ExperimentResult fig1 = run_fig1_small();

    std::vector<Criterion> criteria{
        {"1 policy ordering (fig1_small)",
         [&](std::string& d) { return criterion_policy_ordering(fig1, d); }},
        {"2 error decay shape (log^2 m / m)",
         [&](std::string& d) { return criterion_decay_shape(fig1, d); }},
        {"3 spread trend (Laplacian sweep)", criterion_spread_trend},
        {"4 noise robustness", criterion_noise_robustness},
        {"5 initialization bound Monte-Carlo", criterion_init_bound},
        {"6 oracle equivalence", criterion_oracles},
        {"7 exact recovery end case", criterion_exact_recovery},
        {"8 structural invariants", criterion_validate},
    };

    int failures = 0;
    for (auto& c : criteria) {
        std::string detail;
        const bool ok = c.fn(detail);
        if (!ok) ++failures;
        std::printf("%s criterion %s: %s\n", ok ? "PASS" : "FAIL", c.name.c_str(),
                    detail.c_str());
        std::fflush(stdout);
    }
    if (failures == 0) std::printf("all %zu acceptance criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
