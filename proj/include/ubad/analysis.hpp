#ifndef UBAD_ANALYSIS_HPP
#define UBAD_ANALYSIS_HPP

#include <vector>

#include "ubad/completion.hpp"
#include "ubad/field.hpp"
#include "ubad/policy.hpp"
#include "ubad/rng.hpp"
#include "ubad/types.hpp"

namespace ubad {

struct TrialTrace; // policy.hpp

/// Euclidean distance between the physical centers of two grid cells.
double localization_error(GridIndex s_hat, GridIndex s_star, const GridSpec& grid);

/// Row and column sub-optimality gaps of a unimodal matrix:
///   delta_u(k, l) = Y(mode_i, l) - Y(k, l)
///   delta_v(k, l) = Y(k, mode_j) - Y(k, l)
/// plus b = max entry. All gaps are >= 0 on unimodal input.
struct GapTable {
    Matrix delta_u;
    Matrix delta_v;
    double b = 0.0;
};

GapTable gap_table(const EnergyMatrix& energy);

struct BoundReport {
    double value = 0.0;
    int excluded_terms = 0; // zero-gap summands skipped
};

/// Sequential-sampling error bound: C * sum over cells with both gaps
/// positive of (gamma_u / delta_u^2) (gamma_v / delta_v^2) ||c - c*||^2
/// * log^2(m)/m, with gamma_u = u_k + 2 b delta_u, gamma_v = v_l + 2 b
/// delta_v, u/v the dominant singular vectors and c the index-space cell
/// coordinates. Natural logarithm; requires m >= 2.
BoundReport sequential_bound(const EnergyMatrix& energy, int m, double c_const);

/// Closed-form specializations; distances in index space, natural log,
/// m >= 2. Gaussian: C * spread * log^2 m * sum d^2 / exp(-d^2/(2 n spread));
/// Laplacian uses d (not d^2) in the exponent.
BoundReport closed_form_bound(FieldKind kind, const GridSpec& grid, GridIndex s_star,
                              double spread, int m, double c_const);

struct InitBoundCheck {
    double bound = 0.0;
    double empirical_rate = 0.0; // fraction of draws within the bound
    int trials = 0;
    int violations = 0;
};

/// Initialization-stage spectral bound: over `trials` fresh Latin-squares
/// draws, the fraction with ||H - H_Omega||_2 <= 1.01 (1 - 1/n) sigma ||u||_1
/// (||v||_2 = 1). With include_sigma = false the sigma factor is dropped.
InitBoundCheck init_bound_check(const EnergyMatrix& energy, int trials,
                                RandomStream& rng, bool include_sigma = true);

struct SubspaceCheckResult {
    double rate = 0.0;  // fraction of valid draws within the bound
    int valid_draws = 0;
    int invalid_draws = 0; // ||H - H_Omega|| >= ||H||: bound undefined
};

/// Subspace perturbation check: subspace_gap(svd(H), svd(H_Omega)) against
/// 2 r^2 / (||H|| - r)^2 with r = ||H - H_Omega||_2, per draw.
SubspaceCheckResult subspace_check(const EnergyMatrix& energy, int trials,
                                   RandomStream& rng);

/// Mean and standard error across trials, per curve point, plus the mean
/// running average of squared step errors. All traces must have the same
/// length.
struct AggregateCurves {
    std::vector<double> mean_error;        // m + 1 points
    std::vector<double> stderr_error;      // m + 1 points
    std::vector<double> mean_running_sq;   // m points (t = 1..m)
    std::vector<double> stderr_running_sq; // m points
    int trials = 0;
};

AggregateCurves aggregate(const std::vector<TrialTrace>& traces);

} // namespace ubad

#endif // UBAD_ANALYSIS_HPP
