#ifndef UBAD_COMPLETION_HPP
#define UBAD_COMPLETION_HPP

#include <vector>

#include "ubad/kernels.hpp"
#include "ubad/sampling.hpp"
#include "ubad/types.hpp"

namespace ubad {

/// Dominant singular triple: sigma >= 0, unit-norm u and v.
struct SvdTriple {
    double sigma = 0.0;
    Vector u;
    Vector v;
};

struct Rank1SvdResult {
    SvdTriple triple;
    bool converged = false;
    int iterations = 0;
    bool restarted = false; // fixed start was (numerically) orthogonal
};

/// Scaled rank-1 factors; the implied estimate is u_hat * v_hat^T.
/// Sign convention: sum(u_hat) >= 0, with v_hat flipped jointly.
struct Rank1Estimate {
    Vector u_hat;
    Vector v_hat;

    double entry(GridIndex idx) const { return u_hat(idx.i - 1) * v_hat(idx.j - 1); }
    Matrix matrix() const { return u_hat * v_hat.transpose(); }
};

/// sqrt-scale split of a singular triple into factors, so that
/// u_hat * v_hat^T reproduces sigma * u * v^T. Applies the sign convention.
Rank1Estimate scale_split(const SvdTriple& triple);

/// Dominant singular triple by power iteration on M^T M, started from the
/// normalized all-ones vector (energy matrices are entrywise positive, so
/// the fixed start cannot be orthogonal to their dominant direction). A
/// single deterministic random restart guards the fully general case, which
/// is detected by sigma stagnating at ~0 while ||M||_F > 0. Exit criterion:
/// ||M v - sigma u||_2 <= tol * sigma.
Rank1SvdResult rank1_svd(const Matrix& m, double tol = 1e-8, int max_iters = 500,
                         kernels::Exec exec = kernels::Exec::Auto);

struct AlsOptions {
    int max_iters = 500;
    double tol = 1e-8;      // relative objective decrease
    double svd_tol = 1e-8;  // for the masked-SVD initializer
    int svd_iters = 500;
    kernels::Exec exec = kernels::Exec::Auto;
    bool record_objectives = false; // keep the per-iteration objective trail
};

struct AlsResult {
    Rank1Estimate estimate;
    bool converged = false;
    int iterations = 0;
    int degenerate_rows = 0; // zero-filled factor entries in the last sweep
    int degenerate_cols = 0;
    double objective = 0.0; // final masked squared error
    std::vector<double> objectives; // per-iteration, if requested
};

/// Rank-1 completion of the observed entries by alternating least squares
/// on  sum_{(i,j) in Omega} (u_i v_j - Y_ij)^2, initialized from the
/// scale-split dominant triple of the masked matrix.
AlsResult rank1_als(const ObservationSet& omega, const AlsOptions& opts = {});

struct SoftImputeOptions {
    double lambda = -1.0; // < 0 selects 1e-3 * sigma_1(masked matrix)
    int max_iters = 500;
    double tol = 1e-8; // Frobenius distance between successive iterates
};

struct SoftImputeResult {
    Matrix completed;
    bool converged = false;
    int iterations = 0;
    double lambda = 0.0; // threshold actually used
};

/// Nuclear-norm flavored completion: M <- SVT_lambda(P_Omega(Y) + P_Omega^c(M))
/// from M = 0, where SVT soft-thresholds every singular value by lambda.
SoftImputeResult soft_impute(const ObservationSet& omega,
                             const SoftImputeOptions& opts = {});

/// sin^2-angle distance between two singular-vector pairs:
/// (1 - (u.u0)^2) + (1 - (v.v0)^2). Sign-flip invariant, in [0, 2].
double subspace_gap(const SvdTriple& truth, const SvdTriple& estimate);

} // namespace ubad

#endif // UBAD_COMPLETION_HPP
