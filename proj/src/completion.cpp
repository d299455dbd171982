#include "ubad/completion.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "ubad/rng.hpp"

namespace ubad {

using kernels::Exec;

Rank1Estimate scale_split(const SvdTriple& triple) {
    const double root = std::sqrt(triple.sigma);
    Rank1Estimate est{root * triple.u, root * triple.v};
    if (est.u_hat.sum() < 0.0) {
        est.u_hat = -est.u_hat;
        est.v_hat = -est.v_hat;
    }
    return est;
}

namespace {

Rank1SvdResult power_iterate(const Matrix& m, Vector v, double tol, int max_iters,
                             Exec exec, double frob) {
    const auto n_rows = m.rows();
    Rank1SvdResult res;
    Vector u = Vector::Zero(n_rows);
    u(0) = 1.0;
    Vector mv(n_rows), mtu(m.cols());
    kernels::matvec(m, v, mv, exec);
    double sigma = 0.0;
    for (int iter = 1; iter <= max_iters; ++iter) {
        res.iterations = iter;
        const double mv_norm = mv.norm();
        if (mv_norm == 0.0) break; // v in the null space; caller may restart
        u = mv / mv_norm;
        kernels::matvec_transpose(m, u, mtu, exec);
        sigma = mtu.norm();
        if (sigma == 0.0) break;
        v = mtu / sigma;
        // stagnation at ~0 relative to the matrix mass: orthogonal start
        if (sigma <= 1e-12 * frob) break;
        kernels::matvec(m, v, mv, exec);
        const double residual = (mv - sigma * u).norm();
        if (residual <= tol * sigma) {
            res.converged = true;
            break;
        }
    }
    res.triple = {sigma, u, v};
    return res;
}

} // namespace

Rank1SvdResult rank1_svd(const Matrix& m, double tol, int max_iters, Exec exec) {
    if (m.rows() == 0 || m.cols() == 0)
        throw std::invalid_argument("rank1_svd: empty matrix");
    if (!(tol > 0.0)) throw std::invalid_argument("rank1_svd: tol must be positive");
    if (!m.allFinite()) throw std::invalid_argument("rank1_svd: matrix must be finite");

    const double frob = m.norm();
    const auto n_cols = m.cols();
    if (frob == 0.0) {
        // zero matrix: sigma 0, arbitrary unit vectors
        Vector u = Vector::Zero(m.rows());
        Vector v = Vector::Zero(n_cols);
        u(0) = 1.0;
        v(0) = 1.0;
        return {{0.0, u, v}, true, 0, false};
    }

    Vector start = Vector::Constant(n_cols, 1.0 / std::sqrt(static_cast<double>(n_cols)));
    Rank1SvdResult res = power_iterate(m, start, tol, max_iters, exec, frob);
    if (!res.converged && res.triple.sigma <= 1e-12 * frob) {
        // fixed start sits in (numerically) the orthogonal complement of the
        // dominant subspace; restart once from a seeded random direction
        RandomStream rng(0x5BD1E995C2B2AE35ULL);
        Vector restart(n_cols);
        for (Eigen::Index k = 0; k < n_cols; ++k) restart(k) = rng.normal();
        restart.normalize();
        const int used = res.iterations;
        res = power_iterate(m, restart, tol, max_iters, exec, frob);
        res.restarted = true;
        res.iterations += used;
    }
    return res;
}

namespace {

double masked_objective(const ObservationSet& omega, const Rank1Estimate& est) {
    double obj = 0.0;
    for (const auto& [idx, value] : omega.entries()) {
        const double r = est.u_hat(idx.i - 1) * est.v_hat(idx.j - 1) - value;
        obj += r * r;
    }
    return obj;
}

void apply_sign_convention(Rank1Estimate& est) {
    if (est.u_hat.sum() < 0.0) {
        est.u_hat = -est.u_hat;
        est.v_hat = -est.v_hat;
    }
}

} // namespace

AlsResult rank1_als(const ObservationSet& omega, const AlsOptions& opts) {
    if (omega.size() == 0) throw std::invalid_argument("rank1_als: empty observation set");

    AlsResult res;
    const Rank1SvdResult init =
        rank1_svd(omega.masked_matrix(), opts.svd_tol, opts.svd_iters, opts.exec);
    res.estimate = scale_split(init.triple);

    std::vector<std::uint8_t> degen_u, degen_v;
    double prev = masked_objective(omega, res.estimate);
    if (opts.record_objectives) res.objectives.push_back(prev);

    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        res.iterations = iter;
        kernels::als_update_u(omega.row_observations(), res.estimate.v_hat,
                              res.estimate.u_hat, degen_u, opts.exec);
        kernels::als_update_v(omega.col_observations(), res.estimate.u_hat,
                              res.estimate.v_hat, degen_v, opts.exec);
        const double cur = masked_objective(omega, res.estimate);
        if (opts.record_objectives) res.objectives.push_back(cur);
        if (prev <= 0.0 || (prev - cur) / prev < opts.tol) {
            res.converged = true;
            prev = cur;
            break;
        }
        prev = cur;
    }
    res.objective = prev;
    res.degenerate_rows = 0;
    res.degenerate_cols = 0;
    for (auto f : degen_u) res.degenerate_rows += f;
    for (auto f : degen_v) res.degenerate_cols += f;
    apply_sign_convention(res.estimate);
    return res;
}

SoftImputeResult soft_impute(const ObservationSet& omega, const SoftImputeOptions& opts) {
    if (omega.size() == 0)
        throw std::invalid_argument("soft_impute: empty observation set");
    if (opts.tol <= 0.0) throw std::invalid_argument("soft_impute: tol must be positive");

    const int n = omega.grid_size();
    const Matrix observed = omega.masked_matrix();
    const auto& mask = omega.mask();

    SoftImputeResult res;
    res.lambda = opts.lambda;
    Matrix current = Matrix::Zero(n, n);
    Matrix work(n, n);
    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        res.iterations = iter;
        // P_Omega(Y) + P_Omega^c(current)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                work(i, j) = mask[static_cast<std::size_t>(i) * n + j] ? observed(i, j)
                                                                       : current(i, j);
        Eigen::BDCSVD<Matrix> svd(work, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (iter == 1 && res.lambda < 0.0) res.lambda = 1e-3 * svd.singularValues()(0);
        Vector sv = svd.singularValues();
        for (Eigen::Index k = 0; k < sv.size(); ++k)
            sv(k) = std::max(sv(k) - res.lambda, 0.0);
        Matrix next = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
        const double delta = (next - current).norm();
        current = std::move(next);
        if (delta < opts.tol) {
            res.converged = true;
            break;
        }
    }
    res.completed = std::move(current);
    return res;
}

double subspace_gap(const SvdTriple& truth, const SvdTriple& estimate) {
    const double cu = truth.u.dot(estimate.u);
    const double cv = truth.v.dot(estimate.v);
    return (1.0 - cu * cu) + (1.0 - cv * cv);
}

} // namespace ubad
