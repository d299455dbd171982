#include "ubad/kernels.hpp"

#include <cmath>
#include <limits>

namespace ubad::kernels {

namespace detail {

double row_dot(const Matrix& m, Eigen::Index row, const Vector& x) {
    double acc = 0.0;
    const Eigen::Index n = m.cols();
    for (Eigen::Index j = 0; j < n; ++j) acc += m(row, j) * x(j);
    return acc;
}

double col_dot(const Matrix& m, Eigen::Index col, const Vector& x) {
    double acc = 0.0;
    const Eigen::Index n = m.rows();
    for (Eigen::Index i = 0; i < n; ++i) acc += m(i, col) * x(i);
    return acc;
}

} // namespace detail

void matvec(const Matrix& m, const Vector& x, Vector& y, Exec exec) {
    const Eigen::Index rows = m.rows();
    y.resize(rows);
    if (use_parallel(exec, rows)) {
#pragma omp parallel for schedule(static)
        for (Eigen::Index i = 0; i < rows; ++i) y(i) = detail::row_dot(m, i, x);
    } else {
        for (Eigen::Index i = 0; i < rows; ++i) y(i) = detail::row_dot(m, i, x);
    }
}

void matvec_transpose(const Matrix& m, const Vector& x, Vector& y, Exec exec) {
    const Eigen::Index cols = m.cols();
    y.resize(cols);
    if (use_parallel(exec, cols)) {
#pragma omp parallel for schedule(static)
        for (Eigen::Index j = 0; j < cols; ++j) y(j) = detail::col_dot(m, j, x);
    } else {
        for (Eigen::Index j = 0; j < cols; ++j) y(j) = detail::col_dot(m, j, x);
    }
}

namespace {

// The row term beta*u_i^2 can be so large that adding the column-dependent
// terms leaves the double unchanged, which would turn every cell of that row
// into an exact tie. Carrying the column-dependent part as a secondary key
// restores the exact-arithmetic ordering; genuine ties (both keys equal)
// still resolve lexicographically.
struct ScoredCell {
    double score = 0.0;     // |u_i v_j| + beta (u_i^2 + v_j^2), as summed
    double remainder = 0.0; // |u_i v_j| + beta v_j^2
    int row = -1;
    int col = -1;
};

bool better(const ScoredCell& a, const ScoredCell& b) {
    if (std::isnan(a.score)) return false;
    if (b.row < 0) return true;
    if (a.score != b.score) return a.score > b.score;
    if (a.remainder != b.remainder) return a.remainder > b.remainder;
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
}

// Best cell within one row; identical code path for both exec variants.
ScoredCell row_argmax(const Vector& u, const Vector& v, double beta,
                      const std::uint8_t* skip, int i, int n) {
    ScoredCell best;
    const double ui = u(i);
    const double uterm = beta * ui * ui;
    const double aui = std::abs(ui);
    for (int j = 0; j < n; ++j) {
        if (skip && skip[static_cast<std::size_t>(i) * n + j]) continue;
        const double vj = v(j);
        const double remainder = aui * std::abs(vj) + beta * vj * vj;
        const ScoredCell cell{uterm + remainder, remainder, i, j};
        if (better(cell, best)) best = cell;
    }
    return best;
}

} // namespace

ArgmaxResult score_argmax(const Vector& u, const Vector& v, double beta,
                          const std::uint8_t* skip, Exec exec) {
    const int n = static_cast<int>(u.size());
    std::vector<ScoredCell> per_row(static_cast<std::size_t>(n));
    if (use_parallel(exec, n)) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) per_row[i] = row_argmax(u, v, beta, skip, i, n);
    } else {
        for (int i = 0; i < n; ++i) per_row[i] = row_argmax(u, v, beta, skip, i, n);
    }
    ScoredCell best;
    for (int i = 0; i < n; ++i) {
        const ScoredCell& r = per_row[i];
        if (r.row >= 0 && better(r, best)) best = r;
    }
    return {best.score, best.row, best.col};
}

namespace {

void axis_update(const AxisObservations& obs, const Vector& other, Vector& out,
                 std::vector<std::uint8_t>& degenerate, Exec exec) {
    const int n = static_cast<int>(obs.size());
    out.resize(n);
    degenerate.assign(static_cast<std::size_t>(n), 0);
    auto update_one = [&](int k) {
        double num = 0.0, den = 0.0;
        for (const auto& [idx, val] : obs[k]) {
            const double o = other(idx);
            num += val * o;
            den += o * o;
        }
        if (den == 0.0) {
            // rank-deficient normal equation: every touched factor entry is
            // zero, so the residuals do not depend on out(k). Zero-fill the
            // unobserved case; seed observed rows from their first sample so
            // the next half-sweep can re-enter them.
            degenerate[k] = 1;
            out(k) = obs[k].empty() ? 0.0 : std::sqrt(std::abs(obs[k].front().second));
        } else {
            out(k) = num / den;
        }
    };
    if (use_parallel(exec, n)) {
#pragma omp parallel for schedule(static)
        for (int k = 0; k < n; ++k) update_one(k);
    } else {
        for (int k = 0; k < n; ++k) update_one(k);
    }
}

} // namespace

void als_update_u(const AxisObservations& row_obs, const Vector& v, Vector& u_out,
                  std::vector<std::uint8_t>& degenerate, Exec exec) {
    axis_update(row_obs, v, u_out, degenerate, exec);
}

void als_update_v(const AxisObservations& col_obs, const Vector& u, Vector& v_out,
                  std::vector<std::uint8_t>& degenerate, Exec exec) {
    axis_update(col_obs, u, v_out, degenerate, exec);
}

} // namespace ubad::kernels
