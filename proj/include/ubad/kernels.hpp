#ifndef UBAD_KERNELS_HPP
#define UBAD_KERNELS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <omp.h>

#include "ubad/types.hpp"

namespace ubad::kernels {

/// Execution policy for the data-parallel kernels. Every kernel has a serial
/// reference implementation and an OpenMP one; both produce bit-identical
/// results because all cross-iteration reductions are merged in a fixed
/// order. `Auto` picks OpenMP only when the caller is not already inside a
/// parallel region (trials in the experiment pool stay serial internally)
/// and the row count is large enough to amortize the fork-join cost.
enum class Exec { Serial, Parallel, Auto };

inline constexpr Eigen::Index kAutoParallelThreshold = 128;

inline bool use_parallel(Exec exec, Eigen::Index parallel_items) {
    switch (exec) {
    case Exec::Serial: return false;
    case Exec::Parallel: return true;
    case Exec::Auto:
        return parallel_items >= kAutoParallelThreshold && omp_in_parallel() == 0;
    }
    return false;
}

/// One observation list per row (or per column): (other-axis 0-based index, value).
using AxisObservations = std::vector<std::vector<std::pair<int, double>>>;

struct ArgmaxResult {
    double score = 0.0;
    int row = -1; // 0-based
    int col = -1; // 0-based
};

/// y = M x
void matvec(const Matrix& m, const Vector& x, Vector& y, Exec exec = Exec::Auto);

/// y = M^T x
void matvec_transpose(const Matrix& m, const Vector& x, Vector& y, Exec exec = Exec::Auto);

/// Argmax of |u_i v_j| + beta * (u_i^2 + v_j^2) over cells, ties broken
/// lexicographically by (i, j). Cells with skip[i*n + j] != 0 are excluded;
/// pass nullptr to scan every cell. Returns row = -1 when nothing qualifies.
/// NaN scores are never selected.
ArgmaxResult score_argmax(const Vector& u, const Vector& v, double beta,
                          const std::uint8_t* skip, Exec exec = Exec::Auto);

/// u_out[i] = sum_j(y_ij * v_j) / sum_j(v_j^2) over row i's observations.
/// Rows whose normal equation degenerates (all touched v entries exactly
/// zero) are flagged; unobserved rows zero-fill while observed ones seed
/// from their first sample, which is objective-neutral and lets the next
/// half-sweep recover them.
void als_update_u(const AxisObservations& row_obs, const Vector& v, Vector& u_out,
                  std::vector<std::uint8_t>& degenerate, Exec exec = Exec::Auto);

/// Column counterpart of als_update_u.
void als_update_v(const AxisObservations& col_obs, const Vector& u, Vector& v_out,
                  std::vector<std::uint8_t>& degenerate, Exec exec = Exec::Auto);

namespace detail {
double row_dot(const Matrix& m, Eigen::Index row, const Vector& x);
double col_dot(const Matrix& m, Eigen::Index col, const Vector& x);
} // namespace detail

/// Fills m(i, j) = f(i, j) (0-based) over all cells; entries are independent,
/// so any schedule yields the same matrix.
template <typename F>
void fill_matrix(Matrix& m, F&& f, Exec exec = Exec::Auto) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    if (use_parallel(exec, cols)) {
#pragma omp parallel for schedule(static)
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = f(i, j);
    } else {
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = f(i, j);
    }
}

} // namespace ubad::kernels

#endif // UBAD_KERNELS_HPP
