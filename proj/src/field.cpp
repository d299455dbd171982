#include "ubad/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ubad {

void GridSpec::validate() const {
    if (!(side_length > 0.0))
        throw std::invalid_argument("GridSpec: side length must be positive");
    if (n < 1) throw std::invalid_argument("GridSpec: n must be >= 1");
}

void FieldModel::validate(const GridSpec& grid) const {
    if (!(spread > 0.0)) throw std::invalid_argument("FieldModel: spread must be positive");
    if (!(amplitude > 0.0))
        throw std::invalid_argument("FieldModel: amplitude must be positive");
    if (source_index.i < 1 || source_index.i > grid.n || source_index.j < 1 ||
        source_index.j > grid.n)
        throw std::invalid_argument("FieldModel: source index out of grid range");
}

void NoiseModel::validate() const {
    if (sigma_n < 0.0) throw std::invalid_argument("NoiseModel: sigma_n must be >= 0");
}

std::vector<double> grid_axis(const GridSpec& grid) {
    grid.validate();
    std::vector<double> axis(static_cast<std::size_t>(grid.n));
    const double l = grid.side_length;
    for (int k = 1; k <= grid.n; ++k)
        axis[k - 1] = -l / 2.0 + l * (2 * k - 1) / (2.0 * grid.n);
    return axis;
}

Point2 grid_center(const GridSpec& grid, GridIndex idx) {
    const double l = grid.side_length;
    return {-l / 2.0 + l * (2 * idx.i - 1) / (2.0 * grid.n),
            -l / 2.0 + l * (2 * idx.j - 1) / (2.0 * grid.n)};
}

std::vector<Point2> grid_centers(const GridSpec& grid) {
    const auto axis = grid_axis(grid);
    std::vector<Point2> centers;
    centers.reserve(axis.size() * axis.size());
    for (double x : axis)
        for (double y : axis) centers.push_back({x, y});
    return centers;
}

namespace {

int snap_axis(const std::vector<double>& axis, double coord) {
    int best = 1;
    double best_dist = std::abs(coord - axis[0]);
    for (int k = 2; k <= static_cast<int>(axis.size()); ++k) {
        const double d = std::abs(coord - axis[k - 1]);
        if (d < best_dist) { // ties keep the smaller index
            best_dist = d;
            best = k;
        }
    }
    return best;
}

} // namespace

GridIndex snap_to_grid(const GridSpec& grid, Point2 p) {
    const auto axis = grid_axis(grid);
    return {snap_axis(axis, p.x), snap_axis(axis, p.y)};
}

double eval_field(const FieldModel& field, Point2 x, Point2 source) {
    const double dx = source.x - x.x;
    const double dy = source.y - x.y;
    switch (field.kind) {
    case FieldKind::Gaussian:
        return field.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * field.spread));
    case FieldKind::Laplacian:
        return field.amplitude * std::exp(-(std::abs(dx) + std::abs(dy)) / field.spread);
    }
    throw std::logic_error("eval_field: unknown field kind");
}

EnergyMatrix synthesize(const GridSpec& grid, const FieldModel& field,
                        kernels::Exec exec) {
    grid.validate();
    field.validate(grid);
    const auto axis = grid_axis(grid);
    const Point2 source = grid_center(grid, field.source_index);
    EnergyMatrix out;
    out.mode = field.source_index;
    out.values.resize(grid.n, grid.n);
    kernels::fill_matrix(
        out.values,
        [&](Eigen::Index i, Eigen::Index j) {
            return eval_field(field, {axis[static_cast<std::size_t>(i)],
                                      axis[static_cast<std::size_t>(j)]},
                              source);
        },
        exec);
    return out;
}

double query(const EnergyMatrix& energy, GridIndex idx, const NoiseModel& noise,
             RandomStream& rng) {
    noise.validate();
    const int n = energy.n();
    if (idx.i < 1 || idx.i > n || idx.j < 1 || idx.j > n)
        throw std::out_of_range("query: index (" + std::to_string(idx.i) + "," +
                                std::to_string(idx.j) + ") out of range");
    const double value = energy.at(idx);
    return noise.sigma_n == 0.0 ? value : value + rng.normal(0.0, noise.sigma_n);
}

namespace {

// Valid peak positions of the sequence s[0..len): [lo, hi] (1-based), where
// lo is the earliest start of a non-increasing suffix and hi the length of
// the non-decreasing prefix. Empty when lo > hi.
template <typename Seq>
std::pair<int, int> peak_interval(const Seq& s, int len) {
    int hi = 1;
    while (hi < len && s(hi - 1) <= s(hi)) ++hi;
    int lo = len;
    while (lo > 1 && s(lo - 2) >= s(lo - 1)) --lo;
    return {lo, hi};
}

} // namespace

UnimodalCheck verify_unimodal(const Matrix& m) {
    const int rows = static_cast<int>(m.rows());
    const int cols = static_cast<int>(m.cols());
    if (rows == 0 || cols == 0) return {false, {0, 0}};

    // mode row must suit every column, mode column every row
    int i_lo = 1, i_hi = rows;
    for (int j = 0; j < cols; ++j) {
        auto col = [&](int k) { return m(k, j); };
        const auto [lo, hi] = peak_interval(col, rows);
        i_lo = std::max(i_lo, lo);
        i_hi = std::min(i_hi, hi);
    }
    int j_lo = 1, j_hi = cols;
    for (int i = 0; i < rows; ++i) {
        auto row = [&](int k) { return m(i, k); };
        const auto [lo, hi] = peak_interval(row, cols);
        j_lo = std::max(j_lo, lo);
        j_hi = std::min(j_hi, hi);
    }
    if (i_lo > i_hi || j_lo > j_hi) return {false, {0, 0}};
    return {true, {i_lo, j_lo}};
}

} // namespace ubad
