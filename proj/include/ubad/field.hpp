#ifndef UBAD_FIELD_HPP
#define UBAD_FIELD_HPP

#include <vector>

#include "ubad/kernels.hpp"
#include "ubad/rng.hpp"
#include "ubad/types.hpp"

namespace ubad {

/// Square target area [-L/2, L/2]^2 discretized into n x n cells.
struct GridSpec {
    double side_length = 1.0; // L, physical units
    int n = 1;                // cells per side

    void validate() const; // throws std::invalid_argument on L <= 0 or n < 1

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class FieldKind { Gaussian, Laplacian };

/// Energy emitted by a point source: Gaussian kind decays with the squared
/// Euclidean distance (spread = variance), Laplacian with the L1 distance
/// (spread = scale).
struct FieldModel {
    FieldKind kind = FieldKind::Gaussian;
    double spread = 1.0;    // sigma^2 (Gaussian) or lambda (Laplacian)
    double amplitude = 1.0; // C
    GridIndex source_index{1, 1};

    void validate(const GridSpec& grid) const;
};

/// True noiseless energies over the grid, together with the mode cell.
struct EnergyMatrix {
    Matrix values; // n x n
    GridIndex mode{1, 1};

    int n() const { return static_cast<int>(values.rows()); }
    double at(GridIndex idx) const { return values(idx.i - 1, idx.j - 1); }
};

struct NoiseModel {
    double sigma_n = 0.0; // measurement noise stddev, energy units

    void validate() const;
};

struct UnimodalCheck {
    bool is_unimodal = false;
    GridIndex mode{0, 0}; // lexicographically smallest valid mode when unimodal
};

/// Shared 1-D cell-center coordinates: axis[k] = -L/2 + L(2(k+1)-1)/(2n).
std::vector<double> grid_axis(const GridSpec& grid);

/// Center of one cell (1-based index).
Point2 grid_center(const GridSpec& grid, GridIndex idx);

/// All n^2 centers in lexicographic (i, j) order.
std::vector<Point2> grid_centers(const GridSpec& grid);

/// Nearest grid index for a physical point; ties resolve toward the smaller
/// index. Points outside the area clamp to the boundary cells.
GridIndex snap_to_grid(const GridSpec& grid, Point2 p);

double eval_field(const FieldModel& field, Point2 x, Point2 source);

/// H(i, j) = eval_field at cell (i, j) with the source at its own cell
/// center. Throws if the source index is out of range.
EnergyMatrix synthesize(const GridSpec& grid, const FieldModel& field,
                        kernels::Exec exec = kernels::Exec::Auto);

/// One noisy measurement of cell idx: H_ij + sigma_n * z, fresh z per call.
double query(const EnergyMatrix& energy, GridIndex idx, const NoiseModel& noise,
             RandomStream& rng);

/// Checks Definition-style unimodality: each column rises to the mode row and
/// falls after, each row rises to the mode column and falls after.
UnimodalCheck verify_unimodal(const Matrix& m);

} // namespace ubad

#endif // UBAD_FIELD_HPP
