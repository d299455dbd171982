#ifndef UBAD_SAMPLING_HPP
#define UBAD_SAMPLING_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ubad/kernels.hpp"
#include "ubad/rng.hpp"
#include "ubad/types.hpp"

namespace ubad {

struct Observation {
    GridIndex index;
    double value = 0.0;
};

/// The growing sample set Omega with its queried values. Membership is
/// tracked by the index set; values are whatever the queries returned
/// (arbitrarily close to zero is fine). Single writer; concurrent readers
/// may share a const reference.
class ObservationSet {
public:
    explicit ObservationSet(int n);

    int grid_size() const { return n_; }
    int size() const { return static_cast<int>(entries_.size()); }
    bool full() const { return size() == n_ * n_; }
    bool contains(GridIndex idx) const;

    /// Appends one observation; duplicate indices signal a policy bug and
    /// throw std::invalid_argument.
    void add(GridIndex idx, double value);

    double value_at(GridIndex idx) const; // throws if absent

    /// Insertion order.
    const std::vector<Observation>& entries() const { return entries_; }

    /// Unobserved indices in lexicographic (i, j) order.
    std::vector<GridIndex> complement() const;

    /// Y_Omega: observed values in place, zero elsewhere.
    Matrix masked_matrix() const;

    /// Row-major observed flags (0-based), usable as a kernel skip mask.
    const std::vector<std::uint8_t>& mask() const { return mask_; }

    /// Per-row / per-column observation lists (0-based) for the solvers.
    const kernels::AxisObservations& row_observations() const { return rows_; }
    const kernels::AxisObservations& col_observations() const { return cols_; }

    /// CSV rows "i,j,value" in insertion order, after a header line.
    void write_csv(std::ostream& out) const;

private:
    int n_;
    std::vector<Observation> entries_;
    std::vector<std::uint8_t> mask_;
    kernels::AxisObservations rows_;
    kernels::AxisObservations cols_;
};

/// Initial design: one sample per row and per column, {(i, pi(i))} for a
/// uniformly random permutation pi drawn from the stream (Fisher-Yates).
/// Returned in row order; values are filled in by the caller's queries.
std::vector<GridIndex> latin_init(int n, RandomStream& rng);

} // namespace ubad

#endif // UBAD_SAMPLING_HPP
