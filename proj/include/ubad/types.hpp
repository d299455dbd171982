#ifndef UBAD_TYPES_HPP
#define UBAD_TYPES_HPP

#include <Eigen/Dense>

namespace ubad {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A grid cell index. Indices are 1-based everywhere in the public API
/// (CSV output, configs, return values); conversion to 0-based storage
/// happens at the edges.
struct GridIndex {
    int i = 1;
    int j = 1;

    friend bool operator==(const GridIndex&, const GridIndex&) = default;

    // lexicographic (i, then j)
    friend bool operator<(const GridIndex& a, const GridIndex& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    }
};

/// A point in the physical plane.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

} // namespace ubad

#endif // UBAD_TYPES_HPP
