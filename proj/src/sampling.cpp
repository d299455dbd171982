#include "ubad/sampling.hpp"

#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "ubad/io.hpp"

namespace ubad {

ObservationSet::ObservationSet(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("ObservationSet: n must be >= 1");
    mask_.assign(static_cast<std::size_t>(n) * n, 0);
    rows_.resize(static_cast<std::size_t>(n));
    cols_.resize(static_cast<std::size_t>(n));
}

bool ObservationSet::contains(GridIndex idx) const {
    if (idx.i < 1 || idx.i > n_ || idx.j < 1 || idx.j > n_)
        throw std::out_of_range("ObservationSet: index out of range");
    return mask_[static_cast<std::size_t>(idx.i - 1) * n_ + (idx.j - 1)] != 0;
}

void ObservationSet::add(GridIndex idx, double value) {
    if (contains(idx))
        throw std::invalid_argument("ObservationSet: duplicate index (" +
                                    std::to_string(idx.i) + "," + std::to_string(idx.j) +
                                    ")");
    mask_[static_cast<std::size_t>(idx.i - 1) * n_ + (idx.j - 1)] = 1;
    entries_.push_back({idx, value});
    rows_[static_cast<std::size_t>(idx.i - 1)].emplace_back(idx.j - 1, value);
    cols_[static_cast<std::size_t>(idx.j - 1)].emplace_back(idx.i - 1, value);
}

double ObservationSet::value_at(GridIndex idx) const {
    if (!contains(idx)) throw std::out_of_range("ObservationSet: index not observed");
    for (const auto& [other, value] : rows_[static_cast<std::size_t>(idx.i - 1)])
        if (other == idx.j - 1) return value;
    throw std::logic_error("ObservationSet: inconsistent state");
}

std::vector<GridIndex> ObservationSet::complement() const {
    std::vector<GridIndex> out;
    out.reserve(static_cast<std::size_t>(n_) * n_ - entries_.size());
    for (int i = 1; i <= n_; ++i)
        for (int j = 1; j <= n_; ++j)
            if (!mask_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)])
                out.push_back({i, j});
    return out;
}

Matrix ObservationSet::masked_matrix() const {
    Matrix m = Matrix::Zero(n_, n_);
    for (const auto& [idx, value] : entries_) m(idx.i - 1, idx.j - 1) = value;
    return m;
}

void ObservationSet::write_csv(std::ostream& out) const {
    out << "i,j,value\n";
    for (const auto& [idx, value] : entries_) {
        out << idx.i << ',' << idx.j << ',' << fmt_double(value) << '\n';
    }
}

std::vector<GridIndex> latin_init(int n, RandomStream& rng) {
    if (n < 1) throw std::invalid_argument("latin_init: n must be >= 1");
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) perm[static_cast<std::size_t>(k)] = k;
    for (int k = n - 1; k > 0; --k) {
        const auto r = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(k) + 1));
        std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(r)]);
    }
    std::vector<GridIndex> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = {i + 1, perm[static_cast<std::size_t>(i)] + 1};
    return out;
}

} // namespace ubad
