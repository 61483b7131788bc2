#include "tunelab/space.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace tunelab {

ValueGrid::ValueGrid(Eigen::ArrayXd values) : values_(std::move(values)) {
    if (values_.size() < 2) throw std::invalid_argument("value grid needs at least 2 values");
    for (Eigen::Index k = 0; k + 1 < values_.size(); ++k) {
        if (!(values_(k) < values_(k + 1)))
            throw std::invalid_argument("value grid must be strictly increasing");
    }
}

ValueGrid ValueGrid::linear(double lower, double upper, int count) {
    if (count < 2) throw std::invalid_argument("linear grid needs count >= 2");
    if (!(lower < upper)) throw std::invalid_argument("linear grid needs lower < upper");
    Eigen::ArrayXd values(count);
    const double span = upper - lower;
    for (int k = 0; k < count; ++k)
        values(k) = lower + (static_cast<double>(k) * span) / static_cast<double>(count - 1);
    values(0) = lower;
    values(count - 1) = upper;
    return ValueGrid(std::move(values));
}

ValueGrid ValueGrid::from_values(Eigen::ArrayXd values) { return ValueGrid(std::move(values)); }

DiscreteSpace::DiscreteSpace(std::vector<ValueGrid> grids) : grids_(std::move(grids)) {
    if (grids_.empty()) throw std::invalid_argument("space needs at least one variable");
}

std::uint64_t cardinality(const DiscreteSpace& space) {
    std::uint64_t product = 1;
    for (const ValueGrid& g : space.grids()) {
        const auto m = static_cast<std::uint64_t>(g.count());
        if (product > std::numeric_limits<std::uint64_t>::max() / m)
            throw std::overflow_error("space cardinality exceeds 64 bits");
        product *= m;
    }
    return product;
}

void snap_into(const Genotype& g, const DiscreteSpace& space, IndexVector& out) {
    const int n = space.n_vars();
    out.resize(n);
    for (int j = 0; j < n; ++j) {
        const int top = space.grid(j).count() - 1;
        double r = std::floor(g(j) + 0.5);  // round half up, ties away from lower values
        if (r < 0.0) r = 0.0;
        if (r > static_cast<double>(top)) r = static_cast<double>(top);
        out(j) = static_cast<int>(r);
    }
}

IndexVector snap(const Genotype& g, const DiscreteSpace& space) {
    IndexVector out;
    snap_into(g, space, out);
    return out;
}

void decode_into(const IndexVector& iv, const DiscreteSpace& space, Eigen::ArrayXd& out) {
    const int n = space.n_vars();
    out.resize(n);
    for (int j = 0; j < n; ++j) out(j) = space.grid(j).value(iv(j));
}

Eigen::ArrayXd decode(const IndexVector& iv, const DiscreteSpace& space) {
    Eigen::ArrayXd out;
    decode_into(iv, space, out);
    return out;
}

Genotype embed(const IndexVector& iv) { return iv.cast<double>(); }

Genotype random_genotype(const DiscreteSpace& space, Xoshiro256& rng) {
    Genotype g(space.n_vars());
    for (int j = 0; j < space.n_vars(); ++j)
        g(j) = rng.uniform(0.0, static_cast<double>(space.grid(j).count() - 1));
    return g;
}

std::uint64_t linear_index(const IndexVector& iv, const DiscreteSpace& space) {
    cardinality(space);  // representability guard
    std::uint64_t rank = 0;
    for (int j = 0; j < space.n_vars(); ++j) {
        const int m = space.grid(j).count();
        const int idx = iv(j);
        if (idx < 0 || idx >= m)
            throw std::invalid_argument("index " + std::to_string(idx) + " out of range for variable " +
                                        std::to_string(j + 1));
        rank = rank * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(idx);
    }
    return rank;
}

IndexVector index_from_linear(std::uint64_t rank, const DiscreteSpace& space) {
    IndexVector iv(space.n_vars());
    for (int j = space.n_vars() - 1; j >= 0; --j) {
        const auto m = static_cast<std::uint64_t>(space.grid(j).count());
        iv(j) = static_cast<int>(rank % m);
        rank /= m;
    }
    if (rank != 0) throw std::invalid_argument("linear index out of range");
    return iv;
}

bool next_index(IndexVector& iv, const DiscreteSpace& space) {
    for (int j = space.n_vars() - 1; j >= 0; --j) {
        if (iv(j) + 1 < space.grid(j).count()) {
            ++iv(j);
            return true;
        }
        iv(j) = 0;
    }
    return false;
}

}  // namespace tunelab
