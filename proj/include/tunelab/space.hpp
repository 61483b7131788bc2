#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "tunelab/rng.hpp"

namespace tunelab {

/// Continuous point in index space, one coordinate per variable.
/// Optimizers move these; coordinate j lives (loosely) in [0, count_j - 1].
using Genotype = Eigen::ArrayXd;

/// Concrete discrete solution: per-variable positions into the value grids.
using IndexVector = Eigen::ArrayXi;

/// Ordered candidate values of a single variable.
class ValueGrid {
public:
    /// count evenly spaced values over [lower, upper], endpoints exact.
    static ValueGrid linear(double lower, double upper, int count);

    /// Explicit strictly increasing value list.
    static ValueGrid from_values(Eigen::ArrayXd values);

    int count() const noexcept { return static_cast<int>(values_.size()); }
    double lower() const noexcept { return values_(0); }
    double upper() const noexcept { return values_(values_.size() - 1); }
    double value(int idx) const { return values_(idx); }
    const Eigen::ArrayXd& values() const noexcept { return values_; }

private:
    explicit ValueGrid(Eigen::ArrayXd values);

    Eigen::ArrayXd values_;
};

/// Cartesian product of per-variable value grids.
class DiscreteSpace {
public:
    explicit DiscreteSpace(std::vector<ValueGrid> grids);

    int n_vars() const noexcept { return static_cast<int>(grids_.size()); }
    const ValueGrid& grid(int j) const { return grids_[static_cast<std::size_t>(j)]; }
    const std::vector<ValueGrid>& grids() const noexcept { return grids_; }

private:
    std::vector<ValueGrid> grids_;
};

/// Number of distinct index vectors. Throws std::overflow_error when the
/// product does not fit in 64 bits.
std::uint64_t cardinality(const DiscreteSpace& space);

/// Nearest valid index vector: per coordinate, round half up then clamp to
/// [0, count_j - 1]. Total for every finite genotype.
IndexVector snap(const Genotype& g, const DiscreteSpace& space);

/// snap() into a caller-owned buffer; no allocation when sized already.
void snap_into(const Genotype& g, const DiscreteSpace& space, IndexVector& out);

/// Grid values addressed by an index vector.
Eigen::ArrayXd decode(const IndexVector& iv, const DiscreteSpace& space);

/// decode() into a caller-owned buffer.
void decode_into(const IndexVector& iv, const DiscreteSpace& space, Eigen::ArrayXd& out);

/// Index vector viewed as a genotype. snap(embed(iv)) == iv.
Genotype embed(const IndexVector& iv);

/// Genotype with coordinate j uniform over the continuous [0, count_j - 1].
Genotype random_genotype(const DiscreteSpace& space, Xoshiro256& rng);

/// Row-major rank of an index vector (last variable varies fastest).
/// Requires a 64-bit representable cardinality and in-range indices.
std::uint64_t linear_index(const IndexVector& iv, const DiscreteSpace& space);

/// Inverse of linear_index().
IndexVector index_from_linear(std::uint64_t rank, const DiscreteSpace& space);

/// Lexicographic odometer step. Returns false once iv was the last vector
/// (iv is then reset to all zeros).
bool next_index(IndexVector& iv, const DiscreteSpace& space);

}  // namespace tunelab
