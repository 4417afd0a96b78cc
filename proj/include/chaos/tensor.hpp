#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chaos/value_space.hpp"

namespace chaos {

/// d-indexed array a_{i_1..i_d}, i_k in [n], with values in R^m.
///
/// Storage is dense row-major with the value axis innermost: the entry for
/// 0-based multi-index (i_1, ..., i_d) starts at
/// ((i_1 * n + i_2) * n + ... + i_d) * m. Order 0 is used for fully fixed
/// slices and holds a single R^m value.
struct CoeffTensor {
    int order = 1;
    int extent = 1;
    int value_dim = 1;
    std::vector<double> values;
    ValueSpace space;

    std::size_t entries() const;  // n^d
    std::span<const double> at(std::size_t flat) const {
        return {values.data() + flat * value_dim, static_cast<std::size_t>(value_dim)};
    }
    std::span<double> at(std::size_t flat) {
        return {values.data() + flat * value_dim, static_cast<std::size_t>(value_dim)};
    }
    bool is_zero() const;
};

/// Zero tensor of the given shape.
CoeffTensor zeros(int order, int extent, const ValueSpace& space);

/// Throws ValidationError naming the first violated shape invariant.
void validate(const CoeffTensor& tensor);

/// n^k with overflow guard.
std::size_t ipow(int n, int k);

/// 0-based multi-index of a flat (value-free) position.
std::vector<int> unflatten(std::size_t flat, int order, int extent);
std::size_t flatten(std::span<const int> index, int extent);

enum class BlockRole { deterministic, gaussian };

/// A set of tensor axes (0-based, sorted) that share one weight array
/// indexed jointly by i_{axes}.
struct Block {
    std::vector<int> axes;
    BlockRole role = BlockRole::deterministic;
};
using BlockAssignment = std::vector<Block>;

/// Blocks pairwise disjoint, nonempty and inside [0, order).
void validate_assignment(const BlockAssignment& assignment, int order);

/// Entry-wise slice with the axes in `axes` fixed to `index` (same order).
/// The remaining axes keep their relative order.
CoeffTensor slice_fix(const CoeffTensor& tensor, std::span<const int> axes,
                      std::span<const int> index);

/// Sums the tensor against one array per block; arrays[k] has length
/// n^{|assignment[k].axes|} and is indexed row-major by the block's axes.
/// The result is indexed by the axes outside every block.
CoeffTensor contract(const CoeffTensor& tensor, const BlockAssignment& assignment,
                     std::span<const std::vector<double>> arrays);

/// Zeroes every entry whose multi-index has a repeated coordinate.
CoeffTensor mask_offdiagonal(const CoeffTensor& tensor);

/// Average over all d! axis permutations.
CoeffTensor symmetrize(const CoeffTensor& tensor);

/// Result axis k is input axis perm[k].
CoeffTensor permute_axes(const CoeffTensor& tensor, std::span<const int> perm);

bool is_symmetric(const CoeffTensor& tensor, double tol = 0.0);

CoeffTensor scaled(const CoeffTensor& tensor, double factor);

/// alpha * a + beta * b for tensors of identical shape and space.
CoeffTensor combine(double alpha, const CoeffTensor& a, double beta, const CoeffTensor& b);

/// sqrt(sum_i ||a_i||_2^2) over all entries and value coordinates.
double frobenius(const CoeffTensor& tensor);

}  // namespace chaos
