#include "chaos/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "chaos/errors.hpp"

namespace chaos {

std::size_t ipow(int n, int k) {
    std::size_t out = 1;
    for (int i = 0; i < k; ++i) {
        if (out > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(n)) {
            throw ValidationError("tensor size overflows");
        }
        out *= static_cast<std::size_t>(n);
    }
    return out;
}

std::size_t CoeffTensor::entries() const { return ipow(extent, order); }

bool CoeffTensor::is_zero() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

CoeffTensor zeros(int order, int extent, const ValueSpace& space) {
    CoeffTensor t;
    t.order = order;
    t.extent = extent;
    t.value_dim = space.dim();
    t.space = space;
    t.values.assign(ipow(extent, order) * static_cast<std::size_t>(t.value_dim), 0.0);
    return t;
}

void validate(const CoeffTensor& tensor) {
    if (tensor.order < 1) throw ValidationError("d ≥ 1 required");
    if (tensor.extent < 1) throw ValidationError("n ≥ 1 required");
    if (tensor.value_dim < 1) throw ValidationError("m ≥ 1 required");
    const std::size_t expected = ipow(tensor.extent, tensor.order) * static_cast<std::size_t>(tensor.value_dim);
    if (tensor.values.size() != expected) {
        throw ValidationError("values length " + std::to_string(tensor.values.size()) + " ≠ " +
                              std::to_string(expected));
    }
    if (tensor.space.dim() != tensor.value_dim) {
        throw ValidationError("space dimension " + std::to_string(tensor.space.dim()) + " ≠ m = " +
                              std::to_string(tensor.value_dim));
    }
    for (double v : tensor.values) {
        if (!std::isfinite(v)) throw ValidationError("tensor values must be finite");
    }
}

namespace {

// Shape check shared by the internal operations, which also accept order 0.
void check_shape(const CoeffTensor& t) {
    if (t.order < 0 || t.extent < 1 || t.value_dim < 1 ||
        t.values.size() != ipow(t.extent, t.order) * static_cast<std::size_t>(t.value_dim)) {
        throw ValidationError("malformed tensor shape");
    }
}

}  // namespace

std::vector<int> unflatten(std::size_t flat, int order, int extent) {
    std::vector<int> idx(order);
    for (int k = order - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(flat % extent);
        flat /= extent;
    }
    return idx;
}

std::size_t flatten(std::span<const int> index, int extent) {
    std::size_t flat = 0;
    for (int i : index) flat = flat * extent + static_cast<std::size_t>(i);
    return flat;
}

void validate_assignment(const BlockAssignment& assignment, int order) {
    std::vector<bool> used(order, false);
    for (const auto& block : assignment) {
        if (block.axes.empty()) throw ValidationError("empty block in assignment");
        for (int axis : block.axes) {
            if (axis < 0 || axis >= order) {
                throw ValidationError("block axis " + std::to_string(axis + 1) + " outside [d]");
            }
            if (used[axis]) throw ValidationError("blocks must be pairwise disjoint");
            used[axis] = true;
        }
    }
}

CoeffTensor slice_fix(const CoeffTensor& tensor, std::span<const int> axes, std::span<const int> index) {
    check_shape(tensor);
    if (axes.size() != index.size()) throw ValidationError("slice axes and indices differ in length");
    std::vector<int> fixed(tensor.order, -1);
    for (std::size_t k = 0; k < axes.size(); ++k) {
        const int axis = axes[k];
        if (axis < 0 || axis >= tensor.order) throw ValidationError("slice axis outside [d]");
        if (fixed[axis] != -1) throw ValidationError("slice axis repeated");
        if (index[k] < 0 || index[k] >= tensor.extent) {
            throw ValidationError("index " + std::to_string(index[k] + 1) + " out of range [1, " +
                                  std::to_string(tensor.extent) + "]");
        }
        fixed[axis] = index[k];
    }
    const int out_order = tensor.order - static_cast<int>(axes.size());
    CoeffTensor out = zeros(out_order, tensor.extent, tensor.space);
    const std::size_t count = out.entries();
    std::vector<int> full(tensor.order);
    for (std::size_t f = 0; f < count; ++f) {
        const auto free_idx = unflatten(f, out_order, tensor.extent);
        for (int k = 0, r = 0; k < tensor.order; ++k) full[k] = fixed[k] >= 0 ? fixed[k] : free_idx[r++];
        const auto src = tensor.at(flatten(full, tensor.extent));
        std::copy(src.begin(), src.end(), out.at(f).begin());
    }
    return out;
}

CoeffTensor contract(const CoeffTensor& tensor, const BlockAssignment& assignment,
                     std::span<const std::vector<double>> arrays) {
    check_shape(tensor);
    validate_assignment(assignment, tensor.order);
    if (arrays.size() != assignment.size()) throw ValidationError("one array per block required");
    std::vector<bool> bound(tensor.order, false);
    for (std::size_t b = 0; b < assignment.size(); ++b) {
        const std::size_t need = ipow(tensor.extent, static_cast<int>(assignment[b].axes.size()));
        if (arrays[b].size() != need) {
            throw ValidationError("block " + std::to_string(b + 1) + " expects an array of length " +
                                  std::to_string(need) + ", got " + std::to_string(arrays[b].size()));
        }
        for (int axis : assignment[b].axes) bound[axis] = true;
    }
    std::vector<int> free_axes;
    for (int k = 0; k < tensor.order; ++k) {
        if (!bound[k]) free_axes.push_back(k);
    }

    CoeffTensor out = zeros(static_cast<int>(free_axes.size()), tensor.extent, tensor.space);
    const std::size_t count = tensor.entries();
    const int m = tensor.value_dim;
    std::vector<int> sub;
    for (std::size_t f = 0; f < count; ++f) {
        const auto idx = unflatten(f, tensor.order, tensor.extent);
        double factor = 1.0;
        for (std::size_t b = 0; b < assignment.size() && factor != 0.0; ++b) {
            sub.clear();
            for (int axis : assignment[b].axes) sub.push_back(idx[axis]);
            factor *= arrays[b][flatten(sub, tensor.extent)];
        }
        if (factor == 0.0) continue;
        sub.clear();
        for (int axis : free_axes) sub.push_back(idx[axis]);
        auto dst = out.at(flatten(sub, tensor.extent));
        const auto src = tensor.at(f);
        for (int j = 0; j < m; ++j) dst[j] += factor * src[j];
    }
    return out;
}

CoeffTensor mask_offdiagonal(const CoeffTensor& tensor) {
    check_shape(tensor);
    CoeffTensor out = tensor;
    const std::size_t count = tensor.entries();
    for (std::size_t f = 0; f < count; ++f) {
        auto idx = unflatten(f, tensor.order, tensor.extent);
        std::sort(idx.begin(), idx.end());
        if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
            auto dst = out.at(f);
            std::fill(dst.begin(), dst.end(), 0.0);
        }
    }
    return out;
}

CoeffTensor permute_axes(const CoeffTensor& tensor, std::span<const int> perm) {
    check_shape(tensor);
    if (static_cast<int>(perm.size()) != tensor.order) throw ValidationError("permutation length ≠ d");
    std::vector<int> sorted(perm.begin(), perm.end());
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < tensor.order; ++k) {
        if (sorted[k] != k) throw ValidationError("not a permutation of [d]");
    }
    CoeffTensor out = zeros(tensor.order, tensor.extent, tensor.space);
    const std::size_t count = tensor.entries();
    std::vector<int> src_idx(tensor.order);
    for (std::size_t f = 0; f < count; ++f) {
        const auto idx = unflatten(f, tensor.order, tensor.extent);
        for (int k = 0; k < tensor.order; ++k) src_idx[perm[k]] = idx[k];
        const auto src = tensor.at(flatten(src_idx, tensor.extent));
        std::copy(src.begin(), src.end(), out.at(f).begin());
    }
    return out;
}

CoeffTensor symmetrize(const CoeffTensor& tensor) {
    check_shape(tensor);
    std::vector<int> perm(tensor.order);
    std::iota(perm.begin(), perm.end(), 0);
    CoeffTensor acc = zeros(tensor.order, tensor.extent, tensor.space);
    std::size_t perms = 0;
    do {
        const CoeffTensor p = permute_axes(tensor, perm);
        for (std::size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += p.values[i];
        ++perms;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (double& v : acc.values) v /= static_cast<double>(perms);
    return acc;
}

bool is_symmetric(const CoeffTensor& tensor, double tol) {
    check_shape(tensor);
    std::vector<int> perm(tensor.order);
    std::iota(perm.begin(), perm.end(), 0);
    while (std::next_permutation(perm.begin(), perm.end())) {
        const CoeffTensor p = permute_axes(tensor, perm);
        for (std::size_t i = 0; i < p.values.size(); ++i) {
            if (std::abs(p.values[i] - tensor.values[i]) > tol) return false;
        }
    }
    return true;
}

CoeffTensor scaled(const CoeffTensor& tensor, double factor) {
    CoeffTensor out = tensor;
    for (double& v : out.values) v *= factor;
    return out;
}

CoeffTensor combine(double alpha, const CoeffTensor& a, double beta, const CoeffTensor& b) {
    if (a.order != b.order || a.extent != b.extent || a.value_dim != b.value_dim || !(a.space == b.space)) {
        throw ValidationError("combine requires tensors of identical shape and space");
    }
    CoeffTensor out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = alpha * a.values[i] + beta * b.values[i];
    return out;
}

double frobenius(const CoeffTensor& tensor) {
    double acc = 0.0;
    for (double v : tensor.values) acc += v * v;
    return std::sqrt(acc);
}

}  // namespace chaos
