#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chaos/partitions.hpp"
#include "chaos/tensor.hpp"

namespace chaos {

/// Index bookkeeping for y[r] = sum_f a_f * prod_k x_k[i_{B_k}(f)], where
/// the factor blocks B_k may overlap and r = i_{outer}(f).
///
/// Built once per (shape, blocks, outer) and reused for every evaluation in
/// an optimization run.
class MultilinearPlan {
public:
    MultilinearPlan(int order, int extent, int value_dim, std::vector<IndexSet> blocks, IndexSet outer);

    std::size_t rows() const { return rows_; }
    std::size_t block_length(std::size_t k) const { return block_len_[k]; }
    std::size_t block_count() const { return blocks_.size(); }
    int value_dim() const { return m_; }

    /// y has rows() * m entries and is overwritten.
    void apply(std::span<const double> values, std::span<const double* const> factors, std::span<double> y) const;

    /// g (block_length(r)) += sum_f <psi[row(f)], a_f> * prod_{k != r} x_k[...].
    void accumulate_gradient(std::span<const double> values, std::span<const double* const> factors, std::size_t r,
                             std::span<const double> psi, std::span<double> g) const;

private:
    int m_;
    std::size_t entries_;
    std::size_t rows_;
    std::vector<IndexSet> blocks_;
    std::vector<std::size_t> block_len_;
    std::vector<std::uint32_t> sub_;  // entries_ x blocks
    std::vector<std::uint32_t> row_;  // entries_
};

/// Objective applied to the contracted rows y (rows x m).
class Functional {
public:
    /// ||y|| in the tensor's value space; requires a single row.
    static Functional space_norm(const ValueSpace& space);

    /// (sum_j w_j (sum_r y[r][j]^2)^{q/2})^{1/q}: the L_q norm of the
    /// pointwise l_2 norm over rows.
    static Functional lq_of_l2(double q, std::vector<double> weights);

    double value(std::span<const double> y, std::size_t rows) const;

    /// Returns value(y) and writes a subgradient to psi (same shape as y).
    double value_and_dual(std::span<const double> y, std::size_t rows, std::span<double> psi) const;

private:
    enum class Kind { space_norm, lq_of_l2 } kind_ = Kind::space_norm;
    ValueSpace space_;
    double q_ = 2.0;
    std::vector<double> weights_;
};

}  // namespace chaos
