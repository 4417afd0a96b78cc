#include "chaos/multilinear.hpp"

#include <algorithm>
#include <cmath>

#include "chaos/errors.hpp"

namespace chaos {

MultilinearPlan::MultilinearPlan(int order, int extent, int value_dim, std::vector<IndexSet> blocks, IndexSet outer)
    : m_(value_dim), entries_(ipow(extent, order)), rows_(ipow(extent, static_cast<int>(outer.size()))),
      blocks_(std::move(blocks)) {
    const std::size_t K = blocks_.size();
    for (const auto& b : blocks_) block_len_.push_back(ipow(extent, static_cast<int>(b.size())));
    sub_.resize(entries_ * K);
    row_.resize(entries_);
    for (std::size_t f = 0; f < entries_; ++f) {
        const auto idx = unflatten(f, order, extent);
        for (std::size_t k = 0; k < K; ++k) {
            std::size_t s = 0;
            for (int axis : blocks_[k]) s = s * extent + idx[axis];
            sub_[f * K + k] = static_cast<std::uint32_t>(s);
        }
        std::size_t r = 0;
        for (int axis : outer) r = r * extent + idx[axis];
        row_[f] = static_cast<std::uint32_t>(r);
    }
}

void MultilinearPlan::apply(std::span<const double> values, std::span<const double* const> factors,
                            std::span<double> y) const {
    const std::size_t K = blocks_.size();
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t f = 0; f < entries_; ++f) {
        double prod = 1.0;
        const std::uint32_t* sub = sub_.data() + f * K;
        for (std::size_t k = 0; k < K; ++k) prod *= factors[k][sub[k]];
        if (prod == 0.0) continue;
        const double* a = values.data() + f * m_;
        double* out = y.data() + static_cast<std::size_t>(row_[f]) * m_;
        for (int j = 0; j < m_; ++j) out[j] += prod * a[j];
    }
}

void MultilinearPlan::accumulate_gradient(std::span<const double> values, std::span<const double* const> factors,
                                          std::size_t r, std::span<const double> psi, std::span<double> g) const {
    const std::size_t K = blocks_.size();
    for (std::size_t f = 0; f < entries_; ++f) {
        const double* a = values.data() + f * m_;
        const double* dual = psi.data() + static_cast<std::size_t>(row_[f]) * m_;
        double c = 0.0;
        for (int j = 0; j < m_; ++j) c += dual[j] * a[j];
        if (c == 0.0) continue;
        const std::uint32_t* sub = sub_.data() + f * K;
        for (std::size_t k = 0; k < K; ++k) {
            if (k != r) c *= factors[k][sub[k]];
        }
        g[sub[r]] += c;
    }
}

Functional Functional::space_norm(const ValueSpace& space) {
    Functional f;
    f.kind_ = Kind::space_norm;
    f.space_ = space;
    return f;
}

Functional Functional::lq_of_l2(double q, std::vector<double> weights) {
    if (!(q >= 1.0)) throw ValidationError("q >= 1 required");
    Functional f;
    f.kind_ = Kind::lq_of_l2;
    f.q_ = q;
    f.weights_ = std::move(weights);
    return f;
}

namespace {

// Column l2 norms s_j = sqrt(sum_r y[r][j]^2).
std::vector<double> column_norms(std::span<const double> y, std::size_t rows, std::size_t m) {
    std::vector<double> s(m, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < m; ++j) s[j] += y[r * m + j] * y[r * m + j];
    }
    for (double& v : s) v = std::sqrt(v);
    return s;
}

double weighted_lq(const std::vector<double>& s, const std::vector<double>& w, double q) {
    double scale = 0.0;
    for (double v : s) scale = std::max(scale, v);
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) acc += w[j] * std::pow(s[j] / scale, q);
    return scale * std::pow(acc, 1.0 / q);
}

}  // namespace

double Functional::value(std::span<const double> y, std::size_t rows) const {
    if (kind_ == Kind::space_norm) return space_.norm(y);
    return weighted_lq(column_norms(y, rows, weights_.size()), weights_, q_);
}

double Functional::value_and_dual(std::span<const double> y, std::size_t rows, std::span<double> psi) const {
    if (kind_ == Kind::space_norm) {
        space_.subgradient(y, psi);
        return space_.norm(y);
    }
    const std::size_t m = weights_.size();
    const auto s = column_norms(y, rows, m);
    const double total = weighted_lq(s, weights_, q_);
    std::fill(psi.begin(), psi.end(), 0.0);
    if (total == 0.0) return 0.0;
    // d/dy[r][j] = w_j (s_j / total)^{q-1} * y[r][j] / s_j
    for (std::size_t j = 0; j < m; ++j) {
        if (s[j] == 0.0) continue;
        const double coef = weights_[j] * std::pow(s[j] / total, q_ - 1.0) / s[j];
        for (std::size_t r = 0; r < rows; ++r) psi[r * m + j] = coef * y[r * m + j];
    }
    return total;
}

}  // namespace chaos
