#pragma once

#include <span>
#include <vector>

namespace chaos {

/// How the norm of a value in R^m is evaluated.
///
/// `lq` is a weighted l_q norm (a discretized L_q(X, mu) with quadrature
/// weights); `finite_sup` is sup_{t in T} <t, v> over a finite symmetric set T.
class ValueSpace {
public:
    enum class Kind { lq, finite_sup };

    static ValueSpace lq(double q, std::vector<double> weights);
    static ValueSpace lq_unit(double q, int m) { return lq(q, std::vector<double>(m, 1.0)); }
    static ValueSpace finite_sup(std::vector<std::vector<double>> points);

    Kind kind() const { return kind_; }
    bool is_lq() const { return kind_ == Kind::lq; }
    int dim() const { return dim_; }
    double q() const { return q_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<std::vector<double>>& points() const { return points_; }

    double norm(std::span<const double> v) const;

    /// A subgradient of the norm at v, written to `out` (length m).
    /// Zero at v = 0. For finite_sup ties resolve to the first maximizing point.
    void subgradient(std::span<const double> v, std::span<double> out) const;

    bool operator==(const ValueSpace&) const = default;

private:
    Kind kind_ = Kind::lq;
    int dim_ = 0;
    double q_ = 2.0;
    std::vector<double> weights_;
    std::vector<std::vector<double>> points_;
};

double norm_value(const ValueSpace& space, std::span<const double> v);

/// Constant K in E||sum b_ij g_ij|| <= K E||sum b_ij g_i g'_j|| for L_q spaces,
/// K = c * sqrt(q). The absolute constant c is a calibration knob (default 1).
double type2_K(const ValueSpace& space, double calibration = 1.0);

}  // namespace chaos
