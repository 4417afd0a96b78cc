#include "chaos/value_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chaos/errors.hpp"

namespace chaos {

ValueSpace ValueSpace::lq(double q, std::vector<double> weights) {
    if (!(q >= 1.0) || !std::isfinite(q)) throw ValidationError("lq space requires q >= 1");
    if (weights.empty()) throw ValidationError("lq space requires at least one weight");
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("lq weights must be positive");
    }
    ValueSpace s;
    s.kind_ = Kind::lq;
    s.q_ = q;
    s.dim_ = static_cast<int>(weights.size());
    s.weights_ = std::move(weights);
    return s;
}

ValueSpace ValueSpace::finite_sup(std::vector<std::vector<double>> points) {
    if (points.empty()) throw ValidationError("finite_sup space requires a nonempty T");
    const std::size_t m = points.front().size();
    if (m == 0) throw ValidationError("finite_sup points must have positive dimension");
    for (const auto& t : points) {
        if (t.size() != m) throw ValidationError("finite_sup points must share one dimension");
    }
    for (const auto& t : points) {
        const bool mirrored = std::any_of(points.begin(), points.end(), [&](const auto& s) {
            for (std::size_t j = 0; j < m; ++j) {
                if (s[j] != -t[j]) return false;
            }
            return true;
        });
        if (!mirrored) throw ValidationError("finite_sup set T must be symmetric (t in T => -t in T)");
    }
    ValueSpace s;
    s.kind_ = Kind::finite_sup;
    s.dim_ = static_cast<int>(m);
    s.q_ = 0.0;
    s.points_ = std::move(points);
    return s;
}

namespace {

void check_length(const ValueSpace& s, std::size_t len) {
    if (len != static_cast<std::size_t>(s.dim())) {
        throw ValidationError("value length " + std::to_string(len) + " does not match space dimension " +
                              std::to_string(s.dim()));
    }
}

double dot(const std::vector<double>& t, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) acc += t[j] * v[j];
    return acc;
}

}  // namespace

double ValueSpace::norm(std::span<const double> v) const {
    check_length(*this, v.size());
    if (kind_ == Kind::finite_sup) {
        double best = -INFINITY;
        for (const auto& t : points_) best = std::max(best, dot(t, v));
        return std::max(best, 0.0);
    }
    double acc = 0.0;
    if (q_ == 1.0) {
        for (std::size_t j = 0; j < v.size(); ++j) acc += weights_[j] * std::abs(v[j]);
        return acc;
    }
    // Scale by the largest entry so |v_j|^q cannot overflow.
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0.0;
    if (q_ == 2.0) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            const double r = v[j] / scale;
            acc += weights_[j] * r * r;
        }
        return scale * std::sqrt(acc);
    }
    for (std::size_t j = 0; j < v.size(); ++j) acc += weights_[j] * std::pow(std::abs(v[j]) / scale, q_);
    return scale * std::pow(acc, 1.0 / q_);
}

void ValueSpace::subgradient(std::span<const double> v, std::span<double> out) const {
    check_length(*this, v.size());
    check_length(*this, out.size());
    std::fill(out.begin(), out.end(), 0.0);
    if (kind_ == Kind::finite_sup) {
        std::size_t arg = 0;
        double best = -INFINITY;
        for (std::size_t k = 0; k < points_.size(); ++k) {
            const double value = dot(points_[k], v);
            if (value > best) {
                best = value;
                arg = k;
            }
        }
        if (best <= 0.0) return;
        std::copy(points_[arg].begin(), points_[arg].end(), out.begin());
        return;
    }
    const double nv = norm(v);
    if (nv == 0.0) return;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] == 0.0) continue;
        const double sign = v[j] > 0.0 ? 1.0 : -1.0;
        if (q_ == 1.0) {
            out[j] = weights_[j] * sign;
        } else {
            out[j] = weights_[j] * sign * std::pow(std::abs(v[j]) / nv, q_ - 1.0);
        }
    }
}

double norm_value(const ValueSpace& space, std::span<const double> v) { return space.norm(v); }

double type2_K(const ValueSpace& space, double calibration) {
    if (!space.is_lq()) {
        throw ValidationError("type-2 constant K is unknown for finite_sup spaces; supply K explicitly");
    }
    if (!(calibration > 0.0)) throw ValidationError("calibration constant must be positive");
    return calibration * std::sqrt(space.q());
}

}  // namespace chaos
