#include "chaos/monte_carlo.hpp"

#include <algorithm>
#include <cmath>

#include "chaos/errors.hpp"
#include "chaos/parallel.hpp"

namespace chaos {

void validate(const MCConfig& cfg) {
    if (cfg.samples < 2) throw ValidationError("Monte-Carlo sample count must be >= 2");
    if (cfg.batch < 1) throw ValidationError("batch size must be >= 1");
    if (cfg.p_values.empty()) throw ValidationError("at least one moment order p is required");
    for (double p : cfg.p_values) {
        if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("moment orders must satisfy p >= 1");
    }
    if (!(cfg.z > 0.0)) throw ValidationError("CI width z must be positive");
}

namespace {

// Power sums relative to the batch maximum: s1[k] = sum (r/top)^p_k.
struct PowerSums {
    long long count = 0;
    double top = 0.0;
    std::vector<double> s1, s2;
};

PowerSums merge(const PowerSums& a, const PowerSums& b, const std::vector<double>& ps) {
    PowerSums out;
    out.count = a.count + b.count;
    out.top = std::max(a.top, b.top);
    out.s1.assign(ps.size(), 0.0);
    out.s2.assign(ps.size(), 0.0);
    for (std::size_t k = 0; k < ps.size(); ++k) {
        for (const PowerSums* part : {&a, &b}) {
            if (part->count == 0 || part->top == 0.0) continue;
            const double rel = std::pow(part->top / out.top, ps[k]);
            out.s1[k] += part->s1[k] * rel;
            out.s2[k] += part->s2[k] * rel * rel;
        }
    }
    return out;
}

// Contracts axis 0 of a row-major block of `order` axes against v, repeatedly.
void contract_axes(std::span<const double> values, int order, int n, int m,
                   const std::vector<std::vector<double>>& vectors, std::span<double> out) {
    std::vector<double> cur(values.begin(), values.end()), next;
    std::size_t slab = cur.size() / n;
    for (int k = 0; k < order; ++k) {
        next.assign(slab, 0.0);
        const auto& v = vectors[k];
        for (int i = 0; i < n; ++i) {
            const double c = v[i];
            if (c == 0.0) continue;
            const double* src = cur.data() + i * slab;
            for (std::size_t t = 0; t < slab; ++t) next[t] += c * src[t];
        }
        cur.swap(next);
        slab /= n;
    }
    std::copy(cur.begin(), cur.begin() + m, out.begin());
}

void check_out(const CoeffTensor& tensor, std::span<double> out) {
    if (out.size() != static_cast<std::size_t>(tensor.value_dim)) throw ValidationError("output length ≠ m");
}

}  // namespace

std::vector<MomentEstimate> empirical_moment(const NormSampler& sampler, const MCConfig& cfg, const std::string& tag) {
    validate(cfg);
    const auto& ps = cfg.p_values;
    const long long batches = (cfg.samples + cfg.batch - 1) / cfg.batch;
    std::vector<PowerSums> parts(batches);
    parallel_for(static_cast<std::size_t>(batches), [&](std::size_t b) {
        const long long begin = static_cast<long long>(b) * cfg.batch;
        const long long end = std::min(cfg.samples, begin + cfg.batch);
        Stream rng(cfg.seed, tag, b);
        std::vector<double> draws;
        draws.reserve(end - begin);
        for (long long s = begin; s < end; ++s) {
            const double r = sampler(rng);
            if (!std::isfinite(r) || r < 0.0) throw NumericError("sampler produced an invalid norm value");
            draws.push_back(r);
        }
        PowerSums& part = parts[b];
        part.count = static_cast<long long>(draws.size());
        part.top = draws.empty() ? 0.0 : *std::max_element(draws.begin(), draws.end());
        part.s1.assign(ps.size(), 0.0);
        part.s2.assign(ps.size(), 0.0);
        if (part.top == 0.0) return;
        for (double r : draws) {
            const double rel = r / part.top;
            for (std::size_t k = 0; k < ps.size(); ++k) {
                const double t = std::pow(rel, ps[k]);
                part.s1[k] += t;
                part.s2[k] += t * t;
            }
        }
    });

    // Pairwise tree reduction in batch order.
    while (parts.size() > 1) {
        std::vector<PowerSums> next;
        for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(merge(parts[i], parts[i + 1], ps));
        if (parts.size() % 2) next.push_back(parts.back());
        parts.swap(next);
    }
    const PowerSums& total = parts.front();
    const double N = static_cast<double>(total.count);

    std::vector<MomentEstimate> out;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        MomentEstimate est;
        est.p = ps[k];
        est.samples = total.count;
        est.seed = cfg.seed;
        if (total.top > 0.0 && total.s1[k] > 0.0) {
            const double mean = total.s1[k] / N;
            const double var = std::max(0.0, (total.s2[k] / N - mean * mean) * N / (N - 1.0));
            const double rel_se = std::sqrt(var / N) / mean;
            const double inv_p = 1.0 / ps[k];
            est.value = total.top * std::pow(mean, inv_p);
            est.std_error = est.value * rel_se * inv_p;
            est.ci_low = total.top * std::pow(mean * std::max(0.0, 1.0 - cfg.z * rel_se), inv_p);
            est.ci_high = total.top * std::pow(mean * (1.0 + cfg.z * rel_se), inv_p);
            if (!std::isfinite(est.value)) throw NumericError("moment estimate overflowed");
        }
        out.push_back(est);
    }
    return out;
}

void sample_decoupled(const CoeffTensor& tensor, Stream& rng, std::span<double> out) {
    check_out(tensor, out);
    std::vector<std::vector<double>> g(tensor.order, std::vector<double>(tensor.extent));
    for (auto& v : g) {
        for (double& x : v) x = rng.normal();
    }
    contract_axes(tensor.values, tensor.order, tensor.extent, tensor.value_dim, g, out);
}

void sample_undecoupled(const CoeffTensor& tensor, Stream& rng, std::span<double> out, Summation summation) {
    check_out(tensor, out);
    std::vector<double> g(tensor.extent);
    for (double& x : g) x = rng.normal();
    if (summation == Summation::full) {
        const std::vector<std::vector<double>> same(tensor.order, g);
        contract_axes(tensor.values, tensor.order, tensor.extent, tensor.value_dim, same, out);
        return;
    }
    std::fill(out.begin(), out.end(), 0.0);
    const int d = tensor.order, n = tensor.extent, m = tensor.value_dim;
    std::vector<int> idx(d);
    // Strictly increasing multi-indices, depth-first.
    auto rec = [&](auto& self, int pos, int lo, double prod, std::size_t flat) -> void {
        if (pos == d) {
            const auto a = tensor.at(flat);
            for (int j = 0; j < m; ++j) out[j] += prod * a[j];
            return;
        }
        for (int i = lo; i < n; ++i) self(self, pos + 1, i + 1, prod * g[i], flat * n + i);
    };
    rec(rec, 0, 0, 1.0, 0);
}

void sample_exponential(const CoeffTensor& tensor, Stream& rng, std::span<double> out, ExponentialMode mode) {
    check_out(tensor, out);
    std::vector<std::vector<double>> e(tensor.order, std::vector<double>(tensor.extent));
    for (auto& v : e) {
        for (double& x : v) {
            if (mode == ExponentialMode::direct) {
                x = rng.symmetric_exponential();
            } else {
                const double g = rng.normal();
                const double h = rng.normal();
                x = rng.rademacher() * g * h;
            }
        }
    }
    contract_axes(tensor.values, tensor.order, tensor.extent, tensor.value_dim, e, out);
}

NormSampler decoupled_norm_sampler(const CoeffTensor& tensor) {
    return [tensor](Stream& rng) {
        std::vector<double> v(tensor.value_dim);
        sample_decoupled(tensor, rng, v);
        return tensor.space.norm(v);
    };
}

NormSampler undecoupled_norm_sampler(const CoeffTensor& tensor, Summation summation) {
    return [tensor, summation](Stream& rng) {
        std::vector<double> v(tensor.value_dim);
        sample_undecoupled(tensor, rng, v, summation);
        return tensor.space.norm(v);
    };
}

NormSampler exponential_norm_sampler(const CoeffTensor& tensor, ExponentialMode mode) {
    return [tensor, mode](Stream& rng) {
        std::vector<double> v(tensor.value_dim);
        sample_exponential(tensor, rng, v, mode);
        return tensor.space.norm(v);
    };
}

namespace {

RatioEstimate ratio_of(const MomentEstimate& num, const MomentEstimate& den, double scale = 1.0) {
    RatioEstimate r;
    if (num.value == 0.0 && den.value == 0.0) {
        r.value = 1.0;
        return r;
    }
    if (den.value == 0.0) throw NumericError("ratio denominator is zero");
    r.value = num.value / (scale * den.value);
    const double a = num.value > 0.0 ? num.std_error / num.value : 0.0;
    const double b = den.std_error / den.value;
    r.std_error = r.value * std::sqrt(a * a + b * b);
    return r;
}

MCConfig with_p(MCConfig cfg, std::vector<double> ps) {
    cfg.p_values = std::move(ps);
    return cfg;
}

}  // namespace

RatioEstimate decoupling_ratio(const CoeffTensor& tensor, double p, const MCConfig& cfg) {
    validate(tensor);
    double scale = 0.0;
    for (double v : tensor.values) scale = std::max(scale, std::abs(v));
    if (!is_symmetric(tensor, 1e-12 * scale)) throw ValidationError("decoupling_ratio requires a symmetric tensor");
    if (!(mask_offdiagonal(tensor).values == tensor.values)) {
        throw ValidationError("decoupling_ratio requires zero entries on the generalized diagonal");
    }
    const MCConfig c = with_p(cfg, {p});
    const auto s = empirical_moment(undecoupled_norm_sampler(tensor, Summation::full), c, "undecoupled");
    const auto sd = empirical_moment(decoupled_norm_sampler(tensor), c, "decoupled");
    return ratio_of(s[0], sd[0]);
}

RatioEstimate hypercontractivity_ratio(const CoeffTensor& tensor, double p, double q, const MCConfig& cfg) {
    validate(tensor);
    if (!(p >= 1.0) || !(p < q)) throw ValidationError("hypercontractivity requires 1 <= p < q");
    const auto est = empirical_moment(decoupled_norm_sampler(tensor), with_p(cfg, {p, q}), "decoupled");
    return ratio_of(est[1], est[0], std::pow(q / p, tensor.order / 2.0));
}

RatioEstimate alpha_plus_ratio(const CoeffTensor& tensor, const MCConfig& cfg) {
    validate(tensor);
    if (tensor.order != 2) throw ValidationError("alpha_plus_ratio requires an order-2 tensor");
    CoeffTensor flat = tensor;  // sum b_ij g_ij: one Gaussian per entry
    flat.order = 1;
    flat.extent = tensor.extent * tensor.extent;
    const MCConfig c = with_p(cfg, {1.0});
    const auto left = empirical_moment(decoupled_norm_sampler(flat), c, "alpha-independent");
    const auto right = empirical_moment(decoupled_norm_sampler(tensor), c, "alpha-product");
    return ratio_of(left[0], right[0]);
}

}  // namespace chaos
