#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "chaos/rng.hpp"
#include "chaos/tensor.hpp"

namespace chaos {

struct MCConfig {
    long long samples = 100000;
    std::vector<double> p_values{2.0};
    std::uint64_t seed = 0;
    int batch = 4096;
    double z = 1.96;  // CI half-width in standard errors
};

void validate(const MCConfig& cfg);

/// Estimate of ||S||_p = (E||S||^p)^{1/p}. The interval is a CLT interval on
/// the mean of ||S||^p mapped through t -> t^{1/p}; std_error is the
/// delta-method standard error of `value`.
struct MomentEstimate {
    double p = 0.0;
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double std_error = 0.0;
    long long samples = 0;
    std::uint64_t seed = 0;
};

/// Draws one realization of ||S|| from the given stream.
using NormSampler = std::function<double(Stream&)>;

/// Streams cfg.samples draws in batches; batch b uses Stream(seed, tag, b) and
/// batches are merged by a fixed pairwise tree, so the result does not depend
/// on the number of worker threads. Sums are kept relative to the running
/// maximum, so large ||S||^p cannot overflow.
std::vector<MomentEstimate> empirical_moment(const NormSampler& sampler, const MCConfig& cfg,
                                             const std::string& tag = "moment");

/// S' = sum_i a_i g^1_{i_1} ... g^d_{i_d}; out has length m.
void sample_decoupled(const CoeffTensor& tensor, Stream& rng, std::span<double> out);

enum class Summation {
    increasing,  // i_1 < ... < i_d only
    full,        // every multi-index, one Gaussian vector for all slots
};

/// S = sum a_i g_{i_1} ... g_{i_d} with a single Gaussian vector.
void sample_undecoupled(const CoeffTensor& tensor, Stream& rng, std::span<double> out,
                        Summation summation = Summation::increasing);

enum class ExponentialMode {
    direct,            // inverse-CDF symmetric exponentials
    gaussian_product,  // eps_i * g_i * g'_i in place of each exponential
};

/// sum a_i E^1_{i_1} ... E^d_{i_d} with independent coordinate vectors per slot.
void sample_exponential(const CoeffTensor& tensor, Stream& rng, std::span<double> out,
                        ExponentialMode mode = ExponentialMode::direct);

NormSampler decoupled_norm_sampler(const CoeffTensor& tensor);
NormSampler undecoupled_norm_sampler(const CoeffTensor& tensor, Summation summation);
NormSampler exponential_norm_sampler(const CoeffTensor& tensor, ExponentialMode mode);

struct RatioEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// ||sum a_i X_{i_1}..X_{i_d}||_p / ||sum a_i X^1_{i_1}..X^d_{i_d}||_p for a
/// symmetric tensor vanishing on the generalized diagonal (full summation).
RatioEstimate decoupling_ratio(const CoeffTensor& tensor, double p, const MCConfig& cfg);

/// ||S'||_q / ((q/p)^{d/2} ||S'||_p), 1 <= p < q.
RatioEstimate hypercontractivity_ratio(const CoeffTensor& tensor, double p, double q, const MCConfig& cfg);

/// E||sum b_ij g_ij|| / E||sum b_ij g_i g'_j|| for an order-2 tensor.
RatioEstimate alpha_plus_ratio(const CoeffTensor& tensor, const MCConfig& cfg);

}  // namespace chaos
