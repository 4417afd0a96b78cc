#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chaos/hermite.hpp"
#include "chaos/monte_carlo.hpp"
#include "chaos/norms.hpp"
#include "chaos/partitions.hpp"
#include "chaos/tensor.hpp"

namespace chaos {

/// Unspecified absolute constants. Structural sums never include
/// them; they are carried along so every report states what was assumed.
struct ConstantPolicy {
    double C_d = 1.0;
    std::optional<double> K;   // constant of the (alpha+) condition, when used
    double calibration = 1.0;  // c in K = c sqrt(q)
};

enum class BoundSide { lower, upper, both };

const char* to_string(BoundSide side);

struct BoundTerm {
    std::string label;   // partition descriptor, e.g. "{1}|{2},{3}"
    std::string shape;   // coarse term shape; used by the exponential-chaos report
    double power = 0.0;  // exponent of p
    double weight = 1.0;
    double value = 0.0;  // the norm
    double std_error = 0.0;
};

struct BoundReport {
    std::string kind;
    BoundSide side = BoundSide::upper;
    double p = 1.0;
    std::vector<BoundTerm> terms;
    double structural_sum = 0.0;  // sum of weight * p^power * value, in term order
    double factor = 1.0;          // prefactor (K^{d-1}, powers of q)
    ConstantPolicy constants;

    double bound() const { return factor * structural_sum; }
};

/// Recomputes structural_sum from the terms.
void finalize(BoundReport& report);

struct PairNorm {
    PartitionPair pair;
    NormEstimate estimate;
};
struct TripleNorm {
    SubsetPartition index;
    NormEstimate estimate;
};

/// ||A||_{P'|P} for every (P, P') in P([d]); terms evaluated in parallel.
std::vector<PairNorm> pair_norm_table(const CoeffTensor& tensor, const OptimizerConfig& cfg = {});
/// |||A|||_P for every J subset of [d], P in P(J).
std::vector<TripleNorm> triple_norm_table(const CoeffTensor& tensor, const OptimizerConfig& cfg = {});
/// |||A|||^{L_q}_P for every J subset of [d], P in P(J).
std::vector<TripleNorm> lq_norm_table(const CoeffTensor& tensor, const OptimizerConfig& cfg = {});

BoundReport assemble_upper(const std::vector<PairNorm>& table, double p);
BoundReport assemble_lower(const std::vector<TripleNorm>& table, double p, int d);

/// sum over (P, P') of p^{|P|/2} ||A||_{P'|P}.
BoundReport upper_sum(const CoeffTensor& tensor, double p, const OptimizerConfig& cfg = {});
/// sum over J, P in P(J) of p^{|P|/2} |||A|||_P.
BoundReport lower_sum(const CoeffTensor& tensor, double p, const OptimizerConfig& cfg = {});

struct TailExponent {
    double t = 0.0;
    double exponent = 0.0;
    double threshold = 0.0;  // upper tail only: sum over P' of ||A||_{P'|{}}
    std::string argmin;      // label of the minimizing term
};

/// min over (P, P') with |P| > 0 of (t / ||A||_{P'|P})^{2/|P|}; t > 0.
TailExponent tail_exponent_upper(const std::vector<PairNorm>& table, double t);
TailExponent tail_exponent_upper(const CoeffTensor& tensor, double t, const OptimizerConfig& cfg = {});
/// min over nonempty J, P in P(J) of (t / |||A|||_P)^{2/|P|}; t >= 0.
TailExponent tail_exponent_lower(const std::vector<TripleNorm>& table, double t);
TailExponent tail_exponent_lower(const CoeffTensor& tensor, double t, const OptimizerConfig& cfg = {});

/// K^{d-1} times the lower structural sum; valid under the (alpha+) condition.
BoundReport special_space_upper(const CoeffTensor& tensor, double p, double K, const OptimizerConfig& cfg = {});

/// ||A||_{P'|P} / (K^{|u P'| - |P'|} |||A|||_P). K defaults to type2_K of an lq space.
double takie_ratio(const CoeffTensor& tensor, const PartitionPair& pair, const OptimizerConfig& cfg = {},
                   std::optional<double> K = std::nullopt, double calibration = 1.0);

/// Shared L_q term table; lower factor q^{(1-d)/2}, upper factor q^{d-1/2}.
std::pair<BoundReport, BoundReport> lq_bound(const CoeffTensor& tensor, double p, const OptimizerConfig& cfg = {});

struct ExpChaosOptions {
    bool full_m = false;  // sum over all of M([d]) instead of the reduced (I, J, P) family
};

/// Moments of sum a_i E^1_{i_1}..E^d_{i_d}: sum over disjoint I, J and
/// P in P([d] \ (I u J)) of p^{|I| + |P|/2} max_{i_I} |||slice|||^{L_q}_P, with
/// lower factor q^{1/2-d} and upper factor q^{2d-1/2}. Requires q >= 2.
std::pair<BoundReport, BoundReport> exp_chaos_bound(const CoeffTensor& tensor, double p,
                                                    const OptimizerConfig& cfg = {}, ExpChaosOptions opts = {});

/// sum over P in P([d]) of p^{|P|/2} sup{sum a_i prod x^j}; m = 1, p >= 2.
BoundReport real_moment_twosided(const CoeffTensor& tensor, double p, const OptimizerConfig& cfg = {});

struct SandwichResult {
    double empirical = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double ratio_lower = 1.0;  // lower / empirical
    double ratio_upper = 1.0;  // empirical / upper
};

SandwichResult sandwich_check(const CoeffTensor& tensor, double p, const MCConfig& mc, const OptimizerConfig& cfg = {});

/// Empirical ||S'||_p over the lower structural sum.
RatioEstimate conjecture_gap(const CoeffTensor& tensor, double p, const MCConfig& mc, const OptimizerConfig& cfg = {});

struct GeneralPolyOptions {
    std::optional<double> K;  // defaults to type2_K for lq spaces
    double calibration = 1.0;
    OptimizerConfig cfg;
    MCConfig mc;
};

struct GeneralPolyReport {
    std::vector<CoeffTensor> derivatives;  // E nabla^d f(G), d = 1..D
    std::vector<std::vector<TripleNorm>> triple_norms;  // per d, nonempty J only
    MomentEstimate mean_deviation;  // E||f(G) - E f(G)||
    BoundReport lower;
    std::optional<BoundReport> upper;
    std::optional<BoundReport> lq_lower;
    std::optional<BoundReport> lq_upper;
};

GeneralPolyReport general_poly_bounds(const PolynomialSpec& f, double p, const GeneralPolyOptions& opts = {});

/// min over d, nonempty T subset of [d], P in P(T) of (t / |||E nabla^d f|||_P)^{2/|P|}.
double eta(const GeneralPolyReport& report, double t);

}  // namespace chaos
