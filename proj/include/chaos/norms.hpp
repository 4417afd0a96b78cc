#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chaos/partitions.hpp"
#include "chaos/tensor.hpp"

namespace chaos {

struct OptimizerConfig {
    int restarts = 8;
    int saa_samples = 256;    // Gaussian draws frozen during one restart
    int eval_samples = 4096;  // fresh draws for the reported value
    int max_sweeps = 100;
    double tol = 1e-6;        // relative improvement per sweep
    std::uint64_t seed = 0;
};

void validate(const OptimizerConfig& cfg);

/// One estimated supremum. For objectives without Gaussian blocks the value is
/// exact at best_vectors and stderr is 0; otherwise it is a Monte-Carlo mean
/// over eval_samples fresh draws.
struct NormEstimate {
    double value = 0.0;
    double std_error = 0.0;
    int restarts_used = 0;
    int saa_samples = 0;
    int eval_samples = 0;
    int sweeps = 0;                              // sweeps of the winning restart
    std::vector<IndexSet> blocks;                // deterministic blocks, in order
    std::vector<std::vector<double>> best_vectors;  // unit vectors, one per block
};

/// A sup over unit vectors (one per deterministic block) of
/// E functional(contraction), with Gaussian arrays for the gaussian blocks
/// and rows indexed by the outer axes.
struct SupProblem {
    std::vector<IndexSet> deterministic;  // may overlap (M-sequences)
    std::vector<IndexSet> gaussian;
    IndexSet outer;
    enum class Objective { space_norm, lq_of_l2, absolute } objective = Objective::space_norm;
    std::string key;  // seeds the random streams together with cfg.seed
};

/// Block-coordinate ascent over products of spheres. Every objective here is
/// convex and 1-homogeneous in each block, so replacing a block by its
/// normalized (sub)gradient never decreases the objective.
NormEstimate maximize(const CoeffTensor& tensor, const SupProblem& problem, const OptimizerConfig& cfg);

/// ||A||_{P'|P}: sup over unit x^r of E||sum a_i prod x^r prod g^l||.
NormEstimate mixed_norm(const CoeffTensor& tensor, const PartitionPair& pair, const OptimizerConfig& cfg = {});

/// |||A|||_P for P in P(J): the mixed norm with P' the singletons of [d] \ J.
NormEstimate triple_norm(const CoeffTensor& tensor, const SubsetPartition& jp, const OptimizerConfig& cfg = {});

/// |||A|||^{L_q}_P: sup || sqrt(sum_{i_{[d]\J}} (sum_{i_J} a_i prod x^r)^2) ||_{L_q}.
/// Deterministic; requires an lq value space.
NormEstimate lq_triple_norm(const CoeffTensor& tensor, const SubsetPartition& jp, const OptimizerConfig& cfg = {});

/// |||A|||^{L_q}_M for M = (J, I_1..I_k): sup || sqrt(sum_{i_J} (sum_{i_{[d]\J}} a_i prod x^r)^2) ||_{L_q}.
NormEstimate lq_M_norm(const CoeffTensor& tensor, const MSequence& seq, const OptimizerConfig& cfg = {});

/// sup { sum a_i prod x^j : ||x^j||_2 <= 1 } for a real-valued tensor and P in P([d]).
NormEstimate real_chaos_sup(const CoeffTensor& tensor, const Partition& partition, const OptimizerConfig& cfg = {});

}  // namespace chaos
