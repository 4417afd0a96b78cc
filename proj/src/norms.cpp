#include "chaos/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaos/errors.hpp"
#include "chaos/multilinear.hpp"
#include "chaos/parallel.hpp"
#include "chaos/rng.hpp"

namespace chaos {

void validate(const OptimizerConfig& cfg) {
    if (cfg.restarts < 1 || cfg.saa_samples < 1 || cfg.eval_samples < 1 || cfg.max_sweeps < 1) {
        throw ValidationError("optimizer counts must be >= 1");
    }
    if (!(cfg.tol > 0.0)) throw ValidationError("optimizer tol must be > 0");
}

namespace {

struct RestartResult {
    std::vector<std::vector<double>> x;
    int sweeps = 0;
    double value = 0.0;
    double std_error = 0.0;
};

void normalize(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    if (s == 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        v[0] = 1.0;
        return;
    }
    for (double& x : v) x /= s;
}

std::vector<double> gaussian_array(Stream& rng, std::size_t len) {
    std::vector<double> g(len);
    for (double& v : g) v = rng.normal();
    return g;
}

Functional make_functional(const CoeffTensor& tensor, SupProblem::Objective objective) {
    switch (objective) {
        case SupProblem::Objective::space_norm:
            return Functional::space_norm(tensor.space);
        case SupProblem::Objective::lq_of_l2:
            if (!tensor.space.is_lq()) throw ValidationError("L_q norms require an lq value space");
            return Functional::lq_of_l2(tensor.space.q(), tensor.space.weights());
        case SupProblem::Objective::absolute:
            if (tensor.value_dim != 1) throw ValidationError("real-valued norms require m = 1");
            return Functional::lq_of_l2(2.0, {1.0});
    }
    throw ValidationError("unknown objective");
}

void check_tensor(const CoeffTensor& t) {
    if (t.order < 0 || t.extent < 1 || t.value_dim < 1 ||
        t.values.size() != ipow(t.extent, t.order) * static_cast<std::size_t>(t.value_dim) ||
        t.space.dim() != t.value_dim) {
        throw ValidationError("malformed tensor");
    }
}

}  // namespace

NormEstimate maximize(const CoeffTensor& tensor, const SupProblem& problem, const OptimizerConfig& cfg) {
    check_tensor(tensor);
    validate(cfg);
    const Functional fn = make_functional(tensor, problem.objective);
    const std::size_t n_det = problem.deterministic.size();
    const std::size_t n_gauss = problem.gaussian.size();
    const bool random = n_gauss > 0;

    std::vector<IndexSet> blocks = problem.deterministic;
    blocks.insert(blocks.end(), problem.gaussian.begin(), problem.gaussian.end());
    const MultilinearPlan plan(tensor.order, tensor.extent, tensor.value_dim, blocks, problem.outer);
    const std::size_t K = blocks.size();
    const std::size_t ylen = plan.rows() * tensor.value_dim;

    NormEstimate est;
    est.blocks = problem.deterministic;
    est.saa_samples = random && n_det > 0 ? cfg.saa_samples : 0;
    est.eval_samples = random ? cfg.eval_samples : 0;
    est.restarts_used = n_det > 0 ? cfg.restarts : 1;

    if (tensor.is_zero()) {
        for (std::size_t b = 0; b < n_det; ++b) {
            std::vector<double> e(plan.block_length(b), 0.0);
            e[0] = 1.0;
            est.best_vectors.push_back(std::move(e));
        }
        return est;
    }

    const std::uint64_t base = mix64(cfg.seed ^ hash_tag(problem.key));
    const std::span<const double> values(tensor.values);

    auto draw_gaussians = [&](Stream& rng) {
        std::vector<std::vector<double>> gs(n_gauss);
        for (std::size_t b = 0; b < n_gauss; ++b) gs[b] = gaussian_array(rng, plan.block_length(n_det + b));
        return gs;
    };

    // Mean and standard error of the objective at x over the shared evaluation draws.
    auto evaluate = [&](const std::vector<std::vector<double>>& x, RestartResult& out) {
        std::vector<const double*> factors(K);
        for (std::size_t b = 0; b < n_det; ++b) factors[b] = x[b].data();
        std::vector<double> y(ylen);
        if (!random) {
            plan.apply(values, factors, y);
            out.value = fn.value(y, plan.rows());
            out.std_error = 0.0;
            return;
        }
        double sum = 0.0, sum_sq = 0.0;
        for (int s = 0; s < cfg.eval_samples; ++s) {
            Stream rng(base, "eval", static_cast<std::uint64_t>(s));
            const auto gs = draw_gaussians(rng);
            for (std::size_t b = 0; b < n_gauss; ++b) factors[n_det + b] = gs[b].data();
            plan.apply(values, factors, y);
            const double v = fn.value(y, plan.rows());
            sum += v;
            sum_sq += v * v;
        }
        const double N = cfg.eval_samples;
        out.value = sum / N;
        const double var = N > 1 ? std::max(0.0, (sum_sq - sum * sum / N) / (N - 1)) : 0.0;
        out.std_error = std::sqrt(var / N);
    };

    auto run_restart = [&](std::size_t r) {
        RestartResult res;
        Stream init(base, "init", r);
        res.x.resize(n_det);
        for (std::size_t b = 0; b < n_det; ++b) {
            res.x[b] = gaussian_array(init, plan.block_length(b));
            normalize(res.x[b]);
        }
        if (n_det > 0) {
            const int n_saa = random ? cfg.saa_samples : 1;
            std::vector<std::vector<std::vector<double>>> saa(n_saa);
            if (random) {
                Stream rng(base, "saa", r);
                for (auto& gs : saa) gs = draw_gaussians(rng);
            }
            std::vector<const double*> factors(K);
            std::vector<double> y(ylen), psi(ylen);
            double previous = -std::numeric_limits<double>::infinity();
            for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
                res.sweeps = sweep;
                double start_value = 0.0;
                for (std::size_t rb = 0; rb < n_det; ++rb) {
                    for (std::size_t b = 0; b < n_det; ++b) factors[b] = res.x[b].data();
                    std::vector<double> g(plan.block_length(rb), 0.0);
                    double total = 0.0;
                    for (int s = 0; s < n_saa; ++s) {
                        for (std::size_t b = 0; b < n_gauss; ++b) factors[n_det + b] = saa[s][b].data();
                        plan.apply(values, factors, y);
                        total += fn.value_and_dual(y, plan.rows(), psi);
                        plan.accumulate_gradient(values, factors, rb, psi, g);
                    }
                    if (!std::isfinite(total)) throw NumericError("objective became non-finite during optimization");
                    if (rb == 0) start_value = total / n_saa;
                    double gn = 0.0;
                    for (double v : g) gn += v * v;
                    if (gn > 0.0) {
                        gn = std::sqrt(gn);
                        for (std::size_t i = 0; i < g.size(); ++i) res.x[rb][i] = g[i] / gn;
                    }
                }
                if (start_value - previous <= cfg.tol * std::abs(start_value)) break;
                previous = start_value;
            }
        }
        evaluate(res.x, res);
        if (!std::isfinite(res.value)) throw NumericError("norm estimate is not finite");
        return res;
    };

    const std::size_t restarts = n_det > 0 ? static_cast<std::size_t>(cfg.restarts) : 1;
    std::vector<RestartResult> results(restarts);
    parallel_for(restarts, [&](std::size_t r) { results[r] = run_restart(r); });

    std::size_t best = 0;
    for (std::size_t r = 1; r < restarts; ++r) {
        if (results[r].value > results[best].value) best = r;
    }
    est.value = results[best].value;
    est.std_error = results[best].std_error;
    est.sweeps = results[best].sweeps;
    est.best_vectors = std::move(results[best].x);
    return est;
}

NormEstimate mixed_norm(const CoeffTensor& tensor, const PartitionPair& pair, const OptimizerConfig& cfg) {
    validate(tensor);
    validate_pair(pair, tensor.order);
    SupProblem problem;
    problem.deterministic = pair.deterministic;
    problem.gaussian = pair.gaussian;
    problem.objective = SupProblem::Objective::space_norm;
    problem.key = "mixed:" + format_pair(pair);
    return maximize(tensor, problem, cfg);
}

namespace {

void check_subset_partition(const SubsetPartition& jp, int d) {
    for (int e : jp.subset) {
        if (e < 0 || e >= d) throw ValidationError("subset J must lie inside [d]");
    }
    if (set_union(jp.partition) != jp.subset) throw ValidationError("P must be a partition of J");
    for (const auto& b : jp.partition) {
        if (b.empty()) throw ValidationError("partition blocks must be nonempty");
    }
    const auto u = set_union(jp.partition);
    if (std::adjacent_find(u.begin(), u.end()) != u.end()) throw ValidationError("partition blocks overlap");
}

}  // namespace

NormEstimate triple_norm(const CoeffTensor& tensor, const SubsetPartition& jp, const OptimizerConfig& cfg) {
    check_subset_partition(jp, tensor.order);
    return mixed_norm(tensor, pair_for_triple(tensor.order, jp), cfg);
}

NormEstimate lq_triple_norm(const CoeffTensor& tensor, const SubsetPartition& jp, const OptimizerConfig& cfg) {
    check_tensor(tensor);
    check_subset_partition(jp, tensor.order);
    if (!tensor.space.is_lq()) throw ValidationError("lq_triple_norm requires an lq value space");
    SupProblem problem;
    problem.deterministic = jp.partition;
    problem.outer = set_difference(full_set(tensor.order), jp.subset);
    problem.objective = SupProblem::Objective::lq_of_l2;
    problem.key = "lq:" + format_pair(pair_for_triple(tensor.order, jp));
    return maximize(tensor, problem, cfg);
}

NormEstimate lq_M_norm(const CoeffTensor& tensor, const MSequence& seq, const OptimizerConfig& cfg) {
    validate(tensor);
    validate_msequence(seq, tensor.order);
    if (!tensor.space.is_lq()) throw ValidationError("lq_M_norm requires an lq value space");
    SupProblem problem;
    problem.deterministic = seq.sets;
    problem.outer = seq.outer;
    problem.objective = SupProblem::Objective::lq_of_l2;
    problem.key = "lqM:" + format_msequence(seq);
    return maximize(tensor, problem, cfg);
}

NormEstimate real_chaos_sup(const CoeffTensor& tensor, const Partition& partition, const OptimizerConfig& cfg) {
    validate(tensor);
    if (tensor.value_dim != 1) throw ValidationError("real_chaos_sup requires m = 1");
    PartitionPair pair{canonical(partition), {}};
    validate_pair(pair, tensor.order);
    SupProblem problem;
    problem.deterministic = pair.deterministic;
    problem.objective = SupProblem::Objective::absolute;
    problem.key = "real:" + format_partition(pair.deterministic);
    return maximize(tensor, problem, cfg);
}

}  // namespace chaos
