#include "chaos/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chaos/errors.hpp"
#include "chaos/parallel.hpp"

namespace chaos {

const char* to_string(BoundSide side) {
    switch (side) {
        case BoundSide::lower: return "lower";
        case BoundSide::upper: return "upper";
        case BoundSide::both: return "both";
    }
    return "?";
}

void finalize(BoundReport& report) {
    double sum = 0.0;
    for (const auto& t : report.terms) sum += t.weight * std::pow(report.p, t.power) * t.value;
    report.structural_sum = sum;
}

namespace {

void check_p(double p, double minimum = 1.0) {
    if (!(p >= minimum) || !std::isfinite(p)) {
        throw ValidationError("moment order p must be >= " + std::to_string(static_cast<int>(minimum)));
    }
}

std::string triple_label(int d, const SubsetPartition& jp) { return format_pair(pair_for_triple(d, jp)); }

double half_size(const Partition& p) { return static_cast<double>(p.size()) / 2.0; }

std::vector<TripleNorm> triple_table_with(const CoeffTensor& tensor, const OptimizerConfig& cfg,
                                          NormEstimate (*norm)(const CoeffTensor&, const SubsetPartition&,
                                                               const OptimizerConfig&)) {
    const auto index = enumerate_subset_partitions(tensor.order);
    std::vector<TripleNorm> out(index.size());
    parallel_for(index.size(), [&](std::size_t k) { out[k] = {index[k], norm(tensor, index[k], cfg)}; });
    return out;
}

}  // namespace

std::vector<PairNorm> pair_norm_table(const CoeffTensor& tensor, const OptimizerConfig& cfg) {
    validate(tensor);
    const auto pairs = enumerate_partition_pairs(tensor.order);
    std::vector<PairNorm> out(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) { out[k] = {pairs[k], mixed_norm(tensor, pairs[k], cfg)}; });
    return out;
}

std::vector<TripleNorm> triple_norm_table(const CoeffTensor& tensor, const OptimizerConfig& cfg) {
    validate(tensor);
    return triple_table_with(tensor, cfg, &triple_norm);
}

std::vector<TripleNorm> lq_norm_table(const CoeffTensor& tensor, const OptimizerConfig& cfg) {
    validate(tensor);
    if (!tensor.space.is_lq()) throw ValidationError("L_q bounds require an lq value space");
    return triple_table_with(tensor, cfg, &lq_triple_norm);
}

BoundReport assemble_upper(const std::vector<PairNorm>& table, double p) {
    check_p(p);
    BoundReport r;
    r.kind = "upper_sum";
    r.side = BoundSide::upper;
    r.p = p;
    for (const auto& [pair, est] : table) {
        r.terms.push_back({format_pair(pair), "", half_size(pair.deterministic), 1.0, est.value, est.std_error});
    }
    finalize(r);
    return r;
}

BoundReport assemble_lower(const std::vector<TripleNorm>& table, double p, int d) {
    check_p(p);
    BoundReport r;
    r.kind = "lower_sum";
    r.side = BoundSide::lower;
    r.p = p;
    for (const auto& [jp, est] : table) {
        r.terms.push_back({triple_label(d, jp), "", half_size(jp.partition), 1.0, est.value, est.std_error});
    }
    finalize(r);
    return r;
}

BoundReport upper_sum(const CoeffTensor& tensor, double p, const OptimizerConfig& cfg) {
    check_p(p);
    return assemble_upper(pair_norm_table(tensor, cfg), p);
}

BoundReport lower_sum(const CoeffTensor& tensor, double p, const OptimizerConfig& cfg) {
    check_p(p);
    return assemble_lower(triple_norm_table(tensor, cfg), p, tensor.order);
}

TailExponent tail_exponent_upper(const std::vector<PairNorm>& table, double t) {
    if (!(t > 0.0)) throw ValidationError("tail level t must be > 0");
    TailExponent out;
    out.t = t;
    out.exponent = std::numeric_limits<double>::infinity();
    for (const auto& [pair, est] : table) {
        if (pair.deterministic.empty()) {
            out.threshold += est.value;
            continue;
        }
        if (est.value == 0.0) continue;
        const double e = std::pow(t / est.value, 2.0 / static_cast<double>(pair.deterministic.size()));
        if (e < out.exponent) {
            out.exponent = e;
            out.argmin = format_pair(pair);
        }
    }
    return out;
}

TailExponent tail_exponent_upper(const CoeffTensor& tensor, double t, const OptimizerConfig& cfg) {
    if (!(t > 0.0)) throw ValidationError("tail level t must be > 0");
    return tail_exponent_upper(pair_norm_table(tensor, cfg), t);
}

TailExponent tail_exponent_lower(const std::vector<TripleNorm>& table, double t) {
    if (!(t >= 0.0)) throw ValidationError("tail level t must be >= 0");
    TailExponent out;
    out.t = t;
    out.exponent = std::numeric_limits<double>::infinity();
    for (const auto& [jp, est] : table) {
        if (jp.subset.empty() || est.value == 0.0) continue;
        const double e = std::pow(t / est.value, 2.0 / static_cast<double>(jp.partition.size()));
        if (e < out.exponent) {
            out.exponent = e;
            out.argmin = format_partition(jp.partition);
        }
    }
    return out;
}

TailExponent tail_exponent_lower(const CoeffTensor& tensor, double t, const OptimizerConfig& cfg) {
    if (!(t >= 0.0)) throw ValidationError("tail level t must be >= 0");
    return tail_exponent_lower(triple_norm_table(tensor, cfg), t);
}

BoundReport special_space_upper(const CoeffTensor& tensor, double p, double K, const OptimizerConfig& cfg) {
    if (!(K >= 1.0)) throw ValidationError("K >= 1 required (K >= sqrt(pi/2) for any space)");
    BoundReport r = lower_sum(tensor, p, cfg);
    r.kind = "special_space_upper";
    r.side = BoundSide::upper;
    r.factor = std::pow(K, tensor.order - 1);
    r.constants.K = K;
    return r;
}

double takie_ratio(const CoeffTensor& tensor, const PartitionPair& pair, const OptimizerConfig& cfg,
                   std::optional<double> K, double calibration) {
    validate(tensor);
    validate_pair(pair, tensor.order);
    const double k = K ? *K : type2_K(tensor.space, calibration);
    const int exponent = static_cast<int>(set_union(pair.gaussian).size()) - static_cast<int>(pair.gaussian.size());
    const NormEstimate num = mixed_norm(tensor, pair, cfg);
    if (exponent == 0) return num.value == 0.0 ? 0.0 : 1.0;
    const SubsetPartition jp{set_union(pair.deterministic), pair.deterministic};
    const NormEstimate den = triple_norm(tensor, jp, cfg);
    if (num.value == 0.0) return 0.0;
    if (den.value == 0.0) throw NumericError("takie_ratio: triple norm vanishes while the mixed norm does not");
    return num.value / (std::pow(k, exponent) * den.value);
}

std::pair<BoundReport, BoundReport> lq_bound(const CoeffTensor& tensor, double p, const OptimizerConfig& cfg) {
    check_p(p);
    const auto table = lq_norm_table(tensor, cfg);
    const double q = tensor.space.q();
    const int d = tensor.order;
    BoundReport lower;
    lower.kind = "lq_lower";
    lower.side = BoundSide::lower;
    lower.p = p;
    for (const auto& [jp, est] : table) {
        lower.terms.push_back({triple_label(d, jp), "", half_size(jp.partition), 1.0, est.value, 0.0});
    }
    finalize(lower);
    BoundReport upper = lower;
    upper.kind = "lq_upper";
    upper.side = BoundSide::upper;
    lower.factor = std::pow(q, (1.0 - d) / 2.0);
    upper.factor = std::pow(q, d - 0.5);
    return {lower, upper};
}

namespace {

IndexSet mask_set(unsigned mask, int d) {
    IndexSet out;
    for (int k = 0; k < d; ++k) {
        if ((mask >> k) & 1U) out.push_back(k);
    }
    return out;
}

std::string format_set1(const IndexSet& s) { return format_partition(s.empty() ? Partition{} : Partition{s}); }

std::string shape_of(std::size_t i_size, std::size_t j_size, const Partition& p) {
    std::vector<std::size_t> sizes;
    for (const auto& b : p) sizes.push_back(b.size());
    std::sort(sizes.begin(), sizes.end());
    std::string out = "I" + std::to_string(i_size) + " J" + std::to_string(j_size) + " P(";
    for (std::size_t k = 0; k < sizes.size(); ++k) out += (k ? "," : "") + std::to_string(sizes[k]);
    return out + ")";
}

struct ExpTerm {
    IndexSet fixed;     // I
    IndexSet gaussian;  // J
    Partition partition;
};

double exp_term_value(const CoeffTensor& tensor, const ExpTerm& term, const OptimizerConfig& cfg) {
    const int d = tensor.order;
    const IndexSet rest = set_difference(full_set(d), term.fixed);
    std::vector<int> position(d, -1);
    for (std::size_t k = 0; k < rest.size(); ++k) position[rest[k]] = static_cast<int>(k);
    SubsetPartition jp;
    for (const auto& block : term.partition) {
        IndexSet mapped;
        for (int e : block) mapped.push_back(position[e]);
        jp.partition.push_back(mapped);
    }
    jp.partition = canonical(jp.partition);
    jp.subset = set_union(jp.partition);

    const std::size_t slices = ipow(tensor.extent, static_cast<int>(term.fixed.size()));
    double best = 0.0;
    for (std::size_t s = 0; s < slices; ++s) {
        const auto idx = unflatten(s, static_cast<int>(term.fixed.size()), tensor.extent);
        const CoeffTensor slice = slice_fix(tensor, term.fixed, idx);
        best = std::max(best, lq_triple_norm(slice, jp, cfg).value);
    }
    return best;
}

}  // namespace

std::pair<BoundReport, BoundReport> exp_chaos_bound(const CoeffTensor& tensor, double p, const OptimizerConfig& cfg,
                                                    ExpChaosOptions opts) {
    validate(tensor);
    check_p(p);
    if (!tensor.space.is_lq()) throw ValidationError("exponential chaos bounds require an lq value space");
    const double q = tensor.space.q();
    if (q < 2.0) throw ValidationError("exponential chaos bounds require q >= 2");
    const int d = tensor.order;

    BoundReport lower;
    lower.side = BoundSide::lower;
    lower.p = p;
    if (opts.full_m) {
        lower.kind = "exp_chaos_full_M_lower";
        const auto family = enumerate_M(d);
        std::vector<double> values(family.size());
        parallel_for(family.size(), [&](std::size_t k) { values[k] = lq_M_norm(tensor, family[k], cfg).value; });
        for (std::size_t k = 0; k < family.size(); ++k) {
            lower.terms.push_back({format_msequence(family[k]), in_class_C(family[k]) ? "C" : "M",
                                   (family[k].size() - 1) / 2.0, 1.0, values[k], 0.0});
        }
    } else {
        lower.kind = "exp_chaos_lower";
        std::vector<ExpTerm> terms;
        for (unsigned imask = 0; imask < (1U << d); ++imask) {
            const IndexSet fixed = mask_set(imask, d);
            const IndexSet rest = set_difference(full_set(d), fixed);
            for (unsigned jmask = 0; jmask < (1U << rest.size()); ++jmask) {
                IndexSet gaussian;
                for (std::size_t k = 0; k < rest.size(); ++k) {
                    if ((jmask >> k) & 1U) gaussian.push_back(rest[k]);
                }
                for (auto& partition : enumerate_partitions(set_difference(rest, gaussian))) {
                    terms.push_back({fixed, gaussian, std::move(partition)});
                }
            }
        }
        std::vector<double> values(terms.size());
        parallel_for(terms.size(), [&](std::size_t k) { values[k] = exp_term_value(tensor, terms[k], cfg); });
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const auto& t = terms[k];
            lower.terms.push_back({"I=" + format_set1(t.fixed) + ";J=" + format_set1(t.gaussian) +
                                       ";P=" + format_partition(t.partition),
                                   shape_of(t.fixed.size(), t.gaussian.size(), t.partition),
                                   static_cast<double>(t.fixed.size()) + half_size(t.partition), 1.0, values[k], 0.0});
        }
    }
    finalize(lower);
    BoundReport upper = lower;
    upper.side = BoundSide::upper;
    upper.kind = opts.full_m ? "exp_chaos_full_M_upper" : "exp_chaos_upper";
    lower.factor = std::pow(q, 0.5 - d);
    upper.factor = std::pow(q, 2.0 * d - 0.5);
    return {lower, upper};
}

BoundReport real_moment_twosided(const CoeffTensor& tensor, double p, const OptimizerConfig& cfg) {
    validate(tensor);
    if (tensor.value_dim != 1) throw ValidationError("real_moment_twosided requires m = 1");
    check_p(p, 2.0);
    const auto partitions = enumerate_partitions(full_set(tensor.order));
    std::vector<NormEstimate> values(partitions.size());
    parallel_for(partitions.size(), [&](std::size_t k) { values[k] = real_chaos_sup(tensor, partitions[k], cfg); });
    BoundReport r;
    r.kind = "real_moment_twosided";
    r.side = BoundSide::both;
    r.p = p;
    for (std::size_t k = 0; k < partitions.size(); ++k) {
        r.terms.push_back({format_partition(partitions[k]), "", half_size(partitions[k]), 1.0, values[k].value, 0.0});
    }
    finalize(r);
    return r;
}

namespace {

MomentEstimate decoupled_moment(const CoeffTensor& tensor, double p, MCConfig mc) {
    mc.p_values = {p};
    return empirical_moment(decoupled_norm_sampler(tensor), mc, "decoupled").front();
}

}  // namespace

SandwichResult sandwich_check(const CoeffTensor& tensor, double p, const MCConfig& mc, const OptimizerConfig& cfg) {
    check_p(p);
    const auto pairs = pair_norm_table(tensor, cfg);
    std::vector<TripleNorm> triples;
    for (const auto& jp : enumerate_subset_partitions(tensor.order)) {
        const auto pair = pair_for_triple(tensor.order, jp);
        const auto it = std::find_if(pairs.begin(), pairs.end(), [&](const PairNorm& pn) { return pn.pair == pair; });
        triples.push_back({jp, it->estimate});
    }
    SandwichResult out;
    out.lower = assemble_lower(triples, p, tensor.order).structural_sum;
    out.upper = assemble_upper(pairs, p).structural_sum;
    out.empirical = decoupled_moment(tensor, p, mc).value;
    if (tensor.is_zero()) return out;
    out.ratio_lower = out.lower / out.empirical;
    out.ratio_upper = out.empirical / out.upper;
    return out;
}

RatioEstimate conjecture_gap(const CoeffTensor& tensor, double p, const MCConfig& mc, const OptimizerConfig& cfg) {
    const BoundReport lower = lower_sum(tensor, p, cfg);
    const MomentEstimate emp = decoupled_moment(tensor, p, mc);
    if (lower.structural_sum == 0.0) return {emp.value == 0.0 ? 1.0 : std::numeric_limits<double>::infinity(), 0.0};
    return {emp.value / lower.structural_sum, emp.std_error / lower.structural_sum};
}

GeneralPolyReport general_poly_bounds(const PolynomialSpec& f, double p, const GeneralPolyOptions& opts) {
    validate(f);
    check_p(p);
    GeneralPolyReport out;
    const HermiteExpansion h = expand(f);
    const std::vector<double> mean = gaussian_mean(h);

    MCConfig mc = opts.mc;
    mc.p_values = {1.0};
    const NormSampler deviation = [&](Stream& rng) {
        std::vector<double> x(f.vars);
        for (double& v : x) v = rng.normal();
        auto y = evaluate(f, x);
        for (int j = 0; j < f.value_dim; ++j) y[j] -= mean[j];
        return f.space.norm(y);
    };
    out.mean_deviation = empirical_moment(deviation, mc, "poly-deviation").front();

    out.lower.kind = "general_poly_lower";
    out.lower.side = BoundSide::lower;
    out.lower.p = p;
    out.lower.terms.push_back({"E||f-Ef||", "", 0.0, 1.0, out.mean_deviation.value, out.mean_deviation.std_error});

    const bool lq = f.space.is_lq();
    BoundReport lq_lower, lq_upper;
    if (lq) {
        lq_lower.kind = "general_poly_lq_lower";
        lq_lower.side = BoundSide::lower;
        lq_lower.p = p;
        lq_upper = lq_lower;
        lq_upper.kind = "general_poly_lq_upper";
        lq_upper.side = BoundSide::upper;
    }

    for (int d = 1; d <= f.degree; ++d) {
        out.derivatives.push_back(expected_gradient_tensor(f, d));
        const CoeffTensor& A = out.derivatives.back();
        const std::string prefix = "d=" + std::to_string(d) + ":";
        std::vector<TripleNorm> kept;
        for (auto& tn : triple_norm_table(A, opts.cfg)) {
            if (tn.index.subset.empty()) continue;
            out.lower.terms.push_back({prefix + triple_label(d, tn.index), "", half_size(tn.index.partition), 1.0,
                                       tn.estimate.value, tn.estimate.std_error});
            kept.push_back(std::move(tn));
        }
        out.triple_norms.push_back(std::move(kept));
        if (lq) {
            const double q = f.space.q();
            for (const auto& tn : lq_norm_table(A, opts.cfg)) {
                const std::string label = prefix + triple_label(d, tn.index);
                const double power = half_size(tn.index.partition);
                lq_lower.terms.push_back({label, "", power, std::pow(q, (1.0 - d) / 2.0), tn.estimate.value, 0.0});
                lq_upper.terms.push_back({label, "", power, std::pow(q, d - 0.5), tn.estimate.value, 0.0});
            }
        }
    }
    finalize(out.lower);

    std::optional<double> K = opts.K;
    if (!K && lq) K = type2_K(f.space, opts.calibration);
    if (K) {
        BoundReport upper = out.lower;
        upper.kind = "general_poly_upper";
        upper.side = BoundSide::upper;
        upper.factor = std::pow(*K, std::max(f.degree - 1, 0));
        upper.constants.K = K;
        upper.constants.calibration = opts.calibration;
        out.upper = std::move(upper);
    }
    if (lq) {
        finalize(lq_lower);
        finalize(lq_upper);
        out.lq_lower = std::move(lq_lower);
        out.lq_upper = std::move(lq_upper);
    }
    return out;
}

double eta(const GeneralPolyReport& report, double t) {
    if (!(t > 0.0)) throw ValidationError("eta requires t > 0");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& table : report.triple_norms) {
        for (const auto& [jp, est] : table) {
            if (jp.subset.empty() || est.value == 0.0) continue;
            best = std::min(best, std::pow(t / est.value, 2.0 / static_cast<double>(jp.partition.size())));
        }
    }
    return best;
}

}  // namespace chaos
