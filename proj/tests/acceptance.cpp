// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "chaos/bounds.hpp"
#include "chaos/cli.hpp"
#include "chaos/hermite.hpp"
#include "chaos/io.hpp"
#include "chaos/monte_carlo.hpp"
#include "chaos/norms.hpp"
#include "chaos/partitions.hpp"
#include "oracles.hpp"

using namespace chaos;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

std::string fmt(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CoeffTensor scalar_tensor(int d, int n, std::vector<double> values) {
    CoeffTensor t = zeros(d, n, ValueSpace::lq_unit(2.0, 1));
    t.values = std::move(values);
    return t;
}

// 1. Partition machinery.
Outcome partitions_criterion() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const long long bell[] = {1, 1, 2, 5, 15, 52, 203};
    for (int k = 0; k <= 6; ++k) {
        const auto got = enumerate_partitions(full_set(k));
        const auto brute = oracle::brute_partitions(full_set(k));
        o.require(static_cast<long long>(got.size()) == bell[k], "Bell count at |J|=" + std::to_string(k));
        o.require(oracle::bell_recurrence(k) == bell[k], "Bell recurrence oracle");
        o.require(std::set<Partition>(got.begin(), got.end()) == std::set<Partition>(brute.begin(), brute.end()),
                  "partition sets differ from brute force at |J|=" + std::to_string(k));
    }
    const std::size_t pair_counts[] = {2, 6, 22};
    for (int d = 1; d <= 3; ++d) {
        const auto pairs = enumerate_partition_pairs(d);
        std::set<std::pair<Partition, Partition>> brute;
        for (const auto& p : oracle::brute_partitions(full_set(d))) {
            for (unsigned mask = 0; mask < (1U << p.size()); ++mask) {
                Partition det, gau;
                for (std::size_t b = 0; b < p.size(); ++b) ((mask >> b) & 1U ? det : gau).push_back(p[b]);
                brute.insert({det, gau});
            }
        }
        std::set<std::pair<Partition, Partition>> got;
        for (const auto& pr : pairs) got.insert({pr.deterministic, pr.gaussian});
        o.require(pairs.size() == pair_counts[d - 1], "pair count at d=" + std::to_string(d));
        o.require(got == brute && got.size() == pairs.size(), "pairs differ from brute force");
    }
    const double secs = seconds_since(t0);
    o.require(secs < 1.0, "runtime " + fmt(secs) + " s");
    if (o.pass) o.detail = "Bell 1..203 and pair counts 2/6/22 match brute force in " + fmt(secs, 2) + " s";
    return o;
}

// 2. Deterministic norms against grid search at n = 2, m = 1.
Outcome norm_oracle_criterion() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int compared = 0;
    double oracle_secs = 0.0;
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> uq(1.0, 6.0), uw(0.5, 2.0);
    for (int d = 1; d <= 3; ++d) {
        for (int inst = 0; inst < 20; ++inst) {
            const double q = uq(gen), w = uw(gen);
            const ValueSpace sp = ValueSpace::lq(q, {w});
            const CoeffTensor a = oracle::random_tensor(d, 2, sp, 1000 * d + inst);
            const double scale = std::pow(w, 1.0 / q);
            std::map<Partition, double> cache;
            auto grid_sup = [&](const Partition& blocks) {
                if (auto it = cache.find(blocks); it != cache.end()) return it->second;
                const auto g0 = std::chrono::steady_clock::now();
                const double g = oracle::grid_block_sup(a, blocks);
                oracle_secs += seconds_since(g0);
                cache.emplace(blocks, g);
                return g;
            };
            auto check = [&](double got, double want, const std::string& what) {
                const double rel = std::abs(got - want) / want;
                worst = std::max(worst, rel);
                ++compared;
                o.require(rel <= 1e-3, what + " rel err " + fmt(rel) + " (d=" + std::to_string(d) + ")");
            };
            for (const auto& p : enumerate_partitions(full_set(d))) {
                const double grid = grid_sup(p);
                check(mixed_norm(a, {p, {}}).value, scale * grid, "mixed_norm " + format_partition(p));
                check(real_chaos_sup(a, p).value, grid, "real_chaos_sup " + format_partition(p));
            }
            for (const auto& jp : enumerate_subset_partitions(d)) {
                check(lq_triple_norm(a, jp).value, scale * grid_sup(jp.partition),
                      "lq_triple_norm " + format_pair(pair_for_triple(d, jp)));
            }
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < 60.0, "runtime " + fmt(secs) + " s");
    if (o.pass) {
        o.detail = std::to_string(compared) + " norms on 60 instances (20 per d), worst rel err " + fmt(worst, 2) +
                   ", " + fmt(secs, 3) + " s (oracle " + fmt(oracle_secs, 3) + " s)";
    }
    return o;
}

// 3. Gaussian analytics.
Outcome gaussian_criterion() {
    Outcome o;
    MCConfig mc;
    mc.samples = 1000000;
    mc.p_values = {1.0, 2.0, 4.0};
    mc.seed = 11;
    const auto est = empirical_moment(decoupled_norm_sampler(scalar_tensor(1, 1, {1.0})), mc);
    const double truth[] = {std::sqrt(2 / std::numbers::pi), 1.0, std::pow(3.0, 0.25)};
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double z = std::abs(est[k].value - truth[k]) / est[k].std_error;
        worst = std::max(worst, z);
        o.require(z <= 3.0, "p=" + fmt(est[k].p) + " off by " + fmt(z) + " stderr");
    }
    mc.p_values = {2.0};
    for (int d = 2; d <= 3; ++d) {
        for (int inst = 0; inst < 5; ++inst) {
            const ValueSpace sp = oracle::random_lq(2.0, 3, 50 + inst);
            const CoeffTensor a = oracle::random_tensor(d, 3, sp, 100 * d + inst);
            double s = 0.0;
            for (std::size_t f = 0; f < a.entries(); ++f) {
                for (int j = 0; j < 3; ++j) s += sp.weights()[j] * a.at(f)[j] * a.at(f)[j];
            }
            mc.seed = 100 * d + inst;
            const MomentEstimate e = empirical_moment(decoupled_norm_sampler(a), mc)[0];
            const double z = std::abs(e.value - std::sqrt(s)) / e.std_error;
            worst = std::max(worst, z);
            o.require(z <= 3.0, "second-moment identity off by " + fmt(z) + " stderr at d=" + std::to_string(d));
        }
    }
    if (o.pass) o.detail = "3 Gaussian moments at N=1e6 and 10 second-moment identities; max |z| = " + fmt(worst, 3);
    return o;
}

// 4. Decoupling.
Outcome decoupling_criterion() {
    Outcome o;
    MCConfig mc;
    mc.samples = 100000;
    mc.seed = 7;
    const RatioEstimate r2 = decoupling_ratio(scalar_tensor(2, 2, {0, 1, 1, 0}), 2.0, mc);
    const RatioEstimate r1 = decoupling_ratio(scalar_tensor(1, 3, {1.0, -0.5, 2.0}), 2.0, mc);
    const double z2 = std::abs(r2.value - std::sqrt(2.0)) / r2.std_error;
    const double z1 = std::abs(r1.value - 1.0) / r1.std_error;
    o.require(z2 <= 3.0, "d=2 ratio " + fmt(r2.value) + " is " + fmt(z2) + " stderr from sqrt 2");
    o.require(z1 <= 3.0, "d=1 ratio " + fmt(r1.value) + " is " + fmt(z1) + " stderr from 1");
    if (o.pass) {
        o.detail = "d=2 ratio " + fmt(r2.value, 5) + " +- " + fmt(r2.std_error, 2) + ", d=1 ratio " + fmt(r1.value, 5) +
                   " +- " + fmt(r1.std_error, 2);
    }
    return o;
}

// 5. Sandwich with fitted constants per (d, n).
Outcome sandwich_criterion() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    OptimizerConfig cfg;
    cfg.restarts = 4;
    cfg.saa_samples = 128;
    cfg.eval_samples = 2048;
    MCConfig mc;
    mc.samples = 40000;
    mc.p_values = {2.0, 4.0, 8.0};
    const int ns[] = {2, 4, 8};
    const int per_cell = 4;
    std::string summary;
    int instances = 0;
    for (int d = 1; d <= 3; ++d) {
        std::vector<double> c_lo, c_hi;
        for (int n : ns) {
            double lo_fit = 0.0, hi_fit = 0.0;
            for (int inst = 0; inst < per_cell; ++inst) {
                const double q = inst % 2 == 0 ? 2.0 : 4.0;
                const unsigned seed = 10000 * d + 100 * n + inst;
                const CoeffTensor a = oracle::random_tensor(d, n, oracle::random_lq(q, 3, seed), seed);
                cfg.seed = seed;
                mc.seed = seed;
                const auto pairs = pair_norm_table(a, cfg);
                std::vector<TripleNorm> triples;
                for (const auto& jp : enumerate_subset_partitions(d)) {
                    const auto pr = pair_for_triple(d, jp);
                    for (const auto& pn : pairs) {
                        if (pn.pair == pr) triples.push_back({jp, pn.estimate});
                    }
                }
                const auto emp = empirical_moment(decoupled_norm_sampler(a), mc, "decoupled");
                for (std::size_t k = 0; k < mc.p_values.size(); ++k) {
                    const double p = mc.p_values[k];
                    const double lower = assemble_lower(triples, p, d).structural_sum;
                    const double upper = assemble_upper(pairs, p).structural_sum;
                    lo_fit = std::max(lo_fit, lower / emp[k].value);
                    hi_fit = std::max(hi_fit, emp[k].value / upper);
                }
                ++instances;
            }
            o.require(std::isfinite(lo_fit) && lo_fit > 0 && std::isfinite(hi_fit) && hi_fit > 0,
                      "non-finite fitted constant at d=" + std::to_string(d));
            c_lo.push_back(lo_fit);
            c_hi.push_back(hi_fit);
        }
        for (std::size_t k = 0; k + 1 < c_lo.size(); ++k) {
            const double r_lo = std::max(c_lo[k], c_lo[k + 1]) / std::min(c_lo[k], c_lo[k + 1]);
            const double r_hi = std::max(c_hi[k], c_hi[k + 1]) / std::min(c_hi[k], c_hi[k + 1]);
            o.require(r_lo <= 2.0 && r_hi <= 2.0,
                      "fitted constants at d=" + std::to_string(d) + " change by " + fmt(std::max(r_lo, r_hi)) +
                          " when n doubles from " + std::to_string(ns[k]));
        }
        summary += " d=" + std::to_string(d) + ": c=" + fmt(c_lo[0], 3) + "/" + fmt(c_lo[1], 3) + "/" + fmt(c_lo[2], 3) +
                   " C=" + fmt(c_hi[0], 3) + "/" + fmt(c_hi[1], 3) + "/" + fmt(c_hi[2], 3) + ";";
    }
    const double secs = seconds_since(t0);
    o.require(secs < 600.0, "runtime " + fmt(secs) + " s");
    const std::string base = std::to_string(instances) + " instances, fitted constants over n=2/4/8:" + summary +
                             " " + fmt(secs, 3) + " s";
    o.detail = o.pass ? base : o.detail + " |" + base;
    return o;
}

// 6. Hermite pipeline.
Outcome hermite_criterion() {
    Outcome o;
    // Integer coefficients keep every intermediate exact in floating point.
    const int n = 3;
    std::mt19937_64 gen(6);
    std::uniform_int_distribution<int> coef(-5, 5);
    std::vector<double> a(27), b(9), c(3);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const double v = coef(gen);
                const int p[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
                for (auto& t : p) a[(t[0] * n + t[1]) * n + t[2]] = v;
            }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) b[i * n + j] = b[j * n + i] = coef(gen);
    for (double& v : c) v = coef(gen);
    PolynomialSpec f;
    f.vars = n;
    f.degree = 3;
    f.value_dim = 1;
    f.space = ValueSpace::lq_unit(2.0, 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                std::vector<int> e(n, 0);
                ++e[i], ++e[j], ++e[k];
                f.terms.push_back({e, {a[(i * n + j) * n + k]}});
            }
            std::vector<int> e(n, 0);
            ++e[i], ++e[j];
            f.terms.push_back({e, {b[i * n + j]}});
        }
        std::vector<int> e(n, 0);
        ++e[i];
        f.terms.push_back({e, {c[i]}});
    }
    const CoeffTensor d1 = expected_gradient_tensor(f, 1), d2 = expected_gradient_tensor(f, 2),
                      d3 = expected_gradient_tensor(f, 3);
    for (int i = 0; i < n; ++i) {
        double s = c[i];
        for (int j = 0; j < n; ++j) s += 3 * a[(i * n + j) * n + j];
        o.require(d1.values[i] == s, "E grad f differs at i=" + std::to_string(i));
        for (int j = 0; j < n; ++j) {
            o.require(d2.values[i * n + j] == 2 * b[i * n + j], "E grad^2 f differs");
            for (int k = 0; k < n; ++k) {
                o.require(d3.values[(i * n + j) * n + k] == 6 * a[(i * n + j) * n + k], "E grad^3 f differs");
            }
        }
    }

    // Quadrature: differentiate the monomial form analytically, integrate with Gauss-Hermite.
    const auto gh = oracle::gauss_hermite(6);
    std::normal_distribution<double> g;
    double worst = 0.0;
    int tensors = 0;
    for (int vars = 1; vars <= 3; ++vars) {
        for (int D = 1; D <= 3; ++D) {
            PolynomialSpec p;
            p.vars = vars;
            p.degree = D;
            p.value_dim = 2;
            p.space = ValueSpace::lq_unit(2.0, 2);
            std::uniform_int_distribution<int> pick(0, vars - 1), deg(0, D);
            for (int t = 0; t < 10; ++t) {
                Monomial m{std::vector<int>(vars, 0), {g(gen), g(gen)}};
                const int k = deg(gen);
                for (int s = 0; s < k; ++s) ++m.exps[pick(gen)];
                p.terms.push_back(m);
            }
            for (int d = 1; d <= D; ++d) {
                const CoeffTensor A = expected_gradient_tensor(p, d);
                ++tensors;
                for (std::size_t flat = 0; flat < A.entries(); ++flat) {
                    const auto axes = unflatten(flat, d, vars);
                    std::vector<double> want(2, 0.0);
                    std::vector<int> node(vars, 0);
                    while (true) {
                        double w = 1.0;
                        std::vector<double> x(vars);
                        for (int k = 0; k < vars; ++k) {
                            x[k] = gh.nodes[node[k]];
                            w *= gh.weights[node[k]];
                        }
                        for (const auto& term : p.terms) {
                            std::vector<int> e = term.exps;
                            double cf = 1.0;
                            for (int ax : axes) cf *= e[ax]--;
                            if (cf == 0.0) continue;
                            for (int k = 0; k < vars; ++k) cf *= std::pow(x[k], e[k]);
                            for (int j = 0; j < 2; ++j) want[j] += w * cf * term.coeff[j];
                        }
                        int k = 0;
                        while (k < vars && ++node[k] == static_cast<int>(gh.nodes.size())) node[k++] = 0;
                        if (k == vars) break;
                    }
                    for (int j = 0; j < 2; ++j) {
                        const double err = std::abs(A.at(flat)[j] - want[j]);
                        worst = std::max(worst, err);
                        o.require(err <= 1e-8, "quadrature mismatch " + fmt(err));
                    }
                }
            }
        }
    }
    if (o.pass) {
        o.detail = "degree-3 example exact; " + std::to_string(tensors) + " derivative tensors vs quadrature, max err " +
                   fmt(worst, 2);
    }
    return o;
}

// 7. L_q structure.
Outcome lq_criterion() {
    Outcome o;
    double worst_ratio = 0.0;
    for (int d = 1; d <= 3; ++d) {
        for (double q : {1.0, 2.0, 4.0, 8.0}) {
            const CoeffTensor a = oracle::random_tensor(d, 2, oracle::random_lq(q, 3, d), d);
            auto [lo, hi] = lq_bound(a, 3.0);
            const double want = std::pow(q, (3.0 * d - 2) / 2);
            const double rel = std::abs(hi.bound() / lo.bound() - want) / want;
            worst_ratio = std::max(worst_ratio, rel);
            o.require(rel <= 1e-12, "lq_bound ratio off by " + fmt(rel));
        }
    }
    OptimizerConfig cfg;
    cfg.restarts = 4;
    double c_lo = std::numeric_limits<double>::infinity(), c_hi = 0.0;
    std::vector<std::pair<double, double>> scaled_ratios;  // ratio / lower band, ratio / upper band
    const int d = 2;
    for (int inst = 0; inst < 20; ++inst) {
        const double q = std::vector<double>{2.0, 4.0, 8.0}[inst % 3];
        const CoeffTensor a = oracle::random_tensor(d, 3, oracle::random_lq(q, 4, 700 + inst), 700 + inst);
        cfg.seed = inst;
        for (const auto& jp : enumerate_subset_partitions(d)) {
            const double gauss = triple_norm(a, jp, cfg).value;
            const double det = lq_triple_norm(a, jp, cfg).value;
            const double ratio = gauss / det;
            const double j = static_cast<double>(jp.subset.size());
            const double lo_band = std::pow(q, (1.0 - d + j) / 2), hi_band = std::pow(q, (d - j) / 2);
            c_lo = std::min(c_lo, ratio / lo_band);
            c_hi = std::max(c_hi, ratio / hi_band);
            scaled_ratios.push_back({ratio / lo_band, ratio / hi_band});
        }
    }
    o.require(std::isfinite(c_lo) && c_lo > 0 && std::isfinite(c_hi), "fitted constants not finite/positive");
    o.require(c_lo >= 1e-2 && c_hi <= 1e2, "fitted constants outside [1e-2, 1e2]");
    for (const auto& [l, h] : scaled_ratios) o.require(l >= c_lo && h <= c_hi, "ratio outside fitted band");
    if (o.pass) {
        o.detail = "lq_bound ratio exact (max rel err " + fmt(worst_ratio, 2) + "); 100 ratios in bands with c_lo=" +
                   fmt(c_lo) + ", c_hi=" + fmt(c_hi);
    }
    return o;
}

// 8. Exponential chaos.
Outcome exp_chaos_criterion() {
    Outcome o;
    OptimizerConfig cfg;
    cfg.restarts = 4;
    MCConfig mc;
    mc.samples = 50000;
    mc.p_values = {2.0, 4.0, 8.0};
    const std::set<std::string> shapes_want{"I0 J0 P(1,1)", "I0 J0 P(2)", "I0 J1 P(1)", "I0 J2 P()",
                                            "I1 J0 P(1)",   "I1 J1 P()",  "I2 J0 P()"};
    double c_lo = 0.0, c_hi = 0.0;
    for (int inst = 0; inst < 10; ++inst) {
        const double q = inst % 2 == 0 ? 2.0 : 4.0;
        const int n = 2 + inst % 3;
        const CoeffTensor a = oracle::random_tensor(2, n, oracle::random_lq(q, 3, 900 + inst), 900 + inst);
        cfg.seed = inst;
        mc.seed = inst;
        const auto emp = empirical_moment(exponential_norm_sampler(a, ExponentialMode::direct), mc, "exponential");
        for (std::size_t k = 0; k < mc.p_values.size(); ++k) {
            auto [lo, hi] = exp_chaos_bound(a, mc.p_values[k], cfg);
            std::set<std::string> shapes;
            for (const auto& t : lo.terms) shapes.insert(t.shape);
            o.require(shapes == shapes_want && lo.terms.size() == 10, "term shapes differ from the seven expected");
            c_lo = std::max(c_lo, lo.bound() / emp[k].value);
            c_hi = std::max(c_hi, emp[k].value / hi.bound());
        }
    }
    o.require(std::isfinite(c_lo) && c_lo > 0 && std::isfinite(c_hi) && c_hi > 0, "non-finite fitted constants");
    if (o.pass) o.detail = "7 shapes / 10 terms; 10 instances x p in {2,4,8}: c=" + fmt(c_lo) + ", C=" + fmt(c_hi);
    return o;
}

// 9. Tail exponents.
Outcome tail_criterion() {
    Outcome o;
    OptimizerConfig cfg;
    cfg.restarts = 4;
    cfg.saa_samples = 64;
    cfg.eval_samples = 1024;
    double worst_h = 0.0;
    int checked = 0;
    for (int d = 1; d <= 3; ++d) {
        for (int inst = 0; inst < 3; ++inst) {
            const CoeffTensor a = oracle::random_tensor(d, 3, oracle::random_lq(3.0, 2, 40 + inst), 40 * d + inst);
            // Brute-force admissible families, norms computed one by one.
            std::vector<std::pair<PartitionPair, double>> pairs;
            std::vector<std::pair<SubsetPartition, double>> triples;
            for (const auto& p : oracle::brute_partitions(full_set(d))) {
                for (unsigned mask = 0; mask < (1U << p.size()); ++mask) {
                    PartitionPair pr;
                    for (std::size_t b = 0; b < p.size(); ++b) ((mask >> b) & 1U ? pr.deterministic : pr.gaussian).push_back(p[b]);
                    pairs.push_back({pr, mixed_norm(a, pr, cfg).value});
                }
            }
            for (unsigned mask = 1; mask < (1U << d); ++mask) {
                IndexSet J;
                for (int k = 0; k < d; ++k) {
                    if ((mask >> k) & 1U) J.push_back(k);
                }
                for (const auto& p : oracle::brute_partitions(J)) triples.push_back({{J, p}, triple_norm(a, {J, p}, cfg).value});
            }
            for (double t : {0.1, 1.0, 5.0, 40.0}) {
                double up = std::numeric_limits<double>::infinity(), lo = up;
                for (const auto& [pr, v] : pairs) {
                    if (!pr.deterministic.empty()) up = std::min(up, std::pow(t / v, 2.0 / pr.deterministic.size()));
                }
                for (const auto& [jp, v] : triples) lo = std::min(lo, std::pow(t / v, 2.0 / jp.partition.size()));
                const double got_up = tail_exponent_upper(a, t, cfg).exponent;
                const double got_lo = tail_exponent_lower(a, t, cfg).exponent;
                o.require(got_up == up, "upper exponent differs from exhaustive enumeration");
                o.require(got_lo == lo, "lower exponent differs from exhaustive enumeration");
                for (double c : {2.0, 3.0}) {
                    const double hu = tail_exponent_upper(scaled(a, c), c * t, cfg).exponent;
                    const double hl = tail_exponent_lower(scaled(a, c), c * t, cfg).exponent;
                    const double e = std::max(std::abs(hu - got_up) / got_up, std::abs(hl - got_lo) / got_lo);
                    worst_h = std::max(worst_h, e);
                    o.require(e <= 1e-12, "homogeneity error " + fmt(e));
                }
                ++checked;
            }
        }
    }
    if (o.pass) {
        o.detail = std::to_string(checked) + " (instance, t) cases match exhaustive enumeration; homogeneity rel err " +
                   fmt(worst_h, 2);
    }
    return o;
}

// 10. CLI determinism.
Outcome determinism_criterion() {
    Outcome o;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "chaos_bounds_acceptance";
    fs::create_directories(dir);
    const std::string tensor = (dir / "a.json").string(), poly = (dir / "f.json").string();
    std::ofstream(tensor) << io::to_json(oracle::random_tensor(2, 3, oracle::random_lq(4.0, 2, 3), 3)).dump();
    std::ofstream(poly) << R"({"n":2,"D":2,"m":2,"terms":[{"exps":[1,1],"coeff":[1,0.5]},{"exps":[2,0],"coeff":[0,1]},)"
                           R"({"exps":[0,1],"coeff":[2,-1]}],"space":{"kind":"lq","q":4,"weights":[1,1]}})";
    const std::vector<std::vector<std::string>> commands{
        {"norm", "--tensor", tensor, "--pair", "{1}|{2}"},
        {"bound", "--tensor", tensor, "--p", "2", "4", "--side", "both"},
        {"bound", "--tensor", tensor, "--p", "3", "--side", "lq", "--format", "csv"},
        {"tail", "--tensor", tensor, "--t", "0.5", "2"},
        {"exp-bound", "--tensor", tensor, "--p", "2"},
        {"poly", "--poly", poly, "--p", "2", "--t", "1", "--samples", "20000"},
        {"empirical", "--tensor", tensor, "--p", "1", "2", "4", "--samples", "50000"},
        {"check", "--tensor", tensor, "--what", "sandwich", "--p", "2", "--samples", "20000"},
        {"check", "--tensor", tensor, "--what", "alpha-plus", "--samples", "20000"},
        {"report", "--tensor", tensor, "--p", "2", "--t", "1", "--samples", "20000"},
    };
    auto run = [](std::vector<std::string> args, const char* threads) {
        setenv("CHAOS_BOUNDS_THREADS", threads, 1);
        args.insert(args.begin(), "chaos_bounds");
        args.push_back("--seed");
        args.push_back("17");
        args.push_back("--no-meta");
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return std::make_pair(code, out.str());
    };
    for (const auto& cmd : commands) {
        const auto a = run(cmd, "1");
        const auto b = run(cmd, "1");
        const auto c = run(cmd, "8");
        o.require(a.first == 0, cmd[0] + " exited with " + std::to_string(a.first));
        o.require(!a.second.empty() && a.second == b.second, cmd[0] + " differs between identical runs");
        o.require(a.second == c.second, cmd[0] + " differs between 1 and 8 threads");
    }
    unsetenv("CHAOS_BOUNDS_THREADS");
    if (o.pass) o.detail = std::to_string(commands.size()) + " commands byte-identical over 2 single-threaded and 1 8-thread run";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    // Optional arguments select criteria by number.
    std::vector<std::string> only(argv + 1, argv + argc);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 partition machinery", partitions_criterion},
        {"2 norm oracles", norm_oracle_criterion},
        {"3 Gaussian analytics", gaussian_criterion},
        {"4 decoupling", decoupling_criterion},
        {"5 sandwich", sandwich_criterion},
        {"6 Hermite pipeline", hermite_criterion},
        {"7 L_q structure", lq_criterion},
        {"8 exponential chaos", exp_chaos_criterion},
        {"9 tail exponents", tail_criterion},
        {"10 determinism", determinism_criterion},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), name.substr(0, name.find(' '))) == only.end()) continue;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("%s [%s] %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
