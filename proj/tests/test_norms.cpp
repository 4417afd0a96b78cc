#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chaos/errors.hpp"
#include "chaos/norms.hpp"
#include "oracles.hpp"

using namespace chaos;

namespace {

CoeffTensor scalar_tensor(int d, int n, std::vector<double> values) {
    CoeffTensor t = zeros(d, n, ValueSpace::lq_unit(2.0, 1));
    t.values = std::move(values);
    return t;
}

bool close_mc(const NormEstimate& a, double truth, double k = 3.0) {
    return std::abs(a.value - truth) <= k * a.std_error + 1e-12;
}

}  // namespace

TEST_CASE("mixed_norm examples") {
    const CoeffTensor a = scalar_tensor(1, 2, {3, 4});
    const NormEstimate e = mixed_norm(a, {{{0}}, {}});
    CHECK(e.value == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(e.std_error == 0.0);
    REQUIRE(e.best_vectors.size() == 1);
    CHECK(std::abs(e.best_vectors[0][0]) == doctest::Approx(0.6).epsilon(1e-6));

    const NormEstimate g = mixed_norm(scalar_tensor(1, 2, {1, 0}), {{}, {{0}}});
    CHECK(close_mc(g, std::sqrt(2 / std::numbers::pi)));
    CHECK(g.eval_samples == 4096);

    // Rank one with unit factors.
    const double u[2] = {0.6, 0.8}, v[2] = {1.0, 0.0}, w[2] = {std::sqrt(0.5), -std::sqrt(0.5)};
    CoeffTensor r1 = scalar_tensor(3, 2, std::vector<double>(8));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) r1.values[(i * 2 + j) * 2 + k] = u[i] * v[j] * w[k];
    CHECK(mixed_norm(r1, {{{0}, {1}, {2}}, {}}).value == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(mixed_norm(a, {{{0}}, {{0}}}), ValidationError);
    CHECK(mixed_norm(scalar_tensor(2, 2, {0, 0, 0, 0}), {{{0}}, {{1}}}).value == 0.0);
}

TEST_CASE("triple_norm") {
    const CoeffTensor a = oracle::random_tensor(2, 3, ValueSpace::lq_unit(2.0, 1), 6);
    Eigen::MatrixXd m(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = a.values[i * 3 + j];
    CHECK(triple_norm(a, {{0, 1}, {{0}, {1}}}).value == doctest::Approx(oracle::spectral(m)).epsilon(1e-8));

    const NormEstimate empty = triple_norm(a, {{}, {}});
    const NormEstimate alias = mixed_norm(a, {{}, {{0}, {1}}});
    CHECK(empty.value == alias.value);
    for (const auto& jp : enumerate_subset_partitions(2)) {
        CHECK(triple_norm(a, jp).value == mixed_norm(a, pair_for_triple(2, jp)).value);
    }
    CHECK_THROWS_AS(triple_norm(a, {{0}, {{0}, {1}}}), ValidationError);
}

TEST_CASE("lq_triple_norm") {
    CHECK(lq_triple_norm(scalar_tensor(1, 2, {3, 4}), {{}, {}}).value == doctest::Approx(5.0));
    CoeffTensor e = zeros(1, 2, ValueSpace::lq_unit(2.0, 2));
    e.values = {1, 0, 0, 1};
    CHECK(lq_triple_norm(e, {{0}, {{0}}}).value == doctest::Approx(1.0).epsilon(1e-9));

    const CoeffTensor a = oracle::random_tensor(3, 2, oracle::random_lq(3.0, 2, 1), 3);
    for (const auto& jp : enumerate_subset_partitions(3)) {
        const double base = lq_triple_norm(a, jp).value;
        CHECK(lq_triple_norm(scaled(a, -2.5), jp).value == doctest::Approx(2.5 * base).epsilon(1e-9));
    }
    CHECK_THROWS_AS(lq_triple_norm(oracle::random_tensor(1, 2, ValueSpace::finite_sup({{1}, {-1}}), 1), {{}, {}}),
                    ValidationError);
}

TEST_CASE("lq_M_norm") {
    const ValueSpace sp = oracle::random_lq(4.0, 3, 2);
    const CoeffTensor a = oracle::random_tensor(2, 2, sp, 8);
    // k = 0: the L_q norm of the pointwise l2 norm over all entries.
    std::vector<double> root(3, 0.0);
    for (std::size_t f = 0; f < a.entries(); ++f) {
        for (int j = 0; j < 3; ++j) root[j] += a.at(f)[j] * a.at(f)[j];
    }
    for (double& r : root) r = std::sqrt(r);
    CHECK(lq_M_norm(a, {{0, 1}, {}}).value == doctest::Approx(sp.norm(root)).epsilon(1e-12));
    // Fully doubled singletons: max over entries.
    double best = 0.0;
    for (std::size_t f = 0; f < a.entries(); ++f) best = std::max(best, sp.norm(a.at(f)));
    CHECK(lq_M_norm(a, {{}, {{0}, {0}, {1}, {1}}}).value == doctest::Approx(best).epsilon(1e-6));

    const double base = lq_M_norm(a, {{}, {{0}, {1}}}).value;
    CHECK(lq_M_norm(scaled(a, 3.0), {{}, {{0}, {1}}}).value == doctest::Approx(3.0 * base).epsilon(1e-9));
    CHECK_THROWS_AS(lq_M_norm(a, {{0}, {}}), ValidationError);
}

TEST_CASE("real_chaos_sup") {
    const CoeffTensor diag = scalar_tensor(2, 2, {1, 0, 0, 2});
    CHECK(real_chaos_sup(diag, {{0}, {1}}).value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(real_chaos_sup(diag, {{0, 1}}).value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    const CoeffTensor a = oracle::random_tensor(3, 2, ValueSpace::lq_unit(2.0, 1), 12);
    CHECK(real_chaos_sup(a, {{0}, {1}, {2}}).value ==
          doctest::Approx(oracle::grid_block_sup(a, {{0}, {1}, {2}})).epsilon(1e-3));
    CHECK_THROWS_AS(real_chaos_sup(zeros(1, 2, ValueSpace::lq_unit(2.0, 2)), {{0}}), ValidationError);
}

TEST_CASE("Frobenius ordering of real suprema") {
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const CoeffTensor a = oracle::random_tensor(3, 3, ValueSpace::lq_unit(2.0, 1), seed);
        const double fine = real_chaos_sup(a, {{0}, {1}, {2}}).value;
        const double fro = frobenius(a);
        for (const auto& p : enumerate_partitions(full_set(3))) {
            const double v = real_chaos_sup(a, p).value;
            CHECK(fine <= v * (1 + 1e-9));
            CHECK(v <= fro * (1 + 1e-12));
        }
    }
}

TEST_CASE("homogeneity with a fixed seed") {
    const CoeffTensor a = oracle::random_tensor(2, 3, oracle::random_lq(3.0, 2, 4), 4);
    OptimizerConfig cfg;
    cfg.eval_samples = 1024;
    cfg.saa_samples = 64;
    for (const auto& pair : enumerate_partition_pairs(2)) {
        const double v = mixed_norm(a, pair, cfg).value;
        CHECK(mixed_norm(scaled(a, -3.0), pair, cfg).value == doctest::Approx(3.0 * v).epsilon(1e-9));
    }
}

TEST_CASE("permutation equivariance") {
    const CoeffTensor a = oracle::random_tensor(3, 2, oracle::random_lq(2.0, 2, 5), 5);
    const std::vector<int> perm{2, 0, 1};
    const CoeffTensor b = permute_axes(a, perm);
    // Axis k of b is axis perm[k] of a, so block B of b corresponds to perm(B) in a.
    auto map_partition = [&](const Partition& p) {
        Partition out;
        for (const auto& blk : p) {
            IndexSet m;
            for (int e : blk) m.push_back(perm[e]);
            std::sort(m.begin(), m.end());
            out.push_back(m);
        }
        return canonical(out);
    };
    for (const auto& jp : enumerate_subset_partitions(3)) {
        IndexSet subset;
        for (int e : jp.subset) subset.push_back(perm[e]);
        std::sort(subset.begin(), subset.end());
        const double vb = lq_triple_norm(b, jp).value;
        const double va = lq_triple_norm(a, {subset, map_partition(jp.partition)}).value;
        CHECK(vb == doctest::Approx(va).epsilon(1e-4));
    }
    for (const auto& pair : enumerate_partition_pairs(3)) {
        const NormEstimate eb = mixed_norm(b, pair);
        const NormEstimate ea = mixed_norm(a, {map_partition(pair.deterministic), map_partition(pair.gaussian)});
        CHECK(std::abs(ea.value - eb.value) <= 4 * std::hypot(ea.std_error, eb.std_error) + 1e-6 * ea.value);
    }
}

TEST_CASE("reported value is nondecreasing in restarts") {
    const CoeffTensor a = oracle::random_tensor(3, 3, oracle::random_lq(4.0, 2, 6), 6);
    const PartitionPair pair{{{0}, {2}}, {{1}}};
    OptimizerConfig cfg;
    cfg.saa_samples = 32;
    cfg.eval_samples = 256;
    double previous = 0.0;
    for (int r = 1; r <= 6; ++r) {
        cfg.restarts = r;
        const double v = mixed_norm(a, pair, cfg).value;
        CHECK(v >= previous);
        previous = v;
    }
}

TEST_CASE("optimizer config validation") {
    OptimizerConfig cfg;
    cfg.restarts = 0;
    CHECK_THROWS_AS(validate(cfg), ValidationError);
    cfg.restarts = 1;
    cfg.tol = 0.0;
    CHECK_THROWS_AS(validate(cfg), ValidationError);
}

TEST_CASE("finite_sup spaces") {
    const ValueSpace linf = ValueSpace::finite_sup({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    CoeffTensor a = zeros(1, 2, linf);
    a.values = {1, 2, 3, -1};  // a_1 = (1, 2), a_2 = (3, -1)
    // sup_x max(|x1 + 3 x2|, |2 x1 - x2|) = max(sqrt(10), sqrt(5)).
    CHECK(mixed_norm(a, {{{0}}, {}}).value == doctest::Approx(std::sqrt(10.0)).epsilon(1e-9));
}
