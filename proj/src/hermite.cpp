#include "chaos/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chaos/errors.hpp"

namespace chaos {

void validate(const PolynomialSpec& spec) {
    if (spec.vars < 1 || spec.vars > kMaxPolyVars) {
        throw ValidationError("polynomial variable count must be in [1, " + std::to_string(kMaxPolyVars) + "]");
    }
    if (spec.degree < 0 || spec.degree > kMaxPolyDegree) {
        throw ValidationError("polynomial degree must be in [0, " + std::to_string(kMaxPolyDegree) + "]");
    }
    if (spec.value_dim < 1) throw ValidationError("m >= 1 required");
    if (spec.space.dim() != spec.value_dim) throw ValidationError("space dimension ≠ m");
    for (const auto& t : spec.terms) {
        if (static_cast<int>(t.exps.size()) != spec.vars) throw ValidationError("exponent vector length ≠ n");
        if (static_cast<int>(t.coeff.size()) != spec.value_dim) throw ValidationError("coefficient length ≠ m");
        int total = 0;
        for (int e : t.exps) {
            if (e < 0) throw ValidationError("exponents must be nonnegative");
            total += e;
        }
        if (total > spec.degree) throw ValidationError("term degree " + std::to_string(total) + " exceeds D");
        for (double c : t.coeff) {
            if (!std::isfinite(c)) throw ValidationError("coefficients must be finite");
        }
    }
}

double hermite_value(int k, double x) {
    if (k < 0) throw ValidationError("Hermite degree must be >= 0");
    if (k == 0) return 1.0;
    double prev = 1.0, cur = x;
    for (int j = 1; j < k; ++j) {
        const double next = x * cur - j * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

double factorial(int k) {
    double out = 1.0;
    for (int i = 2; i <= k; ++i) out *= i;
    return out;
}

// x^e = sum_i e! / (2^i i! (e-2i)!) h_{e-2i}(x); the inverse has signs (-1)^i.
std::vector<std::pair<int, double>> change_basis(int e, bool to_hermite) {
    std::vector<std::pair<int, double>> out;
    for (int i = 0; 2 * i <= e; ++i) {
        double c = factorial(e) / (std::ldexp(1.0, i) * factorial(i) * factorial(e - 2 * i));
        if (!to_hermite && (i % 2)) c = -c;
        out.emplace_back(e - 2 * i, c);
    }
    return out;
}

void add_into(CoefficientTable& table, const std::vector<int>& key, const std::vector<double>& coeff, double scale) {
    auto [it, inserted] = table.try_emplace(key, coeff.size(), 0.0);
    for (std::size_t j = 0; j < coeff.size(); ++j) it->second[j] += scale * coeff[j];
}

// Re-expands every entry of `table` variable by variable.
CoefficientTable transform(const CoefficientTable& table, int vars, bool to_hermite) {
    CoefficientTable out;
    for (const auto& [exps, coeff] : table) {
        std::vector<std::vector<std::pair<int, double>>> per_var(vars);
        for (int k = 0; k < vars; ++k) per_var[k] = change_basis(exps[k], to_hermite);
        std::vector<int> key(vars);
        auto rec = [&](auto& self, int k, double scale) -> void {
            if (k == vars) {
                add_into(out, key, coeff, scale);
                return;
            }
            for (const auto& [deg, c] : per_var[k]) {
                key[k] = deg;
                self(self, k + 1, scale * c);
            }
        };
        rec(rec, 0, 1.0);
    }
    return out;
}

}  // namespace

CoefficientTable monomial_table(const PolynomialSpec& spec) {
    CoefficientTable out;
    for (const auto& t : spec.terms) add_into(out, t.exps, t.coeff, 1.0);
    return out;
}

HermiteExpansion expand(const PolynomialSpec& spec) {
    validate(spec);
    HermiteExpansion h;
    h.vars = spec.vars;
    h.value_dim = spec.value_dim;
    h.coefficients = transform(monomial_table(spec), spec.vars, true);
    return h;
}

CoefficientTable to_monomials(const HermiteExpansion& expansion) {
    return transform(expansion.coefficients, expansion.vars, false);
}

std::vector<double> evaluate(const PolynomialSpec& spec, std::span<const double> x) {
    if (static_cast<int>(x.size()) != spec.vars) throw ValidationError("point dimension ≠ n");
    std::vector<double> out(spec.value_dim, 0.0);
    for (const auto& t : spec.terms) {
        double w = 1.0;
        for (int k = 0; k < spec.vars; ++k) {
            for (int e = 0; e < t.exps[k]; ++e) w *= x[k];
        }
        for (int j = 0; j < spec.value_dim; ++j) out[j] += w * t.coeff[j];
    }
    return out;
}

std::vector<double> gaussian_mean(const HermiteExpansion& expansion) {
    const auto it = expansion.coefficients.find(std::vector<int>(expansion.vars, 0));
    if (it == expansion.coefficients.end()) return std::vector<double>(expansion.value_dim, 0.0);
    return it->second;
}

CoeffTensor expected_gradient_tensor(const PolynomialSpec& spec, int d) {
    validate(spec);
    if (d < 1 || d > spec.degree) {
        throw ValidationError("derivative order " + std::to_string(d) + " outside [1, D = " +
                              std::to_string(spec.degree) + "]");
    }
    const HermiteExpansion h = expand(spec);
    CoeffTensor out = zeros(d, spec.vars, spec.space);
    const std::size_t count = out.entries();
    std::vector<int> counts(spec.vars);
    for (std::size_t f = 0; f < count; ++f) {
        std::fill(counts.begin(), counts.end(), 0);
        for (int i : unflatten(f, d, spec.vars)) ++counts[i];
        const auto it = h.coefficients.find(counts);
        if (it == h.coefficients.end()) continue;
        double mult = 1.0;
        for (int c : counts) mult *= factorial(c);
        auto dst = out.at(f);
        for (int j = 0; j < spec.value_dim; ++j) dst[j] = mult * it->second[j];
    }
    return out;
}

bool is_tetrahedral(const PolynomialSpec& spec) {
    return std::all_of(spec.terms.begin(), spec.terms.end(), [](const Monomial& t) {
        return std::all_of(t.exps.begin(), t.exps.end(), [](int e) { return e <= 1; });
    });
}

std::vector<PolynomialSpec> homogeneous_parts(const PolynomialSpec& spec) {
    validate(spec);
    if (!is_tetrahedral(spec)) throw ValidationError("homogeneous_parts requires a tetrahedral polynomial");
    std::vector<PolynomialSpec> parts;
    for (int deg = 0; deg <= spec.degree; ++deg) {
        PolynomialSpec part = spec;
        part.degree = deg;
        part.terms.clear();
        for (const auto& t : spec.terms) {
            if (std::accumulate(t.exps.begin(), t.exps.end(), 0) == deg) part.terms.push_back(t);
        }
        if (!part.terms.empty()) parts.push_back(std::move(part));
    }
    return parts;
}

}  // namespace chaos
