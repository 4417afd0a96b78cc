#pragma once

#include <map>
#include <span>
#include <vector>

#include "chaos/tensor.hpp"
#include "chaos/value_space.hpp"

namespace chaos {

struct Monomial {
    std::vector<int> exps;      // one exponent per variable
    std::vector<double> coeff;  // value in R^m
};

/// f : R^n -> R^m, a sum of monomials of total degree <= D.
struct PolynomialSpec {
    int vars = 1;    // n
    int degree = 0;  // D
    int value_dim = 1;
    std::vector<Monomial> terms;
    ValueSpace space;
};

inline constexpr int kMaxPolyDegree = 6;
inline constexpr int kMaxPolyVars = 16;

void validate(const PolynomialSpec& spec);

/// Coefficient table keyed by exponent (or Hermite multi-degree) vector;
/// duplicate keys are summed.
using CoefficientTable = std::map<std::vector<int>, std::vector<double>>;

/// f = sum_d a_d prod_k h_{d_k}(x_k) with probabilists' Hermite polynomials.
struct HermiteExpansion {
    int vars = 1;
    int value_dim = 1;
    CoefficientTable coefficients;
};

/// h_k(x) via h_{k+1} = x h_k - k h_{k-1}.
double hermite_value(int k, double x);

CoefficientTable monomial_table(const PolynomialSpec& spec);
HermiteExpansion expand(const PolynomialSpec& spec);
/// Inverse change of basis back to monomials.
CoefficientTable to_monomials(const HermiteExpansion& expansion);

std::vector<double> evaluate(const PolynomialSpec& spec, std::span<const double> x);

/// E f(G): the constant Hermite coefficient.
std::vector<double> gaussian_mean(const HermiteExpansion& expansion);

/// E nabla^d f(G) as a symmetric order-d tensor: the entry at any multi-index
/// with occupation counts (d_1..d_n) is d_1! ... d_n! * a_{(d_1..d_n)}.
CoeffTensor expected_gradient_tensor(const PolynomialSpec& spec, int d);

bool is_tetrahedral(const PolynomialSpec& spec);

/// Homogeneous parts Q_d of a tetrahedral polynomial, lowest degree first,
/// empty parts omitted.
std::vector<PolynomialSpec> homogeneous_parts(const PolynomialSpec& spec);

}  // namespace chaos
