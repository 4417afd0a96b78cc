#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "chaos/bounds.hpp"
#include "chaos/hermite.hpp"
#include "chaos/monte_carlo.hpp"
#include "chaos/norms.hpp"
#include "chaos/tensor.hpp"
#include "chaos/value_space.hpp"

namespace chaos::io {

using Json = nlohmann::ordered_json;

// Readers throw ValidationError on malformed input, missing fields and
// unknown fields.
ValueSpace space_from_json(const Json& j);
CoeffTensor tensor_from_json(const Json& j);
PolynomialSpec polynomial_from_json(const Json& j);

Json read_json_file(const std::string& path);
CoeffTensor load_tensor(const std::string& path);
PolynomialSpec load_polynomial(const std::string& path);

Json to_json(const ValueSpace& space);
Json to_json(const CoeffTensor& tensor);
Json to_json(const ConstantPolicy& policy);
Json to_json(const NormEstimate& estimate);
Json to_json(const BoundReport& report);
Json to_json(const MomentEstimate& estimate);
Json to_json(const TailExponent& tail);
Json to_json(const RatioEstimate& ratio);
Json to_json(const SandwichResult& result);

/// Shortest decimal that round-trips the double ("nan", "inf" for non-finite).
std::string format_number(double x);
/// RFC 4180 quoting when the field holds a comma, quote or newline.
std::string csv_field(const std::string& text);

/// Header "report,partition,power,value,stderr"; one row per term.
std::string bound_csv_header();
std::string bound_csv_rows(const BoundReport& report);
/// Header "p,value,ci_low,ci_high,samples,seed".
std::string moment_csv_header();
std::string moment_csv_row(const MomentEstimate& estimate);

}  // namespace chaos::io
