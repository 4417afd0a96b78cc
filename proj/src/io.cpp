#include "chaos/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "chaos/errors.hpp"

namespace chaos::io {

namespace {

void only_fields(const Json& j, const std::string& what, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ValidationError(what + ": expected a JSON object");
    const std::set<std::string> names(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!names.count(key)) throw ValidationError(what + ": unknown field \"" + key + "\"");
    }
}

const Json& field(const Json& j, const std::string& what, const char* name) {
    if (!j.contains(name)) throw ValidationError(what + ": missing field \"" + name + "\"");
    return j.at(name);
}

int int_field(const Json& j, const std::string& what, const char* name) {
    const Json& v = field(j, what, name);
    if (!v.is_number_integer()) throw ValidationError(what + ": field \"" + name + "\" must be an integer");
    return v.get<int>();
}

double number(const Json& v, const std::string& what) {
    if (!v.is_number()) throw ValidationError(what + " must be a number");
    return v.get<double>();
}

std::vector<double> number_array(const Json& v, const std::string& what) {
    if (!v.is_array()) throw ValidationError(what + " must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(number(x, what + " entry"));
    return out;
}

}  // namespace

ValueSpace space_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("space: expected a JSON object");
    const Json& kind = field(j, "space", "kind");
    if (kind == "lq") {
        only_fields(j, "space", {"kind", "q", "weights"});
        return ValueSpace::lq(number(field(j, "space", "q"), "space.q"),
                              number_array(field(j, "space", "weights"), "space.weights"));
    }
    if (kind == "finite_sup") {
        only_fields(j, "space", {"kind", "T"});
        const Json& t = field(j, "space", "T");
        if (!t.is_array()) throw ValidationError("space.T must be an array");
        std::vector<std::vector<double>> points;
        for (const auto& row : t) points.push_back(number_array(row, "space.T row"));
        return ValueSpace::finite_sup(std::move(points));
    }
    throw ValidationError("space.kind must be \"lq\" or \"finite_sup\"");
}

CoeffTensor tensor_from_json(const Json& j) {
    only_fields(j, "tensor", {"d", "n", "m", "space", "values"});
    CoeffTensor t;
    t.order = int_field(j, "tensor", "d");
    t.extent = int_field(j, "tensor", "n");
    t.value_dim = int_field(j, "tensor", "m");
    if (t.order < 1) throw ValidationError("d ≥ 1 required");
    if (t.extent < 1) throw ValidationError("n ≥ 1 required");
    if (t.value_dim < 1) throw ValidationError("m ≥ 1 required");
    t.space = space_from_json(field(j, "tensor", "space"));
    t.values = number_array(field(j, "tensor", "values"), "tensor.values");
    validate(t);
    return t;
}

PolynomialSpec polynomial_from_json(const Json& j) {
    only_fields(j, "polynomial", {"n", "D", "m", "terms", "space"});
    PolynomialSpec f;
    f.vars = int_field(j, "polynomial", "n");
    f.degree = int_field(j, "polynomial", "D");
    f.value_dim = int_field(j, "polynomial", "m");
    f.space = space_from_json(field(j, "polynomial", "space"));
    const Json& terms = field(j, "polynomial", "terms");
    if (!terms.is_array()) throw ValidationError("polynomial.terms must be an array");
    for (const auto& term : terms) {
        only_fields(term, "polynomial term", {"exps", "coeff"});
        Monomial mono;
        const Json& exps = field(term, "polynomial term", "exps");
        if (!exps.is_array()) throw ValidationError("polynomial term: exps must be an array");
        for (const auto& e : exps) {
            if (!e.is_number_integer()) throw ValidationError("polynomial term: exps must be integers");
            mono.exps.push_back(e.get<int>());
        }
        mono.coeff = number_array(field(term, "polynomial term", "coeff"), "polynomial term coeff");
        f.terms.push_back(std::move(mono));
    }
    validate(f);
    return f;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

CoeffTensor load_tensor(const std::string& path) { return tensor_from_json(read_json_file(path)); }

PolynomialSpec load_polynomial(const std::string& path) { return polynomial_from_json(read_json_file(path)); }

Json to_json(const ValueSpace& space) {
    if (space.is_lq()) return Json{{"kind", "lq"}, {"q", space.q()}, {"weights", space.weights()}};
    return Json{{"kind", "finite_sup"}, {"T", space.points()}};
}

Json to_json(const CoeffTensor& tensor) {
    return Json{{"d", tensor.order},
                {"n", tensor.extent},
                {"m", tensor.value_dim},
                {"space", to_json(tensor.space)},
                {"values", tensor.values}};
}

Json to_json(const ConstantPolicy& policy) {
    Json j{{"C_d", policy.C_d}};
    j["K"] = policy.K ? Json(*policy.K) : Json(nullptr);
    j["calibration"] = policy.calibration;
    return j;
}

Json to_json(const NormEstimate& e) {
    Json blocks = Json::array();
    for (const auto& b : e.blocks) blocks.push_back(format_partition({b}));
    return Json{{"value", e.value},
                {"stderr", e.std_error},
                {"restarts", e.restarts_used},
                {"saa_samples", e.saa_samples},
                {"eval_samples", e.eval_samples},
                {"sweeps", e.sweeps},
                {"blocks", blocks},
                {"best_vectors", e.best_vectors}};
}

Json to_json(const BoundReport& r) {
    Json terms = Json::array();
    for (const auto& t : r.terms) {
        Json row{{"partition", t.label}};
        if (!t.shape.empty()) row["shape"] = t.shape;
        row["power"] = t.power;
        if (t.weight != 1.0) row["weight"] = t.weight;
        row["value"] = t.value;
        row["stderr"] = t.std_error;
        terms.push_back(std::move(row));
    }
    return Json{{"kind", r.kind},
                {"side", to_string(r.side)},
                {"p", r.p},
                {"structural_sum", r.structural_sum},
                {"factor", r.factor},
                {"bound", r.bound()},
                {"constant_policy", to_json(r.constants)},
                {"terms", terms}};
}

Json to_json(const MomentEstimate& e) {
    return Json{{"p", e.p},           {"value", e.value},     {"ci_low", e.ci_low}, {"ci_high", e.ci_high},
                {"stderr", e.std_error}, {"samples", e.samples}, {"seed", e.seed}};
}

Json to_json(const TailExponent& t) {
    return Json{{"t", t.t}, {"exponent", t.exponent}, {"threshold", t.threshold}, {"argmin", t.argmin}};
}

Json to_json(const RatioEstimate& r) { return Json{{"value", r.value}, {"stderr", r.std_error}}; }

Json to_json(const SandwichResult& s) {
    return Json{{"empirical", s.empirical},
                {"lower_sum", s.lower},
                {"upper_sum", s.upper},
                {"ratio_lower", s.ratio_lower},
                {"ratio_upper", s.ratio_upper}};
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string bound_csv_header() { return "report,partition,power,value,stderr\n"; }

std::string bound_csv_rows(const BoundReport& report) {
    std::string out;
    for (const auto& t : report.terms) {
        out += csv_field(report.kind) + "," + csv_field(t.label) + "," + format_number(t.power) + "," +
               format_number(t.value) + "," + format_number(t.std_error) + "\n";
    }
    return out;
}

std::string moment_csv_header() { return "p,value,ci_low,ci_high,samples,seed\n"; }

std::string moment_csv_row(const MomentEstimate& e) {
    return format_number(e.p) + "," + format_number(e.value) + "," + format_number(e.ci_low) + "," +
           format_number(e.ci_high) + "," + std::to_string(e.samples) + "," + std::to_string(e.seed) + "\n";
}

}  // namespace chaos::io
