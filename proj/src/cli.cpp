#include "chaos/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "chaos/bounds.hpp"
#include "chaos/errors.hpp"
#include "chaos/io.hpp"
#include "chaos/parallel.hpp"

namespace chaos::cli {

namespace {

using io::Json;

const std::vector<std::string> kCommands = {"norm", "bound", "tail", "exp-bound", "poly", "empirical", "check", "report"};

struct RunConfig {
    std::string command;
    std::string tensor_path;
    std::string poly_path;
    std::string pair;
    std::vector<double> p{2.0};
    std::optional<double> q;
    std::optional<double> K;
    double calibration = 1.0;
    std::vector<double> t;
    std::uint64_t seed = 0;
    long long samples = 100000;
    int restarts = 8;
    int saa_samples = 256;
    int eval_samples = 4096;
    std::string out;
    std::string format = "json";
    bool no_meta = false;
    std::string side;
    std::string what = "sandwich";
    std::string sampler = "decoupled";
    bool full_m = false;
};

OptimizerConfig optimizer_config(const RunConfig& rc) {
    OptimizerConfig cfg;
    cfg.restarts = rc.restarts;
    cfg.saa_samples = rc.saa_samples;
    cfg.eval_samples = rc.eval_samples;
    cfg.seed = rc.seed;
    validate(cfg);
    return cfg;
}

MCConfig mc_config(const RunConfig& rc) {
    MCConfig mc;
    mc.samples = rc.samples;
    mc.p_values = rc.p;
    mc.seed = rc.seed;
    validate(mc);
    return mc;
}

ValueSpace override_q(const ValueSpace& space, const std::optional<double>& q) {
    if (!q) return space;
    if (!space.is_lq()) throw ValidationError("--q applies to lq value spaces only");
    return ValueSpace::lq(*q, space.weights());
}

CoeffTensor tensor_input(const RunConfig& rc) {
    if (rc.tensor_path.empty()) throw ValidationError(rc.command + " requires --tensor");
    CoeffTensor t = io::load_tensor(rc.tensor_path);
    t.space = override_q(t.space, rc.q);
    return t;
}

PolynomialSpec poly_input(const RunConfig& rc) {
    if (rc.poly_path.empty()) throw ValidationError(rc.command + " requires --poly");
    PolynomialSpec f = io::load_polynomial(rc.poly_path);
    f.space = override_q(f.space, rc.q);
    return f;
}

ConstantPolicy policy(const RunConfig& rc) {
    ConstantPolicy cp;
    cp.K = rc.K;
    cp.calibration = rc.calibration;
    return cp;
}

// Output assembled by a command: JSON always, CSV when requested.
struct Output {
    Json results = Json::object();
    std::string csv;
};

std::vector<TripleNorm> triples_from_pairs(const std::vector<PairNorm>& pairs, int d) {
    std::vector<TripleNorm> out;
    for (const auto& jp : enumerate_subset_partitions(d)) {
        const auto pair = pair_for_triple(d, jp);
        const auto it = std::find_if(pairs.begin(), pairs.end(), [&](const PairNorm& pn) { return pn.pair == pair; });
        out.push_back({jp, it->estimate});
    }
    return out;
}

void add_report(Output& o, Json& list, BoundReport r, const ConstantPolicy& cp) {
    r.constants.C_d = cp.C_d;
    r.constants.calibration = cp.calibration;
    if (!r.constants.K) r.constants.K = cp.K;
    o.csv += io::bound_csv_rows(r);
    list.push_back(io::to_json(r));
}

Output cmd_norm(const RunConfig& rc) {
    const CoeffTensor a = tensor_input(rc);
    if (rc.pair.empty()) throw ValidationError("norm requires --pair");
    const PartitionPair pair = parse_pair(rc.pair);
    validate_pair(pair, a.order);
    const NormEstimate est = mixed_norm(a, pair, optimizer_config(rc));
    Output o;
    o.results["pair"] = format_pair(pair);
    o.results["estimate"] = io::to_json(est);
    o.csv = "partition,value,stderr\n" + io::csv_field(format_pair(pair)) + "," + io::format_number(est.value) +
            "," + io::format_number(est.std_error) + "\n";
    return o;
}

Output cmd_bound(const RunConfig& rc) {
    const CoeffTensor a = tensor_input(rc);
    const OptimizerConfig cfg = optimizer_config(rc);
    const ConstantPolicy cp = policy(rc);
    const std::string side = rc.side.empty() ? "both" : rc.side;
    Output o;
    o.csv = io::bound_csv_header();
    Json reports = Json::array();
    if (side == "lq") {
        for (double p : rc.p) {
            auto [lo, hi] = lq_bound(a, p, cfg);
            add_report(o, reports, lo, cp);
            add_report(o, reports, hi, cp);
        }
    } else {
        const auto pairs = pair_norm_table(a, cfg);
        const auto triples = triples_from_pairs(pairs, a.order);
        for (double p : rc.p) {
            if (side == "lower" || side == "both") add_report(o, reports, assemble_lower(triples, p, a.order), cp);
            if (side == "upper" || side == "both") add_report(o, reports, assemble_upper(pairs, p), cp);
            if (side == "special") {
                const double K = rc.K ? *rc.K : type2_K(a.space, rc.calibration);
                if (!(K >= 1.0)) throw ValidationError("K >= 1 required");
                BoundReport r = assemble_lower(triples, p, a.order);
                r.kind = "special_space_upper";
                r.side = BoundSide::upper;
                r.factor = std::pow(K, a.order - 1);
                r.constants.K = K;
                add_report(o, reports, r, cp);
            }
        }
    }
    o.results["reports"] = reports;
    return o;
}

const char* kUpperTemplate = "P(||S'|| >= C(d) * (threshold + t)) <= 2 * exp(-exponent / C(d))";
const char* kLowerCaveat =
    "the lower tail is stated for P(||S|| >= E||S|| / C(d) + t); C(d) is unknown, so only the exponent is reported";

Output cmd_tail(const RunConfig& rc) {
    const CoeffTensor a = tensor_input(rc);
    if (rc.t.empty()) throw ValidationError("tail requires --t");
    const std::string side = rc.side.empty() ? "both" : rc.side;
    if (side != "upper" && side != "lower" && side != "both") throw ValidationError("--side must be upper, lower or both");
    const auto pairs = pair_norm_table(a, optimizer_config(rc));
    const auto triples = triples_from_pairs(pairs, a.order);
    Output o;
    o.csv = "side,t,exponent,threshold,argmin\n";
    Json upper = Json::array(), lower = Json::array();
    for (double t : rc.t) {
        if (side != "lower") {
            const TailExponent e = tail_exponent_upper(pairs, t);
            upper.push_back(io::to_json(e));
            o.csv += "upper," + io::format_number(t) + "," + io::format_number(e.exponent) + "," +
                     io::format_number(e.threshold) + "," + io::csv_field(e.argmin) + "\n";
        }
        if (side != "upper") {
            const TailExponent e = tail_exponent_lower(triples, t);
            lower.push_back(io::to_json(e));
            o.csv += "lower," + io::format_number(t) + "," + io::format_number(e.exponent) + ",," +
                     io::csv_field(e.argmin) + "\n";
        }
    }
    if (side != "lower") o.results["upper"] = Json{{"template", kUpperTemplate}, {"rows", upper}};
    if (side != "upper") o.results["lower"] = Json{{"caveat", kLowerCaveat}, {"rows", lower}};
    return o;
}

Output cmd_exp_bound(const RunConfig& rc) {
    const CoeffTensor a = tensor_input(rc);
    const OptimizerConfig cfg = optimizer_config(rc);
    const ConstantPolicy cp = policy(rc);
    Output o;
    o.csv = io::bound_csv_header();
    Json reports = Json::array();
    for (double p : rc.p) {
        auto [lo, hi] = exp_chaos_bound(a, p, cfg, {rc.full_m});
        add_report(o, reports, lo, cp);
        add_report(o, reports, hi, cp);
    }
    o.results["reports"] = reports;
    return o;
}

Output cmd_poly(const RunConfig& rc) {
    const PolynomialSpec f = poly_input(rc);
    GeneralPolyOptions opts;
    opts.K = rc.K;
    opts.calibration = rc.calibration;
    opts.cfg = optimizer_config(rc);
    opts.mc = mc_config(rc);
    const ConstantPolicy cp = policy(rc);
    Output o;
    o.csv = io::bound_csv_header();
    Json reports = Json::array(), derivatives = Json::array(), deviation;
    for (std::size_t k = 0; k < rc.p.size(); ++k) {
        const GeneralPolyReport g = general_poly_bounds(f, rc.p[k], opts);
        if (k == 0) {
            for (const auto& d : g.derivatives) derivatives.push_back(io::to_json(d));
            deviation = io::to_json(g.mean_deviation);
            Json etas = Json::array();
            for (double t : rc.t) etas.push_back(Json{{"t", t}, {"eta", eta(g, t)}});
            o.results["eta"] = etas;
        }
        add_report(o, reports, g.lower, cp);
        if (g.upper) add_report(o, reports, *g.upper, cp);
        if (g.lq_lower) add_report(o, reports, *g.lq_lower, cp);
        if (g.lq_upper) add_report(o, reports, *g.lq_upper, cp);
    }
    o.results["derivatives"] = derivatives;
    o.results["mean_deviation"] = deviation;
    o.results["reports"] = reports;
    return o;
}

NormSampler pick_sampler(const RunConfig& rc, const CoeffTensor& a) {
    if (rc.sampler == "decoupled") return decoupled_norm_sampler(a);
    if (rc.sampler == "undecoupled") return undecoupled_norm_sampler(a, Summation::increasing);
    if (rc.sampler == "undecoupled-full") return undecoupled_norm_sampler(a, Summation::full);
    if (rc.sampler == "exponential") return exponential_norm_sampler(a, ExponentialMode::direct);
    if (rc.sampler == "exponential-gg") return exponential_norm_sampler(a, ExponentialMode::gaussian_product);
    throw ValidationError("unknown --sampler " + rc.sampler);
}

Output cmd_empirical(const RunConfig& rc) {
    const CoeffTensor a = tensor_input(rc);
    const auto moments = empirical_moment(pick_sampler(rc, a), mc_config(rc), rc.sampler);
    Output o;
    o.csv = io::moment_csv_header();
    Json rows = Json::array();
    for (const auto& m : moments) {
        rows.push_back(io::to_json(m));
        o.csv += io::moment_csv_row(m);
    }
    o.results["sampler"] = rc.sampler;
    o.results["moments"] = rows;
    return o;
}

Output cmd_check(const RunConfig& rc) {
    const CoeffTensor a = tensor_input(rc);
    const OptimizerConfig cfg = optimizer_config(rc);
    MCConfig mc = mc_config(rc);
    Output o;
    o.csv = "what,p,value,stderr\n";
    Json rows = Json::array();
    auto row = [&](double p, double value, double se) {
        o.csv += rc.what + "," + io::format_number(p) + "," + io::format_number(value) + "," + io::format_number(se) + "\n";
    };
    if (rc.what == "sandwich") {
        for (double p : rc.p) {
            const SandwichResult s = sandwich_check(a, p, mc, cfg);
            Json j = io::to_json(s);
            j["p"] = p;
            rows.push_back(j);
            o.csv += "sandwich_lower," + io::format_number(p) + "," + io::format_number(s.ratio_lower) + ",\n";
            o.csv += "sandwich_upper," + io::format_number(p) + "," + io::format_number(s.ratio_upper) + ",\n";
        }
    } else if (rc.what == "decoupling" || rc.what == "gap") {
        for (double p : rc.p) {
            const RatioEstimate r = rc.what == "gap" ? conjecture_gap(a, p, mc, cfg) : decoupling_ratio(a, p, mc);
            Json j = io::to_json(r);
            j["p"] = p;
            rows.push_back(j);
            row(p, r.value, r.std_error);
        }
    } else if (rc.what == "hypercontractivity") {
        if (rc.p.size() != 2) throw ValidationError("hypercontractivity takes exactly two --p values: p and q");
        const RatioEstimate r = hypercontractivity_ratio(a, rc.p[0], rc.p[1], mc);
        Json j = io::to_json(r);
        j["p"] = rc.p[0];
        j["q"] = rc.p[1];
        rows.push_back(j);
        row(rc.p[0], r.value, r.std_error);
    } else if (rc.what == "alpha-plus") {
        const RatioEstimate r = alpha_plus_ratio(a, mc);
        rows.push_back(io::to_json(r));
        row(1.0, r.value, r.std_error);
    } else if (rc.what == "takie") {
        if (rc.pair.empty()) throw ValidationError("takie requires --pair");
        const double r = takie_ratio(a, parse_pair(rc.pair), cfg, rc.K, rc.calibration);
        rows.push_back(Json{{"pair", rc.pair}, {"value", r}});
        row(0.0, r, 0.0);
    } else {
        throw ValidationError("--what must be sandwich, decoupling, hypercontractivity, alpha-plus, gap or takie");
    }
    o.results["what"] = rc.what;
    o.results["rows"] = rows;
    return o;
}

Output cmd_report(const RunConfig& rc) {
    const CoeffTensor a = tensor_input(rc);
    const OptimizerConfig cfg = optimizer_config(rc);
    const MCConfig mc = mc_config(rc);
    const ConstantPolicy cp = policy(rc);
    Output o;
    o.csv = io::bound_csv_header();
    const auto pairs = pair_norm_table(a, cfg);
    const auto triples = triples_from_pairs(pairs, a.order);
    Json reports = Json::array();
    for (double p : rc.p) {
        add_report(o, reports, assemble_lower(triples, p, a.order), cp);
        add_report(o, reports, assemble_upper(pairs, p), cp);
    }
    if (a.space.is_lq()) {
        for (double p : rc.p) {
            auto [lo, hi] = lq_bound(a, p, cfg);
            add_report(o, reports, lo, cp);
            add_report(o, reports, hi, cp);
            if (a.space.q() >= 2.0) {
                auto [elo, ehi] = exp_chaos_bound(a, p, cfg);
                add_report(o, reports, elo, cp);
                add_report(o, reports, ehi, cp);
            }
        }
    }
    o.results["reports"] = reports;

    Json tails = Json::array();
    for (double t : rc.t) {
        tails.push_back(Json{{"t", t},
                             {"upper", io::to_json(tail_exponent_upper(pairs, t))},
                             {"lower", io::to_json(tail_exponent_lower(triples, t))}});
    }
    o.results["tail"] = Json{{"template", kUpperTemplate}, {"caveat", kLowerCaveat}, {"rows", tails}};

    Json moments = Json::array();
    for (const auto& m : empirical_moment(decoupled_norm_sampler(a), mc, "decoupled")) moments.push_back(io::to_json(m));
    o.results["moments"] = moments;
    Json sandwich = Json::array();
    for (double p : rc.p) {
        Json j = io::to_json(sandwich_check(a, p, mc, cfg));
        j["p"] = p;
        sandwich.push_back(j);
    }
    o.results["sandwich"] = sandwich;
    return o;
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void add_options(CLI::App& sub, RunConfig& rc) {
    sub.add_option("--tensor", rc.tensor_path, "coefficient tensor (JSON)")->check(CLI::ExistingFile);
    sub.add_option("--poly", rc.poly_path, "polynomial (JSON)")->check(CLI::ExistingFile);
    sub.add_option("--pair", rc.pair, "partition pair \"P'|P\", e.g. \"{1}|{2},{3}\"");
    sub.add_option("--p", rc.p, "moment orders")->expected(1, -1);
    sub.add_option("--q", rc.q, "override q of an lq value space");
    sub.add_option("--K", rc.K, "constant of the (alpha+) condition");
    sub.add_option("--calibration", rc.calibration, "c in K = c sqrt(q)");
    sub.add_option("--t", rc.t, "tail levels")->expected(1, -1);
    sub.add_option("--seed", rc.seed, "random seed");
    sub.add_option("--samples", rc.samples, "Monte-Carlo samples");
    sub.add_option("--restarts", rc.restarts, "optimizer restarts");
    sub.add_option("--saa-samples", rc.saa_samples, "frozen Gaussian draws per restart");
    sub.add_option("--eval-samples", rc.eval_samples, "fresh draws for reported norm values");
    sub.add_option("--out", rc.out, "output file (default stdout)");
    sub.add_option("--format", rc.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub.add_flag("--no-meta", rc.no_meta, "omit timestamp and thread count");
}

}  // namespace

std::string usage() {
    return "usage: chaos_bounds <command> [options]\n"
           "commands:\n"
           "  norm       one mixed norm ||A||_{P'|P} (--tensor, --pair)\n"
           "  bound      moment bound sums (--side lower|upper|both|special|lq)\n"
           "  tail       tail exponents for a grid of --t values (--side upper|lower|both)\n"
           "  exp-bound  moment bounds for exponential chaos (lq spaces, q >= 2)\n"
           "  poly       Hermite expansion and general-polynomial bounds (--poly)\n"
           "  empirical  Monte-Carlo moments (--sampler decoupled|undecoupled|undecoupled-full|exponential|exponential-gg)\n"
           "  check      diagnostics (--what sandwich|decoupling|hypercontractivity|alpha-plus|gap|takie)\n"
           "  report     all bounds, tails, moments and sandwich ratios in one document\n"
           "run 'chaos_bounds <command> --help' for the options of a command\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.size() < 2 || std::find(kCommands.begin(), kCommands.end(), args[1]) == kCommands.end()) {
        if (args.size() >= 2 && (args[1] == "--help" || args[1] == "-h")) {
            out << usage();
            return kExitOk;
        }
        err << usage();
        return kExitUsage;
    }

    RunConfig rc;
    rc.command = args[1];
    CLI::App app{"chaos_bounds"};
    app.require_subcommand(1);
    CLI::App* sub = app.add_subcommand(rc.command);
    add_options(*sub, rc);
    if (rc.command == "bound" || rc.command == "tail") sub->add_option("--side", rc.side, "which side");
    if (rc.command == "check") sub->add_option("--what", rc.what, "diagnostic");
    if (rc.command == "empirical") sub->add_option("--sampler", rc.sampler, "chaos to sample");
    if (rc.command == "exp-bound") sub->add_flag("--full-m", rc.full_m, "sum over the whole covering family");

    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << sub->help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        Output o;
        if (rc.command == "norm") o = cmd_norm(rc);
        else if (rc.command == "bound") o = cmd_bound(rc);
        else if (rc.command == "tail") o = cmd_tail(rc);
        else if (rc.command == "exp-bound") o = cmd_exp_bound(rc);
        else if (rc.command == "poly") o = cmd_poly(rc);
        else if (rc.command == "empirical") o = cmd_empirical(rc);
        else if (rc.command == "check") o = cmd_check(rc);
        else o = cmd_report(rc);

        std::string text;
        if (rc.format == "csv") {
            text = o.csv;
        } else {
            Json doc{{"command", rc.command}};
            doc["constant_policy"] = io::to_json(policy(rc));
            doc["config"] = Json{{"seed", rc.seed},
                                 {"samples", rc.samples},
                                 {"restarts", rc.restarts},
                                 {"saa_samples", rc.saa_samples},
                                 {"eval_samples", rc.eval_samples},
                                 {"p", rc.p}};
            if (!rc.no_meta) doc["meta"] = Json{{"generated_at", timestamp()}, {"threads", thread_count()}};
            doc["results"] = std::move(o.results);
            text = doc.dump(2) + "\n";
        }
        if (rc.out.empty()) {
            out << text;
        } else {
            std::ofstream file(rc.out);
            if (!file) throw ValidationError("cannot write " + rc.out);
            file << text;
        }
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

int run(int argc, char** argv) {
    return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace chaos::cli
