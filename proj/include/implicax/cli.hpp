#pragma once

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "implicax/errors.hpp"
#include "implicax/pipeline.hpp"
#include "implicax/problem.hpp"
#include "implicax/resultants.hpp"

namespace implicax {

using json = nlohmann::json;

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitParse = 2,
    kExitHypothesis = 3,
    kExitConsistency = 4,
};

enum class OutputFormat { Text, Json };

struct CommonFlags {
    std::string file;
    std::string format = "text";
    std::optional<std::uint64_t> seed;
};

// -- document assembly --------------------------------------------------------

template <FieldElement K>
json to_json(const BasePointReport<K>& r) {
    json syz;
    const auto& s = r.syzygetic;
    syz["verdict"] = to_string(s.verdict);
    syz["ideal_verdict"] = to_string(s.ideal_verdict);
    syz["nu_min"] = s.nu_min;
    syz["nu_max"] = s.nu_max;
    syz["failing_nu"] = s.failing_nu ? json(*s.failing_nu) : json(nullptr);
    syz["witness"] = json::array();
    for (const auto& w : s.witness) syz["witness"].push_back(w.to_string());
    syz["generators"] = json::array();
    for (const auto& g : s.generators) syz["generators"].push_back(g.to_string());
    syz["degrees"] = json::array();
    for (const auto& d : s.degrees)
        syz["degrees"].push_back({{"nu", d.nu},
                                  {"boundaries", d.boundaries},
                                  {"cycles_in_tf", d.cycles_in_tf},
                                  {"cycles_in_ideal", d.cycles_in_ideal}});
    json j;
    j["content_gcd"] = r.content_gcd.to_string();
    j["base_locus_dim"] = r.base_locus_dim;
    j["e_total"] = r.e_total;
    j["predicted_degree"] = r.predicted_degree ? json(*r.predicted_degree) : json(nullptr);
    j["generically_finite"] = r.generically_finite;
    j["nu_bound"] = r.nu_bound;
    j["hilbert"] = {{"start", r.profile.window_start}, {"values", r.profile.window}};
    j["syzygetic"] = syz;
    return j;
}

inline json input_json(const ProblemFile& p, const std::vector<std::string>& t_vars) {
    return {{"field", p.field.to_string()}, {"x_vars", p.x_vars}, {"t_vars", t_vars}, {"polys", p.polys}};
}

inline json empty_document(const std::string& command) {
    json doc;
    doc["command"] = command;
    doc["implicit"] = nullptr;
    doc["reduced"] = nullptr;
    doc["exponent"] = nullptr;
    doc["degree"] = nullptr;
    doc["nu"] = nullptr;
    doc["method"] = nullptr;
    doc["diagnostics"] = nullptr;
    doc["warnings"] = json::array();
    return doc;
}

template <FieldElement K>
json matrix_json(const PolyMat<K>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
        rows.push_back(row);
    }
    return rows;
}

namespace detail {

inline std::string scalar_text(const json& v) {
    if (v.is_null()) return "none";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

inline bool all_scalars(const json& a) {
    for (const auto& v : a)
        if (v.is_object() || v.is_array()) return false;
    return true;
}

inline void flatten(const json& v, const std::string& key, std::ostream& out) {
    if (v.is_object()) {
        for (const auto& [k, sub] : v.items()) flatten(sub, key.empty() ? k : key + "." + k, out);
    } else if (v.is_array() && all_scalars(v)) {
        out << key << ": [";
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar_text(v[i]);
        out << "]\n";
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], key + "[" + std::to_string(i) + "]", out);
    } else {
        out << key << ": " << scalar_text(v) << "\n";
    }
}

} // namespace detail

/// `key: value` lines carrying the same content as the JSON document.
inline std::string render_text(const json& doc) {
    std::ostringstream out;
    detail::flatten(doc, "", out);
    return out.str();
}

inline void emit(const json& doc, OutputFormat fmt, std::ostream& out) {
    if (fmt == OutputFormat::Json) {
        out << doc.dump(2) << "\n";
    } else {
        out << render_text(doc);
    }
}

// -- commands -----------------------------------------------------------------

struct ImplicitizeFlags {
    std::optional<unsigned> nu;
    std::string method = "det-complex";
    unsigned check_eval = 20;
    bool allow_sub_bound = false;
};

struct AnalyzeFlags {
    bool syzygetic = false;
    bool skip_syzygetic = false;
};

struct ResultantFlags {
    std::string kind = "kravitsky";
    bool emit_matrix = false;
};

inline AnalyzeOptions analyze_options(const AnalyzeFlags& a) {
    AnalyzeOptions o;
    if (a.syzygetic) o.syzygetic = true;
    if (a.skip_syzygetic) o.syzygetic = false;
    return o;
}

template <FieldElement K>
json cmd_analyze(const ProblemFile& p, const AnalyzeFlags& flags) {
    auto f = to_parameterization<K>(p);
    auto report = analyze(f, analyze_options(flags));
    json doc = empty_document("analyze");
    doc["input"] = input_json(p, f.t_ring->vars);
    doc["degree"] = report.predicted_degree ? json(*report.predicted_degree) : json(nullptr);
    doc["nu"] = report.nu_bound;
    doc["diagnostics"] = to_json(report);
    if (!report.generically_finite)
        doc["warnings"].push_back(report.base_locus_dim >= 1 ? "positive-dimensional base locus"
                                                             : "map is not generically finite");
    return doc;
}

template <FieldElement K>
json cmd_implicitize(const ProblemFile& p, const ImplicitizeFlags& flags, const AnalyzeFlags& aflags,
                     std::uint64_t seed) {
    auto f = to_parameterization<K>(p);
    ImplicitOptions opts;
    opts.nu = flags.nu;
    opts.method = parse_method(flags.method);
    opts.seed = seed;
    opts.check_eval = flags.check_eval;
    opts.allow_sub_bound = flags.allow_sub_bound;
    opts.analyze = analyze_options(aflags);
    auto r = implicitize(f, opts);
    json doc = empty_document("implicitize");
    doc["input"] = input_json(p, f.t_ring->vars);
    doc["implicit"] = r.determinant.to_string();
    doc["reduced"] = r.reduced.to_string();
    doc["exponent"] = r.exponent;
    doc["degree"] = r.determinant.total_degree();
    doc["nu"] = r.nu_used;
    doc["method"] = to_string(r.method);
    doc["diagnostics"] = to_json(r.report);
    doc["verified"] = r.verified;
    doc["seed"] = seed;
    if (r.strand) {
        json strand;
        strand["dims"] = r.strand->dims;
        if (r.complex) {
            strand["ranks"] = r.complex->ranks;
            json chain = json::array();
            for (const auto& l : r.complex->chain)
                chain.push_back({{"map", l.map}, {"size", l.size()}, {"exponent", l.exponent},
                                 {"det", l.det.to_string()}});
            strand["chain"] = chain;
        }
        doc["strand"] = strand;
    }
    for (const auto& w : r.warnings) doc["warnings"].push_back(w);
    return doc;
}

namespace detail {

template <FieldElement K>
BinaryForm<K> checked_form(const ProblemFile& p, const Poly<K>& poly, std::size_t i, const RingPtr& coeff_ring) {
    try {
        return binary_form(poly, coeff_ring);
    } catch (const ArithmeticError& e) {
        throw ParseError(p.origins[i] + ": " + e.what());
    }
}

} // namespace detail

template <FieldElement K>
json cmd_resultant(const ProblemFile& p, const ResultantFlags& flags) {
    if (flags.kind != "sylvester" && flags.kind != "bezout" && flags.kind != "kravitsky")
        throw ParseError("unknown resultant kind '" + flags.kind + "'");
    if (p.x_vars.size() != 2) throw ParseError("resultants need exactly two X variables");
    json doc = empty_document("resultant");
    doc["kind"] = flags.kind;
    doc["method"] = "resultant";

    PolyMat<K> matrix(0, 0, scalar_ring<K>(p.field));
    std::optional<Parameterization<K>> curve;
    if (p.polys.size() == 2) {
        if (flags.kind == "kravitsky") throw ParseError("kravitsky needs three polynomials");
        auto polys = problem_polys<K>(p);
        auto sr = scalar_ring<K>(p.field);
        auto a = detail::checked_form(p, polys[0], 0, sr);
        auto b = detail::checked_form(p, polys[1], 1, sr);
        if (flags.kind == "bezout") {
            if (a.degree() != b.degree()) throw ParseError("bezout needs two forms of the same degree");
            matrix = bezout_matrix(a, b);
        } else {
            if (a.degree() < 1 || b.degree() < 1) throw ParseError("sylvester needs forms of degree at least 1");
            matrix = sylvester_matrix(a, b);
        }
        doc["input"] = input_json(p, {});
    } else if (p.polys.size() == 3) {
        curve = to_parameterization<K>(p);
        detail::require_no_common_factor(*curve);
        const auto& tr = curve->t_ring;
        doc["input"] = input_json(p, tr->vars);
        if (flags.kind == "kravitsky") {
            auto sr = scalar_ring<K>(p.field);
            matrix = kravitsky_pencil(binary_form(curve->polys[0], curve->d, sr),
                                      binary_form(curve->polys[1], curve->d, sr),
                                      binary_form(curve->polys[2], curve->d, sr), tr);
        } else {
            auto b1 = binary_form(curve->polys[0], curve->d, tr);
            auto b2 = binary_form(curve->polys[1], curve->d, tr);
            auto b3 = binary_form(curve->polys[2], curve->d, tr);
            auto P = b1 - Poly<K>::variable(tr, 0) * b3;
            auto Q = b2 - Poly<K>::variable(tr, 1) * b3;
            matrix = flags.kind == "bezout" ? bezout_matrix(P, Q) : sylvester_matrix(P, Q);
        }
    } else {
        throw ParseError("resultants need two forms, or three forms for curve implicitization");
    }

    auto value = det(matrix);
    doc["determinant"] = value.to_string();
    doc["size"] = matrix.rows();
    if (flags.emit_matrix) doc["matrix"] = matrix_json(matrix);
    if (curve) {
        if (value.is_zero())
            throw HypothesisViolation(HypothesisViolation::Kind::NotGenericallyFinite, "resultant vanishes identically");
        auto h = normalized(value);
        auto pd = perfect_power_decompose(h);
        doc["implicit"] = h.to_string();
        doc["reduced"] = pd.root.to_string();
        doc["exponent"] = pd.exponent;
        doc["degree"] = h.total_degree();
        if (flags.kind != "kravitsky") doc["warnings"].push_back("dehomogenized at T3 = 1");
    }
    return doc;
}

// -- entry point --------------------------------------------------------------

namespace detail {

inline std::uint64_t default_seed() {
    const char* env = std::getenv("IMPLICAX_SEED");
    if (!env || !*env) return kDefaultSeed;
    try {
        std::size_t used = 0;
        auto v = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("IMPLICAX_SEED is not an unsigned integer: '") + env + "'");
    }
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        err << "error: parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const FieldMismatch& e) {
        err << "error: parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const HypothesisViolation& e) {
        err << "error: hypothesis violated (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const ConsistencyError& e) {
        err << "error: internal consistency failure: " << e.what() << "\n";
        return kExitConsistency;
    } catch (const Error& e) {
        err << "error: internal consistency failure: " << e.what() << "\n";
        return kExitConsistency;
    }
}

} // namespace detail

/// Runs one command; the result document goes to `out`, diagnostics to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact implicitization of rational curves and surfaces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "implicax 0.1.0");

    CommonFlags common;
    ImplicitizeFlags iflags;
    AnalyzeFlags aflags;
    ResultantFlags rflags;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", common.file, "problem file (text or JSON)")->required();
        sub->add_option("--format", common.format, "output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--seed", common.seed, "seed for randomized choices (default: IMPLICAX_SEED or built in)");
    };

    auto* implicitize_cmd = app.add_subcommand("implicitize", "compute the implicit equation");
    add_common(implicitize_cmd);
    implicitize_cmd->add_option("--nu", iflags.nu, "strand degree (default: the regularity bound)");
    implicitize_cmd->add_option("--method", iflags.method, "determinant method")
        ->check(CLI::IsMember({"det-complex", "gcd-minors", "resultant"}));
    implicitize_cmd->add_option("--check-eval", iflags.check_eval, "evaluation checks at random points (0 disables)");
    implicitize_cmd->add_flag("--allow-sub-bound", iflags.allow_sub_bound, "permit a strand degree below the bound");
    implicitize_cmd->add_flag("--syzygetic", aflags.syzygetic, "run the syzygetic test for any n");
    implicitize_cmd->add_flag("--skip-syzygetic", aflags.skip_syzygetic, "never run the syzygetic test");

    auto* analyze_cmd = app.add_subcommand("analyze", "base locus, degree prediction and syzygetic test");
    add_common(analyze_cmd);
    analyze_cmd->add_flag("--syzygetic", aflags.syzygetic, "run the syzygetic test for any n");
    analyze_cmd->add_flag("--skip-syzygetic", aflags.skip_syzygetic, "never run the syzygetic test");

    auto* resultant_cmd = app.add_subcommand("resultant", "Sylvester, Bezout or Kravitsky resultant");
    add_common(resultant_cmd);
    resultant_cmd->add_option("--kind", rflags.kind, "matrix kind")
        ->check(CLI::IsMember({"sylvester", "bezout", "kravitsky"}));
    resultant_cmd->add_flag("--emit-matrix", rflags.emit_matrix, "include the matrix in the output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kExitParse;
    }

    return detail::guarded(err, [&]() -> int {
        const auto start = std::chrono::steady_clock::now();
        const std::uint64_t seed = common.seed ? *common.seed : detail::default_seed();
        const auto fmt = common.format == "json" ? OutputFormat::Json : OutputFormat::Text;
        auto problem = read_problem(common.file);

        auto dispatch = [&]<FieldElement K>() -> json {
            if (implicitize_cmd->parsed()) return cmd_implicitize<K>(problem, iflags, aflags, seed);
            if (analyze_cmd->parsed()) return cmd_analyze<K>(problem, aflags);
            return cmd_resultant<K>(problem, rflags);
        };
        json doc = problem.field.is_prime() ? dispatch.template operator()<ModP>()
                                            : dispatch.template operator()<Rational>();
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        doc["timing"] = {{"total_ms", ms}};
        for (const auto& w : doc["warnings"]) err << "warning: " << w.get<std::string>() << "\n";
        emit(doc, fmt, out);
        return kExitOk;
    });
}

} // namespace implicax
