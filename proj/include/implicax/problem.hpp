#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "implicax/errors.hpp"
#include "implicax/field.hpp"
#include "implicax/parameterization.hpp"
#include "implicax/poly.hpp"

namespace implicax {

/// A parsed but not yet validated input file.
///
/// Text form:
///
///     # comment
///     field: QQ            (or GF(p))
///     x_vars: X1, X2
///     t_vars: T1, T2, T3   (optional)
///     f1 = X1^2
///     f2 = X1*X2
///     f3 = X2^2
///
/// JSON form: {"field": "QQ", "x_vars": [...], "t_vars": [...], "polys": [...]}.
struct ProblemFile {
    FieldSpec field;
    std::vector<std::string> x_vars;
    std::vector<std::string> t_vars;
    std::vector<std::string> polys;
    std::vector<std::string> origins;   // "line 5" or "polys[2]", one per poly
};

namespace detail {

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_names(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        auto t = trim(cur);
        if (!t.empty()) out.push_back(t);
        cur.clear();
    };
    for (char c : s) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            cur.push_back(c);
        }
    }
    flush();
    return out;
}

inline ProblemFile parse_problem_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("problem JSON must be an object");
    ProblemFile p;
    try {
        p.field = FieldSpec::parse(j.value("field", std::string("QQ")));
        if (!j.contains("x_vars")) throw ParseError("missing x_vars");
        if (!j.contains("polys")) throw ParseError("missing polys");
        p.x_vars = j.at("x_vars").get<std::vector<std::string>>();
        if (j.contains("t_vars")) p.t_vars = j.at("t_vars").get<std::vector<std::string>>();
        p.polys = j.at("polys").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad problem JSON: ") + e.what());
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(std::string("field: ") + e.what());
    }
    for (std::size_t i = 0; i < p.polys.size(); ++i) p.origins.push_back("polys[" + std::to_string(i) + "]");
    return p;
}

inline ProblemFile parse_problem_text(const std::string& text) {
    ProblemFile p;
    bool have_field = false, have_x = false;
    std::vector<std::pair<std::size_t, std::pair<std::string, std::string>>> assigns;   // index, (origin, body)
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto t = trim(line);
        if (t.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        auto eq = t.find('=');
        auto colon = t.find(':');
        if (eq != std::string::npos && (colon == std::string::npos || eq < colon)) {
            auto lhs = trim(t.substr(0, eq));
            if (lhs.size() < 2 || lhs[0] != 'f' ||
                !std::all_of(lhs.begin() + 1, lhs.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
                throw ParseError(where + ": expected 'fN = <polynomial>', got '" + t + "'");
            auto idx = std::stoul(lhs.substr(1));
            if (idx == 0 || idx > 64) throw ParseError(where + ": polynomial index out of range in '" + t + "'");
            assigns.push_back({idx, {where + " (" + t + ")", trim(t.substr(eq + 1))}});
            continue;
        }
        if (colon == std::string::npos) throw ParseError(where + ": expected 'key: value' or 'fN = ...', got '" + t + "'");
        auto key = trim(t.substr(0, colon));
        auto value = trim(t.substr(colon + 1));
        if (key == "field") {
            try {
                p.field = FieldSpec::parse(value);
            } catch (const Error& e) {
                throw ParseError(where + ": " + e.what());
            }
            have_field = true;
        } else if (key == "x_vars") {
            p.x_vars = split_names(value);
            have_x = true;
        } else if (key == "t_vars") {
            p.t_vars = split_names(value);
        } else {
            throw ParseError(where + ": unknown key '" + key + "'");
        }
    }
    if (!have_field) p.field = FieldSpec::rationals();
    if (!have_x) throw ParseError("missing 'x_vars:' header");
    std::sort(assigns.begin(), assigns.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < assigns.size(); ++i) {
        if (assigns[i].first != i + 1)
            throw ParseError("polynomials must be numbered f1, f2, ... without gaps or repeats (" +
                             assigns[i].second.first + ")");
        p.origins.push_back(assigns[i].second.first);
        p.polys.push_back(assigns[i].second.second);
    }
    if (p.polys.empty()) throw ParseError("no polynomials given");
    return p;
}

} // namespace detail

inline ProblemFile parse_problem(const std::string& text) {
    auto t = detail::trim(text);
    if (!t.empty() && t.front() == '{') return detail::parse_problem_json(t);
    return detail::parse_problem_text(text);
}

inline ProblemFile read_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

/// Parse every polynomial of the file; errors name the offending line.
template <FieldElement K>
std::vector<Poly<K>> problem_polys(const ProblemFile& p) {
    RingPtr ring;
    try {
        ring = make_ring(p.field, p.x_vars, Bank::X);
    } catch (const Error& e) {
        throw ParseError(std::string("x_vars: ") + e.what());
    }
    std::vector<Poly<K>> out;
    for (std::size_t i = 0; i < p.polys.size(); ++i) {
        try {
            out.push_back(parse_poly<K>(p.polys[i], ring));
        } catch (const Error& e) {
            throw ParseError(p.origins[i] + ": " + e.what());
        }
    }
    return out;
}

/// Homogeneity and equal degree, reported against the offending line.
template <FieldElement K>
unsigned problem_degree(const ProblemFile& p, const std::vector<Poly<K>>& polys) {
    std::optional<unsigned> d;
    for (std::size_t i = 0; i < polys.size(); ++i) {
        if (polys[i].is_zero()) throw ParseError(p.origins[i] + ": polynomial is zero");
        auto gd = polys[i].homogeneous_degree();
        if (!gd) throw ParseError(p.origins[i] + ": polynomial is not homogeneous");
        if (d && *d != *gd)
            throw ParseError(p.origins[i] + ": degree " + std::to_string(*gd) + " differs from degree " +
                             std::to_string(*d) + " of f1");
        d = gd;
    }
    return *d;
}

template <FieldElement K>
Parameterization<K> to_parameterization(const ProblemFile& p) {
    auto polys = problem_polys<K>(p);
    problem_degree(p, polys);
    return make_parameterization(std::move(polys), p.t_vars);
}

} // namespace implicax
