#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "implicax/complexes.hpp"
#include "implicax/errors.hpp"
#include "implicax/gcd.hpp"
#include "implicax/geometry.hpp"
#include "implicax/parameterization.hpp"
#include "implicax/resultants.hpp"

namespace implicax {

enum class Method { DetComplex, GcdMinors, Resultant };

inline const char* to_string(Method m) {
    switch (m) {
    case Method::DetComplex: return "det-complex";
    case Method::GcdMinors: return "gcd-minors";
    case Method::Resultant: break;
    }
    return "resultant";
}

inline Method parse_method(std::string_view s) {
    if (s == "det-complex") return Method::DetComplex;
    if (s == "gcd-minors") return Method::GcdMinors;
    if (s == "resultant") return Method::Resultant;
    throw ParseError("unknown method '" + std::string(s) + "'");
}

struct AnalyzeOptions {
    /// Run the Koszul-syzygy comparison; by default only for n <= 4.
    std::optional<bool> syzygetic;
};

template <FieldElement K>
BasePointReport<K> analyze(const Parameterization<K>& f, const AnalyzeOptions& opts = {}) {
    BasePointReport<K> r{multivariate_gcd(std::span<const Poly<K>>(f.polys)), -1, 0, std::nullopt, false, 0, {}, {}};
    r.profile = base_locus_profile(f);
    r.base_locus_dim = r.profile.dim;
    r.e_total = r.profile.e_total;
    r.nu_bound = nu_bound(f.n, f.d);
    if (r.base_locus_dim <= 0) {
        r.predicted_degree = ipow(f.d, f.n - 2) - static_cast<long>(r.e_total);
        r.generically_finite = *r.predicted_degree > 0;
    }
    if (opts.syzygetic.value_or(f.n <= 4)) r.syzygetic = syzygetic_test(f, 2 * f.d);
    return r;
}

/// Whether H(f_1(x), ..., f_n(x)) = 0 at `trials` random points x that are
/// not common zeros of the f_i.
template <FieldElement K>
bool verify(const Poly<K>& h, const Parameterization<K>& f, unsigned trials, std::uint64_t seed = kDefaultSeed) {
    if (trials < 1) throw ArithmeticError("verify needs at least one trial");
    if (h.ring()->nvars() != f.n) throw FieldMismatch("equation ring does not match the parameterization");
    Rng rng(seed);
    unsigned done = 0, attempts = 0;
    const unsigned max_attempts = 50 * trials + 100;
    while (done < trials) {
        if (++attempts > max_attempts) throw ArithmeticError("could not find sample points off the base locus");
        std::vector<K> x;
        for (std::size_t v = 0; v < f.nvars(); ++v) x.push_back(K::random(rng, f.field(), 20));
        std::vector<K> image;
        bool all_zero = true;
        for (const auto& p : f.polys) {
            image.push_back(evaluate(p, std::span<const K>(x)));
            all_zero = all_zero && image.back().is_zero();
        }
        if (all_zero) continue;
        ++done;
        if (!evaluate(h, std::span<const K>(image)).is_zero()) return false;
    }
    return true;
}

struct ImplicitOptions {
    std::optional<unsigned> nu;
    Method method = Method::DetComplex;
    std::uint64_t seed = kDefaultSeed;
    unsigned check_eval = 20;
    bool allow_sub_bound = false;
    AnalyzeOptions analyze;
};

template <FieldElement K>
struct ImplicitResult {
    Poly<K> determinant;   // normalized H^e
    Poly<K> reduced;       // normalized H
    unsigned exponent = 0;
    unsigned nu_used = 0;
    Method method = Method::DetComplex;
    BasePointReport<K> report;
    bool verified = false;
    std::optional<ZStrand<K>> strand;
    std::optional<ComplexDet<K>> complex;
    std::vector<std::string> warnings;
};

template <FieldElement K>
ImplicitResult<K> implicitize(const Parameterization<K>& f, const ImplicitOptions& opts = {}) {
    using HV = HypothesisViolation;
    auto report = analyze(f, opts.analyze);
    if (report.base_locus_dim >= 1)
        throw HV(HV::Kind::PositiveDimensionalBaseLocus,
                 "positive-dimensional base locus (content " + report.content_gcd.to_string() +
                     "); divide the polynomials by their gcd");
    if (!report.generically_finite)
        throw HV(HV::Kind::NotGenericallyFinite, "map is not generically finite: predicted degree " +
                                                     std::to_string(*report.predicted_degree));
    const unsigned bound = report.nu_bound;
    const unsigned nu = opts.nu.value_or(bound);
    ImplicitResult<K> out{Poly<K>(f.t_ring), Poly<K>(f.t_ring), 0, nu, opts.method, std::move(report), false, std::nullopt, std::nullopt, {}};
    const long predicted = *out.report.predicted_degree;
    if (nu < bound) {
        if (!opts.allow_sub_bound)
            throw HV(HV::Kind::SubBoundDegree, "degree " + std::to_string(nu) + " is below the bound " +
                                                   std::to_string(bound) + "; pass the sub-bound flag to try it");
        out.warnings.push_back("degree " + std::to_string(nu) + " is below the bound " + std::to_string(bound) +
                               "; success is not guaranteed");
    }

    Poly<K> det_value(f.t_ring);
    switch (opts.method) {
    case Method::DetComplex: {
        out.strand = z_strand(f, nu);
        out.complex = complex_determinant(*out.strand, opts.seed);
        det_value = out.complex->value;
        break;
    }
    case Method::GcdMinors: {
        out.strand = z_strand(f, nu);
        det_value = gcd_of_maximal_minors(*out.strand, opts.seed);
        break;
    }
    case Method::Resultant: {
        det_value = kravitsky_implicitize(f);
        auto sylvester = curve_implicitize_resultant(f);
        auto at_one = det_value.evaluate_var(2, K::one(f.field()));
        if (!equal_up_to_unit(at_one, sylvester))
            throw ConsistencyError("Kravitsky and Sylvester resultants disagree at T3 = 1");
        break;
    }
    }

    out.determinant = normalized(det_value);
    const long degree = out.determinant.total_degree();
    if (degree != predicted)
        throw ConsistencyError("determinant has degree " + std::to_string(degree) + " but the base locus predicts " +
                               std::to_string(predicted));
    auto pd = perfect_power_decompose(out.determinant);
    out.reduced = pd.root;
    out.exponent = pd.exponent;
    if (opts.check_eval > 0) {
        out.verified = verify(out.reduced, f, opts.check_eval, opts.seed);
        if (!out.verified) throw ConsistencyError("evaluation check failed: H(f(x)) != 0 at a sample point");
    }
    return out;
}

} // namespace implicax
