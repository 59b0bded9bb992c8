#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "implicax/implicax.hpp"

namespace implicax::testing {

inline const FieldSpec kQQ = FieldSpec::rationals();
inline const FieldSpec kGF = FieldSpec::prime(65521);

template <FieldElement K>
FieldSpec field_of() {
    if constexpr (is_rational_v<K>) return kQQ;
    else return kGF;
}

struct Example {
    std::string name;
    std::vector<std::string> x_vars;
    std::vector<std::string> polys;
    unsigned nu;
    std::string reduced;   // empty when only checked by evaluation
    unsigned exponent;
    std::vector<std::size_t> dims;
    std::size_t e_total;
    long degree;
};

inline std::vector<Example> worked_examples() {
    return {
        {"conic", {"X1", "X2"}, {"X1^2", "X1*X2", "X2^2"}, 1, "T2^2 - T1*T3", 1, {2, 2, 0}, 0, 2},
        {"conic_with_base_point", {"X1", "X2"}, {"X1^3", "X1^2*X2", "X1*X2^2"}, 2, "T1*T3 - T2^2", 1, {3, 4, 1}, 1, 2},
        {"quadric_cover", {"X1", "X2", "X3"}, {"X1^2", "X2^2", "X3^2", "X1^2+X2^2+X3^2"}, 2, "T1+T2+T3-T4", 4,
         {6, 9, 4, 1}, 0, 4},
        {"cubic_surface", {"X1", "X2", "X3"}, {"X1^2*X2", "X2^2*X3", "X1*X3^2", "X1^3+X2^3+X3^3"}, 4, "", 1,
         {15, 24, 12, 3}, 0, 9},
        {"lci_surface", {"X1", "X2", "X3"},
         {"X1*X3^2", "X2^2*(X1+X3)", "X1*X2*(X1+X3)", "X2*X3*(X1+X3)"}, 4, "T1*T2*T3 + T1*T2*T4 - T3*T4^2", 1,
         {15, 30, 18, 3}, 6, 3},
    };
}

/// Expands the products `a*(b+c)` used in the example table, which the
/// polynomial grammar does not accept.
inline std::vector<std::string> expand_grouped(const std::vector<std::string>& polys) {
    std::vector<std::string> out;
    for (const auto& p : polys) {
        auto open = p.find("*(");
        if (open == std::string::npos) {
            out.push_back(p);
            continue;
        }
        auto head = p.substr(0, open);
        auto body = p.substr(open + 2, p.size() - open - 3);
        std::string s;
        std::size_t start = 0;
        while (start <= body.size()) {
            auto plus = body.find('+', start);
            auto term = body.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
            if (!s.empty()) s += " + ";
            s += head + "*" + term;
            if (plus == std::string::npos) break;
            start = plus + 1;
        }
        out.push_back(s);
    }
    return out;
}

template <FieldElement K>
Parameterization<K> example_param(const Example& e) {
    return parse_parameterization<K>(field_of<K>(), e.x_vars, expand_grouped(e.polys));
}

template <FieldElement K>
Parameterization<K> param(std::vector<std::string> x_vars, std::vector<std::string> polys) {
    return parse_parameterization<K>(field_of<K>(), std::move(x_vars), polys);
}

template <FieldElement K>
Poly<K> tpoly(const Parameterization<K>& f, const std::string& text) {
    return parse_poly<K>(text, f.t_ring);
}

// -- oracles ------------------------------------------------------------------------

/// Laplace expansion along the first row.
template <FieldElement K>
K cofactor_det(const Mat<K>& m) {
    const std::size_t n = m.rows();
    if (n == 0) return K::one(m.field());
    if (n == 1) return m(0, 0);
    K total = K::zero(m.field());
    for (std::size_t c = 0; c < n; ++c) {
        if (m(0, c).is_zero()) continue;
        Mat<K> minor(n - 1, n - 1, m.field());
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0, k = 0; j < n; ++j)
                if (j != c) minor(i - 1, k++) = m(i, j);
        K term = m(0, c) * cofactor_det(minor);
        if (c % 2) total -= term;
        else total += term;
    }
    return total;
}

template <FieldElement K>
Poly<K> cofactor_det(const PolyMat<K>& m) {
    const std::size_t n = m.rows();
    if (n == 0) return Poly<K>::constant(m.ring(), K::one(m.ring()->field));
    if (n == 1) return m(0, 0);
    Poly<K> total(m.ring());
    for (std::size_t c = 0; c < n; ++c) {
        if (m(0, c).is_zero()) continue;
        PolyMat<K> minor(n - 1, n - 1, m.ring());
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0, k = 0; j < n; ++j)
                if (j != c) minor(i - 1, k++) = m(i, j);
        Poly<K> term = m(0, c) * cofactor_det(minor);
        if (c % 2) total -= term;
        else total += term;
    }
    return total;
}

/// Coefficients for random data: small integers, never zero.
template <FieldElement K>
K small_nonzero(Rng& rng, const FieldSpec& f, std::int64_t bound = 9) {
    std::uniform_int_distribution<std::int64_t> dist(-bound, bound);
    std::int64_t v = 0;
    while (v == 0) v = dist(rng);
    return K::from_int(v, f);
}

/// Random polynomial with up to `terms` terms of total degree <= max_degree.
template <FieldElement K>
Poly<K> random_poly(Rng& rng, const RingPtr& ring, unsigned max_degree, unsigned terms) {
    std::uniform_int_distribution<unsigned> deg(0, max_degree);
    std::vector<Term<K>> ts;
    for (unsigned t = 0; t < terms; ++t) {
        std::vector<unsigned> e(ring->nvars(), 0);
        unsigned total = deg(rng);
        std::uniform_int_distribution<std::size_t> var(0, ring->nvars() - 1);
        for (unsigned k = 0; k < total; ++k) ++e[var(rng)];
        ts.push_back({Monomial::from_exponents(e), small_nonzero<K>(rng, ring->field)});
    }
    return Poly<K>::from_terms(ring, std::move(ts));
}

/// Random homogeneous form of the given degree, nonzero.
template <FieldElement K>
Poly<K> random_form(Rng& rng, const RingPtr& ring, unsigned degree, unsigned terms) {
    while (true) {
        std::vector<Term<K>> ts;
        std::uniform_int_distribution<std::size_t> var(0, ring->nvars() - 1);
        for (unsigned t = 0; t < terms; ++t) {
            std::vector<unsigned> e(ring->nvars(), 0);
            for (unsigned k = 0; k < degree; ++k) ++e[var(rng)];
            ts.push_back({Monomial::from_exponents(e), small_nonzero<K>(rng, ring->field)});
        }
        auto p = Poly<K>::from_terms(ring, std::move(ts));
        if (!p.is_zero()) return p;
    }
}

/// Dense random form: every monomial of the degree gets a coefficient.
template <FieldElement K>
Poly<K> dense_form(Rng& rng, const RingPtr& ring, unsigned degree) {
    std::vector<Term<K>> ts;
    for (auto m : monomial_basis(ring->nvars(), degree).mons) ts.push_back({m, small_nonzero<K>(rng, ring->field, 20)});
    return Poly<K>::from_terms(ring, std::move(ts));
}

} // namespace implicax::testing
