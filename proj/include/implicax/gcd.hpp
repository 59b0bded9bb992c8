#pragma once

#include <bit>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "implicax/poly.hpp"

namespace implicax {

namespace detail {

// Dense univariate polynomials, coefficients low to high, no trailing zeros.
template <FieldElement K>
using Dense = std::vector<K>;

template <FieldElement K>
void trim(Dense<K>& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

template <FieldElement K>
K dense_eval(const Dense<K>& a, const K& x, const FieldSpec& f) {
    K acc = K::zero(f);
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
    return acc;
}

template <FieldElement K>
Dense<K> dense_mul(const Dense<K>& a, const Dense<K>& b, const FieldSpec& f) {
    if (a.empty() || b.empty()) return {};
    Dense<K> r(a.size() + b.size() - 1, K::zero(f));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

/// Remainder of a modulo b (b nonzero); quotient written to *q when given.
template <FieldElement K>
Dense<K> dense_rem(Dense<K> a, const Dense<K>& b, Dense<K>* q = nullptr) {
    const K inv = b.back().inverse();
    if (q) q->clear();
    if (a.size() >= b.size() && q) q->assign(a.size() - b.size() + 1, K::zero(b.back().spec()));
    while (a.size() >= b.size()) {
        K c = a.back() * inv;
        std::size_t shift = a.size() - b.size();
        if (q) (*q)[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
        a.pop_back();
        trim(a);
    }
    return a;
}

template <FieldElement K>
Dense<K> dense_monic(Dense<K> a) {
    if (a.empty()) return a;
    K inv = a.back().inverse();
    for (auto& c : a) c *= inv;
    return a;
}

/// Monic gcd (empty when both are zero).
template <FieldElement K>
Dense<K> dense_gcd(Dense<K> a, Dense<K> b) {
    while (!b.empty()) {
        auto r = dense_rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    return dense_monic(std::move(a));
}

/// p must only involve `var`.
template <FieldElement K>
Dense<K> to_dense(const Poly<K>& p, std::size_t var) {
    Dense<K> out(p.is_zero() ? 0 : p.degree_in(var) + 1, K::zero(p.field()));
    for (const auto& t : p.terms()) out[t.mon.exponent(var)] = t.coef;
    return out;
}

template <FieldElement K>
Poly<K> from_dense(const RingPtr& ring, std::size_t var, const Dense<K>& a) {
    std::vector<Term<K>> terms;
    for (std::size_t e = a.size(); e-- > 0;)
        if (!a[e].is_zero()) terms.push_back({Monomial::var(var, static_cast<unsigned>(e)), a[e]});
    return Poly<K>::from_sorted_terms(ring, std::move(terms));
}

template <FieldElement K>
const Term<K>& lex_leading(const Poly<K>& p) {
    const Term<K>* best = &p.terms().front();
    for (const auto& t : p.terms())
        if (lex_greater(t.mon, best->mon)) best = &t;
    return *best;
}

template <FieldElement K>
Poly<K> lex_monic(const Poly<K>& p) {
    if (p.is_zero()) return p;
    return p * lex_leading(p).coef.inverse();
}

/// Groups p = sum_m c_m(y) m by monomials m free of y.
template <FieldElement K>
std::map<std::uint64_t, Dense<K>> split_by_var(const Poly<K>& p, std::size_t y) {
    std::map<std::uint64_t, Dense<K>> groups;
    for (const auto& t : p.terms()) {
        auto key = t.mon.with_exponent(y, 0).packed();
        auto& d = groups[key];
        auto e = t.mon.exponent(y);
        if (d.size() <= e) d.resize(e + 1, K::zero(p.field()));
        d[e] = t.coef;
    }
    return groups;
}

template <FieldElement K>
Dense<K> content_in(const Poly<K>& p, std::size_t y) {
    Dense<K> g;
    for (auto& [key, d] : split_by_var(p, y)) {
        g = dense_gcd(std::move(g), d);
        if (g.size() == 1) break;
    }
    return g;
}

/// Coefficient in k[y] of the lex-largest monomial free of y.
template <FieldElement K>
Dense<K> leading_in_others(const Poly<K>& p, std::size_t y) {
    auto groups = split_by_var(p, y);
    auto best = groups.begin();
    for (auto it = groups.begin(); it != groups.end(); ++it)
        if (lex_greater(Monomial(it->first), Monomial(best->first))) best = it;
    return best->second;
}

template <FieldElement K>
Monomial min_monomial(const Poly<K>& p) {
    std::uint64_t w = p.terms().front().mon.packed();
    Monomial m(w);
    for (const auto& t : p.terms())
        for (std::size_t v = 0; v < kMaxVars; ++v)
            if (t.mon.exponent(v) < m.exponent(v)) m = m.with_exponent(v, t.mon.exponent(v));
    return m;
}

template <FieldElement K>
Poly<K> divide_by_monomial(const Poly<K>& p, Monomial m) {
    std::vector<Term<K>> terms;
    terms.reserve(p.size());
    for (const auto& t : p.terms()) terms.push_back({t.mon / m, t.coef});
    return Poly<K>::from_sorted_terms(p.ring(), std::move(terms));
}

template <FieldElement K>
Poly<K> gcd_rec(const Poly<K>& a, const Poly<K>& b);

// Brown's dense evaluation/interpolation in the variable y. a and b carry no
// monomial content and involve the same variables.
template <FieldElement K>
Poly<K> gcd_interpolate(Poly<K> a, Poly<K> b, std::size_t y) {
    const auto& f = a.field();
    const auto& ring = a.ring();
    auto ca = content_in(a, y);
    auto cb = content_in(b, y);
    auto c = dense_gcd(ca, cb);
    if (ca.size() > 1) a = exact_divide(a, from_dense(ring, y, ca));
    if (cb.size() > 1) b = exact_divide(b, from_dense(ring, y, cb));
    const Poly<K> content = from_dense(ring, y, c);

    const auto lca = leading_in_others(a, y);
    const auto lcb = leading_in_others(b, y);
    const auto gamma = dense_gcd(lca, lcb);
    const std::size_t bound = std::min(a.degree_in(y), b.degree_in(y)) + gamma.size() - 1;

    Poly<K> interp(ring);
    Dense<K> modulus{K::one(f)};
    Monomial lead{};
    std::size_t points = 0;
    const std::size_t limit = bound + 64;
    std::size_t tried = 0;
    for (std::int64_t alpha_i = 1;; ++alpha_i) {
        if (f.is_prime() && static_cast<std::uint64_t>(alpha_i) >= f.modulus)
            throw ArithmeticError("field too small for gcd interpolation");
        if (++tried > 4 * limit + 64) throw ArithmeticError("gcd interpolation did not converge");
        K alpha = K::from_int(alpha_i, f);
        if (dense_eval(lca, alpha, f).is_zero() || dense_eval(lcb, alpha, f).is_zero()) continue;
        auto image = gcd_rec(a.evaluate_var(y, alpha), b.evaluate_var(y, alpha));
        if (image.is_constant()) return lex_monic(content);
        image = image * dense_eval(gamma, alpha, f);
        Monomial lm = lex_leading(image).mon;
        if (points > 0) {
            if (lex_greater(lm, lead)) continue;
            if (lex_greater(lead, lm)) {
                interp = Poly<K>(ring);
                modulus = {K::one(f)};
                points = 0;
            }
        }
        lead = lm;
        auto diff = image - interp.evaluate_var(y, alpha);
        bool stable = diff.is_zero() && points > 0;
        if (!diff.is_zero())
            interp += from_dense(ring, y, modulus) * (diff * dense_eval(modulus, alpha, f).inverse());
        modulus = dense_mul(modulus, Dense<K>{-alpha, K::one(f)}, f);
        ++points;
        if (stable || points > bound) {
            auto cont = content_in(interp, y);
            auto candidate = cont.size() > 1 ? exact_divide(interp, from_dense(ring, y, cont)) : interp;
            if (divides(candidate, a) && divides(candidate, b)) return lex_monic(candidate * content);
        }
        if (points > limit) throw ArithmeticError("gcd interpolation did not converge");
    }
}

// a, b nonzero without monomial content.
template <FieldElement K>
Poly<K> gcd_core(const Poly<K>& a, const Poly<K>& b) {
    const auto& ring = a.ring();
    auto one = Poly<K>::constant(ring, K::one(a.field()));
    if (a.is_constant() || b.is_constant()) return one;
    unsigned sa = a.support(), sb = b.support();
    if (sa != sb) {
        // A variable present in only one operand cannot occur in the gcd.
        unsigned diff = sa ^ sb;
        std::size_t x = static_cast<std::size_t>(std::countr_zero(diff));
        const Poly<K>& with = (sa & (1u << x)) ? a : b;
        const Poly<K>& without = (sa & (1u << x)) ? b : a;
        Poly<K> g = without;
        for (const auto& c : with.coefficients_in(x)) {
            if (c.is_zero()) continue;
            g = gcd_rec(g, c);
            if (g.is_constant()) return one;
        }
        return g;
    }
    if (std::popcount(sa) == 1) {
        auto x = static_cast<std::size_t>(std::countr_zero(sa));
        return from_dense(ring, x, dense_gcd(to_dense(a, x), to_dense(b, x)));
    }
    auto y = static_cast<std::size_t>(31 - std::countl_zero(sa));
    return gcd_interpolate(a, b, y);
}

/// Gcd normalized to lex-leading coefficient 1.
template <FieldElement K>
Poly<K> gcd_rec(const Poly<K>& a, const Poly<K>& b) {
    if (a.is_zero()) return lex_monic(b);
    if (b.is_zero()) return lex_monic(a);
    if (a.is_constant() || b.is_constant()) return Poly<K>::constant(a.ring(), K::one(a.field()));
    Monomial ma = min_monomial(a), mb = min_monomial(b);
    Monomial common{};
    for (std::size_t v = 0; v < kMaxVars; ++v)
        common = common.with_exponent(v, std::min(ma.exponent(v), mb.exponent(v)));
    auto g = gcd_core(divide_by_monomial(a, ma), divide_by_monomial(b, mb));
    return g.shifted(common, K::one(a.field()));
}

} // namespace detail

/// Greatest common divisor, normalized (primitive with positive leading
/// coefficient over QQ, monic over GF(p)).
template <FieldElement K>
Poly<K> multivariate_gcd(const Poly<K>& a, const Poly<K>& b) {
    if (!same_ring(a.ring(), b.ring())) throw FieldMismatch("gcd of polynomials in different rings");
    if (a.is_zero() && b.is_zero()) throw ArithmeticError("gcd(0, 0) is undefined");
    return normalized(detail::gcd_rec(a, b));
}

template <FieldElement K>
Poly<K> multivariate_gcd(std::span<const Poly<K>> polys) {
    if (polys.empty()) throw ArithmeticError("gcd of an empty list");
    Poly<K> g(polys.front().ring());
    for (const auto& p : polys) {
        g = detail::gcd_rec(g, p);
        if (!g.is_zero() && g.is_constant()) break;
    }
    if (g.is_zero()) throw ArithmeticError("gcd of zero polynomials is undefined");
    return normalized(g);
}

namespace detail {

inline void require_large_characteristic(const FieldSpec& f, int degree) {
    if (f.is_prime() && f.modulus <= static_cast<std::uint32_t>(degree))
        throw ArithmeticError("characteristic " + std::to_string(f.modulus) +
                              " does not exceed the degree " + std::to_string(degree) +
                              "; squarefree decomposition refused");
}

} // namespace detail

/// Product of the distinct irreducible factors of p, normalized.
/// Computed as p / gcd(p, dp/dv_1, ..., dp/dv_m).
template <FieldElement K>
Poly<K> squarefree_part(const Poly<K>& p) {
    if (p.is_zero()) throw ArithmeticError("squarefree part of zero");
    detail::require_large_characteristic(p.field(), p.total_degree());
    if (p.is_constant()) return Poly<K>::constant(p.ring(), K::one(p.field()));
    Poly<K> g = p;
    for (std::size_t v = 0; v < p.ring()->nvars(); ++v) {
        if (p.degree_in(v) == 0) continue;
        g = detail::gcd_rec(g, p.derivative(v));
        if (g.is_constant()) break;
    }
    return normalized(exact_divide(p, g));
}

template <FieldElement K>
struct PowerDecomposition {
    Poly<K> root;
    unsigned exponent;
};

/// Largest e with p = unit * root^e. Uses the layered squarefree
/// decomposition p = prod D_j^j and takes e = gcd{j : D_j nonconstant}.
template <FieldElement K>
PowerDecomposition<K> perfect_power_decompose(const Poly<K>& p) {
    if (p.is_zero() || p.is_constant()) throw ArithmeticError("perfect power of a constant");
    detail::require_large_characteristic(p.field(), p.total_degree());
    std::vector<Poly<K>> layers;  // s_k = squarefree part of p_k
    Poly<K> rest = p;
    while (!rest.is_constant()) {
        auto s = squarefree_part(rest);
        layers.push_back(s);
        rest = exact_divide(rest, s);
    }
    // D_j = s_{j-1} / s_j, with s_m = 1.
    std::vector<std::pair<unsigned, Poly<K>>> factors;
    unsigned e = 0;
    for (std::size_t j = 0; j < layers.size(); ++j) {
        auto d = j + 1 < layers.size() ? exact_divide(layers[j], layers[j + 1]) : layers[j];
        if (d.is_constant()) continue;
        factors.emplace_back(static_cast<unsigned>(j + 1), d);
        e = std::gcd(e, static_cast<unsigned>(j + 1));
    }
    Poly<K> root = Poly<K>::constant(p.ring(), K::one(p.field()));
    for (const auto& [mult, d] : factors) root *= d.pow(mult / e);
    root = normalized(root);
    auto check = root.pow(e);
    if (!equal_up_to_unit(check, p)) throw ConsistencyError("perfect power reconstruction failed");
    return {root, e};
}

} // namespace implicax
