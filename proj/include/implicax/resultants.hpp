#pragma once

#include <string>
#include <vector>

#include "implicax/errors.hpp"
#include "implicax/gcd.hpp"
#include "implicax/matrix.hpp"
#include "implicax/parameterization.hpp"

namespace implicax {

/// c_0 X1^d + c_1 X1^{d-1} X2 + ... + c_d X2^d with coefficients in a
/// coefficient ring (a ring without variables for plain scalars).
template <FieldElement K>
struct BinaryForm {
    RingPtr coeff_ring;
    std::vector<Poly<K>> coeffs;   // size degree + 1

    unsigned degree() const { return static_cast<unsigned>(coeffs.size() - 1); }
    bool is_zero() const {
        return std::all_of(coeffs.begin(), coeffs.end(), [](const auto& c) { return c.is_zero(); });
    }

    friend BinaryForm operator+(const BinaryForm& a, const BinaryForm& b) { return combine(a, b, false); }
    friend BinaryForm operator-(const BinaryForm& a, const BinaryForm& b) { return combine(a, b, true); }
    friend BinaryForm operator*(const Poly<K>& s, const BinaryForm& a) {
        BinaryForm r{a.coeff_ring, {}};
        for (const auto& c : a.coeffs) r.coeffs.push_back(s * c);
        return r;
    }

private:
    static BinaryForm combine(const BinaryForm& a, const BinaryForm& b, bool subtract) {
        if (a.coeffs.size() != b.coeffs.size()) throw ArithmeticError("binary forms of different degrees");
        BinaryForm r{a.coeff_ring, {}};
        for (std::size_t j = 0; j < a.coeffs.size(); ++j)
            r.coeffs.push_back(subtract ? a.coeffs[j] - b.coeffs[j] : a.coeffs[j] + b.coeffs[j]);
        return r;
    }
};

template <FieldElement K>
RingPtr scalar_ring(const FieldSpec& f) {
    return make_ring(f, {});
}

/// Binary form of a homogeneous polynomial in a two-variable ring, with
/// coefficients placed as constants of coeff_ring.
template <FieldElement K>
BinaryForm<K> binary_form(const Poly<K>& p, unsigned degree, const RingPtr& coeff_ring) {
    if (p.ring()->nvars() != 2) throw ArithmeticError("binary forms need a ring in two variables");
    BinaryForm<K> b{coeff_ring, std::vector<Poly<K>>(degree + 1, Poly<K>(coeff_ring))};
    for (const auto& t : p.terms()) {
        if (t.mon.degree() != degree) throw ArithmeticError("binary form is not homogeneous of degree " +
                                                            std::to_string(degree));
        b.coeffs[t.mon.exponent(1)] = Poly<K>::constant(coeff_ring, t.coef);
    }
    return b;
}

template <FieldElement K>
BinaryForm<K> binary_form(const Poly<K>& p, const RingPtr& coeff_ring) {
    if (p.is_zero()) throw ArithmeticError("degree of the zero form is ambiguous");
    auto d = p.homogeneous_degree();
    if (!d) throw ArithmeticError("binary form is not homogeneous");
    return binary_form(p, *d, coeff_ring);
}

template <FieldElement K>
PolyMat<K> sylvester_matrix(const BinaryForm<K>& p, const BinaryForm<K>& q) {
    const unsigned dp = p.degree(), dq = q.degree();
    if (dp < 1 || dq < 1) throw ArithmeticError("Sylvester matrix needs forms of degree at least 1");
    if (p.is_zero() || q.is_zero()) throw ArithmeticError("resultant of a zero form");
    const std::size_t n = dp + dq;
    PolyMat<K> m(n, n, p.coeff_ring);
    for (std::size_t r = 0; r < dq; ++r)
        for (std::size_t j = 0; j <= dp; ++j) m(r, r + j) = p.coeffs[j];
    for (std::size_t r = 0; r < dp; ++r)
        for (std::size_t j = 0; j <= dq; ++j) m(dq + r, r + j) = q.coeffs[j];
    return m;
}

template <FieldElement K>
Poly<K> sylvester_resultant(const BinaryForm<K>& p, const BinaryForm<K>& q) {
    return det(sylvester_matrix(p, q));
}

/// Coefficient matrix (c_ij) of (P(S,1)Q(T,1) - P(T,1)Q(S,1)) / (S - T) =
/// sum c_ij S^i T^j, entry (i, j) = c_ij.
template <FieldElement K>
PolyMat<K> bezout_matrix(const BinaryForm<K>& p, const BinaryForm<K>& q) {
    if (p.degree() != q.degree()) throw ArithmeticError("Bezout matrix needs forms of equal degree");
    const std::size_t d = p.degree();
    if (d < 1) throw ArithmeticError("Bezout matrix needs degree at least 1");
    const auto& ring = p.coeff_ring;
    // a_i = coefficient of S^i in P(S,1)
    auto a = [&](std::size_t i) -> const Poly<K>& { return p.coeffs[d - i]; };
    auto b = [&](std::size_t i) -> const Poly<K>& { return q.coeffs[d - i]; };
    auto numerator = [&](std::size_t i, std::size_t j) { return a(i) * b(j) - a(j) * b(i); };
    // (S - T) sum c_ij S^i T^j = N  gives  c_{i-1,j} - c_{i,j-1} = N_ij
    PolyMat<K> c(d, d, ring);
    for (std::size_t i = d; i-- > 0;)
        for (std::size_t j = 0; j < d; ++j) {
            Poly<K> v = numerator(i + 1, j);
            if (i + 1 < d && j > 0) v += c(i + 1, j - 1);
            c(i, j) = std::move(v);
        }
    // the quotient is exact: check the remaining coefficients of (S - T) * c
    for (std::size_t i = 0; i <= d; ++i)
        for (std::size_t j = 0; j <= d; ++j) {
            Poly<K> lhs(ring);
            if (i > 0 && j < d) lhs += c(i - 1, j);
            if (j > 0 && i < d) lhs -= c(i, j - 1);
            if (!(lhs == numerator(i, j))) throw ConsistencyError("Bezoutian division is not exact");
        }
    return c;
}

/// T1 Bez(f2, f3) + T2 Bez(f3, f1) + T3 Bez(f1, f2), using the first three
/// variables of t_ring.
template <FieldElement K>
PolyMat<K> kravitsky_pencil(const BinaryForm<K>& f1, const BinaryForm<K>& f2, const BinaryForm<K>& f3,
                            const RingPtr& t_ring) {
    if (f1.degree() != f2.degree() || f2.degree() != f3.degree())
        throw ArithmeticError("Kravitsky pencil needs three forms of equal degree");
    if (t_ring->nvars() < 3) throw ArithmeticError("Kravitsky pencil needs three T variables");
    const std::size_t d = f1.degree();
    const BinaryForm<K>* pairs[3][2] = {{&f2, &f3}, {&f3, &f1}, {&f1, &f2}};
    PolyMat<K> m(d, d, t_ring);
    for (std::size_t t = 0; t < 3; ++t) {
        auto bez = bezout_matrix(*pairs[t][0], *pairs[t][1]);
        auto var = Poly<K>::variable(t_ring, t);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const auto& e = bez(i, j);
                if (e.is_zero()) continue;
                if (!e.is_constant()) throw ArithmeticError("Kravitsky pencil needs scalar forms");
                m(i, j) += var * e.constant_term();
            }
    }
    return m;
}

namespace detail {

template <FieldElement K>
void require_curve(const Parameterization<K>& f) {
    if (f.n != 3) throw ArithmeticError("resultant methods handle curves (three forms in two variables) only");
}

template <FieldElement K>
void require_no_common_factor(const Parameterization<K>& f) {
    auto g = multivariate_gcd(std::span<const Poly<K>>(f.polys));
    if (!g.is_constant())
        throw HypothesisViolation(HypothesisViolation::Kind::CommonFactor,
                                  "the forms share the factor " + g.to_string() +
                                      "; resultant methods need base-point-free input, divide it out first");
}

} // namespace detail

/// Res(f1 - T1 f3, f2 - T2 f3), the dehomogenized implicit power
/// C(T1, T2, 1)^deg, as a polynomial in the T ring (T3 absent).
template <FieldElement K>
Poly<K> curve_implicitize_resultant(const Parameterization<K>& f) {
    detail::require_curve(f);
    detail::require_no_common_factor(f);
    const auto& tr = f.t_ring;
    auto b1 = binary_form(f.polys[0], f.d, tr);
    auto b2 = binary_form(f.polys[1], f.d, tr);
    auto b3 = binary_form(f.polys[2], f.d, tr);
    auto p = b1 - Poly<K>::variable(tr, 0) * b3;
    auto q = b2 - Poly<K>::variable(tr, 1) * b3;
    auto r = sylvester_resultant(p, q);
    if (r.is_zero())
        throw HypothesisViolation(HypothesisViolation::Kind::NotGenericallyFinite, "resultant vanishes identically");
    return r;
}

/// Determinant of the Kravitsky pencil of a curve parameterization.
template <FieldElement K>
Poly<K> kravitsky_implicitize(const Parameterization<K>& f) {
    detail::require_curve(f);
    detail::require_no_common_factor(f);
    auto sr = scalar_ring<K>(f.field());
    auto m = kravitsky_pencil(binary_form(f.polys[0], f.d, sr), binary_form(f.polys[1], f.d, sr),
                              binary_form(f.polys[2], f.d, sr), f.t_ring);
    auto r = det(m);
    if (r.is_zero())
        throw HypothesisViolation(HypothesisViolation::Kind::NotGenericallyFinite,
                                  "Kravitsky determinant vanishes identically");
    return r;
}

} // namespace implicax
