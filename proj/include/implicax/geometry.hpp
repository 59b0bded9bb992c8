#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "implicax/complexes.hpp"
#include "implicax/gcd.hpp"
#include "implicax/matrix.hpp"
#include "implicax/parameterization.hpp"

namespace implicax {

inline std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// dim A_nu for A = k[X_1..X_m].
inline std::size_t graded_dim(std::size_t nvars, unsigned nu) {
    if (nvars == 0) return nu == 0 ? 1 : 0;
    return binomial(nu + nvars - 1, nvars - 1);
}

/// Echelon basis of the degree-nu piece I_nu of the ideal generated by gens,
/// as coordinate rows over the monomial basis of A_nu.
template <FieldElement K>
std::vector<std::vector<K>> ideal_piece(const std::vector<Poly<K>>& gens, unsigned nu) {
    const unsigned d = common_degree(gens);
    const auto nvars = gens.front().ring()->nvars();
    const auto& field = gens.front().field();
    const auto target = monomial_basis(nvars, nu);
    if (nu < d) return {};
    std::vector<std::vector<K>> span;
    for (auto m : monomial_basis(nvars, nu - d).mons)
        for (const auto& g : gens) {
            std::vector<K> v(target.size(), K::zero(field));
            for (const auto& t : g.terms()) v[target.at(m * t.mon)] += t.coef;
            span.push_back(std::move(v));
        }
    return row_basis(span, target.size(), field);
}

/// dim_k (A/I)_nu.
template <FieldElement K>
std::size_t hilbert_value(const std::vector<Poly<K>>& gens, unsigned nu) {
    const unsigned d = common_degree(gens);
    const auto dim = graded_dim(gens.front().ring()->nvars(), nu);
    if (nu < d) return dim;
    return dim - rank(koszul_matrix(gens, 1, nu - d));
}

template <FieldElement K>
std::size_t hilbert_value(const Parameterization<K>& f, unsigned nu) {
    return hilbert_value(f.polys, nu);
}

// -- base locus ---------------------------------------------------------------------

struct BaseLocus {
    int dim = -1;                // -1 empty, 0 finite, 1 means dimension >= 1
    std::size_t e_total = 0;     // eventual Hilbert value of A/I
    unsigned window_start = 0;
    std::vector<std::size_t> window;  // Hilbert values from window_start on
};

inline unsigned stabilization_start(unsigned n, unsigned d) { return (n - 1) * (d - 1) + 1; }

template <FieldElement K>
BaseLocus base_locus_profile(const std::vector<Poly<K>>& gens) {
    const auto n = static_cast<unsigned>(gens.size());
    const unsigned d = common_degree(gens);
    BaseLocus b;
    b.window_start = stabilization_start(n, d);
    const unsigned w = std::max(n, d);
    for (unsigned nu = b.window_start; nu <= b.window_start + w; ++nu) b.window.push_back(hilbert_value(gens, nu));
    const auto first = b.window.front();
    const bool constant = std::all_of(b.window.begin(), b.window.end(), [&](auto v) { return v == first; });
    if (constant && first == 0) {
        b.dim = -1;
    } else if (constant) {
        b.dim = 0;
    } else {
        b.dim = 1;
    }
    b.e_total = b.window.back();
    return b;
}

template <FieldElement K>
BaseLocus base_locus_profile(const Parameterization<K>& f) {
    return base_locus_profile(f.polys);
}

inline long ipow(long b, unsigned e) {
    long r = 1;
    while (e--) r *= b;
    return r;
}

/// d^{n-2} - e; zero means the map is not generically finite.
template <FieldElement K>
long predicted_degree(const Parameterization<K>& f) {
    auto b = base_locus_profile(f);
    if (b.dim >= 1)
        throw HypothesisViolation(HypothesisViolation::Kind::PositiveDimensionalBaseLocus,
                                  "base locus has positive dimension; divide the polynomials by their gcd");
    return ipow(f.d, f.n - 2) - static_cast<long>(b.e_total);
}

/// (n-2)(d-1): from this degree on the strand determinant is the implicit
/// equation power.
inline unsigned nu_bound(unsigned n, unsigned d) {
    if (n < 3 || d < 1) throw ArithmeticError("nu_bound needs n >= 3 and d >= 1");
    return (n - 2) * (d - 1);
}

// -- saturation -----------------------------------------------------------------------

namespace detail {

// Matrix of g -> (NF(g*u))_{u in A_s}, normal forms modulo I_{nu+s}.
template <FieldElement K>
Mat<K> colon_map(const std::vector<Poly<K>>& gens, unsigned nu, unsigned s) {
    const auto nvars = gens.front().ring()->nvars();
    const auto& field = gens.front().field();
    const auto src = monomial_basis(nvars, nu);
    const auto mult = monomial_basis(nvars, s);
    const auto big = monomial_basis(nvars, nu + s);
    const auto ideal = ideal_piece(gens, nu + s);
    std::vector<long> pivot_row(big.size(), -1);
    for (std::size_t r = 0; r < ideal.size(); ++r) {
        std::size_t c = 0;
        while (ideal[r][c].is_zero()) ++c;
        pivot_row[c] = static_cast<long>(r);
    }
    std::vector<std::size_t> free_pos(big.size(), 0);
    std::size_t nfree = 0;
    for (std::size_t c = 0; c < big.size(); ++c)
        if (pivot_row[c] < 0) free_pos[c] = nfree++;
    Mat<K> m(mult.size() * nfree, src.size(), field);
    for (std::size_t bi = 0; bi < src.size(); ++bi)
        for (std::size_t ui = 0; ui < mult.size(); ++ui) {
            auto c = big.at(src.mons[bi] * mult.mons[ui]);
            const std::size_t base = ui * nfree;
            if (pivot_row[c] < 0) {
                m(base + free_pos[c], bi) += K::one(field);
            } else {
                const auto& row = ideal[static_cast<std::size_t>(pivot_row[c])];
                for (std::size_t q = 0; q < big.size(); ++q)
                    if (pivot_row[q] < 0 && !row[q].is_zero()) m(base + free_pos[q], bi) -= row[q];
            }
        }
    return m;
}

} // namespace detail

inline constexpr unsigned kMaxSaturationSteps = 64;

/// Echelon basis of TF(I)_nu = {g in A_nu : g * A_s in I_{nu+s}}, with s
/// raised until two consecutive steps give the same dimension. Small s can
/// plateau early, so s starts where nu + s reaches m(d - 1) + 1, past which I
/// agrees with its saturation when the base locus is finite.
template <FieldElement K>
std::vector<std::vector<K>> saturation_piece(const std::vector<Poly<K>>& gens, unsigned nu) {
    const auto& field = gens.front().field();
    const auto m = gens.front().ring()->nvars();
    const auto dim = graded_dim(m, nu);
    const unsigned start = static_cast<unsigned>(m) * (common_degree(gens) - 1) + 1;
    std::optional<std::size_t> prev;
    std::vector<std::vector<K>> basis;
    for (unsigned s = start > nu + 1 ? start - nu : 1; s <= kMaxSaturationSteps; ++s) {
        auto rk = rank_and_kernel(detail::colon_map(gens, nu, s));
        basis = row_basis(rk.kernel, dim, field);
        if (prev && *prev == basis.size()) break;
        prev = basis.size();
    }
    return basis;
}

template <FieldElement K>
std::vector<std::vector<K>> saturation_piece(const Parameterization<K>& f, unsigned nu) {
    return saturation_piece(f.polys, nu);
}

// -- syzygetic test -------------------------------------------------------------------------

enum class Verdict { Pass, Fail, NotRun };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotRun: break;
    }
    return "not-run";
}

struct SyzygeticDegree {
    unsigned nu = 0;
    std::size_t boundaries = 0;        // dim (B_1)_nu
    std::size_t cycles_in_tf = 0;      // dim (Z_1 cap TF(I) A^n)_nu
    std::size_t cycles_in_ideal = 0;   // dim (Z_1 cap I A^n)_nu
};

template <FieldElement K>
struct SyzygeticReport {
    Verdict verdict = Verdict::NotRun;        // B_1 = Z_1 cap TF(I) A^n in every tested degree
    Verdict ideal_verdict = Verdict::NotRun;  // B_1 = Z_1 cap I A^n in every tested degree
    unsigned nu_min = 0;
    unsigned nu_max = 0;
    std::vector<SyzygeticDegree> degrees;
    std::optional<unsigned> failing_nu;
    std::vector<Poly<K>> witness;             // element of Z_1 cap TF(I) A^n outside B_1
    std::vector<Poly<K>> generators;          // the generators tested, when they differ from the input
};

namespace detail {

// Z_1 cap (span(rows))^n in degree nu, as vectors over A_nu^n.
template <FieldElement K>
std::vector<std::vector<K>> cycles_with_coefficients_in(const std::vector<Poly<K>>& gens, unsigned nu,
                                                        const std::vector<std::vector<K>>& piece) {
    const std::size_t n = gens.size();
    const unsigned d = common_degree(gens);
    const auto nvars = gens.front().ring()->nvars();
    const auto& field = gens.front().field();
    const auto src = monomial_basis(nvars, nu);
    const auto dst = monomial_basis(nvars, nu + d);
    const std::size_t t = piece.size();
    Mat<K> m(dst.size(), n * t, field);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < t; ++k)
            for (std::size_t c = 0; c < src.size(); ++c) {
                if (piece[k][c].is_zero()) continue;
                for (const auto& term : gens[j].terms())
                    m(dst.at(src.mons[c] * term.mon), j * t + k) += piece[k][c] * term.coef;
            }
    std::vector<std::vector<K>> out;
    for (const auto& y : rank_and_kernel(m).kernel) {
        std::vector<K> g(n * src.size(), K::zero(field));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < t; ++k) {
                if (y[j * t + k].is_zero()) continue;
                for (std::size_t c = 0; c < src.size(); ++c)
                    if (!piece[k][c].is_zero()) g[j * src.size() + c] += y[j * t + k] * piece[k][c];
            }
        out.push_back(std::move(g));
    }
    return out;
}

template <FieldElement K>
bool in_span(const std::vector<std::vector<K>>& basis, const std::vector<K>& v, const FieldSpec& field) {
    auto with = basis;
    with.push_back(v);
    return row_basis(with, v.size(), field).size() == row_basis(basis, v.size(), field).size();
}

// Echelon form taken from the last coordinate backwards, so that each basis
// vector ends in a distinct coordinate.
template <FieldElement K>
std::vector<std::vector<K>> trailing_echelon(std::vector<std::vector<K>> vs, std::size_t dim, const FieldSpec& field) {
    for (auto& v : vs) std::reverse(v.begin(), v.end());
    auto b = row_basis(vs, dim, field);
    for (auto& v : b) std::reverse(v.begin(), v.end());
    return b;
}

} // namespace detail

/// Compares Z_1 cap TF(I) A^n (and Z_1 cap I A^n) with the Koszul boundaries
/// B_1 in each degree 0..nu_max.
template <FieldElement K>
SyzygeticReport<K> syzygetic_test(const std::vector<Poly<K>>& gens, unsigned nu_max) {
    const std::size_t n = gens.size();
    const auto& ring = gens.front().ring();
    const auto& field = gens.front().field();
    SyzygeticReport<K> rep;
    rep.verdict = Verdict::Pass;
    rep.ideal_verdict = Verdict::Pass;
    rep.nu_min = 0;
    rep.nu_max = nu_max;
    for (unsigned nu = 0; nu <= nu_max; ++nu) {
        const auto src = monomial_basis(ring->nvars(), nu);
        auto b1 = boundary_basis(gens, nu);
        auto tf = detail::cycles_with_coefficients_in(gens, nu, saturation_piece(gens, nu));
        auto id = detail::cycles_with_coefficients_in(gens, nu, ideal_piece(gens, nu));
        rep.degrees.push_back({nu, b1.size(), tf.size(), id.size()});
        if (id.size() != b1.size()) rep.ideal_verdict = Verdict::Fail;
        if (tf.size() == b1.size() || rep.failing_nu) {
            if (tf.size() != b1.size()) rep.verdict = Verdict::Fail;
            continue;
        }
        rep.verdict = Verdict::Fail;
        rep.failing_nu = nu;
        for (const auto& v : detail::trailing_echelon(tf, n * src.size(), field)) {
            if (detail::in_span(b1, v, field)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<Term<K>> terms;
                for (std::size_t c = 0; c < src.size(); ++c)
                    if (!v[j * src.size() + c].is_zero()) terms.push_back({src.mons[c], v[j * src.size() + c]});
                rep.witness.push_back(Poly<K>::from_terms(ring, std::move(terms)));
            }
            // scale so the first nonzero component is normalized
            for (const auto& w : rep.witness) {
                if (w.is_zero()) continue;
                K scale = normalized(w).leading_coefficient() / w.leading_coefficient();
                for (auto& x : rep.witness) x = x * scale;
                break;
            }
            break;
        }
    }
    return rep;
}

/// For n forms in n - 1 variables the criterion needs as many generators as
/// variables: the test runs on n - 1 generic combinations of the f_i, which
/// generate I locally at each base point wherever I is a local complete
/// intersection, so they have the same saturation. That equality is checked in
/// every tested degree and the combination redrawn if it fails.
template <FieldElement K>
SyzygeticReport<K> syzygetic_test(const Parameterization<K>& f, unsigned nu_max, std::uint64_t seed = kDefaultSeed) {
    const std::size_t m = f.nvars();
    if (f.polys.size() <= m) return syzygetic_test(f.polys, nu_max);
    const auto& field = f.field();
    Rng rng(seed);
    std::uniform_int_distribution<std::int64_t> coef(-9, 9);
    auto same_saturation = [&](const std::vector<Poly<K>>& j) {
        for (unsigned nu = 0; nu <= nu_max; ++nu) {
            auto a = saturation_piece(f.polys, nu);
            auto b = saturation_piece(j, nu);
            if (a.size() != b.size()) return false;
            auto both = a;
            both.insert(both.end(), b.begin(), b.end());
            if (row_basis(both, graded_dim(m, nu), field).size() != a.size()) return false;
        }
        return true;
    };
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::vector<Poly<K>> j;
        for (std::size_t i = 0; i < m; ++i) {
            Poly<K> g(f.x_ring);
            for (const auto& p : f.polys) g += p * Poly<K>::constant(f.x_ring, K::from_int(coef(rng), field));
            j.push_back(std::move(g));
        }
        if (std::any_of(j.begin(), j.end(), [](const auto& g) { return g.is_zero(); }) || !same_saturation(j))
            continue;
        auto rep = syzygetic_test(j, nu_max);
        rep.generators = std::move(j);
        return rep;
    }
    throw ArithmeticError("no generic combination of the forms has the saturation of I");
}

/// Whether w = (w_1..w_n) lies in Z_1, has coefficients in TF(I), and lies
/// outside B_1: a certificate that the syzygetic test fails in that degree.
template <FieldElement K>
bool is_syzygetic_witness(const std::vector<Poly<K>>& gens, const std::vector<Poly<K>>& w) {
    if (w.size() != gens.size()) return false;
    std::optional<unsigned> nu;
    for (const auto& c : w) {
        if (c.is_zero()) continue;
        auto cd = c.homogeneous_degree();
        if (!cd || (nu && *nu != *cd)) return false;
        nu = cd;
    }
    if (!nu) return false;
    Poly<K> contraction(gens.front().ring());
    for (std::size_t j = 0; j < gens.size(); ++j) contraction += w[j] * gens[j];
    if (!contraction.is_zero()) return false;
    const auto& field = gens.front().field();
    const auto src = monomial_basis(gens.front().ring()->nvars(), *nu);
    auto tf = saturation_piece(gens, *nu);
    std::vector<K> flat;
    for (const auto& c : w) {
        std::vector<K> v(src.size(), K::zero(field));
        for (const auto& t : c.terms()) v[src.at(t.mon)] = t.coef;
        if (!detail::in_span(tf, v, field)) return false;
        flat.insert(flat.end(), v.begin(), v.end());
    }
    return !detail::in_span(boundary_basis(gens, *nu), flat, field);
}

// -- report -------------------------------------------------------------------------------

template <FieldElement K>
struct BasePointReport {
    Poly<K> content_gcd;
    int base_locus_dim = -1;
    std::size_t e_total = 0;
    std::optional<long> predicted_degree;   // absent for a positive-dimensional base locus
    bool generically_finite = false;
    unsigned nu_bound = 0;
    BaseLocus profile;
    SyzygeticReport<K> syzygetic;
};

} // namespace implicax
