#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "implicax/errors.hpp"
#include "implicax/gcd.hpp"
#include "implicax/matrix.hpp"
#include "implicax/parameterization.hpp"
#include "implicax/poly.hpp"

namespace implicax {

/// Monomials of one degree in nvars variables, in decreasing grevlex order.
struct MonomialBasis {
    std::vector<Monomial> mons;
    std::unordered_map<std::uint64_t, std::size_t> index;

    std::size_t size() const { return mons.size(); }
    std::size_t at(Monomial m) const { return index.at(m.packed()); }
};

inline MonomialBasis monomial_basis(std::size_t nvars, unsigned degree) {
    MonomialBasis b;
    if (nvars == 0) {
        if (degree == 0) b.mons.push_back(Monomial{});
    } else {
        std::vector<unsigned> e(nvars, 0);
        // enumerate compositions of `degree` into nvars parts
        auto rec = [&](auto&& self, std::size_t v, unsigned left) -> void {
            if (v + 1 == nvars) {
                e[v] = left;
                b.mons.push_back(Monomial::from_exponents(e));
                return;
            }
            for (unsigned k = 0; k <= left; ++k) {
                e[v] = k;
                self(self, v + 1, left - k);
            }
        };
        rec(rec, 0, degree);
    }
    std::sort(b.mons.begin(), b.mons.end(), grevlex_greater);
    for (std::size_t i = 0; i < b.mons.size(); ++i) b.index.emplace(b.mons[i].packed(), i);
    return b;
}

/// Lexicographically ordered k-subsets of {0..n-1}.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> s(k);
    for (std::size_t i = 0; i < k; ++i) s[i] = i;
    while (true) {
        out.push_back(s);
        std::size_t i = k;
        while (i > 0 && s[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++s[i - 1];
        for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
    }
    return out;
}

/// Basis of the exterior degree i part of A^n with coefficients in A_nu:
/// vector (J, m) sits at position index_of(J) * |A_nu| + index_of(m).
struct KoszulBasis {
    unsigned i = 0;
    unsigned nu = 0;
    std::vector<std::vector<std::size_t>> index_sets;
    MonomialBasis monomials;
    std::unordered_map<unsigned, std::size_t> set_index;  // bitmask -> position

    KoszulBasis(std::size_t n, std::size_t nvars, unsigned i_, unsigned nu_)
        : i(i_), nu(nu_), index_sets(subsets(n, i_)), monomials(monomial_basis(nvars, nu_)) {
        for (std::size_t k = 0; k < index_sets.size(); ++k) set_index.emplace(mask(index_sets[k]), k);
    }

    std::size_t size() const { return index_sets.size() * monomials.size(); }
    std::size_t position(unsigned set_mask, Monomial m) const {
        return set_index.at(set_mask) * monomials.size() + monomials.at(m);
    }

    static unsigned mask(const std::vector<std::size_t>& J) {
        unsigned s = 0;
        for (auto j : J) s |= 1u << j;
        return s;
    }
};

// -- Koszul differential --------------------------------------------------------

/// Matrix of d_f from exterior degree i (coefficients in A_nu) to exterior
/// degree i-1 (coefficients in A_{nu+d}); e_J -> sum_pos (-1)^pos f_{J[pos]} e_{J \ J[pos]}.
template <FieldElement K>
Mat<K> koszul_matrix(const std::vector<Poly<K>>& gens, unsigned i, unsigned nu) {
    const std::size_t n = gens.size();
    if (i < 1 || i > n) throw ArithmeticError("exterior degree " + std::to_string(i) + " out of range 1.." +
                                              std::to_string(n));
    const unsigned d = common_degree(gens);
    const auto nvars = gens.front().ring()->nvars();
    const auto& field = gens.front().field();
    KoszulBasis src(n, nvars, i, nu), dst(n, nvars, i - 1, nu + d);
    Mat<K> m(dst.size(), src.size(), field);
    for (std::size_t s = 0; s < src.index_sets.size(); ++s) {
        const auto& J = src.index_sets[s];
        const unsigned jm = KoszulBasis::mask(J);
        for (std::size_t mi = 0; mi < src.monomials.size(); ++mi) {
            const Monomial mon = src.monomials.mons[mi];
            const std::size_t col = s * src.monomials.size() + mi;
            for (std::size_t pos = 0; pos < J.size(); ++pos) {
                const auto j = J[pos];
                const unsigned rest = jm & ~(1u << j);
                for (const auto& t : gens[j].terms()) {
                    auto row = dst.position(rest, mon * t.mon);
                    if (pos % 2) m(row, col) -= t.coef;
                    else m(row, col) += t.coef;
                }
            }
        }
    }
    return m;
}

template <FieldElement K>
Mat<K> koszul_differential_matrix(const Parameterization<K>& f, unsigned i, unsigned nu) {
    return koszul_matrix(f.polys, i, nu);
}

/// Reduced echelon basis of the i-cycles with coefficients in A_nu; vector k
/// has a 1 at free_columns[k] and 0 at the other free columns.
template <FieldElement K>
struct CycleSpace {
    std::vector<std::vector<K>> basis;
    std::vector<std::size_t> free_columns;
    std::size_t dim() const { return basis.size(); }
};

template <FieldElement K>
CycleSpace<K> cycle_space(const std::vector<Poly<K>>& gens, unsigned i, unsigned nu) {
    auto rk = rank_and_kernel(koszul_matrix(gens, i, nu));
    return {std::move(rk.kernel), std::move(rk.free_columns)};
}

template <FieldElement K>
std::vector<std::vector<K>> cycle_basis(const Parameterization<K>& f, unsigned i, unsigned nu) {
    if (i < 1 || i + 1 > f.n) throw ArithmeticError("cycle degree must lie in 1..n-1");
    return cycle_space(f.polys, i, nu).basis;
}

/// Degree-nu k-basis of the Koszul boundaries B_1 inside A_nu^n, spanned by
/// m * (f_j e_i - f_i e_j) with deg m = nu - d, echelon reduced.
template <FieldElement K>
std::vector<std::vector<K>> boundary_basis(const std::vector<Poly<K>>& gens, unsigned nu) {
    const std::size_t n = gens.size();
    const unsigned d = common_degree(gens);
    const auto nvars = gens.front().ring()->nvars();
    const auto& field = gens.front().field();
    const auto target = monomial_basis(nvars, nu);
    const std::size_t dim = n * target.size();
    if (nu < d) return {};
    const auto mult = monomial_basis(nvars, nu - d);
    std::vector<std::vector<K>> span;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (auto m : mult.mons) {
                std::vector<K> v(dim, K::zero(field));
                for (const auto& t : gens[j].terms()) v[i * target.size() + target.at(m * t.mon)] += t.coef;
                for (const auto& t : gens[i].terms()) v[j * target.size() + target.at(m * t.mon)] -= t.coef;
                span.push_back(std::move(v));
            }
    return row_basis(span, dim, field);
}

template <FieldElement K>
std::vector<std::vector<K>> boundary_basis(const Parameterization<K>& f, unsigned nu) {
    return boundary_basis(f.polys, nu);
}

// -- the Z-complex strand ---------------------------------------------------------

template <FieldElement K>
struct ZStrand {
    unsigned nu = 0;
    std::vector<std::size_t> dims;               // z_0 .. z_{n-1}
    std::vector<PolyMat<K>> maps;                // maps[i]: Z_{i+1} -> Z_i, z_i x z_{i+1}
    std::vector<CycleSpace<K>> cycles;           // cycles[i] for i >= 1; cycles[0] unused
    RingPtr t_ring;
};

/// Degree-nu strand of the approximation complex: cycle bases of d_f for
/// i = 1..n-1 and the matrices of d_T between them.
template <FieldElement K>
ZStrand<K> z_strand(const Parameterization<K>& f, unsigned nu) {
    const std::size_t n = f.n;
    const auto& field = f.field();
    const auto mons = monomial_basis(f.nvars(), nu);
    const std::size_t a = mons.size();

    ZStrand<K> s;
    s.nu = nu;
    s.t_ring = f.t_ring;
    s.dims.push_back(a);
    s.cycles.emplace_back();
    for (unsigned i = 1; i < n; ++i) {
        s.cycles.push_back(cycle_space(f.polys, i, nu));
        s.dims.push_back(s.cycles.back().dim());
    }

    for (unsigned i = 1; i < n; ++i) {
        KoszulBasis src(n, f.nvars(), i, nu), dst(n, f.nvars(), i - 1, nu);
        const auto& zi = s.cycles[i];
        PolyMat<K> map(s.dims[i - 1], s.dims[i], f.t_ring);
        for (std::size_t col = 0; col < zi.dim(); ++col) {
            const auto& v = zi.basis[col];
            // w[t] = coefficient vector of T_t in d_T(v)
            std::vector<std::vector<K>> w(n, std::vector<K>(dst.size(), K::zero(field)));
            for (std::size_t p = 0; p < v.size(); ++p) {
                if (v[p].is_zero()) continue;
                const auto& J = src.index_sets[p / a];
                const unsigned jm = KoszulBasis::mask(J);
                const std::size_t mi = p % a;
                for (std::size_t pos = 0; pos < J.size(); ++pos) {
                    const auto j = J[pos];
                    const auto row = dst.set_index.at(jm & ~(1u << j)) * a + mi;
                    if (pos % 2) w[j][row] -= v[p];
                    else w[j][row] += v[p];
                }
            }
            std::vector<std::vector<Term<K>>> entries(s.dims[i - 1]);
            for (std::size_t t = 0; t < n; ++t) {
                std::vector<K> coords;
                if (i == 1) {
                    coords = w[t];
                } else {
                    // coordinates in an echelon cycle basis are read off the free columns
                    const auto& prev = s.cycles[i - 1];
                    std::vector<K> check(dst.size(), K::zero(field));
                    for (std::size_t k = 0; k < prev.dim(); ++k) {
                        K c = w[t][prev.free_columns[k]];
                        coords.push_back(c);
                        if (c.is_zero()) continue;
                        for (std::size_t q = 0; q < check.size(); ++q)
                            if (!prev.basis[k][q].is_zero()) check[q] += c * prev.basis[k][q];
                    }
                    if (!(check == w[t]))
                        throw ConsistencyError("d_T image of a cycle is not a cycle (degree " + std::to_string(nu) +
                                               ", exterior degree " + std::to_string(i) + ")");
                }
                for (std::size_t r = 0; r < coords.size(); ++r)
                    if (!coords[r].is_zero()) entries[r].push_back({Monomial::var(t), coords[r]});
            }
            for (std::size_t r = 0; r < entries.size(); ++r)
                map(r, col) = Poly<K>::from_terms(f.t_ring, std::move(entries[r]));
        }
        s.maps.push_back(std::move(map));
    }
    return s;
}

// -- determinant of the strand ------------------------------------------------------

template <FieldElement K>
struct MinorLink {
    std::size_t map = 0;   // index into ZStrand::maps
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    Poly<K> det;
    int exponent = 1;      // +1 numerator, -1 denominator
    std::size_t size() const { return rows.size(); }
};

template <FieldElement K>
struct ComplexDet {
    Poly<K> value;
    std::vector<MinorLink<K>> chain;
    std::vector<std::size_t> ranks;   // r_1 .. r_{n-1}

    /// Sum of +-deg over the chain.
    int signed_degree() const {
        int s = 0;
        for (const auto& l : chain) s += l.exponent * std::max(0, l.det.total_degree());
        return s;
    }
};

namespace detail {

inline bool exact_profile(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& ranks) {
    if (ranks.empty() || ranks[0] != dims[0]) return false;
    for (std::size_t i = 1; i < dims.size(); ++i) {
        std::size_t next = i < ranks.size() ? ranks[i] : 0;
        if (ranks[i - 1] + next != dims[i]) return false;
    }
    return true;
}

template <FieldElement K>
std::vector<std::size_t> rank_profile(const ZStrand<K>& s, Rng& rng) {
    auto point = random_point<K>(rng, s.t_ring->field, s.t_ring->nvars());
    std::vector<std::size_t> r;
    for (const auto& m : s.maps) r.push_back(rank(specialize(m, std::span<const K>(point))));
    return r;
}

inline std::string profile_string(const std::vector<std::size_t>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "]";
}

} // namespace detail

/// Determinant of the strand as a based complex: nested nonsingular minors
/// chosen right to left, value = prod(odd minors) / prod(even minors).
template <FieldElement K>
ComplexDet<K> complex_determinant(const ZStrand<K>& s, std::uint64_t seed = kDefaultSeed) {
    using HV = HypothesisViolation;
    if (s.maps.empty()) throw HV(HV::Kind::RankProfile, "strand has no maps");
    Rng rng(seed);
    auto ranks = detail::rank_profile(s, rng);
    if (!detail::exact_profile(s.dims, ranks)) {
        auto again = detail::rank_profile(s, rng);
        if (!detail::exact_profile(s.dims, again))
            throw HV(HV::Kind::RankProfile, "strand in degree " + std::to_string(s.nu) +
                                                " is not generically exact: dims " + detail::profile_string(s.dims) +
                                                ", ranks " + detail::profile_string(again));
        ranks = again;
    }

    ComplexDet<K> out{Poly<K>(s.t_ring), {}, ranks};
    auto one = Poly<K>::constant(s.t_ring, K::one(s.t_ring->field));
    Poly<K> num = one, den = one;
    std::vector<std::size_t> rows(s.dims[0]);
    for (std::size_t k = 0; k < rows.size(); ++k) rows[k] = k;
    for (std::size_t i = 0; i < s.maps.size(); ++i) {
        MinorChoice<K> choice{rows, {}, one};
        if (!rows.empty()) {
            try {
                choice = select_columns(s.maps[i], rows, rng);
            } catch (const RankDeficient&) {
                throw HV(HV::Kind::RankProfile, "no nonsingular minor of size " + std::to_string(rows.size()) +
                                                    " in map " + std::to_string(i + 1) + " of the degree " +
                                                    std::to_string(s.nu) + " strand");
            }
        }
        const int exponent = i % 2 == 0 ? 1 : -1;
        (exponent > 0 ? num : den) *= choice.det;
        std::vector<bool> used(s.dims[i + 1], false);
        for (auto c : choice.cols) used[c] = true;
        out.chain.push_back({i, std::move(choice.rows), std::move(choice.cols), std::move(choice.det), exponent});
        rows.clear();
        for (std::size_t k = 0; k < used.size(); ++k)
            if (!used[k]) rows.push_back(k);
    }
    if (!rows.empty())
        throw HV(HV::Kind::RankProfile, "last map of the degree " + std::to_string(s.nu) + " strand is not injective");
    auto q = try_divide(num, den);
    if (!q) throw HV(HV::Kind::RankProfile, "alternating product of minors is not a polynomial");
    out.value = std::move(*q);
    return out;
}

namespace detail {

inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > cap) return cap + 1;
    }
    return r;
}

} // namespace detail

/// Maximal minor counts up to this bound are enumerated exactly.
inline constexpr std::uint64_t kEnumerateMinors = 128;

/// Gcd of the maximal minors of the first map Z_1 -> A_nu[T]. Few minors are
/// enumerated; otherwise random sparse combinations det(M R), which by
/// Cauchy-Binet are combinations of all maximal minors, are folded into the
/// gcd until a fresh one leaves it unchanged.
template <FieldElement K>
Poly<K> gcd_of_maximal_minors(const ZStrand<K>& s, std::uint64_t seed = kDefaultSeed) {
    using HV = HypothesisViolation;
    if (s.maps.empty()) throw HV(HV::Kind::RankProfile, "strand has no maps");
    const auto& m = s.maps[0];
    const std::size_t r = m.rows(), c = m.cols();
    if (c < r)
        throw HV(HV::Kind::RankProfile, "first map has fewer columns (" + std::to_string(c) + ") than rows (" +
                                            std::to_string(r) + ")");
    std::vector<std::size_t> rows(r);
    for (std::size_t i = 0; i < r; ++i) rows[i] = i;
    std::optional<Poly<K>> g;
    auto fold = [&](const Poly<K>& minor) {
        if (minor.is_zero()) return false;
        auto next = g ? multivariate_gcd(*g, minor) : normalized(minor);
        bool changed = !g || !(next == *g);
        g = std::move(next);
        return changed;
    };

    if (detail::binomial_capped(c, r, kEnumerateMinors) <= kEnumerateMinors) {
        for (const auto& cols : subsets(c, r)) fold(det(m.submatrix(rows, cols)));
    } else {
        const auto& field = s.t_ring->field;
        Rng rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, c - 1);
        constexpr int kRounds = 16, kPerColumn = 3;
        int used = 0;
        for (int round = 0; round < kRounds; ++round) {
            Mat<K> mix(c, r, field);
            for (std::size_t j = 0; j < r; ++j)
                for (int q = 0; q < kPerColumn; ++q) mix(pick(rng), j) = K::random(rng, field, 100);
            auto combo = det(m * mix);
            if (combo.is_zero()) continue;
            ++used;
            if (!fold(combo) && used >= 3) break;
        }
    }
    if (!g) throw HV(HV::Kind::RankProfile, "all maximal minors of the first map vanish");
    return *g;
}

} // namespace implicax
