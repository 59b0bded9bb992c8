#include <gtest/gtest.h>

#include <map>

#include "support.hpp"

using namespace implicax;
using namespace implicax::testing;

namespace {

using Q = Rational;

/// Element of the exterior power with polynomial coefficients, keyed by the
/// bitmask of the index set.
template <FieldElement K>
using Exterior = std::map<unsigned, Poly<K>>;

/// d_f computed on polynomials, independent of any matrix layout.
template <FieldElement K>
Exterior<K> contract(const Exterior<K>& v, const std::vector<Poly<K>>& f) {
    Exterior<K> out;
    for (const auto& [mask, coef] : v) {
        int pos = 0;
        for (std::size_t j = 0; j < f.size(); ++j) {
            if (!(mask & (1u << j))) continue;
            auto term = f[j] * coef;
            const unsigned rest = mask & ~(1u << j);
            auto it = out.find(rest);
            if (it == out.end()) it = out.emplace(rest, Poly<K>(coef.ring())).first;
            if (pos % 2) it->second -= term;
            else it->second += term;
            ++pos;
        }
    }
    return out;
}

template <FieldElement K>
Exterior<K> from_coords(const KoszulBasis& b, const std::vector<K>& v, const RingPtr& ring) {
    Exterior<K> out;
    const auto a = b.monomials.size();
    for (std::size_t p = 0; p < v.size(); ++p) {
        if (v[p].is_zero()) continue;
        auto mask = KoszulBasis::mask(b.index_sets[p / a]);
        auto it = out.find(mask);
        if (it == out.end()) it = out.emplace(mask, Poly<K>(ring)).first;
        it->second += Poly<K>::monomial(ring, b.monomials.mons[p % a], v[p]);
    }
    return out;
}

template <FieldElement K>
bool exterior_equal(const Exterior<K>& a, const Exterior<K>& b) {
    auto nonzero = [](const Exterior<K>& e) {
        std::map<unsigned, std::string> s;
        for (const auto& [m, p] : e)
            if (!p.is_zero()) s[m] = p.to_string();
        return s;
    };
    return nonzero(a) == nonzero(b);
}

bool all_zero(const auto& vec) {
    for (const auto& x : vec)
        if (!x.is_zero()) return false;
    return true;
}

} // namespace

TEST(Koszul, MatrixMatchesPolynomialContraction) {
    Rng rng(21);
    for (const auto& e : worked_examples()) {
        auto f = example_param<Q>(e);
        for (unsigned i = 1; i <= f.n; ++i)
            for (unsigned nu = 0; nu <= 2; ++nu) {
                auto m = koszul_differential_matrix(f, i, nu);
                KoszulBasis src(f.n, f.nvars(), i, nu), dst(f.n, f.nvars(), i - 1, nu + f.d);
                ASSERT_EQ(m.cols(), src.size());
                ASSERT_EQ(m.rows(), dst.size());
                for (int trial = 0; trial < 3; ++trial) {
                    std::vector<Q> v;
                    for (std::size_t k = 0; k < src.size(); ++k) v.push_back(small_nonzero<Q>(rng, kQQ));
                    auto via_matrix = from_coords(dst, m.apply(std::span<const Q>(v)), f.x_ring);
                    auto direct = contract(from_coords(src, v, f.x_ring), f.polys);
                    EXPECT_TRUE(exterior_equal(via_matrix, direct)) << e.name << " i=" << i << " nu=" << nu;
                }
            }
    }
}

TEST(Koszul, DifferentialSquaresToZero) {
    for (const auto& e : worked_examples()) {
        auto f = example_param<Q>(e);
        for (unsigned i = 1; i < f.n; ++i)
            for (unsigned nu = 0; nu <= 3; ++nu) {
                auto outer = koszul_differential_matrix(f, i, nu + f.d);
                auto inner = koszul_differential_matrix(f, i + 1, nu);
                EXPECT_TRUE((outer * inner).is_zero()) << e.name << " i=" << i << " nu=" << nu;
            }
    }
}

TEST(Koszul, TopExteriorPowerIsOneColumn) {
    auto f = example_param<Q>(worked_examples()[2]);
    auto m = koszul_differential_matrix(f, f.n, 0);
    EXPECT_EQ(m.cols(), 1u);
    std::size_t nonzero = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) nonzero += !m(r, 0).is_zero();
    std::size_t terms = 0;
    for (const auto& p : f.polys) terms += p.size();
    EXPECT_EQ(nonzero, terms);
    EXPECT_THROW(koszul_differential_matrix(f, 0, 0), ArithmeticError);
    EXPECT_THROW(koszul_differential_matrix(f, f.n + 1, 0), ArithmeticError);
}

TEST(Cycles, ConicSyzygies) {
    auto f = param<Q>({"X1", "X2"}, {"X1^2", "X1*X2", "X2^2"});
    auto z = cycle_basis(f, 1, 1);
    ASSERT_EQ(z.size(), 2u);
    KoszulBasis b(3, 2, 1, 1);
    std::vector<Q> s1(b.size(), Q(0)), s2(b.size(), Q(0));
    auto x1 = Monomial::var(0), x2 = Monomial::var(1);
    s1[b.position(1u << 0, x2)] = Q(1);
    s1[b.position(1u << 1, x1)] = Q(-1);
    s2[b.position(1u << 1, x2)] = Q(1);
    s2[b.position(1u << 2, x1)] = Q(-1);
    auto combined = z;
    combined.push_back(s1);
    combined.push_back(s2);
    EXPECT_EQ(row_basis(combined, b.size(), kQQ).size(), 2u);

    EXPECT_TRUE(cycle_basis(f, 2, 0).empty());
    EXPECT_TRUE(cycle_basis(f, 2, 1).empty());
}

TEST(Cycles, QuadricTopCycles) {
    auto f = example_param<Q>(worked_examples()[2]);
    EXPECT_EQ(cycle_basis(f, 3, 2).size(), 1u);
}

TEST(Cycles, BasisVectorsAreCycles) {
    for (const auto& e : worked_examples()) {
        auto f = example_param<Q>(e);
        for (unsigned i = 1; i < f.n; ++i) {
            auto m = koszul_differential_matrix(f, i, e.nu);
            for (const auto& v : cycle_basis(f, i, e.nu))
                EXPECT_TRUE(all_zero(m.apply(std::span<const Q>(v)))) << e.name << " i=" << i;
        }
    }
}

TEST(Boundaries, ConicInThreeVariables) {
    auto ring = make_ring(kQQ, {"X1", "X2", "X3"}, Bank::X);
    std::vector<Poly<Q>> gens{parse_poly<Q>("X1^2", ring), parse_poly<Q>("X1*X2", ring), parse_poly<Q>("X2^2", ring)};
    EXPECT_TRUE(boundary_basis(gens, 1).empty());
    auto b = boundary_basis(gens, 2);
    EXPECT_EQ(b.size(), 3u);
    for (unsigned nu = 2; nu <= 4; ++nu) {
        auto m = koszul_matrix(gens, 1, nu);
        for (const auto& v : boundary_basis(gens, nu)) EXPECT_TRUE(all_zero(m.apply(std::span<const Q>(v))));
    }
}

TEST(Strand, DimensionsAndShapes) {
    for (const auto& e : worked_examples()) {
        auto f = example_param<Q>(e);
        auto s = z_strand(f, e.nu);
        EXPECT_EQ(s.dims, e.dims) << e.name;
        ASSERT_EQ(s.maps.size(), f.n - 1);
        for (std::size_t i = 0; i < s.maps.size(); ++i) {
            EXPECT_EQ(s.maps[i].rows(), s.dims[i]);
            EXPECT_EQ(s.maps[i].cols(), s.dims[i + 1]);
            EXPECT_LE(s.maps[i].max_entry_degree(), 1);
        }
    }
}

TEST(Strand, MovingLinesMatrixOfConic) {
    auto f = param<Q>({"X1", "X2"}, {"X1^2", "X1*X2", "X2^2"});
    auto s = z_strand(f, 1);
    ASSERT_EQ(s.maps.size(), 2u);
    EXPECT_EQ(s.maps[0].rows(), 2u);
    EXPECT_EQ(s.maps[0].cols(), 2u);
    EXPECT_TRUE(equal_up_to_unit(det(s.maps[0]), tpoly(f, "T2^2 - T1*T3")));
}

TEST(Strand, AdjacentMapsCompose) {
    for (const auto& e : worked_examples()) {
        auto f = example_param<Q>(e);
        for (unsigned nu : {e.nu, e.nu + 1}) {
            auto s = z_strand(f, nu);
            for (std::size_t i = 0; i + 1 < s.maps.size(); ++i)
                EXPECT_TRUE((s.maps[i] * s.maps[i + 1]).is_zero()) << e.name << " nu=" << nu << " i=" << i;
        }
    }
}

TEST(Determinant, WorkedExamples) {
    for (const auto& e : worked_examples()) {
        auto f = example_param<Q>(e);
        auto cd = complex_determinant(z_strand(f, e.nu));
        EXPECT_EQ(cd.value.total_degree(), e.degree) << e.name;
        EXPECT_EQ(cd.signed_degree(), e.degree) << e.name;
        if (!e.reduced.empty())
            EXPECT_TRUE(equal_up_to_unit(cd.value, tpoly(f, e.reduced).pow(e.exponent))) << e.name;
        // the substitution T -> f kills the determinant
        EXPECT_TRUE(evaluate(cd.value, std::span<const Poly<Q>>(f.polys)).is_zero()) << e.name;
    }
}

TEST(Determinant, MinorChainSizes) {
    auto ex = worked_examples();
    auto sizes = [](const ComplexDet<Q>& cd) {
        std::vector<std::size_t> s;
        for (const auto& l : cd.chain) s.push_back(l.size());
        return s;
    };
    auto quad = complex_determinant(z_strand(example_param<Q>(ex[2]), 2));
    EXPECT_EQ(sizes(quad), (std::vector<std::size_t>{6, 3, 1}));
    auto base = complex_determinant(z_strand(example_param<Q>(ex[1]), 2));
    EXPECT_EQ(sizes(base), (std::vector<std::size_t>{3, 1}));
    auto cubic = complex_determinant(z_strand(example_param<Q>(ex[3]), 4));
    EXPECT_EQ(sizes(cubic), (std::vector<std::size_t>{15, 9, 3}));
}

TEST(Determinant, SeedIndependent) {
    for (const auto& e : worked_examples()) {
        auto f = example_param<Q>(e);
        auto s = z_strand(f, e.nu);
        auto a = complex_determinant(s, 1);
        auto b = complex_determinant(s, 987654321);
        EXPECT_TRUE(equal_up_to_unit(a.value, b.value)) << e.name;
    }
}

TEST(Determinant, StableAboveTheBound) {
    auto ex = worked_examples();
    for (std::size_t k : {0u, 2u, 4u}) {
        auto f = example_param<Q>(ex[k]);
        auto a = complex_determinant(z_strand(f, ex[k].nu)).value;
        auto b = complex_determinant(z_strand(f, ex[k].nu + 1)).value;
        EXPECT_TRUE(equal_up_to_unit(a, b)) << ex[k].name;
    }
}

TEST(Determinant, RankProfileViolations) {
    auto ex = worked_examples();
    auto conic = example_param<Q>(ex[0]);
    EXPECT_THROW(complex_determinant(z_strand(conic, 0)), HypothesisViolation);
    auto cubic = example_param<Q>(ex[3]);
    for (unsigned nu = 0; nu < 4; ++nu) {
        try {
            auto cd = complex_determinant(z_strand(cubic, nu));
            EXPECT_NE(cd.value.total_degree(), 9) << "nu=" << nu;
        } catch (const HypothesisViolation& err) {
            EXPECT_EQ(err.kind(), HypothesisViolation::Kind::RankProfile);
        }
    }
}

TEST(Determinant, PrimeFieldAgreesWithRationals) {
    for (const auto& e : worked_examples()) {
        auto fq = example_param<Q>(e);
        auto fp = example_param<ModP>(e);
        auto dq = normalized(complex_determinant(z_strand(fq, e.nu)).value);
        auto dp = normalized(complex_determinant(z_strand(fp, e.nu)).value);
        // reduce the rational result mod p and compare
        auto reduced = parse_poly<ModP>(dq.to_string(), fp.t_ring);
        EXPECT_TRUE(equal_up_to_unit(reduced, dp)) << e.name;
    }
}

TEST(MaximalMinors, AgreeWithDeterminant) {
    for (const auto& e : worked_examples()) {
        auto f = example_param<Q>(e);
        auto s = z_strand(f, e.nu);
        auto g = gcd_of_maximal_minors(s);
        auto cd = complex_determinant(s);
        EXPECT_TRUE(equal_up_to_unit(g, cd.value)) << e.name;
    }
}

TEST(MaximalMinors, BasePointCurve) {
    auto f = example_param<Q>(worked_examples()[1]);
    EXPECT_TRUE(equal_up_to_unit(gcd_of_maximal_minors(z_strand(f, 2)), tpoly(f, "T1*T3 - T2^2")));
}

TEST(MaximalMinors, LciFirstMapHasFullMinor) {
    auto f = example_param<Q>(worked_examples()[4]);
    auto s = z_strand(f, 4);
    auto c = nonsingular_minor_select(s.maps[0], 15, kDefaultSeed);
    EXPECT_EQ(c.cols.size(), 15u);
    EXPECT_FALSE(det(s.maps[0].submatrix(c.rows, c.cols)).is_zero());
}
