// One line per acceptance criterion; exit status 0 only if every line passes.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace implicax;
using namespace implicax::testing;

namespace {

using Q = Rational;
using HV = HypothesisViolation;

struct Outcome {
    std::vector<std::string> problems;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    }
    void note(const std::string& s) { notes.push_back(s); }
};

template <typename T>
std::string show(const std::vector<T>& v) {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    out << "]";
    return out.str();
}

template <FieldElement K>
std::vector<std::size_t> nonempty_sizes(const ComplexDet<K>& cd) {
    std::vector<std::size_t> s;
    for (const auto& l : cd.chain)
        if (l.size() > 0) s.push_back(l.size());
    return s;
}

template <typename T>
std::vector<T> sorted(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    return v;
}

/// "rejected" if the strand violates a hypothesis, otherwise the degree reached.
template <FieldElement K>
std::string attempt(const Parameterization<K>& f, unsigned nu, long wanted_degree) {
    try {
        auto cd = complex_determinant(z_strand(f, nu));
        auto deg = cd.value.total_degree();
        return deg == wanted_degree ? "ok" : "degree " + std::to_string(deg);
    } catch (const HV& e) {
        return std::string("rejected (") + to_string(e.kind()) + ")";
    }
}

Poly<ModP> power_form(const RingPtr& x, std::size_t var, unsigned d) {
    return Poly<ModP>::monomial(x, Monomial::var(var, d), ModP::one(x->field));
}

// -- criteria -----------------------------------------------------------------

void curve_without_base_points(Outcome& o) {
    auto f = example_param<Q>(worked_examples()[0]);
    ImplicitOptions opts;
    opts.nu = 1;
    auto r = implicitize(f, opts);
    o.expect(r.reduced == normalized(tpoly(f, "T2^2 - T1*T3")), "reduced is " + r.reduced.to_string());
    o.expect(r.exponent == 1, "exponent " + std::to_string(r.exponent));
    auto below = attempt(f, 0, 2);
    o.expect(below != "ok", "nu = 0 unexpectedly succeeded");
    o.note("H = " + r.reduced.to_string() + "; nu=0 " + below);
}

void curve_with_base_points(Outcome& o) {
    auto f = example_param<Q>(worked_examples()[1]);
    auto cd = complex_determinant(z_strand(f, 2));
    std::vector<std::size_t> sizes;
    std::vector<int> signs;
    for (const auto& l : cd.chain)
        if (l.size() > 0) {
            sizes.push_back(l.size());
            signs.push_back(l.exponent);
        }
    o.expect(sizes == std::vector<std::size_t>{3, 1} && signs == std::vector<int>{1, -1},
             "quotient shape " + show(sizes) + " with exponents " + show(signs));
    o.expect(equal_up_to_unit(cd.value, tpoly(f, "T1*T3 - T2^2")), "determinant " + cd.value.to_string());
    auto r = implicitize(f);
    o.expect(r.exponent == 1 && r.verified, "exponent " + std::to_string(r.exponent));
    o.note("3x3 / 1x1 = " + normalized(cd.value).to_string());
}

void quadric_cover(Outcome& o) {
    auto f = example_param<Q>(worked_examples()[2]);
    auto s = z_strand(f, 2);
    o.expect(s.dims == std::vector<std::size_t>{6, 9, 4, 1}, "dims " + show(s.dims));
    auto cd = complex_determinant(s);
    auto l = tpoly(f, "T1 + T2 + T3 - T4");
    o.expect(equal_up_to_unit(cd.value, l.pow(4)), "determinant " + cd.value.to_string());
    auto sizes = nonempty_sizes(cd);
    o.expect(sorted(sizes) == sorted(std::vector<std::size_t>{6, 1, 3}), "minor sizes " + show(sizes));
    auto r = implicitize(f);
    o.expect(r.reduced == normalized(l) && r.exponent == 4, "reduced " + r.reduced.to_string() + " exponent " +
                                                                 std::to_string(r.exponent));
    o.note("dims " + show(s.dims) + ", minors " + show(sizes) + ", (" + r.reduced.to_string() + ")^4");
}

void cubic_surface(Outcome& o) {
    auto f = example_param<Q>(worked_examples()[3]);
    ImplicitOptions opts;
    opts.nu = 4;
    auto r = implicitize(f, opts);
    o.expect(r.determinant.total_degree() == 9, "degree " + std::to_string(r.determinant.total_degree()));
    o.expect(r.exponent == 1, "exponent " + std::to_string(r.exponent));
    o.expect(r.verified, "evaluation oracle failed");
    auto sizes = nonempty_sizes(*r.complex);
    o.expect(sorted(sizes) == sorted(std::vector<std::size_t>{15, 3, 9}), "minor sizes " + show(sizes));
    std::vector<std::string> below;
    for (unsigned nu = 0; nu < 4; ++nu) {
        below.push_back(attempt(f, nu, 9));
        o.expect(below.back() != "ok", "nu = " + std::to_string(nu) + " unexpectedly succeeded");
    }
    o.note("degree 9 squarefree, minors " + show(sizes) + "; nu<4: " + below.front() + ", ...");
}

void lci_surface(Outcome& o) {
    auto f = example_param<Q>(worked_examples()[4]);
    auto r = implicitize(f);
    auto h = tpoly(f, "T1*T2*T3 + T1*T2*T4 - T3*T4^2");
    o.expect(r.nu_used == 4, "nu " + std::to_string(r.nu_used));
    o.expect(r.reduced == normalized(h) && r.exponent == 1, "reduced " + r.reduced.to_string());
    o.expect(r.report.e_total == 6, "e_total " + std::to_string(r.report.e_total));
    o.expect(r.report.predicted_degree == 3, "predicted degree");
    std::vector<std::string> shapes;
    for (auto [nu, want] : std::vector<std::pair<unsigned, std::vector<std::size_t>>>{{3, {10, 8, 1}}, {2, {6, 3}}}) {
        ImplicitOptions opts;
        opts.nu = nu;
        opts.allow_sub_bound = true;
        auto s = implicitize(f, opts);
        auto sizes = nonempty_sizes(*s.complex);
        o.expect(s.determinant == r.determinant, "nu = " + std::to_string(nu) + " gives " + s.determinant.to_string());
        o.expect(sizes == want, "nu = " + std::to_string(nu) + " quotient shape " + show(sizes));
        shapes.push_back(show(sizes));
    }
    o.note("e=6, H = " + r.reduced.to_string() + ", sub-bound shapes " + shapes[0] + " " + shapes[1]);
}

void degree_formula(Outcome& o) {
    std::vector<std::string> parts;
    for (const auto& e : worked_examples()) {
        auto f = example_param<Q>(e);
        auto r = implicitize(f);
        const long expected = ipow(f.d, f.n - 2) - static_cast<long>(r.report.e_total);
        o.expect(r.determinant.total_degree() == expected,
                 e.name + ": degree " + std::to_string(r.determinant.total_degree()) + " vs " + std::to_string(expected));
        parts.push_back(std::to_string(r.determinant.total_degree()));
    }
    auto degenerate = param<Q>({"X1", "X2"}, {"X1^2", "X1^2", "X1^2"});
    auto rep = analyze(degenerate);
    o.expect(rep.predicted_degree == 0 && !rep.generically_finite, "degenerate map not flagged");
    bool flagged = false;
    try {
        implicitize(degenerate);
    } catch (const HV& e) {
        flagged = e.kind() == HV::Kind::NotGenericallyFinite;
    }
    o.expect(flagged, "pipeline did not report 'not generically finite'");
    o.note("degrees " + show(parts) + "; degenerate predicted 0");
}

template <FieldElement K>
void bezout_signs(Outcome& o, const FieldSpec& field, Rng& rng) {
    auto x = make_ring(field, {"X1", "X2"}, Bank::X);
    auto sr = scalar_ring<K>(field);
    for (int trial = 0; trial < 50; ++trial) {
        unsigned d = 1 + trial % 6;
        auto p = binary_form(dense_form<K>(rng, x, d), d, sr);
        auto q = binary_form(dense_form<K>(rng, x, d), d, sr);
        auto res = sylvester_resultant(p, q).constant_term();
        auto bez = det(bezout_matrix(p, q)).constant_term();
        const bool negate = (d * (d - 1) / 2) % 2 == 1;
        o.expect(bez == (negate ? -res : res), field.to_string() + " d=" + std::to_string(d) + ": sign mismatch");
    }
}

void resultant_cross_checks(Outcome& o) {
    Rng rng(7001);
    bezout_signs<Q>(o, kQQ, rng);
    bezout_signs<ModP>(o, kGF, rng);

    auto x = make_ring(kGF, {"X1", "X2"}, Bank::X);
    int cubics = 0;
    while (cubics < 20) {
        std::vector<Poly<ModP>> polys;
        for (int i = 0; i < 3; ++i) polys.push_back(dense_form<ModP>(rng, x, 3));
        if (!multivariate_gcd(std::span<const Poly<ModP>>(polys)).is_constant()) continue;
        auto f = make_parameterization(polys);
        auto kr = kravitsky_implicitize(f).evaluate_var(2, ModP::one(kGF));
        o.expect(equal_up_to_unit(kr, curve_implicitize_resultant(f)), "cubic " + std::to_string(cubics));
        ++cubics;
    }

    auto t = make_ring(kGF, {"T1", "T2", "T3"}, Bank::T);
    auto sr = scalar_ring<ModP>(kGF);
    auto w = Poly<ModP>::variable(t, 2);
    for (unsigned d = 1; d <= 5; ++d) {
        auto p = binary_form(power_form(x, 0, d), sr);
        auto q = binary_form(power_form(x, 1, d), sr);
        auto zero = binary_form(Poly<ModP>(x), d, sr);
        auto value = det(kravitsky_pencil(p, q, zero, t));
        const bool negate = (d * (d - 1) / 2) % 2 == 1;
        o.expect(value == (negate ? -w.pow(d) : w.pow(d)), "specialization d=" + std::to_string(d) + ": " + value.to_string());
    }
    o.note("100 Bezout signs, 20 cubics, 5 specializations");
}

void syzygetic_tests(Outcome& o) {
    auto x = make_ring(kQQ, {"X1", "X2", "X3"}, Bank::X);
    auto gens = [&](std::vector<std::string> s) {
        std::vector<Poly<Q>> out;
        for (const auto& p : s) out.push_back(parse_poly<Q>(p, x));
        return out;
    };
    auto ci = syzygetic_test(gens({"X1^3", "X2^3", "X3^3"}), 6);
    o.expect(ci.verdict == Verdict::Pass, "complete intersection did not pass");

    auto fat = syzygetic_test(gens({"X1^2", "X1*X2", "X2^2"}), 4);
    o.expect(fat.verdict == Verdict::Fail, "fat point did not fail");
    o.expect(fat.witness == gens({"X2^2", "-X1*X2", "0"}), "fat point witness " + show([&] {
                 std::vector<std::string> s;
                 for (const auto& p : fat.witness) s.push_back(p.to_string());
                 return s;
             }()));

    auto f = example_param<Q>(worked_examples()[4]);
    auto lci = syzygetic_test(f, 2 * f.d);
    o.expect(lci.verdict == Verdict::Pass && lci.nu_max == 2 * f.d,
             "lci surface verdict " + std::string(to_string(lci.verdict)) +
                 (lci.failing_nu ? " at nu=" + std::to_string(*lci.failing_nu) : ""));
    o.note("ci pass, fat point fail with (X2^2, -X1*X2, 0), lci pass for nu <= " + std::to_string(lci.nu_max));
}

void property_suites(Outcome& o) {
    std::size_t compositions = 0, evaluations = 0;
    auto ex = worked_examples();
    for (const auto& e : ex) {
        auto f = example_param<Q>(e);
        auto s = z_strand(f, e.nu);
        for (unsigned i = 1; i < f.n; ++i) {
            auto outer = koszul_differential_matrix(f, i, e.nu + f.d);
            auto inner = koszul_differential_matrix(f, i + 1, e.nu);
            o.expect((outer * inner).is_zero(), e.name + ": d_f squared nonzero at i=" + std::to_string(i));
            ++compositions;
        }
        for (std::size_t i = 0; i + 1 < s.maps.size(); ++i) {
            o.expect((s.maps[i] * s.maps[i + 1]).is_zero(), e.name + ": d_T squared nonzero at i=" + std::to_string(i));
            ++compositions;
        }
        auto a = complex_determinant(s, 1);
        auto b = complex_determinant(s, 987654321);
        o.expect(equal_up_to_unit(a.value, b.value), e.name + ": seed dependence");
        o.expect(verify(normalized(a.value), f, 20), e.name + ": evaluation oracle");
        ++evaluations;
    }
    for (std::size_t k : {0u, 2u, 4u}) {
        auto f = example_param<Q>(ex[k]);
        auto a = complex_determinant(z_strand(f, ex[k].nu)).value;
        auto b = complex_determinant(z_strand(f, ex[k].nu + 1)).value;
        o.expect(equal_up_to_unit(a, b), ex[k].name + ": not stable at nu+1");
    }
    for (std::size_t k : {0u, 1u, 4u}) {
        auto f = example_param<Q>(ex[k]);
        auto s = z_strand(f, ex[k].nu);
        o.expect(equal_up_to_unit(complex_determinant(s).value, gcd_of_maximal_minors(s)),
                 ex[k].name + ": det-complex and gcd-minors disagree");
    }
    o.note(std::to_string(compositions) + " compositions, " + std::to_string(evaluations) +
           " evaluation oracles, stability and method agreement");
}

struct Criterion {
    int id;
    std::string title;
    double limit_s;   // 0: no runtime bound
    std::function<void(Outcome&)> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "curve without base points", 1, curve_without_base_points},
        {2, "curve with base points", 1, curve_with_base_points},
        {3, "quadric cover of a plane", 5, quadric_cover},
        {4, "cubic surface", 30, cubic_surface},
        {5, "surface with lci base points", 30, lci_surface},
        {6, "degree formula", 0, degree_formula},
        {7, "resultant cross-checks", 30, resultant_cross_checks},
        {8, "syzygetic tests", 10, syzygetic_tests},
        {9, "property suites", 0, property_suites},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.problems.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_s > 0 && secs > c.limit_s) {
            std::ostringstream msg;
            msg << "runtime " << std::fixed << std::setprecision(2) << secs << " s over " << c.limit_s << " s";
            o.problems.push_back(msg.str());
        }
        const bool ok = o.problems.empty();
        failed += !ok;
        std::cout << "criterion " << c.id << ": " << (ok ? "PASS" : "FAIL") << "  " << c.title << "  (" << std::fixed
                  << std::setprecision(2) << secs << " s)";
        if (ok && !o.notes.empty()) std::cout << "  " << o.notes.front();
        for (const auto& p : o.problems) std::cout << "\n    " << p;
        std::cout << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
