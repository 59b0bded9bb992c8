#pragma once

#include <string>
#include <vector>

#include "implicax/errors.hpp"
#include "implicax/poly.hpp"

namespace implicax {

/// n homogeneous forms of common degree d in n-1 variables, plus the ring
/// k[T1..Tn] that receives the implicit equation.
template <FieldElement K>
struct Parameterization {
    std::vector<Poly<K>> polys;
    RingPtr x_ring;
    RingPtr t_ring;
    unsigned n = 0;
    unsigned d = 0;

    const FieldSpec& field() const { return x_ring->field; }
    std::size_t nvars() const { return x_ring->nvars(); }
};

/// Common degree of a list of nonzero homogeneous forms in one ring.
template <FieldElement K>
unsigned common_degree(const std::vector<Poly<K>>& gens) {
    if (gens.empty()) throw ArithmeticError("empty generator list");
    std::optional<unsigned> d;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const auto& g = gens[i];
        if (!same_ring(g.ring(), gens[0].ring())) throw FieldMismatch("generators live in different rings");
        if (g.is_zero()) throw ArithmeticError("generator f" + std::to_string(i + 1) + " is zero");
        auto gd = g.homogeneous_degree();
        if (!gd) throw ArithmeticError("generator f" + std::to_string(i + 1) + " is not homogeneous");
        if (d && *d != *gd)
            throw ArithmeticError("generator f" + std::to_string(i + 1) + " has degree " + std::to_string(*gd) +
                                  ", expected " + std::to_string(*d));
        d = gd;
    }
    return *d;
}

/// Validates the shape (n >= 3 forms in n-1 variables, homogeneous, one
/// degree d >= 1) and builds the T ring (default names T1..Tn).
template <FieldElement K>
Parameterization<K> make_parameterization(std::vector<Poly<K>> polys, std::vector<std::string> t_names = {}) {
    if (polys.size() < 3) throw ParseError("need at least 3 polynomials, got " + std::to_string(polys.size()));
    const auto& x_ring = polys.front().ring();
    if (polys.size() != x_ring->nvars() + 1)
        throw ParseError(std::to_string(polys.size()) + " polynomials in " + std::to_string(x_ring->nvars()) +
                         " variables; expected one more polynomial than variables");
    unsigned d = 0;
    try {
        d = common_degree(polys);
    } catch (const ArithmeticError& e) {
        throw ParseError(e.what());
    }
    if (d == 0) throw ParseError("polynomials must have degree at least 1");
    if (t_names.empty()) t_names = numbered_names("T", polys.size());
    if (t_names.size() != polys.size())
        throw ParseError("need " + std::to_string(polys.size()) + " T variables, got " + std::to_string(t_names.size()));
    for (const auto& t : t_names)
        if (x_ring->index_of(t)) throw ParseError("variable " + t + " used as both X and T variable");
    auto x = std::make_shared<const Ring>(Ring{x_ring->field, x_ring->vars, Bank::X});
    std::vector<Poly<K>> rebased;
    std::vector<std::size_t> identity(x->nvars());
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
    for (const auto& p : polys) rebased.push_back(change_ring(p, x, identity));
    Parameterization<K> out;
    out.polys = std::move(rebased);
    out.x_ring = x;
    out.t_ring = make_ring(x_ring->field, std::move(t_names), Bank::T);
    out.n = static_cast<unsigned>(out.polys.size());
    out.d = d;
    return out;
}

/// Parse forms given as text over the named X variables.
template <FieldElement K>
Parameterization<K> parse_parameterization(const FieldSpec& field, std::vector<std::string> x_vars,
                                           const std::vector<std::string>& polys,
                                           std::vector<std::string> t_vars = {}) {
    auto ring = make_ring(field, std::move(x_vars), Bank::X);
    std::vector<Poly<K>> ps;
    for (std::size_t i = 0; i < polys.size(); ++i) {
        try {
            ps.push_back(parse_poly<K>(polys[i], ring));
        } catch (const ParseError& e) {
            throw ParseError("f" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return make_parameterization(std::move(ps), std::move(t_vars));
}

} // namespace implicax
