#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "implicax/errors.hpp"
#include "implicax/field.hpp"

namespace implicax {

inline constexpr std::size_t kMaxVars = 8;
inline constexpr unsigned kMaxDegree = 255;

/// Exponent vector packed one byte per variable (variable i in byte i).
/// Each exponent stays below 128 and the total degree below 256, so
/// multiplication is a plain add and divisibility a SWAR compare.
class Monomial {
public:
    constexpr Monomial() = default;
    constexpr explicit Monomial(std::uint64_t packed) : w_(packed) {}

    static Monomial from_exponents(std::span<const unsigned> exps) {
        if (exps.size() > kMaxVars) throw ArithmeticError("too many variables");
        std::uint64_t w = 0;
        unsigned deg = 0;
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] > 127) throw ArithmeticError("exponent overflow");
            deg += exps[i];
            w |= std::uint64_t{exps[i]} << (8 * i);
        }
        if (deg > kMaxDegree) throw ArithmeticError("degree overflow");
        return Monomial(w);
    }

    static Monomial var(std::size_t i, unsigned e = 1) {
        if (e > 127) throw ArithmeticError("exponent overflow");
        return Monomial(std::uint64_t{e} << (8 * i));
    }

    constexpr std::uint64_t packed() const { return w_; }
    constexpr unsigned exponent(std::size_t i) const { return (w_ >> (8 * i)) & 0xffu; }
    constexpr unsigned degree() const {
        return static_cast<unsigned>((w_ * 0x0101010101010101ull) >> 56);
    }
    constexpr bool is_one() const { return w_ == 0; }

    /// Bit i set iff variable i occurs.
    constexpr unsigned support() const {
        unsigned mask = 0;
        for (std::size_t i = 0; i < kMaxVars; ++i)
            if (exponent(i) != 0) mask |= 1u << i;
        return mask;
    }

    /// Whether this monomial divides `other`.
    constexpr bool divides(Monomial other) const {
        constexpr std::uint64_t H = 0x8080808080808080ull;
        return (((other.w_ | H) - w_) & H) == H;
    }

    friend Monomial operator*(Monomial a, Monomial b) {
        if (a.degree() + b.degree() > kMaxDegree) throw ArithmeticError("degree overflow");
        std::uint64_t w = a.w_ + b.w_;
        if (w & 0x8080808080808080ull) throw ArithmeticError("exponent overflow");
        return Monomial(w);
    }
    /// Requires b | a.
    friend Monomial operator/(Monomial a, Monomial b) { return Monomial(a.w_ - b.w_); }

    Monomial with_exponent(std::size_t i, unsigned e) const {
        if (e > 127) throw ArithmeticError("exponent overflow");
        auto w = (w_ & ~(std::uint64_t{0xff} << (8 * i))) | (std::uint64_t{e} << (8 * i));
        Monomial m(w);
        if (m.degree() > kMaxDegree || degree() - exponent(i) + e > kMaxDegree)
            throw ArithmeticError("degree overflow");
        return m;
    }

    friend constexpr bool operator==(Monomial, Monomial) = default;

private:
    std::uint64_t w_ = 0;
};

/// Graded reverse lexicographic order, variable 0 largest.
inline bool grevlex_greater(Monomial a, Monomial b) {
    if (a == b) return false;
    auto da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    auto x = a.packed() ^ b.packed();
    std::size_t byte = static_cast<std::size_t>(63 - std::countl_zero(x)) / 8;
    return a.exponent(byte) < b.exponent(byte);
}

/// Pure lexicographic order, variable 0 largest.
inline bool lex_greater(Monomial a, Monomial b) {
    if (a == b) return false;
    auto x = a.packed() ^ b.packed();
    std::size_t byte = static_cast<std::size_t>(std::countr_zero(x)) / 8;
    return a.exponent(byte) > b.exponent(byte);
}

// ---------------------------------------------------------------------------

enum class Bank { X, T, Other };

/// A polynomial ring k[v_1..v_m]: ground field plus ordered variable names.
struct Ring {
    FieldSpec field;
    std::vector<std::string> vars;
    Bank bank = Bank::Other;

    std::size_t nvars() const { return vars.size(); }

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return i;
        return std::nullopt;
    }
};

using RingPtr = std::shared_ptr<const Ring>;

inline bool valid_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

inline RingPtr make_ring(FieldSpec field, std::vector<std::string> vars, Bank bank = Bank::Other) {
    if (vars.size() > kMaxVars)
        throw ParseError("at most " + std::to_string(kMaxVars) + " variables per ring");
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!valid_identifier(vars[i])) throw ParseError("bad variable name '" + vars[i] + "'");
        for (std::size_t j = 0; j < i; ++j)
            if (vars[i] == vars[j]) throw ParseError("duplicate variable '" + vars[i] + "'");
    }
    return std::make_shared<const Ring>(Ring{field, std::move(vars), bank});
}

/// Names prefix1..prefixN.
inline std::vector<std::string> numbered_names(std::string_view prefix, std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= count; ++i) out.push_back(std::string(prefix) + std::to_string(i));
    return out;
}

inline bool same_ring(const RingPtr& a, const RingPtr& b) {
    return a == b || (a->field == b->field && a->vars == b->vars);
}

// ---------------------------------------------------------------------------

template <FieldElement K>
struct Term {
    Monomial mon;
    K coef;
};

/// Sparse multivariate polynomial. Terms are kept sorted by decreasing
/// grevlex order with no zero coefficients, so equal polynomials compare
/// equal structurally.
template <FieldElement K>
class Poly {
public:
    using Coef = K;
    using TermT = Term<K>;

    explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}

    static Poly constant(RingPtr ring, K c) {
        check_field(c, ring->field);
        Poly p(std::move(ring));
        if (!c.is_zero()) p.terms_.push_back({Monomial{}, std::move(c)});
        return p;
    }
    static Poly constant(RingPtr ring, std::int64_t c) {
        auto f = ring->field;
        return constant(std::move(ring), K::from_int(c, f));
    }
    static Poly variable(RingPtr ring, std::size_t i) {
        if (i >= ring->nvars()) throw ArithmeticError("variable index out of range");
        return monomial(ring, Monomial::var(i), K::one(ring->field));
    }
    static Poly monomial(RingPtr ring, Monomial m, K c) {
        check_field(c, ring->field);
        Poly p(std::move(ring));
        if (!c.is_zero()) p.terms_.push_back({m, std::move(c)});
        return p;
    }
    /// Canonicalizes arbitrary (unsorted, repeated, zero) terms.
    static Poly from_terms(RingPtr ring, std::vector<TermT> terms) {
        std::sort(terms.begin(), terms.end(),
                  [](const TermT& a, const TermT& b) { return grevlex_greater(a.mon, b.mon); });
        Poly p(std::move(ring));
        for (auto& t : terms) {
            if (!p.terms_.empty() && p.terms_.back().mon == t.mon) {
                p.terms_.back().coef += t.coef;
                if (p.terms_.back().coef.is_zero()) p.terms_.pop_back();
            } else if (!t.coef.is_zero()) {
                p.terms_.push_back(std::move(t));
            }
        }
        return p;
    }
    /// Terms must already be sorted, merged and nonzero.
    static Poly from_sorted_terms(RingPtr ring, std::vector<TermT> terms) {
        Poly p(std::move(ring));
        p.terms_ = std::move(terms);
        return p;
    }

    const RingPtr& ring() const { return ring_; }
    const FieldSpec& field() const { return ring_->field; }
    const std::vector<TermT>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mon.is_one()); }
    K zero_scalar() const { return K::zero(ring_->field); }
    K one_scalar() const { return K::one(ring_->field); }

    /// Leading term in grevlex. Requires nonzero.
    const TermT& leading() const { return terms_.front(); }
    K leading_coefficient() const { return terms_.front().coef; }

    /// Coefficient of the constant term.
    K constant_term() const {
        if (!terms_.empty() && terms_.back().mon.is_one()) return terms_.back().coef;
        return zero_scalar();
    }

    /// -1 for the zero polynomial.
    int total_degree() const {
        int d = -1;
        for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.mon.degree()));
        return d;
    }

    unsigned degree_in(std::size_t var) const {
        unsigned d = 0;
        for (const auto& t : terms_) d = std::max(d, t.mon.exponent(var));
        return d;
    }

    unsigned support() const {
        unsigned mask = 0;
        for (const auto& t : terms_) mask |= t.mon.support();
        return mask;
    }

    K coefficient(Monomial m) const {
        for (const auto& t : terms_)
            if (t.mon == m) return t.coef;
        return zero_scalar();
    }

    // -- arithmetic ---------------------------------------------------------

    Poly operator-() const {
        Poly r(ring_);
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({t.mon, -t.coef});
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
    friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }
    Poly& operator+=(const Poly& b) { return *this = *this + b; }
    Poly& operator-=(const Poly& b) { return *this = *this - b; }

    friend Poly operator*(const Poly& a, const K& c) {
        check_field(c, a.field());
        Poly r(a.ring_);
        if (c.is_zero()) return r;
        r.terms_.reserve(a.terms_.size());
        for (const auto& t : a.terms_) r.terms_.push_back({t.mon, t.coef * c});
        return r;
    }
    friend Poly operator*(const K& c, const Poly& a) { return a * c; }

    /// Multiply by a monomial times scalar.
    Poly shifted(Monomial m, const K& c) const {
        Poly r(ring_);
        if (c.is_zero()) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({t.mon * m, t.coef * c});
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        require_same_ring(a, b);
        if (a.is_zero() || b.is_zero()) return Poly(a.ring_);
        if (a.size() == 1) return b.shifted(a.terms_[0].mon, a.terms_[0].coef);
        if (b.size() == 1) return a.shifted(b.terms_[0].mon, b.terms_[0].coef);
        const Poly& rows = a.size() <= b.size() ? a : b;
        const Poly& cols = a.size() <= b.size() ? b : a;
        return heap_multiply(rows, cols);
    }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }

    Poly pow(unsigned e) const {
        Poly result = constant(ring_, one_scalar());
        Poly base = *this;
        while (e) {
            if (e & 1u) result = result * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return result;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (!same_ring(a.ring_, b.ring_)) return false;
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (!(a.terms_[i].mon == b.terms_[i].mon) || !(a.terms_[i].coef == b.terms_[i].coef))
                return false;
        return true;
    }

    // -- structure ----------------------------------------------------------

    /// d if every term has total degree d; nullopt otherwise.
    std::optional<unsigned> homogeneous_degree() const {
        if (is_zero()) throw ArithmeticError("homogeneous degree of the zero polynomial");
        unsigned d = terms_.front().mon.degree();
        for (const auto& t : terms_)
            if (t.mon.degree() != d) return std::nullopt;
        return d;
    }

    Poly derivative(std::size_t var) const {
        std::vector<TermT> out;
        for (const auto& t : terms_) {
            unsigned e = t.mon.exponent(var);
            if (e == 0) continue;
            K c = t.coef * K::from_int(e, field());
            if (c.is_zero()) continue;
            out.push_back({t.mon.with_exponent(var, e - 1), c});
        }
        return from_terms(ring_, std::move(out));
    }

    /// Coefficients c_0..c_k with this = sum c_j var^j (c_j free of var).
    std::vector<Poly> coefficients_in(std::size_t var) const {
        std::vector<std::vector<TermT>> buckets(degree_in(var) + 1);
        for (const auto& t : terms_)
            buckets[t.mon.exponent(var)].push_back({t.mon.with_exponent(var, 0), t.coef});
        std::vector<Poly> out;
        out.reserve(buckets.size());
        for (auto& b : buckets) out.push_back(from_sorted_terms(ring_, std::move(b)));
        return out;
    }

    /// Substitute a scalar for one variable, keeping the ring.
    Poly evaluate_var(std::size_t var, const K& value) const {
        std::vector<K> powers{one_scalar()};
        unsigned dmax = degree_in(var);
        for (unsigned i = 1; i <= dmax; ++i) powers.push_back(powers.back() * value);
        std::vector<TermT> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) {
            auto e = t.mon.exponent(var);
            out.push_back({t.mon.with_exponent(var, 0), e == 0 ? t.coef : t.coef * powers[e]});
        }
        return from_terms(ring_, std::move(out));
    }

    std::string to_string() const;

private:
    static void require_same_ring(const Poly& a, const Poly& b) {
        if (!same_ring(a.ring_, b.ring_))
            throw FieldMismatch("operands live in different rings (" + a.field().to_string() + " vs " +
                                b.field().to_string() + ")");
    }

    static Poly merge(const Poly& a, const Poly& b, bool subtract) {
        require_same_ring(a, b);
        Poly r(a.ring_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() ||
                (i < a.terms_.size() && grevlex_greater(a.terms_[i].mon, b.terms_[j].mon))) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || grevlex_greater(b.terms_[j].mon, a.terms_[i].mon)) {
                const auto& t = b.terms_[j++];
                r.terms_.push_back({t.mon, subtract ? -t.coef : t.coef});
            } else {
                K c = subtract ? a.terms_[i].coef - b.terms_[j].coef : a.terms_[i].coef + b.terms_[j].coef;
                if (!c.is_zero()) r.terms_.push_back({a.terms_[i].mon, std::move(c)});
                ++i;
                ++j;
            }
        }
        return r;
    }

    struct HeapEntry {
        Monomial mon;
        std::size_t i;
        std::size_t j;
    };
    struct HeapLess {
        bool operator()(const HeapEntry& x, const HeapEntry& y) const { return grevlex_greater(y.mon, x.mon); }
    };

    // Johnson's heap multiplication: one heap entry per row term.
    static Poly heap_multiply(const Poly& rows, const Poly& cols) {
        std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap;
        for (std::size_t i = 0; i < rows.terms_.size(); ++i)
            heap.push({rows.terms_[i].mon * cols.terms_[0].mon, i, 0});
        Poly r(rows.ring_);
        while (!heap.empty()) {
            Monomial m = heap.top().mon;
            K c = K::zero(rows.field());
            while (!heap.empty() && heap.top().mon == m) {
                auto e = heap.top();
                heap.pop();
                c += rows.terms_[e.i].coef * cols.terms_[e.j].coef;
                if (e.j + 1 < cols.terms_.size())
                    heap.push({rows.terms_[e.i].mon * cols.terms_[e.j + 1].mon, e.i, e.j + 1});
            }
            if (!c.is_zero()) r.terms_.push_back({m, std::move(c)});
        }
        return r;
    }

    template <FieldElement L>
    friend std::optional<Poly<L>> try_divide(const Poly<L>& a, const Poly<L>& b);

    RingPtr ring_;
    std::vector<TermT> terms_;
};

/// Exact quotient a / b, or nullopt when b does not divide a.
/// Heap-based division: quotient terms come out in decreasing order and each
/// product q_i * b_j is formed once.
template <FieldElement K>
std::optional<Poly<K>> try_divide(const Poly<K>& a, const Poly<K>& b) {
    using P = Poly<K>;
    P::require_same_ring(a, b);
    if (b.is_zero()) throw ArithmeticError("division by the zero polynomial");
    P q(a.ring());
    if (a.is_zero()) return q;
    const auto& bt = b.terms_;
    const Monomial lead = bt[0].mon;
    const K inv_lc = bt[0].coef.inverse();
    if (bt.size() == 1) {
        for (const auto& t : a.terms_) {
            if (!lead.divides(t.mon)) return std::nullopt;
            q.terms_.push_back({t.mon / lead, t.coef * inv_lc});
        }
        return q;
    }
    using Entry = typename P::HeapEntry;
    std::priority_queue<Entry, std::vector<Entry>, typename P::HeapLess> heap;
    std::size_t ai = 0;
    const auto& at = a.terms_;
    while (true) {
        bool have = false;
        Monomial m;
        if (ai < at.size()) { m = at[ai].mon; have = true; }
        if (!heap.empty() && (!have || grevlex_greater(heap.top().mon, m))) { m = heap.top().mon; have = true; }
        if (!have) break;
        K c = K::zero(a.field());
        if (ai < at.size() && at[ai].mon == m) c = at[ai++].coef;
        while (!heap.empty() && heap.top().mon == m) {
            auto e = heap.top();
            heap.pop();
            c -= q.terms_[e.i].coef * bt[e.j].coef;
            if (e.j + 1 < bt.size()) heap.push({q.terms_[e.i].mon * bt[e.j + 1].mon, e.i, e.j + 1});
        }
        if (c.is_zero()) continue;
        if (!lead.divides(m)) return std::nullopt;
        Monomial qm = m / lead;
        q.terms_.push_back({qm, c * inv_lc});
        heap.push({qm * bt[1].mon, q.terms_.size() - 1, 1});
    }
    return q;
}

/// a / b; throws NotDivisible when the division is not exact.
template <FieldElement K>
Poly<K> exact_divide(const Poly<K>& a, const Poly<K>& b) {
    auto q = try_divide(a, b);
    if (!q) throw NotDivisible("polynomial division is not exact");
    return std::move(*q);
}

template <FieldElement K>
bool divides(const Poly<K>& b, const Poly<K>& a) {
    return try_divide(a, b).has_value();
}

// -- evaluation ---------------------------------------------------------------

/// Evaluate at a point given by one scalar per ring variable.
template <FieldElement K>
K evaluate(const Poly<K>& p, std::span<const K> point) {
    const auto n = p.ring()->nvars();
    if (point.size() != n) throw ArithmeticError("evaluation point has wrong length");
    std::vector<std::vector<K>> powers(n);
    for (std::size_t v = 0; v < n; ++v) {
        powers[v].push_back(K::one(p.field()));
        for (unsigned e = 1; e <= p.degree_in(v); ++e) powers[v].push_back(powers[v].back() * point[v]);
    }
    K acc = K::zero(p.field());
    for (const auto& t : p.terms()) {
        K c = t.coef;
        for (std::size_t v = 0; v < n; ++v)
            if (auto e = t.mon.exponent(v)) c *= powers[v][e];
        acc += c;
    }
    return acc;
}

/// Simultaneous substitution of polynomials (all in one target ring) for
/// every variable of p.
template <FieldElement K>
Poly<K> evaluate(const Poly<K>& p, std::span<const Poly<K>> images) {
    const auto n = p.ring()->nvars();
    if (images.size() != n) throw ArithmeticError("substitution needs one image per variable");
    if (n == 0) throw ArithmeticError("no target ring for substitution");
    const RingPtr& target = images[0].ring();
    for (const auto& img : images)
        if (!same_ring(img.ring(), target)) throw FieldMismatch("substitution images in different rings");
    if (!(target->field == p.field())) throw FieldMismatch("substitution changes the field");
    std::vector<std::vector<Poly<K>>> powers(n);
    for (std::size_t v = 0; v < n; ++v) {
        powers[v].push_back(Poly<K>::constant(target, K::one(p.field())));
        for (unsigned e = 1; e <= p.degree_in(v); ++e) powers[v].push_back(powers[v].back() * images[v]);
    }
    Poly<K> acc(target);
    for (const auto& t : p.terms()) {
        Poly<K> term = Poly<K>::constant(target, t.coef);
        for (std::size_t v = 0; v < n; ++v)
            if (auto e = t.mon.exponent(v)) term = term * powers[v][e];
        acc += term;
    }
    return acc;
}

/// Substitution by name. Every variable that occurs in p needs an entry;
/// variables that do not occur may be omitted.
template <FieldElement K>
Poly<K> evaluate(const Poly<K>& p, const std::map<std::string, Poly<K>>& assignment) {
    if (assignment.empty()) throw ArithmeticError("empty assignment");
    const RingPtr& target = assignment.begin()->second.ring();
    std::vector<Poly<K>> images;
    const auto support = p.support();
    for (std::size_t v = 0; v < p.ring()->nvars(); ++v) {
        auto it = assignment.find(p.ring()->vars[v]);
        if (it == assignment.end()) {
            if (support & (1u << v))
                throw ArithmeticError("assignment misses variable " + p.ring()->vars[v]);
            images.push_back(Poly<K>(target));
        } else {
            images.push_back(it->second);
        }
    }
    return evaluate(p, std::span<const Poly<K>>(images));
}

/// Rewrite p in `target`, sending variable i of p's ring to variable
/// var_map[i] of the target.
template <FieldElement K>
Poly<K> change_ring(const Poly<K>& p, const RingPtr& target, std::span<const std::size_t> var_map) {
    if (!(target->field == p.field())) throw FieldMismatch("change_ring across fields");
    std::vector<Term<K>> out;
    out.reserve(p.size());
    for (const auto& t : p.terms()) {
        std::uint64_t w = 0;
        for (std::size_t v = 0; v < p.ring()->nvars(); ++v)
            if (auto e = t.mon.exponent(v)) {
                if (var_map[v] >= target->nvars()) throw ArithmeticError("variable has no image");
                w += std::uint64_t{e} << (8 * var_map[v]);
            }
        out.push_back({Monomial(w), t.coef});
    }
    return Poly<K>::from_terms(target, std::move(out));
}

// -- text form ----------------------------------------------------------------

inline std::string monomial_to_string(Monomial m, const Ring& ring) {
    std::string s;
    for (std::size_t v = 0; v < ring.nvars(); ++v) {
        auto e = m.exponent(v);
        if (!e) continue;
        if (!s.empty()) s += '*';
        s += ring.vars[v];
        if (e > 1) s += '^' + std::to_string(e);
    }
    return s;
}

template <FieldElement K>
std::string Poly<K>::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : terms_) {
        bool neg = t.coef.prints_negative();
        K mag = neg ? -t.coef : t.coef;
        if (first) {
            if (neg) s += '-';
        } else {
            s += neg ? " - " : " + ";
        }
        first = false;
        auto mono = monomial_to_string(t.mon, *ring_);
        if (mono.empty()) {
            s += mag.to_string();
        } else if (mag.is_one()) {
            s += mono;
        } else {
            s += mag.to_string() + "*" + mono;
        }
    }
    return s;
}

/// Parse the polynomial grammar: terms joined by +/-, a term is `coeff`,
/// `coeff*mono` or `mono`, a mono is `var`, `var^k` or a `*`-product of
/// those. Whitespace is ignored.
template <FieldElement K>
Poly<K> parse_poly(std::string_view text, const RingPtr& ring) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    auto fail = [&](const std::string& why) -> ParseError {
        return ParseError(why + " in '" + std::string(text) + "'");
    };
    if (s.empty()) throw fail("empty polynomial");
    std::size_t pos = 0;
    auto peek = [&]() { return pos < s.size() ? s[pos] : '\0'; };
    auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto is_ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    auto digits = [&]() {
        std::size_t start = pos;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
        if (start == pos) throw fail("expected digits at position " + std::to_string(start));
        return s.substr(start, pos - start);
    };

    std::vector<Term<K>> terms;
    bool first = true;
    while (pos < s.size() || first) {
        bool negative = false;
        if (peek() == '+' || peek() == '-') {
            negative = peek() == '-';
            ++pos;
        } else if (!first) {
            throw fail("expected '+' or '-' at position " + std::to_string(pos));
        }
        first = false;
        K coef = K::one(ring->field);
        bool have_mono = true;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            std::string lit = digits();
            if (peek() == '/') {
                ++pos;
                lit += "/" + digits();
            }
            coef = parse_scalar<K>(lit, ring->field);
            if (peek() == '*') {
                ++pos;
            } else {
                have_mono = false;
            }
        }
        std::vector<unsigned> exps(ring->nvars(), 0);
        if (have_mono) {
            while (true) {
                if (!is_ident_start(peek())) throw fail("expected variable at position " + std::to_string(pos));
                std::size_t start = pos;
                while (is_ident_char(peek())) ++pos;
                std::string name = s.substr(start, pos - start);
                auto idx = ring->index_of(name);
                if (!idx) throw fail("unknown variable '" + name + "'");
                unsigned e = 1;
                if (peek() == '^') {
                    ++pos;
                    auto d = digits();
                    if (d.size() > 3) throw fail("exponent too large");
                    e = static_cast<unsigned>(std::stoul(d));
                }
                exps[*idx] += e;
                if (peek() != '*') break;
                ++pos;
            }
        }
        if (negative) coef = -coef;
        terms.push_back({Monomial::from_exponents(exps), coef});
    }
    return Poly<K>::from_terms(ring, std::move(terms));
}

// -- normalization ------------------------------------------------------------

/// Canonical representative of the class of p modulo nonzero scalars:
/// over QQ primitive with integer coefficients and positive grevlex leading
/// coefficient; over GF(p) monic.
template <FieldElement K>
Poly<K> normalized(const Poly<K>& p) {
    if (p.is_zero()) return p;
    if constexpr (is_rational_v<K>) {
        mpz_class l = 1, g = 0;
        for (const auto& t : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.den().get_mpz_t());
        for (const auto& t : p.terms()) {
            mpz_class n = t.coef.num() * (l / t.coef.den());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        }
        Rational scale(l, g);
        if (p.leading_coefficient().sign() < 0) scale = -scale;
        return p * scale;
    } else {
        return p * p.leading_coefficient().inverse();
    }
}

/// Equality up to a nonzero scalar factor.
template <FieldElement K>
bool equal_up_to_unit(const Poly<K>& a, const Poly<K>& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return normalized(a) == normalized(b);
}

} // namespace implicax
