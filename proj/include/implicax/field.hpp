#pragma once

#include <cctype>
#include <concepts>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "implicax/errors.hpp"

namespace implicax {

/// Which ground field a computation runs over.
struct FieldSpec {
    enum class Kind { Rational, Prime };

    Kind kind = Kind::Rational;
    std::uint32_t modulus = 0;

    static FieldSpec rationals() { return {Kind::Rational, 0}; }
    static FieldSpec prime(std::uint32_t p);

    bool is_prime() const { return kind == Kind::Prime; }

    /// 0 for the rationals.
    std::uint32_t characteristic() const { return is_prime() ? modulus : 0; }

    std::string to_string() const {
        return is_prime() ? "GF(" + std::to_string(modulus) + ")" : "QQ";
    }

    static FieldSpec parse(std::string_view text);

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

inline bool is_prime_number(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

inline FieldSpec FieldSpec::prime(std::uint32_t p) {
    if (p > (1u << 31) || !is_prime_number(p))
        throw ArithmeticError("GF(p) needs a prime modulus below 2^31, got " + std::to_string(p));
    return {Kind::Prime, p};
}

inline FieldSpec FieldSpec::parse(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s == "QQ" || s == "Q") return rationals();
    if (s.size() > 4 && s.starts_with("GF(") && s.back() == ')') {
        auto digits = s.substr(3, s.size() - 4);
        if (!digits.empty() && digits.size() <= 10 &&
            digits.find_first_not_of("0123456789") == std::string::npos) {
            auto p = std::stoull(digits);
            if (p <= (1ull << 31)) return prime(static_cast<std::uint32_t>(p));
        }
    }
    throw ParseError("unknown field '" + std::string(text) + "' (expected QQ or GF(p))");
}

/// Largest prime below 2^16; default field for randomized cross-checks.
inline constexpr std::uint32_t kDefaultPrime = 65521;

// ---------------------------------------------------------------------------

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
class Rational {
public:
    Rational() = default;
    Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
    Rational(const mpz_class& num, const mpz_class& den) : v_(num, den) {
        if (den == 0) throw ArithmeticError("zero denominator");
        v_.canonicalize();
    }

    static Rational zero(const FieldSpec& = FieldSpec::rationals()) { return {}; }
    static Rational one(const FieldSpec& = FieldSpec::rationals()) { return {1}; }
    static Rational from_int(std::int64_t v, const FieldSpec& = FieldSpec::rationals()) {
        return Rational(static_cast<long>(v));
    }
    static Rational from_fraction(const mpz_class& num, const mpz_class& den, const FieldSpec&) {
        return Rational(num, den);
    }
    template <class Rng>
    static Rational random(Rng& rng, const FieldSpec&, std::int64_t bound) {
        std::uniform_int_distribution<std::int64_t> dist(-bound, bound);
        return from_int(dist(rng));
    }

    FieldSpec spec() const { return FieldSpec::rationals(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }
    bool prints_negative() const { return sign() < 0; }

    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }
    const mpq_class& value() const { return v_; }

    Rational inverse() const {
        if (is_zero()) throw ArithmeticError("division by zero");
        return Rational(mpq_class(1) / v_);
    }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw ArithmeticError("division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const { return Rational(mpq_class(-v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }

    std::string to_string() const { return v_.get_str(); }

private:
    mpq_class v_;
};

// ---------------------------------------------------------------------------

/// Residue modulo a prime p < 2^31. Every element carries its modulus; mixing
/// moduli raises FieldMismatch.
class ModP {
public:
    ModP() = default;
    ModP(std::uint64_t v, std::uint32_t p) : v_(static_cast<std::uint32_t>(v % p)), p_(p) {}

    static ModP zero(const FieldSpec& f) { return {0, f.modulus}; }
    static ModP one(const FieldSpec& f) { return {1, f.modulus}; }
    static ModP from_int(std::int64_t v, const FieldSpec& f) {
        auto p = static_cast<std::int64_t>(f.modulus);
        auto r = v % p;
        if (r < 0) r += p;
        return {static_cast<std::uint64_t>(r), f.modulus};
    }
    static ModP from_fraction(const mpz_class& num, const mpz_class& den, const FieldSpec& f) {
        mpz_class p(f.modulus);
        mpz_class d = den % p;
        if (d < 0) d += p;
        if (d == 0) throw ArithmeticError("denominator vanishes modulo " + std::to_string(f.modulus));
        mpz_class n = num % p;
        if (n < 0) n += p;
        return ModP(n.get_ui(), f.modulus) / ModP(d.get_ui(), f.modulus);
    }
    template <class Rng>
    static ModP random(Rng& rng, const FieldSpec& f, std::int64_t) {
        std::uniform_int_distribution<std::uint32_t> dist(0, f.modulus - 1);
        return {dist(rng), f.modulus};
    }

    FieldSpec spec() const { return {FieldSpec::Kind::Prime, p_}; }

    std::uint32_t value() const { return v_; }
    std::uint32_t modulus() const { return p_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    /// Residues above p/2 print as negative integers.
    bool prints_negative() const { return v_ > p_ / 2; }

    ModP inverse() const {
        if (v_ == 0) throw ArithmeticError("division by zero");
        // extended Euclid on (v, p)
        std::int64_t a = v_, b = p_, x0 = 1, x1 = 0;
        while (b != 0) {
            auto q = a / b;
            a -= q * b; std::swap(a, b);
            x0 -= q * x1; std::swap(x0, x1);
        }
        if (x0 < 0) x0 += p_;
        return {static_cast<std::uint64_t>(x0), p_};
    }

    ModP& operator+=(const ModP& o) {
        check(o);
        std::uint64_t s = std::uint64_t{v_} + o.v_;
        v_ = static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
        return *this;
    }
    ModP& operator-=(const ModP& o) {
        check(o);
        v_ = v_ >= o.v_ ? v_ - o.v_ : static_cast<std::uint32_t>(std::uint64_t{v_} + p_ - o.v_);
        return *this;
    }
    ModP& operator*=(const ModP& o) {
        check(o);
        v_ = static_cast<std::uint32_t>(std::uint64_t{v_} * o.v_ % p_);
        return *this;
    }
    ModP& operator/=(const ModP& o) {
        check(o);
        return *this *= o.inverse();
    }

    friend ModP operator+(ModP a, const ModP& b) { return a += b; }
    friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
    friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
    friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
    ModP operator-() const { return {v_ == 0 ? 0u : p_ - v_, p_}; }

    friend bool operator==(const ModP& a, const ModP& b) {
        a.check(b);
        return a.v_ == b.v_;
    }

    std::string to_string() const {
        return prints_negative() ? "-" + std::to_string(p_ - v_) : std::to_string(v_);
    }

private:
    void check(const ModP& o) const {
        if (p_ != o.p_)
            throw FieldMismatch("mixed moduli: GF(" + std::to_string(p_) + ") and GF(" +
                                std::to_string(o.p_) + ")");
    }

    std::uint32_t v_ = 0;
    std::uint32_t p_ = 0;
};

/// Coefficient types usable throughout the library.
template <class K>
concept FieldElement = requires(const K& a, const K& b, const FieldSpec& f) {
    { a + b } -> std::same_as<K>;
    { a - b } -> std::same_as<K>;
    { a * b } -> std::same_as<K>;
    { a / b } -> std::same_as<K>;
    { -a } -> std::same_as<K>;
    { a == b } -> std::convertible_to<bool>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.inverse() } -> std::same_as<K>;
    { a.spec() } -> std::same_as<FieldSpec>;
    { a.to_string() } -> std::same_as<std::string>;
    { K::zero(f) } -> std::same_as<K>;
    { K::one(f) } -> std::same_as<K>;
    { K::from_int(std::int64_t{}, f) } -> std::same_as<K>;
};

template <class K>
inline constexpr bool is_rational_v = std::is_same_v<K, Rational>;

/// Parse an integer or `a/b` literal into the given field.
template <FieldElement K>
K parse_scalar(std::string_view text, const FieldSpec& f) {
    auto slash = text.find('/');
    auto digits_ok = [](std::string_view s) {
        if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
        return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
    };
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!digits_ok(num) || !digits_ok(den) || (!den.empty() && (den[0] == '-' || den[0] == '+')))
        throw ParseError("bad coefficient '" + std::string(text) + "'");
    std::string n(num);
    if (n[0] == '+') n.erase(0, 1);
    mpz_class zn(n), zd{std::string(den)};
    if (zd == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    if constexpr (is_rational_v<K>) {
        (void)f;
        return Rational(zn, zd);
    } else {
        try {
            return K::from_fraction(zn, zd, f);
        } catch (const ArithmeticError& e) {
            throw ParseError(e.what());
        }
    }
}

/// Check that an element belongs to the declared field.
template <FieldElement K>
void check_field(const K& a, const FieldSpec& f) {
    if (!(a.spec() == f))
        throw FieldMismatch("scalar in " + a.spec().to_string() + " used in " + f.to_string());
}

} // namespace implicax
