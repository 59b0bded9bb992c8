#pragma once

#include <stdexcept>
#include <string>

namespace implicax {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text: polynomial grammar, problem files, flags.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Operands live in different rings or fields (mixed moduli, mixed banks).
class FieldMismatch : public Error {
public:
    using Error::Error;
};

/// Exact arithmetic failed: division by zero, non-exact division,
/// exponent overflow, unsupported characteristic.
class ArithmeticError : public Error {
public:
    using Error::Error;
};

class NotDivisible : public ArithmeticError {
public:
    using ArithmeticError::ArithmeticError;
};

/// The input is outside the regime where the determinant method is exact.
class HypothesisViolation : public Error {
public:
    enum class Kind {
        PositiveDimensionalBaseLocus,
        NotGenericallyFinite,
        RankProfile,
        CommonFactor,
        SubBoundDegree,
        Other,
    };

    HypothesisViolation(Kind kind, const std::string& what)
        : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

inline const char* to_string(HypothesisViolation::Kind k) {
    switch (k) {
    case HypothesisViolation::Kind::PositiveDimensionalBaseLocus:
        return "positive-dimensional base locus";
    case HypothesisViolation::Kind::NotGenericallyFinite:
        return "not generically finite";
    case HypothesisViolation::Kind::RankProfile:
        return "rank profile";
    case HypothesisViolation::Kind::CommonFactor:
        return "common factor";
    case HypothesisViolation::Kind::SubBoundDegree:
        return "degree below the saturation bound";
    case HypothesisViolation::Kind::Other:
        break;
    }
    return "hypothesis";
}

/// Internal cross-checks disagreed (degree mismatch, evaluation oracle).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

} // namespace implicax
