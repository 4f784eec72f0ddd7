#pragma once

#include <Eigen/Core>

#include <utility>

#include "umapstab/scalar.hpp"

namespace umapstab {

/// A nonnegative scalar extended with a distinguished infinity.  Arithmetic
/// saturates (a + inf = inf) and comparisons are total with inf as the
/// greatest element.
template <typename S>
class Extended {
public:
    Extended() : value_(0), finite_(true) {}
    explicit Extended(S value) : value_(std::move(value)), finite_(true) {}

    static Extended infinity() {
        Extended e;
        e.finite_ = false;
        return e;
    }

    bool is_finite() const { return finite_; }

    /// Finite value; meaningless when is_finite() is false.
    const S& value() const { return value_; }

    friend Extended operator+(const Extended& a, const Extended& b) {
        if (!a.finite_ || !b.finite_) return infinity();
        return Extended(S(a.value_ + b.value_));
    }

    friend Extended operator*(const Extended& a, const Extended& b) {
        if (!a.finite_ || !b.finite_) return infinity();
        return Extended(S(a.value_ * b.value_));
    }

    friend bool operator==(const Extended& a, const Extended& b) {
        if (a.finite_ != b.finite_) return false;
        if (!a.finite_) return true;
        return a.value_ == b.value_;
    }

    friend bool operator!=(const Extended& a, const Extended& b) { return !(a == b); }

    friend bool operator<(const Extended& a, const Extended& b) {
        if (!a.finite_) return false;
        if (!b.finite_) return true;
        return a.value_ < b.value_;
    }

    friend bool operator<=(const Extended& a, const Extended& b) { return !(b < a); }
    friend bool operator>(const Extended& a, const Extended& b) { return b < a; }
    friend bool operator>=(const Extended& a, const Extended& b) { return !(a < b); }

    friend Extended min(const Extended& a, const Extended& b) { return a < b ? a : b; }
    friend Extended max(const Extended& a, const Extended& b) { return a < b ? b : a; }

private:
    S value_;
    bool finite_;
};

/// Tolerance-aware equality: infinities compare equal only to each other.
template <typename S>
bool approx_eq(const Extended<S>& a, const Extended<S>& b) {
    if (a.is_finite() != b.is_finite()) return false;
    if (!a.is_finite()) return true;
    return approx_eq(a.value(), b.value());
}

/// Tolerance-aware a <= b; anything is <= infinity, infinity exceeds finite.
template <typename S>
bool approx_leq(const Extended<S>& a, const Extended<S>& b) {
    if (!b.is_finite()) return true;
    if (!a.is_finite()) return false;
    return approx_leq(a.value(), b.value());
}

/// Whether a distance value qualifies at scale s.  A finite scale admits
/// d <= s (tolerance-aware); the infinite scale admits exactly the finite
/// distances, matching the colimit-over-finite-scales reading of s = inf.
template <typename S>
bool within_scale(const Extended<S>& d, const Extended<S>& s) {
    if (!s.is_finite()) return d.is_finite();
    return approx_leq(d, s);
}

}  // namespace umapstab

namespace Eigen {

template <typename S>
struct NumTraits<umapstab::Extended<S>> {
    using Self = umapstab::Extended<S>;
    using Real = Self;
    using NonInteger = Self;
    using Literal = Self;
    using Nested = Self;

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 0,
        RequireInitialization = 1,
        ReadCost = 2,
        AddCost = 6,
        MulCost = 8
    };

    static Self epsilon() { return Self(S(0)); }
    static Self dummy_precision() { return Self(S(0)); }
    static Self highest() { return Self::infinity(); }
    static Self lowest() { return Self(S(0)); }
    static int digits10() { return 0; }
};

}  // namespace Eigen
