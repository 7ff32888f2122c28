#pragma once

#include <compare>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "metric_center/rational.hpp"

namespace metric_center {

/// Raised when exact and floating payloads meet in one comparison.
class RegimeMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

template <typename T>
concept ExtScalar = std::is_same_v<T, Rational> || std::is_same_v<T, double>;

/// Nonnegative extended real: a finite value >= 0 or +infinity.
///
/// Every distance, radius and diameter in the library is an ExtReal. The
/// scalar parameter fixes the numeric regime: Rational for the exact line
/// engine, double for sampled and grid engines. The two regimes never convert
/// into each other implicitly.
template <ExtScalar Scalar>
class ExtReal {
public:
    /// Zero.
    ExtReal() : value_(Scalar(0)) {}

    ExtReal(Scalar v) : value_(v) {  // NOLINT: implicit from a finite payload
        if (v < Scalar(0)) throw std::domain_error("negative extended-real payload");
        if constexpr (std::is_same_v<Scalar, double>) {
            if (v != v) throw std::domain_error("NaN extended-real payload");
            if (v == std::numeric_limits<double>::infinity()) {
                infinite_ = true;
                value_ = 0.0;
            }
        }
    }

    static ExtReal infinity() {
        ExtReal r;
        r.infinite_ = true;
        return r;
    }

    bool is_finite() const { return !infinite_; }
    bool is_infinite() const { return infinite_; }

    /// Finite payload; throws on +infinity.
    const Scalar& value() const {
        if (infinite_) throw std::logic_error("value() on infinite extended real");
        return value_;
    }

    friend bool operator==(const ExtReal& a, const ExtReal& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }

    friend auto operator<=>(const ExtReal& a, const ExtReal& b) {
        using Ord = std::conditional_t<std::is_same_v<Scalar, double>, std::partial_ordering,
                                       std::strong_ordering>;
        if (a.infinite_ && b.infinite_) return Ord(std::strong_ordering::equal);
        if (a.infinite_) return Ord(std::strong_ordering::greater);
        if (b.infinite_) return Ord(std::strong_ordering::less);
        return Ord(a.value_ <=> b.value_);
    }

    /// Serialized form: "p/q" for rationals, shortest round-trip decimal for
    /// doubles, "inf" for +infinity.
    std::string str() const;

private:
    Scalar value_;
    bool infinite_ = false;
};

template <>
std::string ExtReal<Rational>::str() const;
template <>
std::string ExtReal<double>::str() const;

using ExactExt = ExtReal<Rational>;
using FloatExt = ExtReal<double>;

template <ExtScalar S>
ExtReal<S> ext_min(const ExtReal<S>& a, const ExtReal<S>& b) {
    return b < a ? b : a;
}

template <ExtScalar S>
ExtReal<S> ext_max(const ExtReal<S>& a, const ExtReal<S>& b) {
    return a < b ? b : a;
}

/// -1, 0, +1.
template <ExtScalar S>
int ext_cmp(const ExtReal<S>& a, const ExtReal<S>& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

/// Explicit lossy widening of an exact value into the float regime.
FloatExt to_float(const ExactExt& x);

/// Extended real whose regime is only known at run time (parsed input,
/// CLI output). Comparisons across regimes throw RegimeMismatch.
class AnyExtReal {
public:
    AnyExtReal(ExactExt v) : v_(v) {}  // NOLINT
    AnyExtReal(FloatExt v) : v_(v) {}  // NOLINT

    bool is_exact() const { return std::holds_alternative<ExactExt>(v_); }
    const ExactExt& exact() const { return std::get<ExactExt>(v_); }
    const FloatExt& floating() const { return std::get<FloatExt>(v_); }

    std::string str() const;

    /// "inf", "p/q" / integer literals parse exact; literals with a decimal
    /// point or exponent parse as floats.
    static AnyExtReal parse(std::string_view text);

    friend bool operator==(const AnyExtReal& a, const AnyExtReal& b);

private:
    std::variant<ExactExt, FloatExt> v_;
    friend int ext_cmp(const AnyExtReal& a, const AnyExtReal& b);
};

int ext_cmp(const AnyExtReal& a, const AnyExtReal& b);
AnyExtReal ext_min(const AnyExtReal& a, const AnyExtReal& b);
AnyExtReal ext_max(const AnyExtReal& a, const AnyExtReal& b);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

}  // namespace metric_center
