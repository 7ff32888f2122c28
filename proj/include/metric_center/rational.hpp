#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace metric_center {

/// Thrown when an exact rational operation leaves the int64 range.
class RationalOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Exact rational number p/q with q > 0 and gcd(p, q) = 1.
///
/// Numerator and denominator are 64-bit; every operation is carried out in
/// 128-bit intermediates and throws RationalOverflow if the reduced result
/// does not fit. The line engine only ever sees small-denominator inputs, so
/// overflow signals a malformed fixture rather than a precision limit.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit from integers
    Rational(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    int sign() const { return (num_ > 0) - (num_ < 0); }

    /// Explicit, lossy conversion. Never called implicitly by the library.
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    /// "p/q", or "p" when q = 1.
    std::string str() const;

    /// Accepts "p", "p/q", "-p/q" and finite decimals such as "2.5" or "-0.125".
    /// Throws std::invalid_argument on malformed text or a zero denominator.
    static Rational parse(std::string_view text);

    /// Closest fraction with denominator <= max_den (continued fractions).
    /// Throws std::invalid_argument on a non-finite input.
    static Rational approximate(double x, std::int64_t max_den = 1000000);

private:
    static Rational from_wide(__int128 n, __int128 d);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational abs(const Rational& r);
Rational midpoint(const Rational& a, const Rational& b);

}  // namespace metric_center
