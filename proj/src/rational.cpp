#include "metric_center/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace metric_center {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(__int128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() &&
           v <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    }
    return v;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    *this = from_wide(n, d);
}

Rational Rational::from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (n == 0) d = 1;
    if (!fits64(n) || !fits64(d)) throw RationalOverflow("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
}

Rational Rational::approximate(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) throw std::invalid_argument("cannot approximate a non-finite double");
    if (max_den < 1) throw std::invalid_argument("max_den must be positive");
    bool neg = x < 0;
    double y = std::abs(x);
    if (y > 9e18) throw RationalOverflow("rational overflow");
    // convergents p/q; stop before the denominator bound
    __int128 p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = y;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        __int128 ai = static_cast<__int128>(a);
        __int128 p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den) {
            // best semiconvergent within the bound
            __int128 k = (max_den - q0) / q1;
            __int128 ps = k * p1 + p0, qs = k * q1 + q0;
            double e1 = std::abs(static_cast<double>(p1) / static_cast<double>(q1) - y);
            double e2 = std::abs(static_cast<double>(ps) / static_cast<double>(qs) - y);
            if (e2 < e1) {
                p1 = ps;
                q1 = qs;
            }
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double frac = r - a;
        if (frac < 1e-15 * std::max(1.0, r)) break;
        r = 1 / frac;
    }
    return from_wide(neg ? -p1 : p1, q1);
}

Rational Rational::operator-() const {
    return from_wide(-static_cast<__int128>(num_), den_);
}

Rational& Rational::operator+=(const Rational& o) {
    __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    return *this = from_wide(n, d);
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    // cross-reduce first so products of already-reduced fractions stay small
    __int128 g1 = gcd128(num_, o.den_);
    __int128 g2 = gcd128(o.num_, den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    __int128 n = (static_cast<__int128>(num_) / g1) * (static_cast<__int128>(o.num_) / g2);
    __int128 d = (static_cast<__int128>(den_) / g2) * (static_cast<__int128>(o.den_) / g1);
    return *this = from_wide(n, d);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    Rational inv = from_wide(o.den_, o.num_);
    return *this *= inv;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::int64_t n = parse_int(s.substr(0, slash), text);
        std::int64_t d = parse_int(s.substr(slash + 1), text);
        if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return Rational(n, d);
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        bool neg = !s.empty() && s.front() == '-';
        std::string_view ip = s.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
        std::string_view fp = s.substr(dot + 1);
        if (fp.empty() || fp.size() > 18) throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
        std::int64_t whole = ip.empty() ? 0 : parse_int(ip, text);
        std::int64_t frac = parse_int(fp, text);
        if (whole < 0 || frac < 0) throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
        Rational r = Rational(whole) + Rational(frac, scale);
        return neg ? -r : r;
    }
    return Rational(parse_int(s, text));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational midpoint(const Rational& a, const Rational& b) { return (a + b) / Rational(2); }

}  // namespace metric_center
