#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metric_center/rational.hpp"

namespace metric_center {

/// A point of the extended line: -inf, a rational, or +inf.
class LineCoord {
public:
    enum class Kind : std::uint8_t { neg_inf, finite, pos_inf };

    LineCoord(Rational v) : kind_(Kind::finite), value_(v) {}  // NOLINT
    LineCoord(std::int64_t v) : kind_(Kind::finite), value_(v) {}  // NOLINT

    static LineCoord neg_inf() { return LineCoord(Kind::neg_inf); }
    static LineCoord pos_inf() { return LineCoord(Kind::pos_inf); }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::finite; }
    const Rational& value() const;

    friend bool operator==(const LineCoord& a, const LineCoord& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
    }
    friend std::strong_ordering operator<=>(const LineCoord& a, const LineCoord& b);

    std::string str() const;

private:
    explicit LineCoord(Kind k) : kind_(k) {}
    Kind kind_;
    Rational value_;
};

LineCoord operator+(const LineCoord& a, const Rational& d);
LineCoord operator-(const LineCoord& a, const Rational& d);

/// One connected piece: (lo, hi) with per-end closedness. Infinite ends are
/// always open. A degenerate piece lo = hi has both ends closed.
struct Interval {
    LineCoord lo = Rational(0);
    bool lo_closed = true;
    LineCoord hi = Rational(0);
    bool hi_closed = true;

    static Interval closed(Rational a, Rational b) { return {a, true, b, true}; }
    static Interval open(LineCoord a, LineCoord b) { return {a, false, b, false}; }
    static Interval point(Rational q) { return {q, true, q, true}; }

    bool is_degenerate() const { return lo == hi; }
    bool is_bounded() const { return lo.is_finite() && hi.is_finite(); }
    bool contains(const Rational& x) const;
    /// lo < hi, or lo = hi with both ends closed.
    bool is_nonempty() const;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of pairwise disjoint intervals with rational endpoints.
///
/// The representation is canonical: pieces are sorted, pairwise disjoint and
/// never mergeable, so two IntervalSets denote the same point set exactly when
/// they compare equal.
class IntervalSet {
public:
    IntervalSet() = default;

    /// Sorts and merges raw pieces. Throws std::invalid_argument on lo > hi.
    static IntervalSet normalize(std::vector<Interval> raw);

    static IntervalSet real_line();
    static IntervalSet point(Rational q);
    static IntervalSet closed(Rational a, Rational b);
    static IntervalSet points(const std::vector<Rational>& qs);

    /// Comma-separated pieces such as "[0,1],(2,5/2],[3,inf)" with "{q}" for a
    /// single point and "{}" (or empty text) for the empty set.
    static IntervalSet parse(std::string_view text);
    std::string str() const;

    const std::vector<Interval>& pieces() const { return pieces_; }
    std::size_t size() const { return pieces_.size(); }
    bool empty() const { return pieces_.empty(); }
    bool is_bounded() const;
    bool contains(const Rational& x) const;
    bool is_subset_of(const IntervalSet& other) const;

    /// Every piece is a single point.
    bool is_discrete() const;

    /// inf and sup as extended coordinates (empty set: nullopt).
    std::optional<LineCoord> infimum() const;
    std::optional<LineCoord> supremum() const;

    IntervalSet complement() const;
    IntervalSet closure() const;
    IntervalSet interior() const;

    friend IntervalSet operator|(const IntervalSet& a, const IntervalSet& b);
    friend IntervalSet operator&(const IntervalSet& a, const IntervalSet& b);
    friend IntervalSet operator-(const IntervalSet& a, const IntervalSet& b);

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<Interval> pieces_;
};

std::ostream& operator<<(std::ostream& os, const IntervalSet& s);

}  // namespace metric_center
