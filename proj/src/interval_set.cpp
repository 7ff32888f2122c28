#include "metric_center/interval_set.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace metric_center {

const Rational& LineCoord::value() const {
    if (kind_ != Kind::finite) throw std::logic_error("value() on infinite line coordinate");
    return value_;
}

std::strong_ordering operator<=>(const LineCoord& a, const LineCoord& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (a.kind_ != LineCoord::Kind::finite) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
}

std::string LineCoord::str() const {
    switch (kind_) {
        case Kind::neg_inf: return "-inf";
        case Kind::pos_inf: return "inf";
        default: return value_.str();
    }
}

LineCoord operator+(const LineCoord& a, const Rational& d) {
    return a.is_finite() ? LineCoord(a.value() + d) : a;
}

LineCoord operator-(const LineCoord& a, const Rational& d) {
    return a.is_finite() ? LineCoord(a.value() - d) : a;
}

bool Interval::contains(const Rational& x) const {
    LineCoord c(x);
    bool above = lo_closed ? lo <= c : lo < c;
    bool below = hi_closed ? c <= hi : c < hi;
    return above && below;
}

bool Interval::is_nonempty() const {
    if (lo < hi) return true;
    return lo == hi && lo.is_finite() && lo_closed && hi_closed;
}

IntervalSet IntervalSet::normalize(std::vector<Interval> raw) {
    std::vector<Interval> keep;
    keep.reserve(raw.size());
    for (Interval iv : raw) {
        if (iv.hi < iv.lo) {
            throw std::invalid_argument("inverted interval: lo " + iv.lo.str() + " > hi " + iv.hi.str());
        }
        if (!iv.lo.is_finite()) iv.lo_closed = false;
        if (!iv.hi.is_finite()) iv.hi_closed = false;
        if (iv.lo.kind() == LineCoord::Kind::pos_inf || iv.hi.kind() == LineCoord::Kind::neg_inf) continue;
        if (iv.is_nonempty()) keep.push_back(iv);
    }
    std::sort(keep.begin(), keep.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.lo_closed && !b.lo_closed;
    });

    IntervalSet out;
    for (const Interval& iv : keep) {
        if (out.pieces_.empty()) {
            out.pieces_.push_back(iv);
            continue;
        }
        Interval& cur = out.pieces_.back();
        bool touches = iv.lo < cur.hi || (iv.lo == cur.hi && (iv.lo_closed || cur.hi_closed));
        if (!touches) {
            out.pieces_.push_back(iv);
            continue;
        }
        if (iv.lo == cur.lo) cur.lo_closed = cur.lo_closed || iv.lo_closed;
        if (cur.hi < iv.hi) {
            cur.hi = iv.hi;
            cur.hi_closed = iv.hi_closed;
        } else if (cur.hi == iv.hi) {
            cur.hi_closed = cur.hi_closed || iv.hi_closed;
        }
    }
    return out;
}

IntervalSet IntervalSet::real_line() {
    return normalize({Interval::open(LineCoord::neg_inf(), LineCoord::pos_inf())});
}

IntervalSet IntervalSet::point(Rational q) { return normalize({Interval::point(q)}); }

IntervalSet IntervalSet::closed(Rational a, Rational b) { return normalize({Interval::closed(a, b)}); }

IntervalSet IntervalSet::points(const std::vector<Rational>& qs) {
    std::vector<Interval> raw;
    raw.reserve(qs.size());
    for (const auto& q : qs) raw.push_back(Interval::point(q));
    return normalize(std::move(raw));
}

bool IntervalSet::is_bounded() const {
    return pieces_.empty() || (pieces_.front().lo.is_finite() && pieces_.back().hi.is_finite());
}

bool IntervalSet::contains(const Rational& x) const {
    // first piece whose hi is not below x
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x, [](const Interval& iv, const Rational& v) {
        return iv.hi < LineCoord(v);
    });
    return it != pieces_.end() && it->contains(x);
}

bool IntervalSet::is_subset_of(const IntervalSet& other) const { return (*this - other).empty(); }

bool IntervalSet::is_discrete() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const Interval& iv) { return iv.is_degenerate(); });
}

std::optional<LineCoord> IntervalSet::infimum() const {
    if (pieces_.empty()) return std::nullopt;
    return pieces_.front().lo;
}

std::optional<LineCoord> IntervalSet::supremum() const {
    if (pieces_.empty()) return std::nullopt;
    return pieces_.back().hi;
}

IntervalSet IntervalSet::complement() const {
    std::vector<Interval> raw;
    LineCoord prev = LineCoord::neg_inf();
    bool prev_closed = false;  // gap starts closed when previous piece ended open
    bool first = true;
    for (const Interval& iv : pieces_) {
        Interval gap{prev, first ? false : !prev_closed, iv.lo, !iv.lo_closed};
        if (gap.is_nonempty()) raw.push_back(gap);
        prev = iv.hi;
        prev_closed = iv.hi_closed;
        first = false;
    }
    Interval tail{prev, first ? false : !prev_closed, LineCoord::pos_inf(), false};
    if (tail.is_nonempty()) raw.push_back(tail);
    return normalize(std::move(raw));
}

IntervalSet IntervalSet::closure() const {
    std::vector<Interval> raw = pieces_;
    for (Interval& iv : raw) {
        iv.lo_closed = iv.lo.is_finite();
        iv.hi_closed = iv.hi.is_finite();
    }
    return normalize(std::move(raw));
}

IntervalSet IntervalSet::interior() const {
    std::vector<Interval> raw;
    for (Interval iv : pieces_) {
        if (iv.is_degenerate()) continue;
        iv.lo_closed = false;
        iv.hi_closed = false;
        raw.push_back(iv);
    }
    return normalize(std::move(raw));
}

IntervalSet operator|(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> raw = a.pieces_;
    raw.insert(raw.end(), b.pieces_.begin(), b.pieces_.end());
    return IntervalSet::normalize(std::move(raw));
}

IntervalSet operator&(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> raw;
    std::size_t i = 0, j = 0;
    while (i < a.pieces_.size() && j < b.pieces_.size()) {
        const Interval& x = a.pieces_[i];
        const Interval& y = b.pieces_[j];
        Interval z;
        if (x.lo == y.lo) {
            z.lo = x.lo;
            z.lo_closed = x.lo_closed && y.lo_closed;
        } else if (x.lo < y.lo) {
            z.lo = y.lo;
            z.lo_closed = y.lo_closed;
        } else {
            z.lo = x.lo;
            z.lo_closed = x.lo_closed;
        }
        if (x.hi == y.hi) {
            z.hi = x.hi;
            z.hi_closed = x.hi_closed && y.hi_closed;
        } else if (x.hi < y.hi) {
            z.hi = x.hi;
            z.hi_closed = x.hi_closed;
        } else {
            z.hi = y.hi;
            z.hi_closed = y.hi_closed;
        }
        if (!(z.hi < z.lo) && z.is_nonempty()) raw.push_back(z);
        // advance the piece that ends first (or the open one on a tie)
        bool x_first = x.hi < y.hi || (x.hi == y.hi && !x.hi_closed);
        if (x_first) ++i; else ++j;
    }
    return IntervalSet::normalize(std::move(raw));
}

IntervalSet operator-(const IntervalSet& a, const IntervalSet& b) { return a & b.complement(); }

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

LineCoord parse_coord(std::string_view s) {
    s = trim(s);
    if (s == "-inf") return LineCoord::neg_inf();
    if (s == "inf" || s == "+inf") return LineCoord::pos_inf();
    return LineCoord(Rational::parse(s));
}

}  // namespace

IntervalSet IntervalSet::parse(std::string_view text) {
    std::string_view s = trim(text);
    std::vector<Interval> raw;
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("interval set '" + std::string(text) + "': " + why);
    };
    while (pos < s.size()) {
        while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ',')) ++pos;
        if (pos >= s.size()) break;
        char open = s[pos];
        if (open == '{') {
            std::size_t close = s.find('}', pos);
            if (close == std::string_view::npos) fail("unterminated '{'");
            std::string_view body = trim(s.substr(pos + 1, close - pos - 1));
            if (!body.empty()) {
                LineCoord c = parse_coord(body);
                if (!c.is_finite()) fail("point must be finite");
                raw.push_back(Interval::point(c.value()));
            }
            pos = close + 1;
            continue;
        }
        if (open != '[' && open != '(') fail("expected '[', '(' or '{' at offset " + std::to_string(pos));
        std::size_t close = s.find_first_of("])", pos);
        if (close == std::string_view::npos) fail("unterminated interval");
        std::string_view body = s.substr(pos + 1, close - pos - 1);
        std::size_t comma = body.find(',');
        if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos) {
            fail("interval needs exactly two endpoints");
        }
        Interval iv{parse_coord(body.substr(0, comma)), open == '[', parse_coord(body.substr(comma + 1)), s[close] == ']'};
        if (iv.lo_closed && !iv.lo.is_finite()) fail("infinite endpoint cannot be closed");
        if (iv.hi_closed && !iv.hi.is_finite()) fail("infinite endpoint cannot be closed");
        raw.push_back(iv);
        pos = close + 1;
    }
    return normalize(std::move(raw));
}

std::string IntervalSet::str() const {
    if (pieces_.empty()) return "{}";
    std::string out;
    for (const Interval& iv : pieces_) {
        if (!out.empty()) out += ',';
        if (iv.is_degenerate()) {
            out += "{" + iv.lo.str() + "}";
            continue;
        }
        out += iv.lo_closed ? '[' : '(';
        out += iv.lo.str() + "," + iv.hi.str();
        out += iv.hi_closed ? ']' : ')';
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const IntervalSet& s) { return os << s.str(); }

}  // namespace metric_center
