// Test-only generators and brute-force oracles. Nothing here calls the
// engines under test except to read back plain values.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "metric_center/interval_set.hpp"
#include "metric_center/rational.hpp"

namespace oracle {

using metric_center::Interval;
using metric_center::midpoint;
using metric_center::IntervalSet;
using metric_center::LineCoord;
using metric_center::Rational;

/// Raw piece list with endpoints on the 1/den lattice inside [-span, span].
inline std::vector<Interval> random_raw(std::mt19937_64& rng, int max_pieces = 3, int den = 5, int span = 2,
                                        double point_prob = 0.15) {
    std::uniform_int_distribution<int> count(1, max_pieces);
    std::uniform_int_distribution<int> tick(-span * den, span * den);
    std::bernoulli_distribution coin(0.5), point(point_prob);
    std::vector<Interval> raw;
    int k = count(rng);
    for (int i = 0; i < k; ++i) {
        int a = tick(rng), b = tick(rng);
        if (a > b) std::swap(a, b);
        if (a == b || point(rng)) {
            raw.push_back(Interval::point(Rational(a, den)));
            continue;
        }
        raw.push_back({Rational(a, den), coin(rng), Rational(b, den), coin(rng)});
    }
    return raw;
}

/// Pointwise membership in a raw (unnormalized) piece list.
inline bool raw_contains(const std::vector<Interval>& raw, const Rational& x) {
    for (const auto& iv : raw) {
        bool above = iv.lo_closed ? !(LineCoord(x) < iv.lo) : iv.lo < LineCoord(x);
        bool below = iv.hi_closed ? !(iv.hi < LineCoord(x)) : LineCoord(x) < iv.hi;
        if (above && below) return true;
    }
    return false;
}

/// Lattice k/den for k in [lo*den, hi*den].
inline std::vector<Rational> lattice(int lo, int hi, int den) {
    std::vector<Rational> out;
    for (int k = lo * den; k <= hi * den; ++k) out.emplace_back(k, den);
    return out;
}

/// Boundary of a bounded set A ⊆ ℝ given only a membership predicate and the
/// finite list of places where membership can change. A point x is a
/// boundary point when membership at x differs from membership just left or
/// just right of x.
template <typename Member>
std::vector<Rational> boundary_points(const std::vector<Rational>& breaks, Member member, const Rational& eps) {
    std::vector<Rational> out;
    for (const auto& x : breaks) {
        bool m = member(x), l = member(x - eps), r = member(x + eps);
        if (m != l || m != r) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Min |x - p| over a finite point list, as a double (inf when empty).
inline double point_distance(double x, const std::vector<Rational>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) best = std::min(best, std::abs(x - p.to_double()));
    return best;
}

inline Rational exact_point_distance(const Rational& x, const std::vector<Rational>& pts) {
    Rational best(-1);
    for (const auto& p : pts) {
        Rational d = x < p ? p - x : x - p;
        if (best < Rational(0) || d < best) best = d;
    }
    return best;
}

// Level-set oracle for bounded A ⊆ ℝ: the boundary is the finite set of
// points where membership flips; between two consecutive boundary points A
// is either absent or fills the whole gap, so d(·, ∂A) is a tent per gap.
struct LevelOracle {
    IntervalSet A;
    std::vector<Rational> bd;

    explicit LevelOracle(IntervalSet a) : A(std::move(a)) {
        std::vector<Rational> breaks;
        for (const auto& iv : A.pieces()) {
            breaks.push_back(iv.lo.value());
            breaks.push_back(iv.hi.value());
        }
        bd = boundary_points(breaks, [&](const Rational& x) { return A.contains(x); }, Rational(1, 1000));
    }
    Rational sup() const {
        Rational best(0);
        for (std::size_t i = 0; i + 1 < bd.size(); ++i) {
            Rational m = midpoint(bd[i], bd[i + 1]);
            if (A.contains(m)) best = std::max(best, (bd[i + 1] - bd[i]) / Rational(2));
        }
        return best;
    }
    IntervalSet level(const Rational& s) const {
        if (s == Rational(0)) return A;
        IntervalSet cut;
        for (const auto& p : bd) cut = cut | IntervalSet::normalize({Interval::open(p - s, p + s)});
        return A - cut;
    }
};

/// splitmix64 step, used to derive per-case seeds.
inline std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}


/// Components of a w×h mask (x fastest) by flood fill; 4- or 8-adjacency.
inline int flood_components(const std::vector<bool>& m, int w, int h, bool diagonal) {
    std::vector<char> seen(m.size(), 0);
    int count = 0;
    std::vector<int> stack;
    for (int start = 0; start < w * h; ++start) {
        if (!m[static_cast<std::size_t>(start)] || seen[static_cast<std::size_t>(start)]) continue;
        ++count;
        stack.push_back(start);
        seen[static_cast<std::size_t>(start)] = 1;
        while (!stack.empty()) {
            int c = stack.back();
            stack.pop_back();
            int x = c % w, y = c / w;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if ((dx == 0 && dy == 0) || (!diagonal && dx != 0 && dy != 0)) continue;
                    int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    auto k = static_cast<std::size_t>(nx + ny * w);
                    if (m[k] && !seen[k]) {
                        seen[k] = 1;
                        stack.push_back(static_cast<int>(k));
                    }
                }
            }
        }
    }
    return count;
}

/// First Betti number of a 4-connected pixel set from its Euler characteristic:
/// vertices are pixels, edges join 4-neighbours, faces are full 2×2 blocks, and
/// β₁ = β₀ − (V − E + F) for a planar complex.
inline int euler_betti1(const std::vector<bool>& m, int w, int h) {
    auto at = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h && m[static_cast<std::size_t>(x + y * w)]; };
    long V = 0, E = 0, F = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!at(x, y)) continue;
            ++V;
            if (at(x + 1, y)) ++E;
            if (at(x, y + 1)) ++E;
            if (at(x + 1, y) && at(x, y + 1) && at(x + 1, y + 1)) ++F;
        }
    }
    return flood_components(m, w, h, false) - static_cast<int>(V - E + F);
}

}  // namespace oracle
