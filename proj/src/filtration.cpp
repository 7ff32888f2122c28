#include "metric_center/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace metric_center {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<int> rank_;
};

ExactExt line_measure(const IntervalSet& S) {
    Rational total(0);
    for (const auto& iv : S.pieces()) {
        if (!iv.is_bounded()) return ExactExt::infinity();
        total = total + (iv.hi.value() - iv.lo.value());
    }
    return ExactExt(total);
}

std::size_t betti_top(const GridRegion& G, const Mask& S) {
    return G.dim() == 1 ? betti0(G, S) : betti1_planar(G, S);
}

}  // namespace

LineFiltration filtration_line(const IntervalSet& A, const IntervalSet& Y) {
    LineFiltration F{A, Y, topology_line(A, Y).boundary, {}};
    std::set<Rational> values{Rational(0)};
    if (!F.boundary.empty()) {
        // p is piecewise linear with breaks at boundary points and at midpoints
        // between consecutive boundary points
        std::vector<Rational> marks;
        for (const auto& iv : F.boundary.pieces()) {
            marks.push_back(iv.lo.value());
            if (!iv.is_degenerate()) marks.push_back(iv.hi.value());
        }
        std::vector<Rational> candidates = marks;
        for (std::size_t i = 0; i + 1 < marks.size(); ++i) candidates.push_back((marks[i] + marks[i + 1]) / Rational(2));
        IntervalSet hull = A.closure();
        for (const auto& iv : A.pieces()) {
            if (iv.lo.is_finite()) candidates.push_back(iv.lo.value());
            if (iv.hi.is_finite()) candidates.push_back(iv.hi.value());
        }
        for (const auto& x : candidates) {
            if (!hull.contains(x)) continue;
            auto d = distance_to(x, F.boundary);
            if (d.is_finite()) values.insert(d.value());
        }
    }
    F.thresholds.assign(values.begin(), values.end());
    return F;
}

IntervalSet sublevel(const LineFiltration& F, const ExactExt& alpha) {
    if (F.boundary.empty()) return alpha.is_infinite() ? F.subset : IntervalSet{};
    return sublevel_line(F.subset, F.boundary, alpha);
}

std::size_t betti0(const IntervalSet& S) { return S.size(); }

GridFiltration filtration_grid(const GridRegion& G) {
    GridFiltration F{G, {}, {}};
    auto field = distance_to_set(G, boundary_cells(G));
    F.p.assign(static_cast<std::size_t>(G.size()), std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> sq;
    for (std::size_t i = 0; i < F.p.size(); ++i) {
        if (!G.occupancy()[i]) continue;
        F.p[i] = field.distance[i];
        if (field.squared[i] >= 0) sq.push_back(field.squared[i]);
    }
    // distinct on the exact squared values, then convert
    std::sort(sq.begin(), sq.end());
    sq.erase(std::unique(sq.begin(), sq.end()), sq.end());
    for (auto s : sq) F.thresholds.push_back(G.h() * std::sqrt(static_cast<double>(s)));
    return F;
}

Mask sublevel(const GridFiltration& F, double alpha) {
    Mask out(F.p.size(), false);
    for (std::size_t i = 0; i < F.p.size(); ++i) out[i] = F.region.occupancy()[i] && F.p[i] <= alpha;
    return out;
}

std::size_t betti0(const GridRegion& G, const Mask& S) {
    if (S.size() != static_cast<std::size_t>(G.size())) throw std::invalid_argument("mask size differs from the grid");
    DisjointSets ds(S.size());
    for (Eigen::Index c = 0; c < G.size(); ++c) {
        if (!S[static_cast<std::size_t>(c)]) continue;
        for (int axis = 0; axis < G.dim(); ++axis) {
            Eigen::Index nb = G.neighbor(c, axis, 1);
            if (nb >= 0 && S[static_cast<std::size_t>(nb)]) ds.unite(static_cast<std::size_t>(c), static_cast<std::size_t>(nb));
        }
    }
    std::size_t count = 0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        if (S[i] && ds.find(i) == i) ++count;
    }
    return count;
}

std::size_t betti1_planar(const GridRegion& G, const Mask& S) {
    if (G.dim() != 2) throw std::invalid_argument("betti1_planar needs a 2D grid");
    if (S.size() != static_cast<std::size_t>(G.size())) throw std::invalid_argument("mask size differs from the grid");
    const std::size_t outside = S.size();
    DisjointSets ds(S.size() + 1);
    for (Eigen::Index c = 0; c < G.size(); ++c) {
        auto ci = static_cast<std::size_t>(c);
        if (S[ci]) continue;
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                if (dx == 0 && dy == 0) continue;
                Eigen::Index nb = c;
                if (dx != 0) nb = G.neighbor(nb, 0, dx);
                if (nb >= 0 && dy != 0) nb = G.neighbor(nb, 1, dy);
                if (nb < 0) {
                    ds.unite(ci, outside);
                } else if (!S[static_cast<std::size_t>(nb)]) {
                    ds.unite(ci, static_cast<std::size_t>(nb));
                }
            }
        }
    }
    std::size_t unbounded = ds.find(outside), count = 0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        if (!S[i] && ds.find(i) == i && i != unbounded) ++count;
    }
    return count;
}

ConjectureReport<Rational> conjecture_scan(const IntervalSet& A, const IntervalSet& Y) {
    auto d = descriptors_line(A, Y);
    if (d.clopen) throw std::invalid_argument("the conjecture concerns nonclopen subsets; this one has empty boundary");
    if (d.radius == ExactExt(Rational(0))) {
        throw std::invalid_argument("the conjecture assumes a positive radius; this subset has radius 0");
    }
    auto F = filtration_line(A, Y);
    ConjectureReport<Rational> out;
    out.dimension = 1;
    out.radius = d.radius;
    out.betti_subset = betti0(A);
    out.betti_center = betti0(d.center);
    out.target = out.betti_subset + out.betti_center;

    std::vector<Rational> alphas;
    const auto& t = F.thresholds;
    for (std::size_t i = 0; i < t.size(); ++i) {
        alphas.push_back(t[i]);
        if (i + 1 < t.size()) alphas.push_back((t[i] + t[i + 1]) / Rational(2));
    }
    if (d.radius.is_infinite()) alphas.push_back(t.back() + Rational(1));

    std::optional<IntervalSet> previous;
    for (const auto& a : alphas) {
        IntervalSet P = sublevel(F, ExactExt(a));
        out.rows.push_back({a, betti0(P), std::nullopt, line_measure(P)});
        if (previous && !previous->is_subset_of(P)) out.nested = false;
        previous = P;
        if (!(ExactExt(a) < d.radius)) continue;
        if (betti0(P) == out.target) out.matches.push_back(a);
        ++out.exclusion_checked;
        if (!(P & d.center).empty()) out.center_excluded = false;
    }
    for (const auto& m : out.matches) {
        if (Rational(0) < m) {
            out.alpha_star = m;
            break;
        }
    }
    if (!out.alpha_star && !out.matches.empty()) out.alpha_star = out.matches.front();
    if (sublevel(F, ExactExt(Rational(0))).empty()) {
        out.notes.emplace_back("P_0 = ∂A ∩ A is empty; counts near α = 0 are degenerate");
    }
    if (d.radius.is_infinite()) out.notes.emplace_back("radius is infinite: the center is empty");
    return out;
}

ConjectureReport<double> conjecture_scan(const GridRegion& G) {
    if (G.dim() > 2) throw std::invalid_argument("conjecture scan supports 1D and 2D grids only");
    auto d = descriptors_grid(G);
    if (d.clopen) throw std::invalid_argument("the conjecture concerns nonclopen subsets; this one has empty boundary");
    if (d.radius == FloatExt(0.0)) {
        throw std::invalid_argument("the conjecture assumes a positive radius; this region has radius 0 at this resolution");
    }
    auto F = filtration_grid(G);
    const double h = G.h(), tau = 2 * h;
    const double cell = std::pow(h, G.dim());
    ConjectureReport<double> out;
    out.dimension = G.dim();
    out.radius = d.radius;
    out.betti_subset = betti_top(G, G.occupancy());
    out.betti_center = betti0(G, d.center);
    out.target = out.betti_subset + out.betti_center;

    std::optional<Mask> previous;
    for (double a : F.thresholds) {
        Mask P = sublevel(F, a);
        FiltrationRow<double> row{a, betti0(G, P), std::nullopt, FloatExt(cell * static_cast<double>(mask_count(P)))};
        if (G.dim() == 2) row.betti1 = betti1_planar(G, P);
        std::size_t top = G.dim() == 1 ? row.betti0 : *row.betti1;
        out.rows.push_back(row);
        if (previous && !set_subset(*previous, P)) out.nested = false;
        previous = P;
        if (!(FloatExt(a) < d.radius)) continue;
        if (top == out.target) out.matches.push_back(a);
        if (a < d.radius.value() - tau) {
            ++out.exclusion_checked;
            for (std::size_t i = 0; i < P.size(); ++i) {
                if (P[i] && d.center[i]) {
                    out.center_excluded = false;
                    break;
                }
            }
        }
    }
    for (double m : out.matches) {
        if (m > 0) {
            out.alpha_star = m;
            break;
        }
    }
    if (!out.alpha_star && !out.matches.empty()) out.alpha_star = out.matches.front();
    out.notes.emplace_back("grid verdict at resolution h = " + FloatExt(h).str() + "; center band 2h");
    return out;
}

}  // namespace metric_center
