#include "metric_center/union_ops.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace metric_center {

std::string case_tag(UnionCase c) {
    switch (c) {
        case UnionCase::single_part: return "single-part";
        case UnionCase::dominant_part: return "dominant-part";
        case UnionCase::tied_parts: return "tied-parts";
        case UnionCase::srad_below_dominant: return "srad-below-dominant";
        case UnionCase::srad_below_tied: return "srad-below-tied";
        case UnionCase::unbounded_partner_center: return "unbounded-with-finite-partner-i";
        case UnionCase::unbounded_partner_below: return "unbounded-with-finite-partner-ii";
        case UnionCase::m_collection: return "m-collection";
        case UnionCase::bound_only: return "bound-only";
    }
    return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Engines supply per-part descriptors and the two distance filters; the
// classification below is shared.
struct LineEngine {
    using Set = IntervalSet;
    using S = Rational;
    using Ext = ExactExt;
    using Report = LineReport;

    const std::vector<IntervalSet>& parts;
    const IntervalSet& Y;

    Report describe(std::size_t j) const { return descriptors_line(parts[j], Y); }
    Report describe_union() const {
        IntervalSet u;
        for (const auto& p : parts) u = u | p;
        return descriptors_line(u, Y);
    }
    static bool empty(const Set& s) { return s.empty(); }
    static Set none() { return {}; }
    static Set unite(const Set& a, const Set& b) { return a | b; }
    static Set minus(const Set& a, const Set& b) { return a - b; }
    // {x ∈ C : d(x, T) < r}
    static Set closer_than(const Set& C, const Set& T, const Ext& r) { return C - superlevel_line(C, T, r); }
    // {x ∈ C : d(x, T) > r}
    static Set farther_than(const Set& C, const Set& T, const Ext& r) { return C - sublevel_line(C, T, r); }
    static bool equal(const Ext& a, const Ext& b) { return a == b; }
    bool path_metric() const { return Y.size() == 1; }
    void require_separated(std::size_t i, std::size_t j) const {
        auto s = separated_check(parts[i], parts[j], Y);
        if (!s.separated) {
            throw std::invalid_argument("parts " + std::to_string(i) + " and " + std::to_string(j) +
                                        " are not separated (witness " + s.witness->str() + ")");
        }
    }
};

Mask full_mask(std::size_t n) { return Mask(n, true); }

Mask mask_or(const Mask& a, const Mask& b) {
    Mask out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] || b[i];
    return out;
}

Mask mask_minus(const Mask& a, const Mask& b) {
    Mask out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && !b[i];
    return out;
}

// Mask filters shared by the finite and grid engines.
struct MaskFilters {
    using Set = Mask;
    using S = double;
    using Ext = FloatExt;
    using Report = DescriptorReport<Mask, double>;

    std::size_t n = 0;
    double tol = 0;

    static bool empty(const Set& s) { return set_empty(s); }
    Set none() const { return Mask(n, false); }
    static Set unite(const Set& a, const Set& b) { return mask_or(a, b); }
    static Set minus(const Set& a, const Set& b) { return mask_minus(a, b); }
    bool equal(const Ext& a, const Ext& b) const {
        if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
        return std::abs(a.value() - b.value()) <= tol;
    }
    Set closer_from(const Set& C, const std::vector<double>& d, const Ext& r) const {
        Mask out(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            if (!C[i]) continue;
            out[i] = r.is_infinite() ? std::isfinite(d[i]) : d[i] < r.value() - tol;
        }
        return out;
    }
    Set farther_from(const Set& C, const std::vector<double>& d, const Ext& r) const {
        Mask out(n, false);
        if (r.is_infinite()) return out;
        for (std::size_t i = 0; i < n; ++i) out[i] = C[i] && d[i] > r.value();
        return out;
    }
};

struct FiniteEngine : MaskFilters {
    const FiniteSpace& X;
    std::vector<SampledPart> parts;

    FiniteEngine(const FiniteSpace& space, const std::vector<SampledPart>& ps) : X(space), parts(ps) {
        n = static_cast<std::size_t>(X.size());
        tol = X.h();
        for (auto& p : parts) {
            if (p.subset.size() != n) throw std::invalid_argument("part mask size differs from the space");
            if (p.view.empty()) p.view = full_mask(n);
            if (p.view.size() != n) throw std::invalid_argument("view mask size differs from the space");
            if (!set_subset(p.subset, p.view)) throw std::invalid_argument("part is not contained in its view");
        }
    }

    Report describe_in(const Mask& view, const Mask& subset) const {
        std::vector<Eigen::Index> keep;
        for (std::size_t i = 0; i < n; ++i) {
            if (view[i]) keep.push_back(static_cast<Eigen::Index>(i));
        }
        FiniteSpace sub = subspace(X, keep);
        Mask local(keep.size());
        for (std::size_t k = 0; k < keep.size(); ++k) local[k] = subset[static_cast<std::size_t>(keep[k])];
        Report r = descriptors_bf(sub, local);
        auto lift = [&](const Mask& m) {
            Mask out(n, false);
            for (std::size_t k = 0; k < keep.size(); ++k) out[static_cast<std::size_t>(keep[k])] = m[k];
            return out;
        };
        r.subset = lift(r.subset);
        r.boundary = lift(r.boundary);
        r.center = lift(r.center);
        r.quasi_center = lift(r.quasi_center);
        return r;
    }
    Report describe(std::size_t j) const { return describe_in(parts[j].view, parts[j].subset); }
    Report describe_union() const {
        Mask view(n, false), subset(n, false);
        for (const auto& p : parts) {
            view = mask_or(view, p.view);
            subset = mask_or(subset, p.subset);
        }
        return describe_in(view, subset);
    }
    Set closer_than(const Set& C, const Set& T, const Ext& r) const {
        return closer_from(C, distance_to_subset(X, T, C), r);
    }
    Set farther_than(const Set& C, const Set& T, const Ext& r) const {
        return farther_from(C, distance_to_subset(X, T, C), r);
    }
    static bool path_metric() { return false; }
    void require_separated(std::size_t i, std::size_t j) const {
        auto s = separated_check(X, parts[i].subset, parts[j].subset);
        if (!s.separated) {
            throw std::invalid_argument("parts " + std::to_string(i) + " and " + std::to_string(j) +
                                        " are closer than 2h (gap " + std::to_string(s.gap) + ")");
        }
    }
};

struct GridEngine : MaskFilters {
    const GridRegion& G;
    const std::vector<Mask>& parts;

    GridEngine(const GridRegion& grid, const std::vector<Mask>& ps) : G(grid), parts(ps) {
        n = static_cast<std::size_t>(G.size());
        tol = 2 * G.h();
        for (const auto& p : parts) {
            if (p.size() != n) throw std::invalid_argument("part mask size differs from the grid");
        }
    }

    GridRegion region(const Mask& m) const { return GridRegion::from_occupancy(G.extents(), G.origin(), G.h(), m); }
    Report describe(std::size_t j) const { return descriptors_grid(region(parts[j])); }
    Report describe_union() const {
        Mask u(n, false);
        for (const auto& p : parts) u = mask_or(u, p);
        return descriptors_grid(region(u));
    }
    Set closer_than(const Set& C, const Set& T, const Ext& r) const {
        return closer_from(C, distance_to_set(G, T).distance, r);
    }
    Set farther_than(const Set& C, const Set& T, const Ext& r) const {
        return farther_from(C, distance_to_set(G, T).distance, r);
    }
    static bool path_metric() { return true; }
    void require_separated(std::size_t i, std::size_t j) const {
        auto s = separated_check(G, parts[i], parts[j]);
        if (!s.separated) {
            throw std::invalid_argument("parts " + std::to_string(i) + " and " + std::to_string(j) +
                                        " are closer than 2h (gap " + std::to_string(s.gap) + ")");
        }
    }
};

template <class Engine>
UnionReport<typename Engine::Set, typename Engine::S> classify(const Engine& eng, std::size_t n) {
    using Set = typename Engine::Set;
    using Ext = typename Engine::Ext;
    UnionReport<Set, typename Engine::S> out;
    if (n == 0) throw std::invalid_argument("union of no parts");

    for (std::size_t j = 0; j < n; ++j) {
        out.parts.push_back(eng.describe(j));
        if (out.parts.back().clopen) {
            throw std::invalid_argument("part " + std::to_string(j) + " is clopen (empty boundary)");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) eng.require_separated(i, j);
    }
    out.direct = eng.describe_union();

    std::vector<Set> keep(n);
    for (std::size_t j = 0; j < n; ++j) {
        Set partners = eng.none();
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j) partners = eng.unite(partners, out.parts[i].boundary);
        }
        out.tilde.push_back(eng.closer_than(out.parts[j].center, partners, out.parts[j].radius));
        keep[j] = eng.minus(out.parts[j].center, out.tilde[j]);
        if (eng.path_metric() && !eng.empty(out.tilde[j])) {
            throw std::logic_error("tilde set of part " + std::to_string(j) + " is nonempty in a path-metric ambient");
        }
    }

    Ext rmax = out.parts[0].radius;
    bool any_infinite = false;
    for (const auto& p : out.parts) {
        rmax = ext_max(rmax, p.radius);
        any_infinite = any_infinite || p.radius.is_infinite();
    }
    for (std::size_t j = 0; j < n; ++j) {
        out.in_m.push_back(eng.equal(out.parts[j].radius, rmax) && !eng.empty(keep[j]));
    }
    if (any_infinite && n > 1) {
        out.warnings.emplace_back("a part has infinite radius; the dominant-part clause is applied literally");
    }

    auto determined = [&](const Set& center, const Ext& r, UnionCase tag) {
        out.tag = tag;
        out.center_determined = true;
        out.center = center;
        out.radius = r;
        out.srad = {r, false, r, false};
    };
    auto bound = [&](UnionCase tag, Ext upper, bool strict) {
        out.tag = tag;
        out.center_determined = false;
        out.center = eng.none();
        out.srad = {Ext(), false, upper, strict};
    };

    if (n == 1) {
        const auto& p = out.parts[0];
        out.tag = UnionCase::single_part;
        out.center_determined = true;
        out.center = p.center;
        out.radius = p.radius;
        out.srad = {p.semi_radius, false, p.semi_radius, false};
        return out;
    }

    if (n > 2) {
        Set c = eng.none();
        for (std::size_t j = 0; j < n; ++j) {
            if (out.in_m[j]) c = eng.unite(c, keep[j]);
        }
        if (!eng.empty(c)) {
            determined(c, rmax, UnionCase::m_collection);
        } else {
            bound(UnionCase::bound_only, rmax, false);
        }
        return out;
    }

    const Ext& r0 = out.parts[0].radius;
    const Ext& r1 = out.parts[1].radius;
    // Srad(A∪B) against rad(B) via the points of the dominant part far from ∂(A∪B).
    auto refine = [&](std::size_t a, std::size_t b) {
        Set both = eng.unite(out.parts[a].boundary, out.parts[b].boundary);
        const Ext& rb = out.parts[b].radius;
        out.double_tilde = eng.farther_than(out.parts[a].subset, both, rb);
        if (!eng.empty(*out.double_tilde)) {
            out.srad.lower = rb;
            out.srad.lower_strict = true;
        } else if (rb < out.srad.upper || (rb == out.srad.upper && out.srad.upper_strict)) {
            out.srad.upper = rb;
            out.srad.upper_strict = false;
        }
    };

    if (eng.equal(r0, r1)) {
        Ext r = ext_max(r0, r1);
        if (r.is_infinite()) {
            bound(UnionCase::bound_only, r, false);
            return out;
        }
        Set c = eng.unite(keep[0], keep[1]);
        if (!eng.empty(c)) {
            determined(c, r, UnionCase::tied_parts);
        } else {
            bound(UnionCase::srad_below_tied, r, true);
        }
        return out;
    }

    std::size_t a = r1 < r0 ? 0 : 1;
    std::size_t b = 1 - a;
    out.dominant = a;
    const Ext& ra = out.parts[a].radius;
    const Ext& rb = out.parts[b].radius;
    if (!eng.empty(keep[a])) {
        determined(keep[a], ra, UnionCase::dominant_part);
    } else if (ra.is_finite()) {
        bound(UnionCase::srad_below_dominant, ra, true);
        refine(a, b);
    } else if (out.parts[a].semi_radius <= rb) {
        if (!eng.empty(keep[b])) {
            determined(keep[b], rb, UnionCase::unbounded_partner_center);
        } else {
            bound(UnionCase::unbounded_partner_below, rb, true);
        }
    } else {
        bound(UnionCase::bound_only, ra, false);
        refine(a, b);
        out.warnings.emplace_back("the larger radius is infinite, so Srad(A∪B) need not stay below it");
    }
    return out;
}

}  // namespace

LineSeparation separated_check(const IntervalSet& A, const IntervalSet& B, const IntervalSet& Y) {
    IntervalSet touch = ((A.closure() & Y) & B) | (A & (B.closure() & Y));
    LineSeparation out;
    if (!touch.empty()) {
        out.separated = false;
        out.witness = pick_point(touch);
    }
    return out;
}

SampledSeparation separated_check(const FiniteSpace& X, const Mask& A, const Mask& B) {
    SampledSeparation out;
    out.gap = kInf;
    if (set_empty(A) || set_empty(B)) return out;
    auto d = distance_to_subset(X, A, B);
    Eigen::Index best = -1;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (B[i] && d[i] < out.gap) {
            out.gap = d[i];
            best = static_cast<Eigen::Index>(i);
        }
    }
    out.separated = out.gap > 2 * X.h();
    if (!out.separated) {
        Eigen::Index partner = -1;
        double dm = kInf;
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (!A[i]) continue;
            double di = X.dist(static_cast<Eigen::Index>(i), best);
            if (di < dm) {
                dm = di;
                partner = static_cast<Eigen::Index>(i);
            }
        }
        out.witness = std::make_pair(partner, best);
    }
    return out;
}

SampledSeparation separated_check(const GridRegion& G, const Mask& A, const Mask& B) {
    SampledSeparation out;
    out.gap = kInf;
    if (A.size() != static_cast<std::size_t>(G.size()) || B.size() != A.size()) {
        throw std::invalid_argument("mask size differs from the grid");
    }
    if (set_empty(A) || set_empty(B)) return out;
    auto field = distance_to_set(G, A);
    Eigen::Index best = -1;
    for (std::size_t i = 0; i < B.size(); ++i) {
        if (B[i] && field.distance[i] < out.gap) {
            out.gap = field.distance[i];
            best = static_cast<Eigen::Index>(i);
        }
    }
    out.separated = out.gap > 2 * G.h();
    if (!out.separated) {
        Eigen::VectorXd cb = G.center(best);
        Eigen::Index partner = -1;
        double dm = kInf;
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (!A[i]) continue;
            double di = (G.center(static_cast<Eigen::Index>(i)) - cb).norm();
            if (di < dm) {
                dm = di;
                partner = static_cast<Eigen::Index>(i);
            }
        }
        out.witness = std::make_pair(partner, best);
    }
    return out;
}

LineUnion union_descriptors(const IntervalSet& A, const IntervalSet& B, const IntervalSet& Y) {
    std::vector<IntervalSet> parts{A, B};
    return classify(LineEngine{parts, Y}, 2);
}

LineUnion union_descriptors_n(const std::vector<IntervalSet>& parts, const IntervalSet& Y) {
    return classify(LineEngine{parts, Y}, parts.size());
}

SampledUnion union_descriptors(const FiniteSpace& X, const std::vector<SampledPart>& parts) {
    FiniteEngine eng(X, parts);
    return classify(eng, parts.size());
}

SampledUnion union_descriptors(const GridRegion& G, const std::vector<Mask>& parts) {
    GridEngine eng(G, parts);
    return classify(eng, parts.size());
}

}  // namespace metric_center
