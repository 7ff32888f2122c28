#include "metric_center/exact_line.hpp"

#include <stdexcept>

namespace metric_center {

namespace {

// Closed dilation of T by alpha: ⋃ [lo - alpha, hi + alpha].
IntervalSet closed_dilation(const IntervalSet& T, const Rational& alpha) {
    std::vector<Interval> raw;
    for (const Interval& iv : T.pieces()) raw.push_back({iv.lo - alpha, true, iv.hi + alpha, true});
    return IntervalSet::normalize(std::move(raw));
}

// Open dilation: ⋃ (lo - t, hi + t), t > 0.
IntervalSet open_dilation(const IntervalSet& T, const Rational& t) {
    std::vector<Interval> raw;
    for (const Interval& iv : T.pieces()) raw.push_back({iv.lo - t, false, iv.hi + t, false});
    return IntervalSet::normalize(std::move(raw));
}

struct Candidate {
    ExactExt value;
    std::optional<Rational> point;  // attaining point, if the value is attained
};

// Supremum of the tent x ↦ min(x - l, h - x) over one piece q inside the gap (l, h).
Candidate gap_candidate(const Interval& q, const LineCoord& l, const LineCoord& h) {
    if (l.is_finite() && h.is_finite()) {
        Rational m = midpoint(l.value(), h.value());
        if (q.contains(m)) return {ExactExt((h.value() - l.value()) / Rational(2)), m};
        if (LineCoord(m) <= q.lo) {
            const Rational& x = q.lo.value();
            return {ExactExt(h.value() - x), q.lo_closed ? std::optional<Rational>(x) : std::nullopt};
        }
        const Rational& x = q.hi.value();
        return {ExactExt(x - l.value()), q.hi_closed ? std::optional<Rational>(x) : std::nullopt};
    }
    if (h.is_finite()) {
        // f(x) = h - x grows towards -inf
        if (!q.lo.is_finite()) return {ExactExt::infinity(), std::nullopt};
        const Rational& x = q.lo.value();
        return {ExactExt(h.value() - x), q.lo_closed ? std::optional<Rational>(x) : std::nullopt};
    }
    if (!q.hi.is_finite()) return {ExactExt::infinity(), std::nullopt};
    const Rational& x = q.hi.value();
    return {ExactExt(x - l.value()), q.hi_closed ? std::optional<Rational>(x) : std::nullopt};
}

}  // namespace

LineTopology topology_line(const IntervalSet& A, const IntervalSet& Y) {
    if (!A.is_subset_of(Y)) {
        throw std::invalid_argument("subset " + A.str() + " is not contained in ambient " + Y.str());
    }
    IntervalSet rest = Y - A;
    IntervalSet cl_a = A.closure() & Y;
    IntervalSet cl_rest = rest.closure() & Y;
    return {Y - cl_rest, cl_a, cl_a & cl_rest};
}

ExactExt distance_to(const Rational& x, const IntervalSet& T) {
    if (T.empty()) return ExactExt::infinity();
    IntervalSet cl = T.closure();
    if (cl.contains(x)) return ExactExt(Rational(0));
    ExactExt best = ExactExt::infinity();
    LineCoord c(x);
    for (const Interval& iv : cl.pieces()) {
        if (iv.hi < c) best = ext_min(best, ExactExt(x - iv.hi.value()));
        else if (c < iv.lo) best = ext_min(best, ExactExt(iv.lo.value() - x));
    }
    return best;
}

LineSupremum sup_distance(const IntervalSet& A, const IntervalSet& T) {
    if (A.empty()) return {ExactExt(Rational(0)), {}};
    IntervalSet cl = T.closure();
    if (cl.empty()) return {ExactExt::infinity(), A};

    std::vector<Candidate> cands;
    IntervalSet on_target = A & cl;
    if (!on_target.empty()) cands.push_back({ExactExt(Rational(0)), std::nullopt});
    IntervalSet gaps = cl.complement();
    for (const Interval& gap : gaps.pieces()) {
        IntervalSet inside = A & IntervalSet::normalize({gap});
        for (const Interval& q : inside.pieces()) cands.push_back(gap_candidate(q, gap.lo, gap.hi));
    }

    ExactExt sup(Rational(0));
    for (const auto& c : cands) sup = ext_max(sup, c.value);

    std::vector<Rational> pts;
    for (const auto& c : cands) {
        if (c.point && c.value == sup) pts.push_back(*c.point);
    }
    IntervalSet argmax = IntervalSet::points(pts);
    if (sup == ExactExt(Rational(0))) argmax = argmax | on_target;
    return {sup, argmax};
}

IntervalSet sublevel_line(const IntervalSet& A, const IntervalSet& T, const ExactExt& alpha) {
    if (alpha.is_infinite()) return A;
    IntervalSet cl = T.closure();
    if (cl.empty()) return {};
    return A & closed_dilation(cl, alpha.value());
}

IntervalSet superlevel_line(const IntervalSet& A, const IntervalSet& T, const ExactExt& t) {
    IntervalSet cl = T.closure();
    if (t.is_infinite()) return cl.empty() ? A : IntervalSet{};
    if (t.value() == Rational(0) || cl.empty()) return A;
    return A - open_dilation(cl, t.value());
}

ExactExt diameter_line(const IntervalSet& A) {
    if (A.empty()) return ExactExt(Rational(0));
    if (!A.is_bounded()) return ExactExt::infinity();
    return ExactExt(A.supremum()->value() - A.infimum()->value());
}

LineReport descriptors_line(const IntervalSet& A, const IntervalSet& Y) {
    LineTopology topo = topology_line(A, Y);
    LineReport r;
    r.subset = A;
    r.boundary = topo.boundary;
    r.interior_nonempty = !topo.interior.empty();
    r.clopen = topo.boundary.empty();
    r.diameter = diameter_line(A);

    if (A.empty()) {
        r.radius = ExactExt::infinity();
        r.quasi_radius = ExactExt::infinity();
        return r;
    }

    if (r.clopen) {
        r.center = A;
        r.radius = ExactExt::infinity();
        r.semi_radius = ExactExt::infinity();
    } else {
        LineSupremum s = sup_distance(A, topo.boundary);
        r.center = s.argmax;
        r.radius = s.attained() ? s.sup : ExactExt::infinity();
        r.semi_radius = s.sup;
    }

    IntervalSet rest = Y - A;
    if (rest.empty()) {
        r.quasi_center = A;
        r.quasi_radius = ExactExt::infinity();
        r.semi_quasi_radius = ExactExt::infinity();
    } else {
        LineSupremum q = sup_distance(A, rest);
        r.quasi_center = q.argmax;
        r.quasi_radius = q.attained() ? q.sup : ExactExt::infinity();
        r.semi_quasi_radius = q.sup;
    }
    return r;
}

std::vector<IntervalSet> center_components(const IntervalSet& A, const IntervalSet& Y) {
    std::vector<IntervalSet> out;
    IntervalSet center = descriptors_line(A, Y).center;
    for (const Interval& iv : center.pieces()) out.push_back(IntervalSet::normalize({iv}));
    return out;
}

IntervalSet hat_set_line(const IntervalSet& B, const IntervalSet& Y, const ExactExt& t) {
    return superlevel_line(B, topology_line(B, Y).boundary, t);
}

Rational pick_point(const IntervalSet& S) {
    if (S.empty()) throw std::invalid_argument("pick_point on the empty set");
    const Interval& p = S.pieces().front();
    if (p.lo.is_finite() && p.lo_closed) return p.lo.value();
    if (p.hi.is_finite() && p.hi_closed) return p.hi.value();
    if (p.lo.is_finite() && p.hi.is_finite()) return midpoint(p.lo.value(), p.hi.value());
    if (p.lo.is_finite()) return p.lo.value() + Rational(1);
    if (p.hi.is_finite()) return p.hi.value() - Rational(1);
    return Rational(0);
}

}  // namespace metric_center
