#pragma once

#include <optional>
#include <vector>

#include "metric_center/report.hpp"

namespace metric_center {

using LineReport = DescriptorReport<IntervalSet, Rational>;

struct LineTopology {
    IntervalSet interior;
    IntervalSet closure;
    IntervalSet boundary;
};

/// Relative topology of A inside the ambient subspace Y ⊆ ℝ.
/// Throws std::invalid_argument if A ⊄ Y.
LineTopology topology_line(const IntervalSet& A, const IntervalSet& Y);

/// d(x, T) in ℝ. Empty T gives +inf.
ExactExt distance_to(const Rational& x, const IntervalSet& T);

/// sup over A of d(·, T) together with the points of A attaining it.
struct LineSupremum {
    ExactExt sup;
    IntervalSet argmax;
    bool attained() const { return !argmax.empty(); }
};
LineSupremum sup_distance(const IntervalSet& A, const IntervalSet& T);

/// {a ∈ A : d(a, T) ≤ alpha}.
IntervalSet sublevel_line(const IntervalSet& A, const IntervalSet& T, const ExactExt& alpha);

/// {a ∈ A : d(a, T) ≥ t}.
IntervalSet superlevel_line(const IntervalSet& A, const IntervalSet& T, const ExactExt& t);

/// Center, radius, semi-radius, quasi variants and diameter of A in Y.
LineReport descriptors_line(const IntervalSet& A, const IntervalSet& Y);

/// sup - inf; the empty set has diameter 0.
ExactExt diameter_line(const IntervalSet& A);

/// Connected components of the center of A in Y (one per piece).
std::vector<IntervalSet> center_components(const IntervalSet& A, const IntervalSet& Y);

/// {b ∈ B : d(b, ∂_Y B) ≥ t}.
IntervalSet hat_set_line(const IntervalSet& B, const IntervalSet& Y, const ExactExt& t);

/// Some point of a nonempty set (a closed endpoint when there is one).
Rational pick_point(const IntervalSet& S);

}  // namespace metric_center
