#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metric_center/exact_line.hpp"
#include "metric_center/finite_space.hpp"
#include "metric_center/grid_region.hpp"

namespace metric_center {

/// Which clause of the union classification produced a result.
enum class UnionCase {
    single_part,                // one part: its own descriptors
    dominant_part,              // larger radius, Cent∖Ã nonempty: center Cent(A)∖Ã
    tied_parts,                 // equal radii, some Cent∖tilde nonempty
    srad_below_dominant,        // larger finite radius, Cent(A) = Ã: Srad < rad(A)
    srad_below_tied,            // equal finite radii, both centers eaten: Srad < rad
    unbounded_partner_center,   // rad(A) = ∞ > rad(B) ≥ Srad(A), Cent(B)∖B̃ nonempty
    unbounded_partner_below,    // same hypotheses, Cent(B) = B̃: Srad < rad(B)
    m_collection,               // n parts: center is the union over M of Cent∖tilde
    bound_only,                 // only Srad ≤ max radius is known
};

std::string case_tag(UnionCase c);

/// An interval of possible values of Srad(A∪B).
template <ExtScalar S>
struct SradBound {
    ExtReal<S> lower;
    bool lower_strict = false;
    ExtReal<S> upper = ExtReal<S>::infinity();
    bool upper_strict = false;

    bool contains(const ExtReal<S>& x) const {
        bool lo_ok = lower_strict ? lower < x : lower <= x;
        bool hi_ok = upper_strict ? x < upper : x <= upper;
        return lo_ok && hi_ok;
    }
    bool is_point() const { return !lower_strict && !upper_strict && lower == upper; }
    std::string str() const {
        return std::string(lower_strict ? "(" : "[") + lower.str() + ", " + upper.str() + (upper_strict ? ")" : "]");
    }
};

template <typename Set, ExtScalar S>
struct UnionReport {
    UnionCase tag = UnionCase::bound_only;
    std::vector<DescriptorReport<Set, S>> parts;
    std::vector<Set> tilde;                    // Ã_j: center points too close to a partner's boundary
    std::vector<bool> in_m;                    // maximal radius with Cent∖Ã nonempty
    std::optional<std::size_t> dominant;       // two parts, unequal radii: index of the larger
    std::optional<Set> double_tilde;           // {a ∈ A : d(a, ∂(A∪B)) > rad(B)} for the dominant A
    bool center_determined = false;
    Set center;
    ExtReal<S> radius = ExtReal<S>::infinity();
    SradBound<S> srad;
    DescriptorReport<Set, S> direct;           // descriptors of the union computed directly
    std::vector<std::string> warnings;
};

using LineUnion = UnionReport<IntervalSet, Rational>;
using SampledUnion = UnionReport<Mask, double>;

struct LineSeparation {
    bool separated = true;
    std::optional<Rational> witness;  // a point of cl(A)∩B or A∩cl(B)
};

/// cl_Y(A)∩B = ∅ and A∩cl_Y(B) = ∅, exactly.
LineSeparation separated_check(const IntervalSet& A, const IntervalSet& B, const IntervalSet& Y);

struct SampledSeparation {
    bool separated = true;
    double gap = 0;  // least distance between the two subsets (+inf if one is empty)
    std::optional<std::pair<Eigen::Index, Eigen::Index>> witness;  // closest pair when not separated
};

/// Separated at resolution h: gap > 2h.
SampledSeparation separated_check(const FiniteSpace& X, const Mask& A, const Mask& B);
SampledSeparation separated_check(const GridRegion& G, const Mask& A, const Mask& B);

/// Throws std::invalid_argument on clopen or non-separated parts.
LineUnion union_descriptors(const IntervalSet& A, const IntervalSet& B,
                            const IntervalSet& Y = IntervalSet::real_line());
/// Two parts dispatch as above; three or more use the M-collection formula.
/// When Y is a single interval every tilde set must come out empty.
LineUnion union_descriptors_n(const std::vector<IntervalSet>& parts,
                              const IntervalSet& Y = IntervalSet::real_line());

/// A subset of a finite space with the subspace its topology is taken in
/// (an empty view means the whole space).
struct SampledPart {
    Mask subset;
    Mask view;
};

/// Tilde sets use the center band h as tolerance: a ∈ Ã iff d(a, ∂B) < rad(A) − h,
/// and radii within h count as equal.
SampledUnion union_descriptors(const FiniteSpace& X, const std::vector<SampledPart>& parts);

/// Grid parts; tolerance is the grid center band 2h. Grids are path-metric,
/// so nonempty tilde sets throw std::logic_error.
SampledUnion union_descriptors(const GridRegion& G, const std::vector<Mask>& parts);

}  // namespace metric_center
