#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "metric_center/ext_real.hpp"
#include "metric_center/interval_set.hpp"

namespace metric_center {

/// Membership flag per point or cell.
using Mask = std::vector<bool>;

inline bool set_empty(const IntervalSet& s) { return s.empty(); }
inline bool set_subset(const IntervalSet& a, const IntervalSet& b) { return a.is_subset_of(b); }

inline bool set_empty(const Mask& m) { return std::none_of(m.begin(), m.end(), [](bool b) { return b; }); }
inline bool set_subset(const Mask& a, const Mask& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] && !b[i]) return false;
    }
    return true;
}
inline std::size_t mask_count(const Mask& m) { return static_cast<std::size_t>(std::count(m.begin(), m.end(), true)); }

/// Center/radius family of a subset A of an ambient space.
template <typename Set, ExtScalar Scalar>
struct DescriptorReport {
    using Ext = ExtReal<Scalar>;

    Set subset;
    Set boundary;
    bool interior_nonempty = false;
    bool clopen = false;
    Set center;
    Ext radius;
    Ext semi_radius;
    Set quasi_center;
    Ext quasi_radius;
    Ext semi_quasi_radius;
    Ext diameter;
    std::vector<std::string> notes;
};

/// Names every broken invariant of the report; empty when consistent.
template <typename Set, ExtScalar Scalar>
std::vector<std::string> report_consistency_check(const DescriptorReport<Set, Scalar>& r) {
    std::vector<std::string> out;
    if (!r.clopen) {
        bool center_nonempty = !set_empty(r.center);
        if (center_nonempty != r.radius.is_finite()) out.emplace_back("nonclopen: center nonempty iff radius finite");
    }
    if (r.radius < r.semi_radius) out.emplace_back("semi_radius <= radius");
    if (r.quasi_radius < r.semi_quasi_radius) out.emplace_back("semi_quasi_radius <= quasi_radius");
    if (r.radius < r.semi_quasi_radius) out.emplace_back("semi_quasi_radius <= radius");
    if (!set_subset(r.center, r.subset)) out.emplace_back("center ⊆ subset");
    if (!set_subset(r.quasi_center, r.subset)) out.emplace_back("quasi_center ⊆ subset");
    return out;
}

}  // namespace metric_center
