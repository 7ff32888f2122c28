#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "metric_center/exact_line.hpp"
#include "metric_center/finite_space.hpp"

namespace metric_center {

/// Which branch of the product classification produced a result.
enum class ProductCase {
    empty_factor,              // some factor is empty, so is the product
    both_clopen,               // every factor clopen: center is the whole product
    clopen_with_empty_center,  // all radii infinite, some clopen, some with empty center
    both_empty_center,         // all radii infinite, none clopen
    hat_product,               // center = Cent(first) × hats, first factor has the least radius
    hat_product_swapped,       // least radius sits in a later factor
    hat_empty,                 // least radius finite but some hat set is empty
};

std::string case_tag(ProductCase c);

/// {b ∈ B : d(b, boundary) >= t} over per-point boundary distances.
Mask hat_set_mask(const std::vector<double>& d_boundary, const Mask& B, const ExtReal<double>& t);

/// Exact product of subsets of line ambients under the max metric.
struct LineProduct {
    std::vector<IntervalSet> factors;  // center = product of these; empty when center is
    bool center_empty = true;
    ExactExt radius = ExactExt::infinity();
    ExactExt threshold = ExactExt::infinity();  // least factor radius
    ProductCase tag = ProductCase::empty_factor;
    std::vector<std::string> notes;

    std::string describe() const;
};

/// Two factors (A ⊆ X, B ⊆ Y).
LineProduct product_center(const IntervalSet& A, const IntervalSet& X, const IntervalSet& B, const IntervalSet& Y);
/// Any number >= 2 of (subset, ambient) factors.
LineProduct product_center_n(const std::vector<std::pair<IntervalSet, IntervalSet>>& factors);

/// One factor of a floating-point product: a line subset, a closed Euclidean
/// ball, or a subset of a finite space.
class Factor {
public:
    static Factor line(IntervalSet A, IntervalSet Y = IntervalSet::real_line());
    static Factor ball(Eigen::VectorXd center, double radius);
    static Factor finite(FiniteSpace X, Mask A);

    const std::string& label() const { return label_; }
    bool empty() const { return empty_; }
    bool clopen() const { return clopen_; }
    const ExtReal<double>& radius() const { return radius_; }
    const ExtReal<double>& semi_radius() const { return semi_radius_; }

    bool hat_empty(const ExtReal<double>& t) const;
    std::string hat_description(const ExtReal<double>& t) const;

    struct Samples {
        FiniteSpace space;
        Mask member;
        std::vector<double> hat_distance;  // distance from each sample to the hat set; +inf if it is empty
    };
    /// Samples of the ambient on the lattice hℤ (2h beyond the subset) or
    /// the finite space itself. Throws on unbounded subsets.
    Samples sample(double h, const ExtReal<double>& t) const;

private:
    struct LineData {
        IntervalSet A, Y;
    };
    struct BallData {
        Eigen::VectorXd c;
        double R;
    };
    struct FiniteData {
        FiniteSpace X;
        Mask A;
        std::vector<double> d_boundary;
    };
    std::variant<LineData, BallData, FiniteData> data_;
    std::string label_;
    bool empty_ = false;
    bool clopen_ = false;
    ExtReal<double> radius_, semi_radius_;

    explicit Factor(std::variant<LineData, BallData, FiniteData> d) : data_(std::move(d)) {}
    IntervalSet line_hat(const ExtReal<double>& t) const;
};

struct MixedProduct {
    ExtReal<double> threshold = ExtReal<double>::infinity();
    std::vector<std::string> hats;  // one description per factor
    bool center_empty = true;
    ExtReal<double> radius = ExtReal<double>::infinity();
    ProductCase tag = ProductCase::empty_factor;
};

MixedProduct product_center_mixed(const std::vector<Factor>& factors);

struct OracleComparison {
    FiniteReport report;
    std::size_t cells = 0;
    double radius_deviation = 0;  // |oracle radius − closed-form radius|
    double hausdorff = 0;         // upper bound on the max-metric Hausdorff distance between centers
    bool compared = false;        // false when the closed form has an empty center
};

/// Cell cap: explicit argument, else env METRIC_CENTER_CELL_CAP, else 10⁷.
std::size_t product_cell_cap(std::optional<std::size_t> cap = std::nullopt);

/// Samples every factor at step h, forms the max-metric product, runs
/// descriptors_bf and compares against the closed form. Throws
/// std::length_error when the product exceeds the cap.
OracleComparison product_oracle(const std::vector<Factor>& factors, double h,
                                std::optional<std::size_t> cap = std::nullopt);

}  // namespace metric_center
