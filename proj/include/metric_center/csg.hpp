#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Dense>

namespace metric_center {

/// Axis box; `unbounded` marks shapes with no finite bounding box.
struct Bounds {
    Eigen::VectorXd lo, hi;
    bool empty = true;
    bool unbounded = false;
};

/// Constructive solid geometry over primitives in ℝ^dim, dim ∈ {1, 2, 3}.
///
/// Full-dimensional primitives (ball, box, half-space, predicate) are
/// evaluated at the cell center. Thin primitives (point, segment, sphere)
/// match cells whose box meets them: a point claims exactly the one cell whose
/// half-open box [c − h/2, c + h/2) contains it, so punctures are honoured.
class Shape {
public:
    static Shape empty(int dim);
    static Shape ball(Eigen::VectorXd center, double r, bool closed = true);
    static Shape box(Eigen::VectorXd lo, Eigen::VectorXd hi, bool closed = true);
    /// {x : normal · x <= offset}, or < when open.
    static Shape halfspace(Eigen::VectorXd normal, double offset, bool closed = true);
    /// Round sphere {‖x − c‖ = r}; a circle in 2D, a point pair in 1D.
    static Shape sphere(Eigen::VectorXd center, double r);
    static Shape point(Eigen::VectorXd p);
    static Shape segment(Eigen::VectorXd a, Eigen::VectorXd b);
    /// Arbitrary full-dimensional membership test inside the given bounds.
    static Shape predicate(std::function<bool(const Eigen::VectorXd&)> f, Eigen::VectorXd lo, Eigen::VectorXd hi,
                           std::string label = "predicate");

    friend Shape operator|(const Shape& a, const Shape& b);
    friend Shape operator&(const Shape& a, const Shape& b);
    friend Shape operator-(const Shape& a, const Shape& b);

    int dim() const;
    /// Occupancy of the cell centered at c with spacing h.
    bool occupies(const Eigen::VectorXd& c, double h) const;
    Bounds bounds() const;
    std::string str() const;

    struct Node;

private:
    explicit Shape(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

}  // namespace metric_center
