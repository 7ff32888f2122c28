#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metric_center/csg.hpp"
#include "metric_center/report.hpp"

namespace metric_center {

/// A rasterized subset of ℝ^dim on the lattice hℤ^dim.
///
/// Cell centers are k·h for integer k, so the origin is a cell center
/// whenever it lies in the box. Cells are stored with axis 0 fastest.
class GridRegion {
public:
    /// Samples `shape` at every lattice point of [lo, hi]. Throws
    /// std::invalid_argument if h <= 0, dimensions disagree, or the box does
    /// not clear the shape's bounds by 2h on every side.
    static GridRegion rasterize(const Shape& shape, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, double h);
    /// Direct construction; `origin` is the lattice index of cell 0.
    static GridRegion from_occupancy(std::vector<int> extents, std::vector<std::int64_t> origin, double h, Mask occupancy);

    int dim() const { return static_cast<int>(extents_.size()); }
    double h() const { return h_; }
    const std::vector<int>& extents() const { return extents_; }
    const std::vector<std::int64_t>& origin() const { return origin_; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(occ_.size()); }
    const Mask& occupancy() const { return occ_; }
    const std::string& provenance() const { return provenance_; }

    /// Lattice index (k with center k·h) of a cell.
    std::vector<std::int64_t> lattice(Eigen::Index cell) const;
    Eigen::VectorXd center(Eigen::Index cell) const;
    /// Flat index of the face neighbour along `axis` in direction ±1; -1 outside.
    Eigen::Index neighbor(Eigen::Index cell, int axis, int dir) const;
    /// Flat index of the cell containing the point, or -1.
    Eigen::Index locate(const Eigen::VectorXd& x) const;

private:
    std::vector<int> extents_;
    std::vector<std::int64_t> origin_;
    std::vector<Eigen::Index> stride_;
    double h_ = 1;
    Mask occ_;
    std::string provenance_;
};

/// Occupied cells with an unoccupied (or missing) face neighbour.
Mask boundary_cells(const GridRegion& G);

struct DistanceField {
    std::vector<std::int64_t> squared;  // grid units; -1 where the set is empty
    std::vector<double> distance;       // h·sqrt(squared), +inf where the set is empty
    bool set_empty = false;
};

/// Exact Euclidean distance from every cell center to the nearest S cell center.
DistanceField distance_to_set(const GridRegion& G, const Mask& S);

struct GridReport : DescriptorReport<Mask, double> {
    bool thin = false;                // every occupied cell is a boundary cell
    std::vector<double> d_boundary;   // per cell
    std::vector<double> d_complement; // per cell, raw unoccupied cells
};

/// Center band τ defaults to 2h. The quasi target is the complement plus the
/// boundary cells, the grid surrogate of the closure of A^c.
GridReport descriptors_grid(const GridRegion& G, std::optional<double> tau = std::nullopt);

/// Largest distance between occupied cell centers: rotating calipers on the
/// hull in 2D, exhaustive over boundary cells otherwise.
double diameter_grid(const GridRegion& G, const Mask& S);

struct InscribedBalls {
    bool exists = false;
    Mask centers;
    ExtReal<double> radius = ExtReal<double>::infinity();
    bool certificate_inside = false;  // every cell within r − h of a center is occupied
    bool certificate_maximal = false; // no cell sits farther than r + h from the complement
    std::string verdict;
};

/// Centers are the cells whose complement distance is within h/2 of the
/// quasi-radius; both certificate clauses are checked over all cells.
InscribedBalls largest_inscribed_balls(const GridRegion& G);

/// One CSV row per cell plus a trailing summary block of comment lines.
void write_grid_csv(std::ostream& os, const GridRegion& G, const GridReport& r);

}  // namespace metric_center
