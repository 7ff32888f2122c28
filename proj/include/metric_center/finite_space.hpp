#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "metric_center/report.hpp"

namespace metric_center {

using FiniteReport = DescriptorReport<Mask, double>;

enum class PointMetric { euclidean, max };

/// A finite metric space with a resolution scale h.
///
/// Either matrix-backed (explicit n×n distances) or coordinate-backed. A
/// coordinate-backed space measures distance as the maximum, over coordinate
/// blocks, of the Euclidean norm inside the block: one block is the
/// Euclidean metric, one block per coordinate is the max metric, and
/// concatenating blocks gives max-metric products.
class FiniteSpace {
public:
    /// Checks symmetry, zero diagonal, nonnegativity and the triangle
    /// inequality; throws std::invalid_argument on failure.
    static FiniteSpace from_matrix(Eigen::MatrixXd dist, double h);
    /// Same, without the O(n³) triangle check (caller guarantees a metric).
    static FiniteSpace from_trusted_matrix(Eigen::MatrixXd dist, double h);
    /// Rows of `coords` are points; `blocks` are consecutive coordinate group sizes.
    static FiniteSpace from_points(Eigen::MatrixXd coords, std::vector<int> blocks, double h);
    static FiniteSpace from_points(Eigen::MatrixXd coords, PointMetric metric, double h);

    Eigen::Index size() const { return n_; }
    double h() const { return h_; }
    FiniteSpace with_h(double h) const;

    bool has_coords() const { return !blocks_.empty(); }
    const Eigen::MatrixXd& coords() const { return coords_; }
    const std::vector<int>& blocks() const { return blocks_; }
    const Eigen::MatrixXd& matrix() const;

    double dist(Eigen::Index i, Eigen::Index j) const;
    /// Distance from an arbitrary coordinate row to point j (coordinate spaces only).
    double dist_to(const double* q, Eigen::Index j) const;

    /// Full distance matrix (builds it for coordinate spaces).
    Eigen::MatrixXd distance_matrix() const;

private:
    Eigen::Index n_ = 0;
    double h_ = 1.0;
    Eigen::MatrixXd dist_;    // matrix-backed
    Eigen::MatrixXd coords_;  // coordinate-backed, n × k
    std::vector<int> blocks_;
};

/// Max-metric product; point (i, j) gets index i * |Y| + j.
FiniteSpace product_space(const FiniteSpace& X, const FiniteSpace& Y, double h);

/// The points `keep` (in that order) with the inherited metric.
FiniteSpace subspace(const FiniteSpace& X, const std::vector<Eigen::Index>& keep);

struct MetricCheck {
    bool ok = true;
    std::vector<std::array<Eigen::Index, 3>> violations;  // (a, b, c) with d(a,c) > d(a,b) + d(b,c)
};

/// Exhaustive triangle-inequality check. Throws std::invalid_argument on a
/// non-square or asymmetric matrix, a negative entry, or a nonzero diagonal.
MetricCheck validate_metric(const Eigen::MatrixXd& dist, std::size_t max_report = 10);

struct WeightedEdge {
    Eigen::Index u, v;
    double w;
};

/// All-pairs shortest paths. h defaults to the smallest edge weight.
/// Disconnected input throws unless allow_disconnected is set, in which case
/// unreachable pairs get +inf.
FiniteSpace shortest_path_metric(Eigen::Index n, const std::vector<WeightedEdge>& edges,
                                 bool allow_disconnected = false, std::optional<double> h = {});

/// Row-major CSV; a non-numeric first row is treated as a header.
Eigen::MatrixXd read_csv_matrix(std::istream& in);
/// "u v w" per line, '#' comments. Returns the edges and 1 + largest vertex id.
std::pair<Eigen::Index, std::vector<WeightedEdge>> read_edge_list(std::istream& in);

/// Distance from every point to the subset S; entries outside `queries` are
/// left at +inf. Empty S gives +inf everywhere.
std::vector<double> distance_to_subset(const FiniteSpace& X, const Mask& S, const Mask& queries);

struct MaskTopology {
    Mask interior;
    Mask closure;
    Mask boundary;
};

/// closure_h(A) = {x : d(x,A) ≤ h}, interior_h(A) = {a ∈ A : d(a,A^c) > h},
/// boundary_h = closure_h ∖ interior_h.
MaskTopology eps_topology(const FiniteSpace& X, const Mask& A);

/// Definition-level descriptors over a finite space. Centers keep every point
/// within tau (default h) of the maximum. The quasi family measures distance
/// to X ∖ interior_h(A), the h-closure of the complement.
FiniteReport descriptors_bf(const FiniteSpace& X, const Mask& A, std::optional<double> tau = {});

/// Largest pairwise distance within A (0 for |A| ≤ 1).
double diameter_bf(const FiniteSpace& X, const Mask& A);

/// Raised when a claimed isometry moves some distance.
class NonIsometry : public std::invalid_argument {
public:
    NonIsometry(const std::string& what, Eigen::Index i, Eigen::Index j)
        : std::invalid_argument(what), witness(i, j) {}
    std::pair<Eigen::Index, Eigen::Index> witness;
};

struct TransportCheck {
    bool ok = true;
    std::string violation;
};

/// Checks f(Cent_X(A)) = Cent_Y(f(A)) and equal radii for a distance-preserving
/// bijection f. Throws NonIsometry (with a witness pair) if f is not one.
TransportCheck isometry_transport_check(const FiniteSpace& X, const FiniteSpace& Y,
                                        const std::vector<Eigen::Index>& f, const Mask& A);

}  // namespace metric_center
