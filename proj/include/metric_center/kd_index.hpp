#pragma once

#include <vector>

#include <Eigen/Dense>

namespace metric_center {

/// Exact nearest-neighbour index over points in a block-max metric.
///
/// Pruning uses |q_k - p_k| ≤ d(q, p), which holds for every coordinate k
/// because each block norm dominates its coordinates.
class KdIndex {
public:
    KdIndex(const Eigen::MatrixXd& coords, const std::vector<int>& blocks, const std::vector<Eigen::Index>& rows);

    bool empty() const { return order_.empty(); }
    /// Distance from q (one coordinate row) to the nearest indexed point; +inf if empty.
    double nearest(const double* q) const;

private:
    struct Node {
        int dim = -1;  // -1: leaf
        double split = 0;
        int lo = 0, hi = 0;  // range in order_
        int left = -1, right = -1;
    };

    int build(int lo, int hi);
    void search(int node, const double* q, double& best) const;
    double point_dist(const double* q, int slot) const;

    int k_ = 0;
    std::vector<int> blocks_;
    std::vector<double> pts_;  // row-major copy, one row per indexed point
    std::vector<int> order_;
    std::vector<Node> nodes_;
};

}  // namespace metric_center
