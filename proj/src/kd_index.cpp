#include "metric_center/kd_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace metric_center {

namespace {
constexpr int kLeafSize = 8;
}

KdIndex::KdIndex(const Eigen::MatrixXd& coords, const std::vector<int>& blocks, const std::vector<Eigen::Index>& rows)
    : k_(static_cast<int>(coords.cols())), blocks_(blocks) {
    pts_.resize(rows.size() * k_);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (int c = 0; c < k_; ++c) pts_[r * k_ + c] = coords(rows[r], c);
    }
    order_.resize(rows.size());
    std::iota(order_.begin(), order_.end(), 0);
    if (!order_.empty()) build(0, static_cast<int>(order_.size()));
}

int KdIndex::build(int lo, int hi) {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].lo = lo;
    nodes_[id].hi = hi;
    if (hi - lo <= kLeafSize) return id;

    // split on the coordinate of widest spread
    int best_dim = 0;
    double best_spread = -1;
    for (int c = 0; c < k_; ++c) {
        double mn = std::numeric_limits<double>::infinity(), mx = -mn;
        for (int i = lo; i < hi; ++i) {
            double v = pts_[order_[i] * k_ + c];
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        if (mx - mn > best_spread) {
            best_spread = mx - mn;
            best_dim = c;
        }
    }
    if (best_spread <= 0) return id;  // all points coincide on every axis

    int mid = lo + (hi - lo) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](int a, int b) { return pts_[a * k_ + best_dim] < pts_[b * k_ + best_dim]; });
    double split = pts_[order_[mid] * k_ + best_dim];
    nodes_[id].dim = best_dim;
    nodes_[id].split = split;
    int left = build(lo, mid);
    int right = build(mid, hi);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

double KdIndex::point_dist(const double* q, int slot) const {
    const double* p = &pts_[slot * k_];
    double worst = 0;
    int c = 0;
    for (int b : blocks_) {
        double s = 0;
        for (int e = 0; e < b; ++e, ++c) {
            double d = q[c] - p[c];
            s += d * d;
        }
        worst = std::max(worst, s);
    }
    return std::sqrt(worst);
}

void KdIndex::search(int node, const double* q, double& best) const {
    const Node& n = nodes_[node];
    if (n.dim < 0) {
        for (int i = n.lo; i < n.hi; ++i) best = std::min(best, point_dist(q, order_[i]));
        return;
    }
    double delta = q[n.dim] - n.split;
    int near = delta < 0 ? n.left : n.right;
    int far = delta < 0 ? n.right : n.left;
    search(near, q, best);
    if (std::abs(delta) <= best) search(far, q, best);
}

double KdIndex::nearest(const double* q) const {
    double best = std::numeric_limits<double>::infinity();
    if (!order_.empty()) search(0, q, best);
    return best;
}

}  // namespace metric_center
