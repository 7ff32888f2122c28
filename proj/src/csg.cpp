#include "metric_center/csg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace metric_center {

enum class Kind { empty, ball, box, halfspace, sphere, point, segment, predicate, unite, intersect, subtract };

struct Shape::Node {
    Kind kind;
    int dim;
    Eigen::VectorXd a, b;  // center / lo / normal / endpoint
    double r = 0;
    bool closed = true;
    std::function<bool(const Eigen::VectorXd&)> pred;
    std::string label;
    std::shared_ptr<const Node> left, right;
};

namespace {

using NodePtr = std::shared_ptr<const Shape::Node>;

void check_dim(int d) {
    if (d < 1 || d > 3) throw std::invalid_argument("shape dimension must be 1, 2 or 3");
}

void check_finite(const Eigen::VectorXd& v) {
    if (!v.allFinite()) throw std::invalid_argument("shape coordinates must be finite");
}

// Closed cell box [c - h/2, c + h/2] meets segment [p, q]: slab clipping.
bool segment_hits_box(const Eigen::VectorXd& p, const Eigen::VectorXd& q, const Eigen::VectorXd& c, double h) {
    double t0 = 0, t1 = 1;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        double lo = c[k] - h / 2, hi = c[k] + h / 2, d = q[k] - p[k];
        if (d == 0) {
            if (p[k] < lo || p[k] > hi) return false;
            continue;
        }
        double ta = (lo - p[k]) / d, tb = (hi - p[k]) / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

bool eval(const Shape::Node& n, const Eigen::VectorXd& c, double h) {
    switch (n.kind) {
        case Kind::empty:
            return false;
        case Kind::ball: {
            double d2 = (c - n.a).squaredNorm();
            return n.closed ? d2 <= n.r * n.r : d2 < n.r * n.r;
        }
        case Kind::box:
            if (n.closed) return (c.array() >= n.a.array()).all() && (c.array() <= n.b.array()).all();
            return (c.array() > n.a.array()).all() && (c.array() < n.b.array()).all();
        case Kind::halfspace:
            return n.closed ? n.a.dot(c) <= n.r : n.a.dot(c) < n.r;
        case Kind::sphere: {
            // the cell box straddles the sphere
            Eigen::ArrayXd lo = c.array() - h / 2, hi = c.array() + h / 2;
            Eigen::ArrayXd nearest = n.a.array().max(lo).min(hi);
            Eigen::ArrayXd far = ((n.a.array() - lo).abs() > (n.a.array() - hi).abs()).select(lo, hi);
            double dmin = (nearest - n.a.array()).matrix().norm();
            double dmax = (far - n.a.array()).matrix().norm();
            return dmin <= n.r && n.r <= dmax;
        }
        case Kind::point:
            return ((n.a.array() >= c.array() - h / 2) && (n.a.array() < c.array() + h / 2)).all();
        case Kind::segment:
            return segment_hits_box(n.a, n.b, c, h);
        case Kind::predicate:
            return n.pred(c);
        case Kind::unite:
            return eval(*n.left, c, h) || eval(*n.right, c, h);
        case Kind::intersect:
            return eval(*n.left, c, h) && eval(*n.right, c, h);
        case Kind::subtract:
            return eval(*n.left, c, h) && !eval(*n.right, c, h);
    }
    return false;
}

Bounds box_bounds(Eigen::VectorXd lo, Eigen::VectorXd hi) {
    Bounds b;
    b.lo = std::move(lo);
    b.hi = std::move(hi);
    b.empty = false;
    return b;
}

Bounds node_bounds(const Shape::Node& n) {
    switch (n.kind) {
        case Kind::empty:
            return Bounds{};
        case Kind::ball:
        case Kind::sphere:
            return box_bounds(n.a.array() - n.r, n.a.array() + n.r);
        case Kind::box:
            return box_bounds(n.a, n.b);
        case Kind::halfspace: {
            Bounds b;
            b.empty = false;
            b.unbounded = true;
            return b;
        }
        case Kind::point:
            return box_bounds(n.a, n.a);
        case Kind::segment:
            return box_bounds(n.a.cwiseMin(n.b), n.a.cwiseMax(n.b));
        case Kind::predicate:
            return box_bounds(n.a, n.b);
        case Kind::unite: {
            Bounds l = node_bounds(*n.left), r = node_bounds(*n.right);
            if (l.empty) return r;
            if (r.empty) return l;
            if (l.unbounded || r.unbounded) {
                l.unbounded = true;
                return l;
            }
            return box_bounds(l.lo.cwiseMin(r.lo), l.hi.cwiseMax(r.hi));
        }
        case Kind::intersect: {
            Bounds l = node_bounds(*n.left), r = node_bounds(*n.right);
            if (l.empty || r.empty) return Bounds{};
            if (l.unbounded) return r;
            if (r.unbounded) return l;
            Eigen::VectorXd lo = l.lo.cwiseMax(r.lo), hi = l.hi.cwiseMin(r.hi);
            if ((lo.array() > hi.array()).any()) return Bounds{};
            return box_bounds(lo, hi);
        }
        case Kind::subtract:
            return node_bounds(*n.left);
    }
    return Bounds{};
}

void describe(const Shape::Node& n, std::ostream& os) {
    auto vec = [&](const Eigen::VectorXd& v) {
        os << '(';
        for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << ')';
    };
    switch (n.kind) {
        case Kind::empty: os << "empty"; return;
        case Kind::ball: os << (n.closed ? "ball" : "open_ball"); vec(n.a); os << " r=" << n.r; return;
        case Kind::box: os << (n.closed ? "box" : "open_box"); vec(n.a); vec(n.b); return;
        case Kind::halfspace: os << "halfspace"; vec(n.a); os << "<=" << n.r; return;
        case Kind::sphere: os << "sphere"; vec(n.a); os << " r=" << n.r; return;
        case Kind::point: os << "point"; vec(n.a); return;
        case Kind::segment: os << "segment"; vec(n.a); vec(n.b); return;
        case Kind::predicate: os << n.label; return;
        case Kind::unite: os << '('; describe(*n.left, os); os << " ∪ "; describe(*n.right, os); os << ')'; return;
        case Kind::intersect: os << '('; describe(*n.left, os); os << " ∩ "; describe(*n.right, os); os << ')'; return;
        case Kind::subtract: os << '('; describe(*n.left, os); os << " \\ "; describe(*n.right, os); os << ')'; return;
    }
}

NodePtr leaf(Kind k, Eigen::VectorXd a, Eigen::VectorXd b = {}, double r = 0, bool closed = true) {
    check_dim(static_cast<int>(a.size()));
    check_finite(a);
    if (b.size() != 0) {
        if (b.size() != a.size()) throw std::invalid_argument("shape coordinates of mixed dimension");
        check_finite(b);
    }
    if (!std::isfinite(r)) throw std::invalid_argument("shape parameters must be finite");
    auto n = std::make_shared<Shape::Node>();
    n->kind = k;
    n->dim = static_cast<int>(a.size());
    n->a = std::move(a);
    n->b = std::move(b);
    n->r = r;
    n->closed = closed;
    return n;
}

}  // namespace

Shape Shape::empty(int dim) {
    check_dim(dim);
    auto n = std::make_shared<Node>();
    n->kind = Kind::empty;
    n->dim = dim;
    return Shape(n);
}

Shape Shape::ball(Eigen::VectorXd center, double r, bool closed) {
    if (r < 0) throw std::invalid_argument("ball radius must be nonnegative");
    return Shape(leaf(Kind::ball, std::move(center), {}, r, closed));
}

Shape Shape::box(Eigen::VectorXd lo, Eigen::VectorXd hi, bool closed) {
    if (lo.size() != hi.size() || (lo.array() > hi.array()).any()) throw std::invalid_argument("box needs lo <= hi");
    return Shape(leaf(Kind::box, std::move(lo), std::move(hi), 0, closed));
}

Shape Shape::halfspace(Eigen::VectorXd normal, double offset, bool closed) {
    if (normal.size() > 0 && normal.isZero()) throw std::invalid_argument("half-space normal must be nonzero");
    return Shape(leaf(Kind::halfspace, std::move(normal), {}, offset, closed));
}

Shape Shape::sphere(Eigen::VectorXd center, double r) {
    if (r < 0) throw std::invalid_argument("sphere radius must be nonnegative");
    return Shape(leaf(Kind::sphere, std::move(center), {}, r));
}

Shape Shape::point(Eigen::VectorXd p) { return Shape(leaf(Kind::point, std::move(p))); }

Shape Shape::segment(Eigen::VectorXd a, Eigen::VectorXd b) { return Shape(leaf(Kind::segment, std::move(a), std::move(b))); }

Shape Shape::predicate(std::function<bool(const Eigen::VectorXd&)> f, Eigen::VectorXd lo, Eigen::VectorXd hi,
                       std::string label) {
    if (!f) throw std::invalid_argument("predicate shape needs a function");
    if (lo.size() != hi.size() || (lo.array() > hi.array()).any()) throw std::invalid_argument("predicate bounds need lo <= hi");
    auto n = leaf(Kind::predicate, std::move(lo), std::move(hi));
    auto m = std::const_pointer_cast<Node>(n);
    m->pred = std::move(f);
    m->label = std::move(label);
    return Shape(n);
}

namespace {
Shape::Node combine(Kind k, const Shape::Node* l, const Shape::Node* r) {
    if (l->dim != r->dim) throw std::invalid_argument("cannot combine shapes of different dimension");
    Shape::Node n;
    n.kind = k;
    n.dim = l->dim;
    return n;
}
}  // namespace

#define METRIC_CENTER_COMBINE(op, kind)                                     \
    Shape operator op(const Shape& a, const Shape& b) {                     \
        auto n = std::make_shared<Shape::Node>(combine(kind, a.node_.get(), b.node_.get())); \
        n->left = a.node_;                                                  \
        n->right = b.node_;                                                 \
        return Shape(n);                                                    \
    }
METRIC_CENTER_COMBINE(|, Kind::unite)
METRIC_CENTER_COMBINE(&, Kind::intersect)
METRIC_CENTER_COMBINE(-, Kind::subtract)
#undef METRIC_CENTER_COMBINE

int Shape::dim() const { return node_->dim; }

bool Shape::occupies(const Eigen::VectorXd& c, double h) const { return eval(*node_, c, h); }

Bounds Shape::bounds() const { return node_bounds(*node_); }

std::string Shape::str() const {
    std::ostringstream os;
    describe(*node_, os);
    return os.str();
}

}  // namespace metric_center
