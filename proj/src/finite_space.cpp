#include "metric_center/finite_space.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "metric_center/kd_index.hpp"

namespace metric_center {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack on h-threshold comparisons so lattice-exact distances
// computed through a square root still compare as equal to h.
constexpr double kRelSlack = 1e-9;

void check_h(double h) {
    if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("resolution h must be positive and finite");
}

std::vector<Eigen::Index> rows_of(const Mask& m) {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i]) out.push_back(static_cast<Eigen::Index>(i));
    }
    return out;
}

Mask complement_of(const Mask& m) {
    Mask out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = !m[i];
    return out;
}

void check_mask(const FiniteSpace& X, const Mask& m) {
    if (static_cast<Eigen::Index>(m.size()) != X.size()) {
        throw std::invalid_argument("subset mask length " + std::to_string(m.size()) + " does not match space size " +
                                    std::to_string(X.size()));
    }
}

}  // namespace

FiniteSpace FiniteSpace::from_trusted_matrix(Eigen::MatrixXd dist, double h) {
    check_h(h);
    if (dist.rows() != dist.cols()) throw std::invalid_argument("distance matrix must be square");
    FiniteSpace X;
    X.n_ = dist.rows();
    X.h_ = h;
    X.dist_ = std::move(dist);
    return X;
}

FiniteSpace FiniteSpace::from_matrix(Eigen::MatrixXd dist, double h) {
    MetricCheck mc = validate_metric(dist, 1);
    if (!mc.ok) {
        const auto& v = mc.violations.front();
        throw std::invalid_argument("triangle inequality fails for (" + std::to_string(v[0]) + "," +
                                    std::to_string(v[1]) + "," + std::to_string(v[2]) + ")");
    }
    for (Eigen::Index i = 0; i < dist.rows(); ++i) {
        for (Eigen::Index j = 0; j < dist.cols(); ++j) {
            if (i != j && !(dist(i, j) > 0)) {
                throw std::invalid_argument("distinct points " + std::to_string(i) + "," + std::to_string(j) +
                                            " at distance 0");
            }
        }
    }
    return from_trusted_matrix(std::move(dist), h);
}

FiniteSpace FiniteSpace::from_points(Eigen::MatrixXd coords, std::vector<int> blocks, double h) {
    check_h(h);
    int total = std::accumulate(blocks.begin(), blocks.end(), 0);
    if (blocks.empty() || total != coords.cols() ||
        std::any_of(blocks.begin(), blocks.end(), [](int b) { return b <= 0; })) {
        throw std::invalid_argument("coordinate blocks must be positive and sum to the coordinate count");
    }
    if (!coords.allFinite()) throw std::invalid_argument("point coordinates must be finite");
    FiniteSpace X;
    X.n_ = coords.rows();
    X.h_ = h;
    X.coords_ = std::move(coords);
    X.blocks_ = std::move(blocks);
    return X;
}

FiniteSpace FiniteSpace::from_points(Eigen::MatrixXd coords, PointMetric metric, double h) {
    auto k = static_cast<int>(coords.cols());
    std::vector<int> blocks = metric == PointMetric::euclidean ? std::vector<int>{k} : std::vector<int>(k, 1);
    return from_points(std::move(coords), std::move(blocks), h);
}

FiniteSpace FiniteSpace::with_h(double h) const {
    check_h(h);
    FiniteSpace X = *this;
    X.h_ = h;
    return X;
}

const Eigen::MatrixXd& FiniteSpace::matrix() const {
    if (has_coords()) throw std::logic_error("coordinate-backed space has no stored matrix");
    return dist_;
}

double FiniteSpace::dist_to(const double* q, Eigen::Index j) const {
    double worst = 0;
    int c = 0;
    for (int b : blocks_) {
        double s = 0;
        for (int e = 0; e < b; ++e, ++c) {
            double d = q[c] - coords_(j, c);
            s += d * d;
        }
        worst = std::max(worst, s);
    }
    return std::sqrt(worst);
}

double FiniteSpace::dist(Eigen::Index i, Eigen::Index j) const {
    if (!has_coords()) return dist_(i, j);
    Eigen::RowVectorXd q = coords_.row(i);
    return dist_to(q.data(), j);
}

Eigen::MatrixXd FiniteSpace::distance_matrix() const {
    if (!has_coords()) return dist_;
    Eigen::MatrixXd d(n_, n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
        Eigen::RowVectorXd q = coords_.row(i);
        for (Eigen::Index j = 0; j < n_; ++j) d(i, j) = dist_to(q.data(), j);
    }
    return d;
}

FiniteSpace product_space(const FiniteSpace& X, const FiniteSpace& Y, double h) {
    Eigen::Index nx = X.size(), ny = Y.size();
    if (X.has_coords() && Y.has_coords()) {
        Eigen::MatrixXd c(nx * ny, X.coords().cols() + Y.coords().cols());
        for (Eigen::Index i = 0; i < nx; ++i) {
            for (Eigen::Index j = 0; j < ny; ++j) {
                c.row(i * ny + j) << X.coords().row(i), Y.coords().row(j);
            }
        }
        std::vector<int> blocks = X.blocks();
        blocks.insert(blocks.end(), Y.blocks().begin(), Y.blocks().end());
        return FiniteSpace::from_points(std::move(c), std::move(blocks), h);
    }
    constexpr Eigen::Index kMatrixCap = 6000;
    if (nx * ny > kMatrixCap) throw std::invalid_argument("matrix-backed product exceeds " + std::to_string(kMatrixCap) + " points");
    Eigen::MatrixXd dx = X.distance_matrix(), dy = Y.distance_matrix();
    Eigen::MatrixXd d(nx * ny, nx * ny);
    for (Eigen::Index a = 0; a < nx * ny; ++a) {
        for (Eigen::Index b = 0; b < nx * ny; ++b) d(a, b) = std::max(dx(a / ny, b / ny), dy(a % ny, b % ny));
    }
    return FiniteSpace::from_trusted_matrix(std::move(d), h);
}

FiniteSpace subspace(const FiniteSpace& X, const std::vector<Eigen::Index>& keep) {
    for (Eigen::Index k : keep) {
        if (k < 0 || k >= X.size()) throw std::out_of_range("subspace index out of range");
    }
    auto n = static_cast<Eigen::Index>(keep.size());
    if (X.has_coords()) {
        Eigen::MatrixXd c(n, X.coords().cols());
        for (Eigen::Index i = 0; i < n; ++i) c.row(i) = X.coords().row(keep[static_cast<std::size_t>(i)]);
        return FiniteSpace::from_points(std::move(c), X.blocks(), X.h());
    }
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) d(i, j) = X.dist(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
    }
    return FiniteSpace::from_trusted_matrix(std::move(d), X.h());
}

MetricCheck validate_metric(const Eigen::MatrixXd& dist, std::size_t max_report) {
    Eigen::Index n = dist.rows();
    if (dist.cols() != n) throw std::invalid_argument("distance matrix must be square");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (dist(i, i) != 0) throw std::invalid_argument("nonzero diagonal entry at " + std::to_string(i));
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::isnan(dist(i, j)) || dist(i, j) < 0) {
                throw std::invalid_argument("negative or NaN entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
            if (dist(i, j) != dist(j, i)) {
                throw std::invalid_argument("asymmetric entries at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    MetricCheck out;
    double scale = n > 0 && dist.allFinite() ? dist.maxCoeff() : 1.0;
    double slack = 1e-12 * std::max(scale, 1.0);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            for (Eigen::Index c = 0; c < n; ++c) {
                if (dist(a, c) > dist(a, b) + dist(b, c) + slack) {
                    out.ok = false;
                    if (out.violations.size() < max_report) out.violations.push_back({a, b, c});
                }
            }
        }
    }
    return out;
}

FiniteSpace shortest_path_metric(Eigen::Index n, const std::vector<WeightedEdge>& edges, bool allow_disconnected,
                                 std::optional<double> h) {
    std::vector<std::vector<std::pair<Eigen::Index, double>>> adj(n);
    double min_w = kInf;
    for (const auto& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
        if (!(e.w > 0)) throw std::invalid_argument("edge weights must be positive");
        adj[e.u].push_back({e.v, e.w});
        adj[e.v].push_back({e.u, e.w});
        min_w = std::min(min_w, e.w);
    }
    Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, kInf);
    using Item = std::pair<double, Eigen::Index>;
    for (Eigen::Index s = 0; s < n; ++s) {
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        d(s, s) = 0;
        pq.push({0.0, s});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > d(s, u)) continue;
            for (auto [v, w] : adj[u]) {
                if (du + w < d(s, v)) {
                    d(s, v) = du + w;
                    pq.push({d(s, v), v});
                }
            }
        }
    }
    // Dijkstra sums in different orders; force exact symmetry
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = std::min(d(i, j), d(j, i));
    }
    if (!allow_disconnected && !d.allFinite()) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!std::isfinite(d(0, j))) {
                throw std::invalid_argument("graph is disconnected: vertex " + std::to_string(j) +
                                            " unreachable from vertex 0");
            }
        }
    }
    double hh = h ? *h : (std::isfinite(min_w) ? min_w : 1.0);
    return FiniteSpace::from_trusted_matrix(std::move(d), hh);
}

Eigen::MatrixXd read_csv_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                double v = std::stod(cell, &used);
                if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
                row.push_back(v);
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;
            }
            throw std::invalid_argument("non-numeric CSV row: " + line);
        }
        first = false;
        if (!rows.empty() && row.size() != rows.front().size()) throw std::invalid_argument("ragged CSV row: " + line);
        rows.push_back(std::move(row));
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::pair<Eigen::Index, std::vector<WeightedEdge>> read_edge_list(std::istream& in) {
    std::vector<WeightedEdge> edges;
    Eigen::Index n = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::stringstream ss(line);
        WeightedEdge e{};
        if (!(ss >> e.u)) continue;
        if (!(ss >> e.v >> e.w)) throw std::invalid_argument("edge list line " + std::to_string(lineno) + ": expected 'u v w'");
        n = std::max({n, e.u + 1, e.v + 1});
        edges.push_back(e);
    }
    return {n, edges};
}

std::vector<double> distance_to_subset(const FiniteSpace& X, const Mask& S, const Mask& queries) {
    check_mask(X, S);
    check_mask(X, queries);
    std::vector<double> out(X.size(), kInf);
    std::vector<Eigen::Index> targets = rows_of(S);
    if (targets.empty()) return out;
    if (X.has_coords()) {
        KdIndex index(X.coords(), X.blocks(), targets);
        Eigen::RowVectorXd q(X.coords().cols());
        for (Eigen::Index i = 0; i < X.size(); ++i) {
            if (!queries[i]) continue;
            if (S[i]) {
                out[i] = 0;
                continue;
            }
            q = X.coords().row(i);
            out[i] = index.nearest(q.data());
        }
        return out;
    }
    const Eigen::MatrixXd& d = X.matrix();
    for (Eigen::Index i = 0; i < X.size(); ++i) {
        if (!queries[i]) continue;
        double best = kInf;
        for (Eigen::Index t : targets) best = std::min(best, d(i, t));
        out[i] = best;
    }
    return out;
}

MaskTopology eps_topology(const FiniteSpace& X, const Mask& A) {
    check_mask(X, A);
    double thr = X.h() * (1 + kRelSlack);
    Mask notA = complement_of(A);
    std::vector<double> to_a = distance_to_subset(X, A, notA);
    std::vector<double> to_c = distance_to_subset(X, notA, A);
    MaskTopology t{Mask(A.size()), Mask(A.size()), Mask(A.size())};
    for (std::size_t i = 0; i < A.size(); ++i) {
        t.closure[i] = A[i] || to_a[i] <= thr;
        t.interior[i] = A[i] && to_c[i] > thr;
        t.boundary[i] = t.closure[i] && !t.interior[i];
    }
    return t;
}

double diameter_bf(const FiniteSpace& X, const Mask& A) {
    check_mask(X, A);
    std::vector<Eigen::Index> pts = rows_of(A);
    if (pts.size() < 2) return 0;
    if (!X.has_coords()) {
        double best = 0;
        for (std::size_t a = 0; a < pts.size(); ++a) {
            for (std::size_t b = a + 1; b < pts.size(); ++b) best = std::max(best, X.matrix()(pts[a], pts[b]));
        }
        return best;
    }
    // max over pairs of max over blocks = max over blocks of the projected diameter
    double best = 0;
    int col = 0;
    for (int b : X.blocks()) {
        if (b == 1) {
            double mn = kInf, mx = -kInf;
            for (auto p : pts) {
                mn = std::min(mn, X.coords()(p, col));
                mx = std::max(mx, X.coords()(p, col));
            }
            best = std::max(best, mx - mn);
        } else {
            // products repeat each factor point many times; dedupe the projection first
            std::vector<std::vector<double>> rows;
            rows.reserve(pts.size());
            for (auto p : pts) {
                rows.emplace_back(b);
                for (int k = 0; k < b; ++k) rows.back()[k] = X.coords()(p, col + k);
            }
            std::sort(rows.begin(), rows.end());
            rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
            double sq = 0;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                for (std::size_t j = i + 1; j < rows.size(); ++j) {
                    double s = 0;
                    for (int k = 0; k < b; ++k) s += (rows[i][k] - rows[j][k]) * (rows[i][k] - rows[j][k]);
                    sq = std::max(sq, s);
                }
            }
            best = std::max(best, std::sqrt(sq));
        }
        col += b;
    }
    return best;
}

FiniteReport descriptors_bf(const FiniteSpace& X, const Mask& A, std::optional<double> tau) {
    check_mask(X, A);
    double band = (tau ? *tau : X.h()) * (1 + kRelSlack);
    MaskTopology topo = eps_topology(X, A);
    FiniteReport r;
    std::size_t n = A.size();
    r.subset = A;
    r.boundary = topo.boundary;
    r.interior_nonempty = !set_empty(topo.interior);
    r.clopen = set_empty(topo.boundary);
    r.center = Mask(n);
    r.quasi_center = Mask(n);
    r.diameter = FloatExt(diameter_bf(X, A));
    r.notes.emplace_back("finite space: every supremum is attained, so semi-radius equals radius");

    if (set_empty(A)) {
        r.radius = FloatExt::infinity();
        r.quasi_radius = FloatExt::infinity();
        return r;
    }

    if (r.clopen) {
        r.center = A;
        r.radius = FloatExt::infinity();
        r.semi_radius = FloatExt::infinity();
    } else {
        std::vector<double> f = distance_to_subset(X, topo.boundary, A);
        double mx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (A[i]) mx = std::max(mx, f[i]);
        }
        for (std::size_t i = 0; i < n; ++i) r.center[i] = A[i] && f[i] >= mx - band;
        r.radius = FloatExt(mx);
        r.semi_radius = FloatExt(mx);
    }

    Mask target = complement_of(topo.interior);
    if (set_empty(target)) {
        r.quasi_center = A;
        r.quasi_radius = FloatExt::infinity();
        r.semi_quasi_radius = FloatExt::infinity();
    } else {
        std::vector<double> g = distance_to_subset(X, target, A);
        double mx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (A[i]) mx = std::max(mx, g[i]);
        }
        for (std::size_t i = 0; i < n; ++i) r.quasi_center[i] = A[i] && g[i] >= mx - band;
        r.quasi_radius = FloatExt(mx);
        r.semi_quasi_radius = FloatExt(mx);
    }
    return r;
}

TransportCheck isometry_transport_check(const FiniteSpace& X, const FiniteSpace& Y, const std::vector<Eigen::Index>& f,
                                        const Mask& A) {
    check_mask(X, A);
    Eigen::Index n = X.size();
    if (Y.size() != n || static_cast<Eigen::Index>(f.size()) != n) {
        throw std::invalid_argument("isometry must be a bijection between equal-size spaces");
    }
    std::vector<bool> hit(n, false);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (f[i] < 0 || f[i] >= n || hit[f[i]]) throw std::invalid_argument("map is not a bijection");
        hit[f[i]] = true;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double dx = X.dist(i, j), dy = Y.dist(f[i], f[j]);
            if (std::abs(dx - dy) > 1e-9 * std::max({1.0, dx, dy})) {
                throw NonIsometry("map changes d(" + std::to_string(i) + "," + std::to_string(j) + ")", i, j);
            }
        }
    }
    Mask fa(n);
    for (Eigen::Index i = 0; i < n; ++i) fa[f[i]] = A[i];
    FiniteReport rx = descriptors_bf(X, A);
    FiniteReport ry = descriptors_bf(Y.with_h(X.h()), fa);
    TransportCheck out;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (rx.center[i] != ry.center[f[i]]) {
            out.ok = false;
            out.violation = "center membership of point " + std::to_string(i) + " not transported";
            return out;
        }
    }
    bool same_radius = rx.radius.is_infinite() == ry.radius.is_infinite() &&
                       (rx.radius.is_infinite() || std::abs(rx.radius.value() - ry.radius.value()) <= 1e-9);
    if (!same_radius) {
        out.ok = false;
        out.violation = "radius " + rx.radius.str() + " maps to " + ry.radius.str();
    }
    return out;
}

}  // namespace metric_center
