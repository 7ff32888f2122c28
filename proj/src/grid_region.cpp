#include "metric_center/grid_region.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace metric_center {

namespace {

using Index = Eigen::Index;
using FloatExt = ExtReal<double>;
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

std::int64_t lattice_floor(double x, double h) {
    double q = x / h;
    double r = std::round(q);
    if (std::abs(q - r) < 1e-9) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::floor(q));
}

std::int64_t lattice_ceil(double x, double h) {
    double q = x / h;
    double r = std::round(q);
    if (std::abs(q - r) < 1e-9) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::ceil(q));
}

// Exact 1D squared distance transform along one line (Felzenszwalb–Huttenlocher).
// Parabola intersections are kept as fractions so no rounding enters.
void dt_line(std::vector<std::int64_t>& f, std::vector<std::int64_t>& out, std::vector<int>& v,
             std::vector<std::pair<std::int64_t, std::int64_t>>& z) {
    const int n = static_cast<int>(f.size());
    v.clear();
    z.clear();
    auto inter = [&](int p, int q) {
        // abscissa where parabolas rooted at p < q meet, as num/den with den > 0
        std::int64_t num = (f[q] + std::int64_t(q) * q) - (f[p] + std::int64_t(p) * p);
        std::int64_t den = 2 * std::int64_t(q - p);
        return std::make_pair(num, den);
    };
    auto less_eq = [](std::pair<std::int64_t, std::int64_t> a, std::pair<std::int64_t, std::int64_t> b) {
        return static_cast<__int128>(a.first) * b.second <= static_cast<__int128>(b.first) * a.second;
    };
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        while (!v.empty()) {
            auto s = inter(v.back(), q);
            if (v.size() > 1 && less_eq(s, z.back())) {
                v.pop_back();
                z.pop_back();
                continue;
            }
            z.push_back(s);
            break;
        }
        v.push_back(q);
    }
    // z[k] is the left edge of v[k + 1]'s region
    if (v.empty()) {
        std::fill(out.begin(), out.end(), kInf);
        return;
    }
    std::size_t k = 0;
    for (int q = 0; q < n; ++q) {
        while (k + 1 < v.size() && !less_eq({q, 1}, z[k])) ++k;
        std::int64_t d = q - v[k];
        out[q] = d * d + f[v[k]];
    }
}

std::int64_t cross(const std::array<std::int64_t, 2>& o, const std::array<std::int64_t, 2>& a,
                   const std::array<std::int64_t, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

std::int64_t sq(const std::array<std::int64_t, 2>& a, const std::array<std::int64_t, 2>& b) {
    return (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]);
}

}  // namespace

GridRegion GridRegion::rasterize(const Shape& shape, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, double h) {
    if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("grid spacing h must be positive");
    const int d = shape.dim();
    if (lo.size() != d || hi.size() != d) throw std::invalid_argument("bbox dimension differs from shape dimension");
    if (!lo.allFinite() || !hi.allFinite() || (lo.array() >= hi.array()).any())
        throw std::invalid_argument("bbox needs finite lo < hi");
    Bounds b = shape.bounds();
    if (!b.empty) {
        if (b.unbounded) throw std::invalid_argument("bbox too tight: shape is unbounded");
        const double slack = 1e-9 * h;
        for (int k = 0; k < d; ++k) {
            if (lo[k] > b.lo[k] - 2 * h + slack || hi[k] < b.hi[k] + 2 * h - slack) {
                std::ostringstream os;
                os << "bbox too tight: axis " << k << " needs a margin of 2h = " << 2 * h << " around ["
                   << b.lo[k] << ", " << b.hi[k] << "]";
                throw std::invalid_argument(os.str());
            }
        }
    }
    std::vector<int> extents(d);
    std::vector<std::int64_t> origin(d);
    double cells = 1;
    for (int k = 0; k < d; ++k) {
        origin[k] = lattice_ceil(lo[k], h);
        std::int64_t last = lattice_floor(hi[k], h);
        extents[k] = static_cast<int>(last - origin[k] + 1);
        cells *= extents[k];
    }
    if (cells > 2e8) throw std::invalid_argument("grid too large: more than 2e8 cells");

    GridRegion g = from_occupancy(extents, origin, h, Mask(static_cast<std::size_t>(cells), false));
    Eigen::VectorXd c(d);
    for (Index i = 0; i < g.size(); ++i) {
        c = g.center(i);
        g.occ_[i] = shape.occupies(c, h);
    }
    g.provenance_ = shape.str();
    return g;
}

GridRegion GridRegion::from_occupancy(std::vector<int> extents, std::vector<std::int64_t> origin, double h,
                                      Mask occupancy) {
    if (!(h > 0)) throw std::invalid_argument("grid spacing h must be positive");
    if (extents.empty() || extents.size() > 3 || extents.size() != origin.size())
        throw std::invalid_argument("grid dimension must be 1, 2 or 3");
    GridRegion g;
    g.h_ = h;
    Index total = 1;
    for (int e : extents) {
        if (e <= 0) throw std::invalid_argument("grid extents must be positive");
        g.stride_.push_back(total);
        total *= e;
    }
    if (static_cast<Index>(occupancy.size()) != total) throw std::invalid_argument("occupancy size differs from extents");
    g.extents_ = std::move(extents);
    g.origin_ = std::move(origin);
    g.occ_ = std::move(occupancy);
    return g;
}

std::vector<std::int64_t> GridRegion::lattice(Index cell) const {
    std::vector<std::int64_t> k(extents_.size());
    for (std::size_t a = 0; a < extents_.size(); ++a) {
        k[a] = origin_[a] + (cell / stride_[a]) % extents_[a];
    }
    return k;
}

Eigen::VectorXd GridRegion::center(Index cell) const {
    Eigen::VectorXd c(dim());
    for (int a = 0; a < dim(); ++a) c[a] = static_cast<double>(origin_[a] + (cell / stride_[a]) % extents_[a]) * h_;
    return c;
}

Index GridRegion::neighbor(Index cell, int axis, int dir) const {
    Index i = (cell / stride_[axis]) % extents_[axis] + dir;
    if (i < 0 || i >= extents_[axis]) return -1;
    return cell + dir * stride_[axis];
}

Index GridRegion::locate(const Eigen::VectorXd& x) const {
    if (x.size() != dim()) return -1;
    Index cell = 0;
    for (int a = 0; a < dim(); ++a) {
        std::int64_t k = static_cast<std::int64_t>(std::floor(x[a] / h_ + 0.5)) - origin_[a];
        if (k < 0 || k >= extents_[a]) return -1;
        cell += k * stride_[a];
    }
    return cell;
}

Mask boundary_cells(const GridRegion& G) {
    Mask out(G.size(), false);
    const Mask& occ = G.occupancy();
    for (Index i = 0; i < G.size(); ++i) {
        if (!occ[i]) continue;
        for (int a = 0; a < G.dim() && !out[i]; ++a) {
            for (int dir : {-1, 1}) {
                Index j = G.neighbor(i, a, dir);
                if (j < 0 || !occ[j]) {
                    out[i] = true;
                    break;
                }
            }
        }
    }
    return out;
}

DistanceField distance_to_set(const GridRegion& G, const Mask& S) {
    if (static_cast<Index>(S.size()) != G.size()) throw std::invalid_argument("mask size differs from grid");
    DistanceField df;
    const Index n = G.size();
    std::vector<std::int64_t> cur(n);
    for (Index i = 0; i < n; ++i) cur[i] = S[i] ? 0 : kInf;
    df.set_empty = set_empty(S);

    if (!df.set_empty) {
        std::vector<std::int64_t> f, out;
        std::vector<int> v;
        std::vector<std::pair<std::int64_t, std::int64_t>> z;
        const auto& ext = G.extents();
        for (int a = 0; a < G.dim(); ++a) {
            Index stride = 1;
            for (int b = 0; b < a; ++b) stride *= ext[b];
            const int len = ext[a];
            f.resize(len);
            out.resize(len);
            // every line along axis a starts at a cell whose axis-a index is 0
            for (Index start = 0; start < n; ++start) {
                if ((start / stride) % len != 0) continue;
                for (int t = 0; t < len; ++t) f[t] = cur[start + t * stride];
                dt_line(f, out, v, z);
                for (int t = 0; t < len; ++t) cur[start + t * stride] = out[t];
            }
        }
    }
    df.squared.resize(n);
    df.distance.resize(n);
    for (Index i = 0; i < n; ++i) {
        if (cur[i] == kInf) {
            df.squared[i] = -1;
            df.distance[i] = std::numeric_limits<double>::infinity();
        } else {
            df.squared[i] = cur[i];
            df.distance[i] = G.h() * std::sqrt(static_cast<double>(cur[i]));
        }
    }
    return df;
}

double diameter_grid(const GridRegion& G, const Mask& S) {
    // extreme points of S lie on its boundary; restrict candidates to cells of S
    // that have a neighbour outside S
    std::vector<Index> cand;
    for (Index i = 0; i < G.size(); ++i) {
        if (!S[i]) continue;
        bool edge = false;
        for (int a = 0; a < G.dim() && !edge; ++a)
            for (int dir : {-1, 1}) {
                Index j = G.neighbor(i, a, dir);
                if (j < 0 || !S[j]) edge = true;
            }
        if (edge) cand.push_back(i);
    }
    if (cand.size() < 2) return 0;

    if (G.dim() == 2) {
        std::vector<std::array<std::int64_t, 2>> p;
        for (Index i : cand) {
            auto k = G.lattice(i);
            p.push_back({k[0], k[1]});
        }
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
        // Andrew's monotone chain, collinear points dropped
        std::vector<std::array<std::int64_t, 2>> hull(2 * p.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            while (k >= 2 && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
            hull[k++] = p[i];
        }
        for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
            while (k >= t && cross(hull[k - 2], hull[k - 1], p[i - 1]) <= 0) --k;
            hull[k++] = p[i - 1];
        }
        hull.resize(k - 1);
        std::int64_t best = 0;
        const std::size_t m = hull.size();
        if (m <= 2) {
            best = sq(hull.front(), hull.back());
        } else {
            // rotating calipers over antipodal pairs
            std::size_t j = 1;
            for (std::size_t i = 0; i < m; ++i) {
                const auto& a = hull[i];
                const auto& b = hull[(i + 1) % m];
                while (std::abs(cross(a, b, hull[(j + 1) % m])) > std::abs(cross(a, b, hull[j]))) j = (j + 1) % m;
                best = std::max({best, sq(a, hull[j]), sq(b, hull[j])});
            }
        }
        return G.h() * std::sqrt(static_cast<double>(best));
    }

    std::int64_t best = 0;
    std::vector<std::vector<std::int64_t>> lat;
    lat.reserve(cand.size());
    for (Index i : cand) lat.push_back(G.lattice(i));
    for (std::size_t i = 0; i < lat.size(); ++i)
        for (std::size_t j = i + 1; j < lat.size(); ++j) {
            std::int64_t s = 0;
            for (std::size_t a = 0; a < lat[i].size(); ++a) s += (lat[i][a] - lat[j][a]) * (lat[i][a] - lat[j][a]);
            best = std::max(best, s);
        }
    return G.h() * std::sqrt(static_cast<double>(best));
}

GridReport descriptors_grid(const GridRegion& G, std::optional<double> tau) {
    const double band = tau.value_or(2 * G.h());
    const double slack = band * 1e-9;  // inclusive band despite rounding in h·sqrt(k)
    if (band < 0) throw std::invalid_argument("center band must be nonnegative");
    GridReport r;
    const Mask& A = G.occupancy();
    const Index n = G.size();
    r.subset = A;
    r.boundary = boundary_cells(G);
    r.center.assign(n, false);
    r.quasi_center.assign(n, false);
    r.notes.emplace_back("grid: every supremum is attained over cells, so semi-radii equal radii");

    Mask comp(n);
    for (Index i = 0; i < n; ++i) comp[i] = !A[i];
    auto db = distance_to_set(G, r.boundary);
    auto dc = distance_to_set(G, comp);
    r.d_boundary = db.distance;
    r.d_complement = dc.distance;

    if (set_empty(A)) {
        r.radius = FloatExt::infinity();
        r.semi_radius = FloatExt(0.0);
        r.quasi_radius = FloatExt::infinity();
        r.semi_quasi_radius = FloatExt(0.0);
        r.diameter = FloatExt(0.0);
        return r;
    }
    for (Index i = 0; i < n; ++i) {
        if (A[i] && !r.boundary[i]) r.interior_nonempty = true;
    }
    r.thin = r.boundary == A;
    if (r.thin) r.notes.emplace_back("thin: no interior cells, descriptors only hold to O(h)");
    r.diameter = FloatExt(diameter_grid(G, A));

    if (set_empty(r.boundary)) {
        // grid-clopen: only reachable when the region fills the whole grid
        r.clopen = true;
        r.center = A;
        r.radius = r.semi_radius = FloatExt::infinity();
        if (set_empty(comp)) {
            r.quasi_center = A;
            r.quasi_radius = r.semi_quasi_radius = FloatExt::infinity();
        }
        return r;
    }

    double mx = 0, qmx = 0;
    std::vector<double> q(n, 0.0);
    for (Index i = 0; i < n; ++i) {
        if (!A[i]) continue;
        mx = std::max(mx, db.distance[i]);
        q[i] = std::min(db.distance[i], dc.distance[i]);
        qmx = std::max(qmx, q[i]);
    }
    for (Index i = 0; i < n; ++i) {
        if (!A[i]) continue;
        r.center[i] = db.distance[i] >= mx - band - slack;
        r.quasi_center[i] = q[i] >= qmx - band - slack;
    }
    r.radius = r.semi_radius = FloatExt(mx);
    r.quasi_radius = r.semi_quasi_radius = FloatExt(qmx);
    return r;
}

InscribedBalls largest_inscribed_balls(const GridRegion& G) {
    InscribedBalls out;
    const Index n = G.size();
    out.centers.assign(n, false);
    const Mask& A = G.occupancy();
    Mask comp(n);
    for (Index i = 0; i < n; ++i) comp[i] = !A[i];
    if (set_empty(A)) {
        out.verdict = "empty region: no ball fits";
        return out;
    }
    GridReport rep = descriptors_grid(G);
    if (rep.clopen || set_empty(comp)) {
        out.verdict = "grid-clopen region: there is no open ball of largest radius";
        return out;
    }
    const double h = G.h();
    const double r = rep.quasi_radius.value();
    double dmax = 0;
    for (Index i = 0; i < n; ++i)
        if (A[i]) dmax = std::max(dmax, rep.d_complement[i]);
    for (Index i = 0; i < n; ++i) out.centers[i] = A[i] && rep.d_complement[i] >= dmax - h / 2;

    // (a) nothing unoccupied within r − h of a center
    auto dcen = distance_to_set(G, out.centers);
    out.certificate_inside = true;
    for (Index i = 0; i < n; ++i)
        if (!A[i] && dcen.distance[i] <= r - h) out.certificate_inside = false;
    // (b) no cell farther than r + h from the complement
    out.certificate_maximal = dmax <= r + h * (1 + 1e-12);
    out.exists = true;
    out.radius = FloatExt(r);
    out.verdict = out.certificate_inside && out.certificate_maximal ? "certified" : "certificate failed";
    return out;
}

void write_grid_csv(std::ostream& os, const GridRegion& G, const GridReport& r) {
    static const char* axes[] = {"x", "y", "z"};
    os << "cell";
    for (int a = 0; a < G.dim(); ++a) os << ',' << axes[a];
    os << ",d_boundary,d_complement,in_center,in_qcenter\n";
    auto num = [&](double v) {
        if (std::isinf(v)) return std::string("inf");
        std::ostringstream s;
        s.precision(17);
        s << v;
        return s.str();
    };
    for (Index i = 0; i < G.size(); ++i) {
        os << i;
        Eigen::VectorXd c = G.center(i);
        for (int a = 0; a < G.dim(); ++a) os << ',' << num(c[a]);
        os << ',' << num(r.d_boundary[i]) << ',' << num(r.d_complement[i]) << ',' << int(r.center[i]) << ','
           << int(r.quasi_center[i]) << '\n';
    }
    os << "# h," << num(G.h()) << '\n';
    os << "# occupied," << mask_count(r.subset) << '\n';
    os << "# radius," << r.radius.str() << '\n';
    os << "# quasi_radius," << r.quasi_radius.str() << '\n';
    os << "# diameter," << r.diameter.str() << '\n';
    os << "# center_cells," << mask_count(r.center) << '\n';
    os << "# quasi_center_cells," << mask_count(r.quasi_center) << '\n';
    os << "# thin," << (r.thin ? "true" : "false") << '\n';
}

}  // namespace metric_center
