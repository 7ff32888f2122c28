#include "metric_center/product_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace metric_center {

namespace {

using FloatExt = ExtReal<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct FactorFacts {
    bool empty;
    bool clopen;
    bool hat_empty;
};

template <typename Ext>
ProductCase classify(const std::vector<FactorFacts>& f, const Ext& t, std::size_t argmin) {
    bool any_empty = false, all_clopen = true, any_clopen = false, any_hat_empty = false;
    for (const auto& x : f) {
        any_empty |= x.empty;
        all_clopen &= x.clopen;
        any_clopen |= x.clopen;
        any_hat_empty |= x.hat_empty;
    }
    if (any_empty) return ProductCase::empty_factor;
    if (t.is_infinite()) {
        if (all_clopen) return ProductCase::both_clopen;
        return any_clopen ? ProductCase::clopen_with_empty_center : ProductCase::both_empty_center;
    }
    if (any_hat_empty) return ProductCase::hat_empty;
    return argmin == 0 ? ProductCase::hat_product : ProductCase::hat_product_swapped;
}

ExactExt to_exact(const FloatExt& t) {
    if (t.is_infinite()) return ExactExt::infinity();
    return ExactExt(Rational::approximate(t.value()));
}

double ext_to_double(const ExactExt& e) { return e.is_infinite() ? kInf : e.value().to_double(); }

}  // namespace

std::string case_tag(ProductCase c) {
    switch (c) {
        case ProductCase::empty_factor: return "empty-factor";
        case ProductCase::both_clopen: return "both-clopen";
        case ProductCase::clopen_with_empty_center: return "clopen-with-empty-center";
        case ProductCase::both_empty_center: return "both-empty-center";
        case ProductCase::hat_product: return "hat-product";
        case ProductCase::hat_product_swapped: return "hat-product-swapped";
        case ProductCase::hat_empty: return "hat-empty";
    }
    return "unknown";
}

Mask hat_set_mask(const std::vector<double>& d_boundary, const Mask& B, const FloatExt& t) {
    if (d_boundary.size() != B.size()) throw std::invalid_argument("distance field and mask differ in size");
    Mask out(B.size(), false);
    for (std::size_t i = 0; i < B.size(); ++i) {
        if (!B[i]) continue;
        out[i] = t.is_infinite() ? std::isinf(d_boundary[i]) : d_boundary[i] >= t.value();
    }
    return out;
}

std::string LineProduct::describe() const {
    if (center_empty) return "∅";
    std::string s;
    for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? " × " : "") + factors[i].str();
    return s;
}

LineProduct product_center(const IntervalSet& A, const IntervalSet& X, const IntervalSet& B, const IntervalSet& Y) {
    return product_center_n({{A, X}, {B, Y}});
}

LineProduct product_center_n(const std::vector<std::pair<IntervalSet, IntervalSet>>& factors) {
    if (factors.size() < 2) throw std::invalid_argument("a product needs at least two factors");
    std::vector<LineReport> reps;
    reps.reserve(factors.size());
    for (const auto& [A, Y] : factors) reps.push_back(descriptors_line(A, Y));

    LineProduct out;
    std::size_t argmin = 0;
    for (std::size_t i = 1; i < reps.size(); ++i)
        if (reps[i].radius < reps[argmin].radius) argmin = i;
    out.threshold = reps[argmin].radius;

    std::vector<FactorFacts> facts;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        IntervalSet hat = hat_set_line(factors[i].first, factors[i].second, out.threshold);
        facts.push_back({factors[i].first.empty(), reps[i].clopen, hat.empty()});
        // a factor with infinite radius keeps a nonempty hat exactly when the threshold is below its semi-radius
        if (!reps[i].clopen && reps[i].radius.is_infinite() && out.threshold.is_finite() && !factors[i].first.empty()) {
            bool below = out.threshold < reps[i].semi_radius;
            if (below == hat.empty()) out.notes.emplace_back("hat of factor " + std::to_string(i) + " disagrees with the semi-radius test");
        }
        out.factors.push_back(std::move(hat));
    }
    out.tag = classify(facts, out.threshold, argmin);
    out.center_empty = std::any_of(facts.begin(), facts.end(), [](const FactorFacts& f) { return f.hat_empty; });
    if (out.tag == ProductCase::empty_factor) out.center_empty = true;
    if (out.center_empty) {
        out.factors.clear();
        out.radius = ExactExt::infinity();
    } else {
        out.radius = out.threshold;  // infinite exactly when every factor is clopen
    }
    return out;
}

Factor Factor::line(IntervalSet A, IntervalSet Y) {
    LineReport r = descriptors_line(A, Y);
    Factor f(LineData{A, Y});
    f.label_ = A.str();
    f.empty_ = A.empty();
    f.clopen_ = r.clopen;
    f.radius_ = r.radius.is_infinite() ? FloatExt::infinity() : FloatExt(r.radius.value().to_double());
    f.semi_radius_ = r.semi_radius.is_infinite() ? FloatExt::infinity() : FloatExt(r.semi_radius.value().to_double());
    return f;
}

Factor Factor::ball(Eigen::VectorXd center, double radius) {
    if (!(radius > 0) || !std::isfinite(radius)) throw std::invalid_argument("ball factor needs a finite positive radius");
    if (center.size() < 1 || !center.allFinite()) throw std::invalid_argument("ball factor needs a finite center");
    std::ostringstream os;
    os << "ball(" << center.transpose() << "; " << radius << ")";
    Factor f(BallData{center, radius});
    f.label_ = os.str();
    f.radius_ = f.semi_radius_ = FloatExt(radius);
    return f;
}

Factor Factor::finite(FiniteSpace X, Mask A) {
    if (static_cast<Eigen::Index>(A.size()) != X.size()) throw std::invalid_argument("mask size differs from space");
    FiniteReport r = descriptors_bf(X, A);
    MaskTopology topo = eps_topology(X, A);
    std::vector<double> d = distance_to_subset(X, topo.boundary, A);
    Factor f(FiniteData{std::move(X), A, std::move(d)});
    f.label_ = "finite subset of " + std::to_string(mask_count(A)) + " points";
    f.empty_ = set_empty(A);
    f.clopen_ = r.clopen;
    f.radius_ = r.radius;
    f.semi_radius_ = r.semi_radius;
    return f;
}

IntervalSet Factor::line_hat(const FloatExt& t) const {
    const auto& d = std::get<LineData>(data_);
    return hat_set_line(d.A, d.Y, to_exact(t));
}

bool Factor::hat_empty(const FloatExt& t) const {
    if (empty_) return true;
    if (std::holds_alternative<LineData>(data_)) return line_hat(t).empty();
    if (const auto* b = std::get_if<BallData>(&data_)) return t.is_infinite() || t.value() > b->R;
    const auto& f = std::get<FiniteData>(data_);
    return set_empty(hat_set_mask(f.d_boundary, f.A, t));
}

std::string Factor::hat_description(const FloatExt& t) const {
    if (std::holds_alternative<LineData>(data_)) return line_hat(t).str();
    if (const auto* b = std::get_if<BallData>(&data_)) {
        if (hat_empty(t)) return "∅";
        std::ostringstream os;
        os << "ball(" << b->c.transpose() << "; " << b->R - t.value() << ")";
        return os.str();
    }
    const auto& f = std::get<FiniteData>(data_);
    return std::to_string(mask_count(hat_set_mask(f.d_boundary, f.A, t))) + " points";
}

Factor::Samples Factor::sample(double h, const FloatExt& t) const {
    if (!(h > 0)) throw std::invalid_argument("sampling step must be positive");
    if (const auto* l = std::get_if<LineData>(&data_)) {
        if (!l->A.is_bounded()) throw std::invalid_argument("product oracle needs bounded factors");
        if (l->A.empty()) throw std::invalid_argument("product oracle needs nonempty factors");
        Rational hq = Rational::approximate(h);
        double lo = l->A.infimum()->value().to_double() - 2 * h, hi = l->A.supremum()->value().to_double() + 2 * h;
        auto k0 = static_cast<std::int64_t>(std::floor(lo / h)), k1 = static_cast<std::int64_t>(std::ceil(hi / h));
        IntervalSet hat = line_hat(t);
        std::vector<double> xs, hd;
        Mask m;
        for (std::int64_t k = k0; k <= k1; ++k) {
            Rational x = hq * Rational(k);
            if (!l->Y.contains(x)) continue;
            xs.push_back(x.to_double());
            m.push_back(l->A.contains(x));
            hd.push_back(hat.empty() ? kInf : ext_to_double(distance_to(x, hat)));
        }
        Eigen::MatrixXd c = Eigen::Map<Eigen::MatrixXd>(xs.data(), static_cast<Eigen::Index>(xs.size()), 1);
        return {FiniteSpace::from_points(c, PointMetric::euclidean, h), m, hd};
    }
    if (const auto* b = std::get_if<BallData>(&data_)) {
        const int n = static_cast<int>(b->c.size());
        std::vector<std::int64_t> k0(n), k1(n);
        std::size_t total = 1;
        for (int a = 0; a < n; ++a) {
            k0[a] = static_cast<std::int64_t>(std::floor((b->c[a] - b->R - 2 * h) / h));
            k1[a] = static_cast<std::int64_t>(std::ceil((b->c[a] + b->R + 2 * h) / h));
            total *= static_cast<std::size_t>(k1[a] - k0[a] + 1);
        }
        Eigen::MatrixXd c(static_cast<Eigen::Index>(total), n);
        Mask m(total);
        std::vector<double> hd(total);
        bool hat_none = hat_empty(t);
        for (std::size_t i = 0; i < total; ++i) {
            std::size_t rest = i;
            for (int a = n - 1; a >= 0; --a) {
                auto span = static_cast<std::size_t>(k1[a] - k0[a] + 1);
                c(static_cast<Eigen::Index>(i), a) = static_cast<double>(k0[a] + static_cast<std::int64_t>(rest % span)) * h;
                rest /= span;
            }
            double r = (c.row(static_cast<Eigen::Index>(i)).transpose() - b->c).norm();
            m[i] = r <= b->R;
            hd[i] = hat_none ? kInf : std::max(0.0, r - (b->R - t.value()));
        }
        return {FiniteSpace::from_points(std::move(c), PointMetric::euclidean, h), m, hd};
    }
    const auto& f = std::get<FiniteData>(data_);
    Mask hat = hat_set_mask(f.d_boundary, f.A, t);
    std::vector<double> hd(f.A.size(), kInf);
    if (!set_empty(hat)) hd = distance_to_subset(f.X, hat, Mask(f.A.size(), true));
    return {f.X.with_h(h), f.A, hd};
}

MixedProduct product_center_mixed(const std::vector<Factor>& factors) {
    if (factors.size() < 2) throw std::invalid_argument("a product needs at least two factors");
    MixedProduct out;
    std::size_t argmin = 0;
    for (std::size_t i = 1; i < factors.size(); ++i)
        if (factors[i].radius() < factors[argmin].radius()) argmin = i;
    out.threshold = factors[argmin].radius();
    std::vector<FactorFacts> facts;
    for (const auto& f : factors) {
        facts.push_back({f.empty(), f.clopen(), f.hat_empty(out.threshold)});
        out.hats.push_back(f.hat_description(out.threshold));
    }
    out.tag = classify(facts, out.threshold, argmin);
    out.center_empty = out.tag == ProductCase::empty_factor ||
                       std::any_of(facts.begin(), facts.end(), [](const FactorFacts& f) { return f.hat_empty; });
    out.radius = out.center_empty ? FloatExt::infinity() : out.threshold;
    return out;
}

std::size_t product_cell_cap(std::optional<std::size_t> cap) {
    if (cap) return *cap;
    if (const char* env = std::getenv("METRIC_CENTER_CELL_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 10'000'000;
}

OracleComparison product_oracle(const std::vector<Factor>& factors, double h, std::optional<std::size_t> cap) {
    if (factors.size() < 2) throw std::invalid_argument("a product needs at least two factors");
    MixedProduct closed = product_center_mixed(factors);
    std::vector<Factor::Samples> samples;
    std::size_t cells = 1;
    const std::size_t limit = product_cell_cap(cap);
    for (const auto& f : factors) {
        samples.push_back(f.sample(h, closed.threshold));
        cells *= static_cast<std::size_t>(samples.back().space.size());
        if (cells > limit)
            throw std::length_error("product oracle: more than " + std::to_string(limit) + " cells");
    }

    FiniteSpace P = samples[0].space;
    for (std::size_t i = 1; i < samples.size(); ++i) P = product_space(P, samples[i].space, h);
    const auto n = static_cast<std::size_t>(P.size());
    Mask member(n), net(n);
    std::vector<double> hat_dist(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        std::size_t rest = idx;
        bool in = true, near = true;
        double hd = 0;
        for (std::size_t f = samples.size(); f-- > 0;) {
            auto sz = static_cast<std::size_t>(samples[f].space.size());
            std::size_t j = rest % sz;
            rest /= sz;
            in = in && samples[f].member[j];
            near = near && samples[f].hat_distance[j] <= h / 2;
            hd = std::max(hd, samples[f].hat_distance[j]);
        }
        member[idx] = in;
        net[idx] = in && near;
        hat_dist[idx] = hd;
    }

    OracleComparison out;
    out.cells = n;
    out.report = descriptors_bf(P, member);
    if (closed.center_empty || out.report.radius.is_infinite()) return out;
    out.compared = true;
    out.radius_deviation = std::abs(out.report.radius.value() - closed.radius.value());
    double d1 = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (out.report.center[i]) d1 = std::max(d1, hat_dist[i]);
    double d2 = 0;
    if (set_empty(net)) {
        d2 = kInf;
    } else {
        auto dn = distance_to_subset(P, out.report.center, net);
        for (std::size_t i = 0; i < n; ++i)
            if (net[i]) d2 = std::max(d2, dn[i]);
        d2 += h / 2;  // every hat point lies within h/2 of a net point
    }
    out.hausdorff = std::max(d1, d2);
    return out;
}

}  // namespace metric_center
