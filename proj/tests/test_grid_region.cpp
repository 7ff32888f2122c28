#include <cmath>
#include <random>

#include "doctest.h"
#include "metric_center/grid_region.hpp"

using namespace metric_center;
using Eigen::Index;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

VectorXd v2(double x, double y) { return Vector2d(x, y); }
VectorXd v1(double x) { return VectorXd::Constant(1, x); }

GridRegion square_grid(double lo, double hi, double h, const Shape& s) { return GridRegion::rasterize(s, v2(lo, lo), v2(hi, hi), h); }

// O(N·|S|) distances in squared lattice units.
std::vector<std::int64_t> brute_sq(const GridRegion& G, const Mask& S) {
    std::vector<std::int64_t> out(G.size(), -1);
    for (Index i = 0; i < G.size(); ++i) {
        auto a = G.lattice(i);
        for (Index j = 0; j < G.size(); ++j) {
            if (!S[j]) continue;
            auto b = G.lattice(j);
            std::int64_t s = 0;
            for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
            if (out[i] < 0 || s < out[i]) out[i] = s;
        }
    }
    return out;
}

double brute_diameter(const GridRegion& G, const Mask& S) {
    double best = 0;
    for (Index i = 0; i < G.size(); ++i)
        for (Index j = i + 1; j < G.size(); ++j)
            if (S[i] && S[j]) best = std::max(best, (G.center(i) - G.center(j)).norm());
    return best;
}

Shape random_shape(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1), rad(0.15, 0.6);
    auto prim = [&]() -> Shape {
        switch (rng() % 3) {
            case 0: return Shape::ball(v2(u(rng), u(rng)), rad(rng));
            case 1: {
                Vector2d a(u(rng), u(rng));
                Vector2d b = a + Vector2d(rad(rng), rad(rng));
                return Shape::box(a, b);
            }
            default: return Shape::ball(v2(u(rng), u(rng)), rad(rng), false);
        }
    };
    Shape s = prim();
    int ops = static_cast<int>(rng() % 3);
    for (int k = 0; k < ops; ++k) {
        Shape t = prim();
        switch (rng() % 3) {
            case 0: s = s | t; break;
            case 1: s = s - t; break;
            default: s = s | (t - prim()); break;
        }
    }
    return s;
}

}  // namespace

TEST_CASE("rasterize: area, punctures, anchoring, errors") {
    const double h = 0.01;
    auto disc = Shape::ball(v2(0, 0), 1);
    auto G = square_grid(-1.5, 1.5, h, disc);
    double area = mask_count(G.occupancy()) * h * h;
    CHECK(area == doctest::Approx(M_PI).epsilon(0.01));

    auto P = square_grid(-1.5, 1.5, h, disc - Shape::point(v2(0, 0)));
    Index origin = G.locate(v2(0, 0));
    REQUIRE(origin >= 0);
    CHECK(G.center(origin).norm() == 0);
    std::size_t diff = 0;
    for (Index i = 0; i < G.size(); ++i)
        if (G.occupancy()[i] != P.occupancy()[i]) {
            ++diff;
            CHECK(i == origin);
        }
    CHECK(diff == 1);

    auto E = square_grid(-1, 1, 0.1, Shape::empty(2));
    CHECK(set_empty(E.occupancy()));

    CHECK_THROWS_AS(square_grid(-1.01, 1.01, h, disc), std::invalid_argument);
    CHECK_THROWS_AS(square_grid(-1.5, 1.5, 0, disc), std::invalid_argument);
    CHECK_THROWS_AS(square_grid(-1.5, 1.5, h, Shape::halfspace(v2(1, 0), 0)), std::invalid_argument);
    CHECK_NOTHROW(square_grid(-1.5, 1.5, h, Shape::halfspace(v2(1, 0), 0) & disc));
    CHECK_THROWS_AS(Shape::ball(v2(0, 0), 1) | Shape::ball(v1(0), 1), std::invalid_argument);
}

TEST_CASE("boundary cells") {
    const double h = 0.01;
    auto G = square_grid(-1.5, 1.5, h, Shape::ball(v2(0, 0), 1));
    Mask b = boundary_cells(G);
    CHECK_FALSE(set_empty(b));
    for (Index i = 0; i < G.size(); ++i)
        if (b[i]) CHECK(std::abs(G.center(i).norm() - 1) <= h * std::sqrt(2.0));

    auto S = square_grid(-1, 1, 0.1, Shape::point(v2(0.3, 0.3)));
    CHECK(mask_count(S.occupancy()) == 1);
    CHECK(boundary_cells(S) == S.occupancy());
}

TEST_CASE("distance transform matches brute force") {
    // single cell on 50×50, exhaustive
    Mask one(2500, false);
    one[17 + 50 * 31] = true;
    auto G = GridRegion::from_occupancy({50, 50}, {0, 0}, 0.1, Mask(2500, false));
    auto df = distance_to_set(G, one);
    for (Index i = 0; i < G.size(); ++i) {
        auto k = G.lattice(i);
        std::int64_t e = (k[0] - 17) * (k[0] - 17) + (k[1] - 31) * (k[1] - 31);
        CHECK(df.squared[i] == e);
    }
    Mask all(2500, true);
    auto z = distance_to_set(G, all);
    CHECK(std::all_of(z.squared.begin(), z.squared.end(), [](auto s) { return s == 0; }));
    auto none = distance_to_set(G, Mask(2500, false));
    CHECK(none.set_empty);
    CHECK(std::isinf(none.distance[0]));

    std::mt19937_64 rng(11);
    for (int round = 0; round < 30; ++round) {
        int dim = 1 + round % 3;
        std::vector<int> ext;
        std::vector<std::int64_t> org;
        Index total = 1;
        for (int a = 0; a < dim; ++a) {
            int e = dim == 3 ? 4 + int(rng() % 10) : dim == 2 ? 10 + int(rng() % 55) : 5 + int(rng() % 100);
            ext.push_back(e);
            org.push_back(-int(rng() % 7));
            total *= e;
        }
        auto H = GridRegion::from_occupancy(ext, org, 0.25, Mask(total, false));
        Mask S(total, false);
        int mode = round % 4;
        for (Index i = 0; i < total; ++i) S[i] = mode == 0 ? rng() % 97 == 0 : rng() % (2 + mode * 5) == 0;
        if (round % 5 == 0) {
            std::fill(S.begin(), S.end(), false);
            S[rng() % total] = true;
            S[rng() % total] = true;
        }
        if (set_empty(S)) S[0] = true;
        auto got = distance_to_set(H, S).squared;
        CHECK(got == brute_sq(H, S));
    }
}

TEST_CASE("disc, punctured disc and circle descriptors") {
    const double h = 0.01;
    auto disc = Shape::ball(v2(0, 0), 1);
    auto G = square_grid(-1.5, 1.5, h, disc);
    auto r = descriptors_grid(G);
    CHECK(report_consistency_check(r).empty());
    CHECK(std::abs(r.radius.value() - 1) <= 2 * h);
    for (Index i = 0; i < G.size(); ++i)
        if (r.center[i]) CHECK(G.center(i).norm() <= 2 * h);
    CHECK_FALSE(r.thin);
    CHECK(r.diameter.value() == doctest::Approx(brute_diameter(G, boundary_cells(G))));

    auto P = square_grid(-1.5, 1.5, h, disc - Shape::point(v2(0, 0)));
    auto rp = descriptors_grid(P);
    CHECK(std::abs(rp.radius.value() - 0.5) <= 2 * h);
    std::size_t cells = 0;
    for (Index i = 0; i < P.size(); ++i)
        if (rp.center[i]) {
            ++cells;
            // the puncture's surrogate boundary sits h from the origin, moving the peak out by up to h/2
            CHECK(std::abs(P.center(i).norm() - 0.5) <= 2.5 * h);
        }
    CHECK(cells > 100);  // a ring, not a point

    auto C = square_grid(-1.5, 1.5, h, Shape::sphere(v2(0, 0), 1));
    auto rc = descriptors_grid(C);
    CHECK(rc.thin);
    CHECK(rc.center == C.occupancy());
    CHECK(rc.radius.value() <= h);
    CHECK(rc.quasi_radius.value() <= h);
    CHECK_FALSE(rc.interior_nonempty);

    auto E = descriptors_grid(square_grid(-1, 1, 0.1, Shape::empty(2)));
    CHECK(E.radius.is_infinite());
    CHECK(set_empty(E.center));
    CHECK(report_consistency_check(E).empty());
}

TEST_CASE("diameter: calipers against brute force") {
    std::mt19937_64 rng(2);
    for (int round = 0; round < 25; ++round) {
        Shape s = random_shape(rng);
        auto G = square_grid(-2, 2, 0.1, s);
        CHECK(diameter_grid(G, G.occupancy()) == doctest::Approx(brute_diameter(G, G.occupancy())));
    }
    auto seg = GridRegion::rasterize(Shape::box(v1(-1), v1(1)), v1(-2), v1(2), 0.1);
    CHECK(diameter_grid(seg, seg.occupancy()) == doctest::Approx(2.0));
    auto ball3 = GridRegion::rasterize(Shape::ball(Eigen::Vector3d(0, 0, 0), 0.5), VectorXd::Constant(3, -1),
                                       VectorXd::Constant(3, 1), 0.1);
    CHECK(diameter_grid(ball3, ball3.occupancy()) == doctest::Approx(brute_diameter(ball3, ball3.occupancy())));
}

TEST_CASE("largest inscribed balls") {
    auto disc = square_grid(-1.5, 1.5, 0.01, Shape::ball(v2(0, 0), 1));
    auto b = largest_inscribed_balls(disc);
    REQUIRE(b.exists);
    CHECK(b.certificate_inside);
    CHECK(b.certificate_maximal);
    CHECK(std::abs(b.radius.value() - 1) <= 0.02);
    for (Index i = 0; i < disc.size(); ++i)
        if (b.centers[i]) CHECK(disc.center(i).norm() <= 0.02);

    const double h = 0.005;
    auto sq = square_grid(-0.5, 1.5, h, Shape::box(v2(0, 0), v2(1, 1)));
    auto bs = largest_inscribed_balls(sq);
    CHECK(bs.certificate_inside);
    CHECK(bs.certificate_maximal);
    CHECK(std::abs(bs.radius.value() - 0.5) <= 2 * h);
    for (Index i = 0; i < sq.size(); ++i)
        if (bs.centers[i]) CHECK((sq.center(i) - Vector2d(0.5, 0.5)).norm() <= 2 * h);

    auto L = square_grid(-0.5, 2.5, h, Shape::box(v2(0, 0), v2(2, 1)) | Shape::box(v2(0, 0), v2(1, 2)));
    auto bl = largest_inscribed_balls(L);
    CHECK(bl.verdict == "certified");
    // independent certificate check over all cells
    const double r = bl.radius.value();
    for (Index i = 0; i < L.size(); ++i) {
        if (!bl.centers[i]) continue;
        for (Index j = 0; j < L.size(); ++j)
            if ((L.center(i) - L.center(j)).norm() <= r - h) REQUIRE(L.occupancy()[j]);
    }

    auto E = largest_inscribed_balls(square_grid(-1, 1, 0.1, Shape::empty(2)));
    CHECK_FALSE(E.exists);
    auto full = GridRegion::from_occupancy({5, 5}, {0, 0}, 1, Mask(25, true));
    auto F = largest_inscribed_balls(full);
    CHECK_FALSE(F.exists);
    CHECK(F.verdict.find("no open ball of largest radius") != std::string::npos);
}

TEST_CASE("random regions: path-metric, certificate, monotonicity and diameter properties") {
    std::mt19937_64 rng(99);
    const double h = 0.04;
    for (int round = 0; round < 40; ++round) {
        Shape s = random_shape(rng);
        auto G = square_grid(-2, 2, h, s);
        if (set_empty(G.occupancy())) continue;
        auto r = descriptors_grid(G);
        CAPTURE(s.str());
        CHECK(report_consistency_check(r).empty());
        for (Index i = 0; i < G.size(); ++i) {
            if (!G.occupancy()[i]) continue;
            CHECK(r.d_boundary[i] <= r.d_complement[i] + 1e-12);
            CHECK(r.d_complement[i] <= r.d_boundary[i] + h + 1e-12);
        }
        CHECK(std::abs(r.radius.value() - r.quasi_radius.value()) <= 4 * h);
        CHECK(r.radius.value() <= r.diameter.value() / 2 + 2 * h);
        if (r.thin) CHECK(r.radius.value() <= h);
        if (r.interior_nonempty) CHECK(r.radius.value() >= h);

        auto b = largest_inscribed_balls(G);
        CHECK(b.certificate_inside);
        CHECK(b.certificate_maximal);

        // nested shapes on the same grid
        auto big = square_grid(-2, 2, h, s | Shape::ball(v2(0, 0), 0.3));
        CHECK(r.quasi_radius.value() <= descriptors_grid(big).quasi_radius.value() + 2 * h);
    }
}

TEST_CASE("closed and open versions are concentric") {
    const double h = 0.02;
    auto closed = square_grid(-2, 2, h, Shape::box(v2(-1, -0.5), v2(1, 0.5)) | Shape::ball(v2(1, 0), 0.7));
    auto open = square_grid(-2, 2, h, Shape::box(v2(-1, -0.5), v2(1, 0.5), false) | Shape::ball(v2(1, 0), 0.7, false));
    auto a = descriptors_grid(closed), b = descriptors_grid(open);
    CHECK(std::abs(a.radius.value() - b.radius.value()) <= 2 * h);
    double haus = 0;
    for (Index i = 0; i < closed.size(); ++i) {
        if (!a.center[i]) continue;
        double best = 1e9;
        for (Index j = 0; j < open.size(); ++j)
            if (b.center[j]) best = std::min(best, (closed.center(i) - open.center(j)).norm());
        haus = std::max(haus, best);
    }
    CHECK(haus <= 2 * h);
}

TEST_CASE("one and three dimensions") {
    auto I = GridRegion::rasterize(Shape::box(v1(0), v1(2)), v1(-1), v1(3), 0.01);
    auto r = descriptors_grid(I);
    CHECK(std::abs(r.radius.value() - 1) <= 0.02);
    CHECK(r.diameter.value() == doctest::Approx(2.0));

    auto B = GridRegion::rasterize(Shape::ball(Eigen::Vector3d(0, 0, 0), 1), VectorXd::Constant(3, -1.2),
                                   VectorXd::Constant(3, 1.2), 0.05);
    auto rb = descriptors_grid(B);
    CHECK(std::abs(rb.radius.value() - 1) <= 0.1);
    for (Index i = 0; i < B.size(); ++i)
        if (rb.center[i]) CHECK(B.center(i).norm() <= 0.1);
}

TEST_CASE("csv output") {
    auto G = GridRegion::rasterize(Shape::box(v1(0), v1(0.5)), v1(-0.3), v1(0.8), 0.1);
    auto r = descriptors_grid(G);
    std::ostringstream os;
    write_grid_csv(os, G, r);
    std::string s = os.str();
    CHECK(s.rfind("cell,x,d_boundary,d_complement,in_center,in_qcenter\n", 0) == 0);
    CHECK(s.find("# radius,") != std::string::npos);
    CHECK(std::count(s.begin(), s.end(), '\n') == G.size() + 1 + 8);
}
