#include <random>

#include "doctest.h"
#include "metric_center/filtration.hpp"
#include "oracles.hpp"

using namespace metric_center;

namespace {

const IntervalSet R = IntervalSet::real_line();

Eigen::VectorXd v2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

GridRegion square_grid(double half, double h, const Shape& s) {
    return GridRegion::rasterize(s, v2(-half, -half), v2(half, half), h);
}

Shape annulus(double inner, double outer) {
    return Shape::ball(v2(0, 0), outer, true) - Shape::ball(v2(0, 0), inner, false);
}

std::vector<bool> random_blobs(std::mt19937_64& rng, int w, int h) {
    std::uniform_real_distribution<double> density(0.35, 0.75);
    std::bernoulli_distribution on(density(rng));
    std::vector<bool> m(static_cast<std::size_t>(w * h));
    for (auto&& b : m) b = on(rng);
    return m;
}

}  // namespace

TEST_CASE("line sublevel sets") {
    auto F = filtration_line(IntervalSet::closed(0, 1), R);
    CHECK(sublevel(F, ExactExt(Rational(3, 10))) == IntervalSet::parse("[0,3/10],[7/10,1]"));
    CHECK(sublevel(F, ExactExt(Rational(1, 2))) == IntervalSet::closed(0, 1));
    CHECK(sublevel(F, ExactExt(Rational(7))) == IntervalSet::closed(0, 1));
    CHECK(sublevel(F, ExactExt(Rational(0))) == IntervalSet::points({0, 1}));
    CHECK(F.thresholds == std::vector<Rational>{0, Rational(1, 2)});

    // boundary points outside A leave P_0 empty
    auto G = filtration_line(IntervalSet::parse("(0,1)"), R);
    CHECK(sublevel(G, ExactExt(Rational(0))).empty());

    CHECK(betti0(IntervalSet::parse("[0,3/10],[7/10,1]")) == 2);
    CHECK(betti0(IntervalSet{}) == 0);
}

TEST_CASE("line sublevel sets agree with pointwise distances") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> alpha_tick(0, 12);
    auto grid = oracle::lattice(-3, 3, 20);
    for (int trial = 0; trial < 150; ++trial) {
        auto raw = oracle::random_raw(rng, 3);
        IntervalSet A = IntervalSet::normalize(raw);
        std::vector<Rational> breaks;
        for (const auto& iv : raw) {
            breaks.push_back(iv.lo.value());
            breaks.push_back(iv.hi.value());
        }
        auto bd = oracle::boundary_points(breaks, [&](const Rational& x) { return oracle::raw_contains(raw, x); },
                                          Rational(1, 1000));
        Rational alpha(alpha_tick(rng), 10);
        auto P = sublevel(filtration_line(A, R), ExactExt(alpha));
        CAPTURE(A.str());
        CAPTURE(alpha.str());
        for (const auto& x : grid) {
            bool expect = A.contains(x) && !bd.empty() && oracle::exact_point_distance(x, bd) <= alpha;
            CHECK(P.contains(x) == expect);
        }
    }
}

TEST_CASE("grid betti numbers on fixtures") {
    const double h = 0.02;
    auto disc = square_grid(1.1, h, Shape::ball(v2(0, 0), 1, true));
    CHECK(betti0(disc, disc.occupancy()) == 1);
    CHECK(betti1_planar(disc, disc.occupancy()) == 0);

    auto ring = square_grid(2.1, h, annulus(1, 2));
    CHECK(betti0(ring, ring.occupancy()) == 1);
    CHECK(betti1_planar(ring, ring.occupancy()) == 1);

    auto nested = square_grid(2.1, h, annulus(0.5, 0.9) | annulus(1.3, 2));
    CHECK(betti0(nested, nested.occupancy()) == 2);
    CHECK(betti1_planar(nested, nested.occupancy()) == 2);

    Mask none(static_cast<std::size_t>(disc.size()), false);
    CHECK(betti0(disc, none) == 0);
    CHECK(betti1_planar(disc, none) == 0);

    Eigen::VectorXd lo = Eigen::VectorXd::Constant(3, -0.2), hi = Eigen::VectorXd::Constant(3, 0.2);
    auto cube = GridRegion::rasterize(Shape::box(Eigen::VectorXd::Constant(3, -0.1), Eigen::VectorXd::Constant(3, 0.1), true),
                                      lo, hi, 0.05);
    CHECK_THROWS_AS(betti1_planar(cube, cube.occupancy()), std::invalid_argument);
}

TEST_CASE("grid betti numbers agree with flood fill and the Euler characteristic") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> side(4, 128);
    for (int trial = 0; trial < 20; ++trial) {
        int w = side(rng), hgt = side(rng);
        auto m = random_blobs(rng, w, hgt);
        auto G = GridRegion::from_occupancy({w, hgt}, {0, 0}, 1.0, m);
        CAPTURE(w);
        CAPTURE(hgt);
        CHECK(betti0(G, m) == static_cast<std::size_t>(oracle::flood_components(m, w, hgt, false)));
        CHECK(betti1_planar(G, m) == static_cast<std::size_t>(oracle::euler_betti1(m, w, hgt)));
    }
}

TEST_CASE("conjecture on the line") {
    auto r = conjecture_scan(IntervalSet::parse("[0,1],[2,3]"), R);
    CHECK(r.betti_subset == 2);
    CHECK(r.betti_center == 2);
    CHECK(r.target == 4);
    CHECK(r.verdict() == "exists");
    REQUIRE(r.alpha_star);
    CHECK(Rational(0) < *r.alpha_star);
    CHECK(r.center_excluded);
    CHECK(r.nested);
    auto F = filtration_line(IntervalSet::parse("[0,1],[2,3]"), R);
    CHECK(betti0(sublevel(F, ExactExt(Rational(3, 10)))) == 4);

    CHECK_THROWS_AS(conjecture_scan(IntervalSet::points({0, 1, 2}), R), std::invalid_argument);
    CHECK_THROWS_AS(conjecture_scan(IntervalSet::closed(0, 1), IntervalSet::closed(0, 1)), std::invalid_argument);

    auto open = conjecture_scan(IntervalSet::parse("(0,1)"), R);
    CHECK_FALSE(open.notes.empty());
}

TEST_CASE("line filtration properties on random subsets") {
    std::mt19937_64 rng(21);
    int scanned = 0;
    for (int trial = 0; trial < 300; ++trial) {
        IntervalSet A = IntervalSet::normalize(oracle::random_raw(rng, 3, 5, 3, 0.1));
        auto d = descriptors_line(A, R);
        if (d.clopen || d.radius == ExactExt(Rational(0))) continue;
        ++scanned;
        auto r = conjecture_scan(A, R);
        CAPTURE(A.str());
        CHECK(r.nested);
        CHECK(r.center_excluded);
        auto F = filtration_line(A, R);
        for (const auto& row : r.rows) {
            auto P = sublevel(F, ExactExt(row.alpha));
            bool every_piece_meets = true;
            for (const auto& piece : A.pieces()) {
                if ((P & IntervalSet::normalize({piece})).empty()) every_piece_meets = false;
            }
            if (every_piece_meets) CHECK(row.betti0 >= betti0(A));
        }
        if (r.radius.is_finite()) CHECK(sublevel(F, r.radius) == A);
    }
    CHECK(scanned > 100);
}

TEST_CASE("conjecture on planar grids") {
    const double h = 0.02;
    auto disc = square_grid(1.1, h, Shape::ball(v2(0, 0), 1, true));
    auto r = conjecture_scan(disc);
    CHECK(r.dimension == 2);
    CHECK(r.betti_subset == 0);
    CHECK(r.betti_center == 1);
    CHECK(r.verdict() == "exists");
    REQUIRE(r.alpha_star);
    auto F = filtration_grid(disc);
    CHECK(betti1_planar(disc, sublevel(F, *r.alpha_star)) == 1);
    CHECK(r.center_excluded);
    CHECK(r.exclusion_checked > 0);
    CHECK(r.nested);
    CHECK(sublevel(F, F.thresholds.back()) == disc.occupancy());

    auto ring = square_grid(2.1, h, annulus(1, 2));
    auto s = conjecture_scan(ring);
    CHECK(s.betti_subset == 1);
    CHECK(s.betti_center == 1);
    CHECK(s.verdict() == "exists");
    REQUIRE(s.alpha_star);
    CHECK(betti1_planar(ring, sublevel(filtration_grid(ring), *s.alpha_star)) == 2);
    CHECK(s.center_excluded);

    auto thin = square_grid(1.1, h, Shape::segment(v2(-0.5, 0), v2(0.5, 0)));
    CHECK_THROWS_AS(conjecture_scan(thin), std::invalid_argument);
}
