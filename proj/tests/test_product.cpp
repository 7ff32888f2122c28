#include <cmath>
#include <random>

#include "doctest.h"
#include "metric_center/grid_region.hpp"
#include "metric_center/product_ops.hpp"
#include "oracles.hpp"

using namespace metric_center;
using Eigen::Index;

namespace {

const IntervalSet R = IntervalSet::real_line();
IntervalSet S(const char* text) { return IntervalSet::parse(text); }
ExactExt q(std::int64_t n, std::int64_t d = 1) { return ExactExt(Rational(n, d)); }

}  // namespace

TEST_CASE("hat sets") {
    CHECK(hat_set_line(S("[0,5]"), R, q(1, 2)) == S("[1/2,9/2]"));
    CHECK(hat_set_line(S("[0,1],[2,4]"), R, q(1, 2)) == S("{1/2},[5/2,7/2]"));
    CHECK(hat_set_line(S("[0,1],[2,4]"), R, q(0)) == S("[0,1],[2,4]"));
    CHECK(hat_set_line(S("[0,1]"), S("[0,1]"), ExactExt::infinity()) == S("[0,1]"));
    CHECK(hat_set_line(S("[0,1]"), R, ExactExt::infinity()).empty());

    std::mt19937_64 rng(1);
    for (int round = 0; round < 200; ++round) {
        IntervalSet B = IntervalSet::normalize(oracle::random_raw(rng));
        Rational t1(static_cast<std::int64_t>(rng() % 10), 10), t2 = t1 + Rational(static_cast<std::int64_t>(rng() % 10), 10);
        CHECK(hat_set_line(B, R, q(t2.num(), t2.den())).is_subset_of(hat_set_line(B, R, q(t1.num(), t1.den()))));
    }

    std::vector<double> d{0, 1, 2, std::numeric_limits<double>::infinity()};
    Mask b{true, true, false, true};
    CHECK(hat_set_mask(d, b, ExtReal<double>(1.0)) == Mask{false, true, false, true});
    CHECK(hat_set_mask(d, b, ExtReal<double>::infinity()) == Mask{false, false, false, true});
}

TEST_CASE("worked product examples") {
    auto i = product_center(S("[0,1]"), R, S("[0,1]"), R);
    CHECK(i.describe() == "{1/2} × {1/2}");
    CHECK(i.radius == q(1, 2));
    CHECK(i.tag == ProductCase::hat_product);

    auto ii = product_center(S("[0,1]"), R, S("[0,5]"), R);
    CHECK(ii.factors[0] == S("{1/2}"));
    CHECK(ii.factors[1] == S("[1/2,9/2]"));
    CHECK(ii.radius == q(1, 2));

    auto iii = product_center(S("[0,1]"), R, S("[0,1],[2,4]"), R);
    CHECK(iii.factors[1] == S("{1/2},[5/2,7/2]"));
    CHECK(iii.radius == q(1, 2));

    auto swapped = product_center(S("[0,5]"), R, S("[0,1]"), R);
    CHECK(swapped.tag == ProductCase::hat_product_swapped);
    CHECK(swapped.factors[0] == S("[1/2,9/2]"));

    // clopen in a discrete ambient times a ray
    auto z = product_center(S("{2},{3}"), S("{0},{1},{2},{3},{4},{5}"), S("[0,inf)"), R);
    CHECK(z.tag == ProductCase::clopen_with_empty_center);
    CHECK(z.center_empty);
    CHECK(z.radius.is_infinite());

    auto quad = product_center(S("(0,inf)"), R, S("(0,inf)"), R);
    CHECK(quad.tag == ProductCase::both_empty_center);
    CHECK(quad.center_empty);

    auto both = product_center(S("[0,1]"), S("[0,1],[3,4]"), S("{2}"), S("{2},{7}"));
    CHECK(both.tag == ProductCase::both_clopen);
    CHECK(both.describe() == "[0,1] × {2}");
    CHECK(both.radius.is_infinite());

    auto e = product_center({}, R, S("[0,1]"), R);
    CHECK(e.tag == ProductCase::empty_factor);
    CHECK(e.center_empty);

    // infinite-radius factor decided by its semi-radius
    IntervalSet Y = S("(-inf,1),(1,inf)");
    auto below = product_center(S("[0,1]"), R, S("[0,1),(1,2]"), Y);
    CHECK(below.tag == ProductCase::hat_product);
    CHECK(below.factors[1] == S("[1/2,1),(1,3/2]"));
    CHECK(below.radius == q(1, 2));
    CHECK(below.notes.empty());
    auto above = product_center(S("[0,2]"), R, S("[0,1),(1,2]"), Y);
    CHECK(above.tag == ProductCase::hat_empty);
    CHECK(above.center_empty);
    CHECK(above.radius.is_infinite());
    CHECK(above.notes.empty());

    // rad(A) = 0 leaves B whole
    auto zero = product_center(S("{0},{1}"), R, S("[0,3]"), R);
    CHECK(zero.factors[1] == S("[0,3]"));
    CHECK(zero.radius == q(0));
}

TEST_CASE("n-ary products") {
    auto p = product_center_n({{S("[0,1]"), R}, {S("[0,5]"), R}, {S("[0,3]"), R}});
    CHECK(p.describe() == "{1/2} × [1/2,9/2] × [1/2,5/2]");
    CHECK(p.radius == q(1, 2));
    auto c = product_center_n({{S("[0,1]"), R}, {S("[0,1]"), R}, {S("[0,1]"), R}});
    CHECK(c.describe() == "{1/2} × {1/2} × {1/2}");
    CHECK_THROWS(product_center_n({{S("[0,1]"), R}}));

    // the closed form against a 3-factor oracle
    auto cmp = product_oracle({Factor::line(S("[0,1]")), Factor::line(S("[0,5]")), Factor::line(S("[0,3]"))}, 0.05);
    REQUIRE(cmp.compared);
    CHECK(cmp.radius_deviation <= 4 * 0.05);
    CHECK(cmp.hausdorff <= 4 * 0.05);
}

TEST_CASE("random line pairs: closed form equals the level-set computation") {
    std::mt19937_64 rng(7);
    int done = 0;
    for (int round = 0; round < 800 && done < 300; ++round) {
        IntervalSet A = IntervalSet::normalize(oracle::random_raw(rng));
        IntervalSet B = IntervalSet::normalize(oracle::random_raw(rng));
        if (A.empty() || B.empty()) continue;
        ++done;
        oracle::LevelOracle oa(A), ob(B);
        Rational s = std::min(oa.sup(), ob.sup());
        auto p = product_center(A, R, B, R);
        CAPTURE(A.str());
        CAPTURE(B.str());
        REQUIRE_FALSE(p.center_empty);
        CHECK(p.radius == ExactExt(s));
        CHECK(p.factors[0] == oa.level(s));
        CHECK(p.factors[1] == ob.level(s));
        // radius bound and the equal-radius case
        auto ra = descriptors_line(A, R), rb = descriptors_line(B, R);
        CHECK(p.radius == std::min(ra.radius, rb.radius));
        if (ra.radius == rb.radius) {
            CHECK(p.factors[0] == ra.center);
            CHECK(p.factors[1] == rb.center);
        }
    }
    CHECK(done == 300);
}

TEST_CASE("random line pairs agree with the sampled product oracle") {
    std::mt19937_64 rng(70);
    const double h = 0.02;
    int done = 0;
    while (done < 40) {
        IntervalSet A = IntervalSet::normalize(oracle::random_raw(rng));
        IntervalSet B = IntervalSet::normalize(oracle::random_raw(rng));
        if (A.empty() || B.empty()) continue;
        ++done;
        auto cmp = product_oracle({Factor::line(A), Factor::line(B)}, h);
        CAPTURE(A.str());
        CAPTURE(B.str());
        REQUIRE(cmp.compared);
        CHECK(cmp.radius_deviation <= 4 * h);
        CHECK(cmp.hausdorff <= 4 * h);
    }
}

TEST_CASE("disc factors") {
    const double h = 0.05;
    auto disc = Factor::ball(Eigen::Vector2d(0, 0), 1);
    auto iii = product_center_mixed({disc, Factor::line(S("[0,4]"))});
    CHECK(iii.tag == ProductCase::hat_product);
    CHECK(iii.hats[1] == "[1,3]");
    CHECK(iii.radius.value() == 1);
    auto ci = product_oracle({disc, Factor::line(S("[0,4]"))}, h);
    CHECK(ci.radius_deviation <= 4 * h);
    CHECK(ci.hausdorff <= 4 * h);

    auto ii = product_center_mixed({disc, Factor::line(S("[0,1]"))});
    CHECK(ii.tag == ProductCase::hat_product_swapped);
    CHECK(ii.hats[1] == "{1/2}");
    CHECK(ii.radius.value() == 0.5);
    auto cii = product_oracle({disc, Factor::line(S("[0,1]"))}, h);
    CHECK(cii.radius_deviation <= 4 * h);
    CHECK(cii.hausdorff <= 4 * h);

    CHECK_THROWS_AS(product_oracle({disc, Factor::line(S("[0,4]"))}, h, 100), std::length_error);
    CHECK_THROWS(product_oracle({disc, Factor::line(S("[0,inf)"))}, h));
}

TEST_CASE("finite factors") {
    Eigen::MatrixXd c(21, 1);
    for (Index i = 0; i < 21; ++i) c(i, 0) = 0.1 * static_cast<double>(i);
    auto X = FiniteSpace::from_points(c, PointMetric::euclidean, 0.1);
    Mask A(21, false);
    for (Index i = 5; i <= 15; ++i) A[i] = true;
    auto f = Factor::finite(X, A);
    auto p = product_center_mixed({f, Factor::line(S("[0,4]"))});
    CHECK(p.tag == ProductCase::hat_product);
    CHECK_FALSE(p.center_empty);
    auto cmp = product_oracle({f, Factor::line(S("[0,4]"))}, 0.1);
    CHECK(cmp.compared);
    CHECK(cmp.radius_deviation <= 0.4);
    CHECK(cmp.hausdorff <= 0.4);
}

TEST_CASE("Euclidean cylinders have the same centers as the max-metric products") {
    const double h = 0.05;
    auto cyl = [](double height) {
        return Shape::predicate(
            [height](const Eigen::VectorXd& x) { return x.head<2>().norm() <= 1 && x[2] >= 0 && x[2] <= height; },
            Eigen::Vector3d(-1, -1, 0), Eigen::Vector3d(1, 1, height), "cylinder");
    };
    auto G = GridRegion::rasterize(cyl(1), Eigen::Vector3d(-1.2, -1.2, -0.2), Eigen::Vector3d(1.2, 1.2, 1.2), h);
    auto r = descriptors_grid(G);
    CHECK(std::abs(r.radius.value() - 0.5) <= 4 * h);
    for (Index i = 0; i < G.size(); ++i) {
        if (!r.center[i]) continue;
        Eigen::VectorXd x = G.center(i);
        CHECK(std::abs(x[2] - 0.5) <= 4 * h);
        CHECK(x.head<2>().norm() <= 0.5 + 4 * h);
    }

    auto T = GridRegion::rasterize(cyl(4), Eigen::Vector3d(-1.2, -1.2, -0.2), Eigen::Vector3d(1.2, 1.2, 4.2), h);
    auto rt = descriptors_grid(T);
    CHECK(std::abs(rt.radius.value() - 1) <= 4 * h);
    for (Index i = 0; i < T.size(); ++i) {
        if (!rt.center[i]) continue;
        Eigen::VectorXd x = T.center(i);
        CHECK(x.head<2>().norm() <= 4 * h);
        CHECK(x[2] >= 1 - 4 * h);
        CHECK(x[2] <= 3 + 4 * h);
    }
}
