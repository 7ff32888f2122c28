#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "doctest.h"
#include "metric_center/union_ops.hpp"
#include "oracles.hpp"

using namespace metric_center;

namespace {

const IntervalSet R = IntervalSet::real_line();
ExactExt q(std::int64_t n, std::int64_t d = 1) { return ExactExt(Rational(n, d)); }

bool separated_by_definition(const IntervalSet& A, const IntervalSet& B) {
    return (A.closure() & B).empty() && (A & B.closure()).empty();
}

// Parts on the 1/2 lattice over [-6, 6], inside an ambient that may have gaps.
struct Instance {
    IntervalSet Y;
    std::vector<IntervalSet> parts;
};

// Ambient: ℝ or [-6, 6] with up to three short gaps, so that parts can run
// into an ambient endpoint close to a partner.
IntervalSet random_ambient(std::mt19937_64& rng) {
    std::bernoulli_distribution whole_line(0.25), bounded(0.5), coin(0.5);
    if (whole_line(rng)) return R;
    IntervalSet Y = bounded(rng) ? IntervalSet::closed(-6, 6) : R;
    std::uniform_int_distribution<int> count(1, 3), start(-10, 10), len(1, 2);
    int k = count(rng);
    for (int i = 0; i < k; ++i) {
        int a = start(rng);
        Y = Y - IntervalSet::normalize({{Rational(a, 2), coin(rng), Rational(a + len(rng), 2), coin(rng)}});
    }
    return Y;
}

std::optional<Instance> random_instance(std::mt19937_64& rng, std::size_t n) {
    Instance in;
    in.Y = random_ambient(rng);
    for (std::size_t k = 0; k < n; ++k) {
        IntervalSet P = in.Y & IntervalSet::normalize(oracle::random_raw(rng, 2, 2, 6, 0.1));
        for (const auto& other : in.parts) {
            if (!separated_by_definition(P, other)) return std::nullopt;
        }
        auto d = descriptors_line(P, in.Y);
        if (P.empty() || d.clopen || d.radius.is_infinite()) return std::nullopt;
        in.parts.push_back(P);
    }
    return in;
}

// Srad(A∪B) > rad(B) exactly when some point of A sits farther than rad(B)
// from the union's boundary.
void check_double_tilde(const IntervalSet& A, const IntervalSet& B, const IntervalSet& Y, const LineUnion& u) {
    auto rb = descriptors_line(B, Y).radius;
    auto whole = topology_line(A | B, Y).boundary;
    IntervalSet far = A - sublevel_line(A, whole, rb);
    if (!far.empty()) {
        CHECK(rb < u.direct.semi_radius);
    } else {
        CHECK(u.direct.semi_radius <= rb);
    }
    if (u.double_tilde) CHECK(*u.double_tilde == far);
}

SampledPart whole(const Mask& m) { return {m, {}}; }

}  // namespace

TEST_CASE("separation on the line") {
    CHECK(separated_check(IntervalSet::closed(0, 1), IntervalSet::closed(2, 3), R).separated);

    auto adjacent = separated_check(IntervalSet::closed(0, 1), IntervalSet::parse("(1,2]"), R);
    CHECK_FALSE(adjacent.separated);
    CHECK(*adjacent.witness == Rational(1));

    auto touching = separated_check(IntervalSet::closed(0, 1), IntervalSet::closed(1, 2), R);
    CHECK_FALSE(touching.separated);
    CHECK(*touching.witness == Rational(1));

    // the shared limit point 1 is missing from the ambient
    IntervalSet Y = IntervalSet::parse("(-inf,1),(1,inf)");
    CHECK(separated_check(IntervalSet::parse("[0,1)"), IntervalSet::parse("(1,2]"), Y).separated);

    CHECK_THROWS_AS(union_descriptors(IntervalSet::closed(0, 1), IntervalSet::closed(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(union_descriptors(IntervalSet::closed(0, 1), IntervalSet::closed(2, 3), IntervalSet::parse("[0,1],[2,5]")),
                    std::invalid_argument);
}

TEST_CASE("worked unions on the line") {
    auto u = union_descriptors(IntervalSet::closed(0, 1), IntervalSet::closed(2, 6));
    CHECK(u.tag == UnionCase::dominant_part);
    CHECK(u.center == IntervalSet::point(4));
    CHECK(u.radius == q(2));
    CHECK(u.direct.center == u.center);
    CHECK(*u.dominant == 1);
    CHECK(u.warnings.empty());

    auto tied = union_descriptors(IntervalSet::closed(0, 1), IntervalSet::closed(2, 3));
    CHECK(tied.tag == UnionCase::tied_parts);
    CHECK(tied.center == IntervalSet::points({Rational(1, 2), Rational(5, 2)}));

    auto three = union_descriptors_n({IntervalSet::closed(0, 1), IntervalSet::closed(2, 6), IntervalSet::closed(8, 12)});
    CHECK(three.tag == UnionCase::m_collection);
    CHECK(three.center == IntervalSet::points({4, 10}));
    CHECK(three.radius == q(2));
    CHECK(three.in_m == std::vector<bool>{false, true, true});
    CHECK(three.direct.center == three.center);

    auto one = union_descriptors_n({IntervalSet::closed(0, 1)});
    CHECK(one.tag == UnionCase::single_part);
    CHECK(one.center == IntervalSet::point(Rational(1, 2)));
    CHECK(one.srad.is_point());
}

TEST_CASE("infinite radius caveat") {
    auto u = union_descriptors(IntervalSet::parse("[2,inf)"), IntervalSet::closed(0, 1));
    CHECK(u.direct.semi_radius.is_infinite());
    CHECK(u.tag == UnionCase::bound_only);
    CHECK_FALSE(u.warnings.empty());
    CHECK(u.srad.contains(u.direct.semi_radius));
    CHECK(u.srad.lower == q(1, 2));
    CHECK(u.srad.lower_strict);
}

TEST_CASE("unbounded part with a finite partner") {
    // A has rad = ∞ but Srad = 1 because 1 is missing from the ambient
    IntervalSet A = IntervalSet::parse("[0,1),(1,2]");
    IntervalSet Y = IntervalSet::parse("(-inf,1),(1,inf)");
    auto u = union_descriptors(A, IntervalSet::closed(4, 8), Y);
    CHECK(u.tag == UnionCase::unbounded_partner_center);
    CHECK(u.center == IntervalSet::point(6));
    CHECK(u.radius == q(2));
    CHECK(u.direct.center == u.center);
    CHECK(u.direct.radius == u.radius);

    // B's center sits at an ambient endpoint 1 away from ∂A = {0, 2}
    IntervalSet Yg = IntervalSet::parse("(-inf,1),(1,11/5],[3,inf)");
    auto v = union_descriptors(A, IntervalSet::closed(3, 5), Yg);
    CHECK(v.parts[1].center == IntervalSet::point(3));
    CHECK(v.tilde[1] == IntervalSet::point(3));
    CHECK(v.tag == UnionCase::unbounded_partner_below);
    CHECK(v.direct.semi_radius == q(3, 2));
    CHECK(v.srad.contains(v.direct.semi_radius));
}

TEST_CASE("tilde sets in an ambient with gaps") {
    // rad(A) = 2 at the ambient endpoint 3; ∂B = {9/2} is 3/2 away
    IntervalSet Y = IntervalSet::parse("[0,3],[4,10]");
    auto u = union_descriptors(IntervalSet::closed(1, 3), IntervalSet::closed(4, Rational(9, 2)), Y);
    CHECK(u.parts[0].center == IntervalSet::point(3));
    CHECK(u.tilde[0] == IntervalSet::point(3));
    CHECK(u.tag == UnionCase::srad_below_dominant);
    CHECK(u.srad.contains(u.direct.semi_radius));
    CHECK(u.direct.semi_radius < q(2));
    check_double_tilde(IntervalSet::closed(1, 3), IntervalSet::closed(4, Rational(9, 2)), Y, u);
}

TEST_CASE("random pairs equal the direct descriptors of the union") {
    std::mt19937_64 rng(20260301);
    std::map<UnionCase, int> seen;
    int done = 0;
    while (done < 500) {
        auto in = random_instance(rng, 2);
        if (!in) continue;
        ++done;
        const auto& A = in->parts[0];
        const auto& B = in->parts[1];
        CAPTURE(A.str());
        CAPTURE(B.str());
        CAPTURE(in->Y.str());
        auto u = union_descriptors(A, B, in->Y);
        ++seen[u.tag];
        CHECK(report_consistency_check(u.direct).empty());

        if (u.center_determined) {
            CHECK(u.center == u.direct.center);
            CHECK(u.radius == u.direct.radius);
        }
        CHECK(u.srad.contains(u.direct.semi_radius));

        auto ra = descriptors_line(A, in->Y).radius;
        auto rb = descriptors_line(B, in->Y).radius;
        CHECK(u.direct.semi_radius <= ext_max(ra, rb));
        if (u.tag == UnionCase::srad_below_dominant || u.tag == UnionCase::srad_below_tied) {
            CHECK(u.direct.semi_radius < ext_max(ra, rb));
        }
        if (u.dominant) {
            std::size_t a = *u.dominant;
            check_double_tilde(in->parts[a], in->parts[1 - a], in->Y, u);
        }
        if (in->Y.size() == 1) {
            CHECK(u.tilde[0].empty());
            CHECK(u.tilde[1].empty());
        }
    }
    MESSAGE("dominant " << seen[UnionCase::dominant_part] << ", tied " << seen[UnionCase::tied_parts]
                        << ", below-dominant " << seen[UnionCase::srad_below_dominant] << ", below-tied "
                        << seen[UnionCase::srad_below_tied]);
    CHECK(seen[UnionCase::dominant_part] > 0);
    CHECK(seen[UnionCase::tied_parts] > 0);
    CHECK(seen[UnionCase::srad_below_dominant] > 0);
}

TEST_CASE("random triples follow the M-collection formula") {
    std::mt19937_64 rng(77);
    int done = 0, determined = 0;
    while (done < 200) {
        auto in = random_instance(rng, 3);
        if (!in) continue;
        ++done;
        CAPTURE(in->Y.str());
        auto u = union_descriptors_n(in->parts, in->Y);
        ExactExt rmax;
        for (const auto& p : in->parts) rmax = ext_max(rmax, descriptors_line(p, in->Y).radius);
        CHECK(u.direct.semi_radius <= rmax);
        if (u.center_determined) {
            ++determined;
            CHECK(u.center == u.direct.center);
            CHECK(u.radius == u.direct.radius);
        }
        CHECK(u.srad.contains(u.direct.semi_radius));
    }
    CHECK(determined > 0);
}

TEST_CASE("tied parts whose centers are both eaten") {
    // rad 1 each: A's center 19/10 is 7/10 from ∂B ∋ 13/5, B's center 0 is 9/10 from ∂A = {9/10}
    IntervalSet Y = IntervalSet::parse("[-2,0],[1/2,19/10],[12/5,5]");
    IntervalSet A = IntervalSet::parse("[9/10,19/10]");
    IntervalSet B = IntervalSet::parse("[-1,0],[12/5,13/5]");
    auto u = union_descriptors(A, B, Y);
    CHECK(u.parts[0].center == IntervalSet::point(Rational(19, 10)));
    CHECK(u.parts[1].center == IntervalSet::point(0));
    CHECK(u.parts[0].radius == q(1));
    CHECK(u.parts[1].radius == q(1));
    CHECK(u.tag == UnionCase::srad_below_tied);
    CHECK(u.direct.semi_radius == q(19, 20));
    CHECK(u.srad.contains(u.direct.semi_radius));
}

TEST_CASE("grid unions") {
    const double h = 0.02;
    Eigen::VectorXd lo(2), hi(2);
    lo << -1.6, -1.0;
    hi << 2.6, 1.0;
    Eigen::VectorXd c1(2), c2(2), c3(2);
    c1 << -0.9, 0;
    c2 << 0.6, 0;
    c3 << 1.9, 0;
    auto D1 = GridRegion::rasterize(Shape::ball(c1, 0.5, true), lo, hi, h);
    auto D2 = GridRegion::rasterize(Shape::ball(c2, 0.3, true), lo, hi, h);
    auto D3 = GridRegion::rasterize(Shape::ball(c3, 0.5, true), lo, hi, h);

    auto u = union_descriptors(D1, {D1.occupancy(), D2.occupancy()});
    CHECK(u.tag == UnionCase::dominant_part);
    CHECK(*u.dominant == 0);
    REQUIRE(u.radius.is_finite());
    CHECK(std::abs(u.radius.value() - u.direct.radius.value()) <= 2 * h);
    for (Eigen::Index i = 0; i < D1.size(); ++i) {
        if (u.center[static_cast<std::size_t>(i)]) CHECK((D1.center(i) - c1).norm() <= 2 * h + 1e-9);
    }

    auto w = union_descriptors(D1, {D1.occupancy(), D2.occupancy(), D3.occupancy()});
    CHECK(w.tag == UnionCase::m_collection);
    CHECK(w.in_m == std::vector<bool>{true, false, true});
    bool near1 = false, near3 = false;
    for (Eigen::Index i = 0; i < D1.size(); ++i) {
        if (!w.center[static_cast<std::size_t>(i)]) continue;
        double a = (D1.center(i) - c1).norm(), b = (D1.center(i) - c3).norm();
        CHECK(std::min(a, b) <= 2 * h + 1e-9);
        near1 = near1 || a <= 2 * h + 1e-9;
        near3 = near3 || b <= 2 * h + 1e-9;
    }
    CHECK(near1);
    CHECK(near3);
    for (Eigen::Index i = 0; i < D1.size(); ++i) {
        if (w.direct.center[static_cast<std::size_t>(i)]) CHECK(w.center[static_cast<std::size_t>(i)]);
    }

    auto sep = separated_check(D1, D1.occupancy(), D2.occupancy());
    CHECK(sep.separated);
    CHECK(std::abs(sep.gap - 0.7) <= 2 * h);

    Eigen::VectorXd c4(2);
    c4 << -0.33, 0;
    auto D4 = GridRegion::rasterize(Shape::ball(c4, 0.05, true), lo, hi, h);
    auto bad = separated_check(D1, D1.occupancy(), D4.occupancy());
    CHECK_FALSE(bad.separated);
    REQUIRE(bad.witness);
    CHECK_THROWS_AS(union_descriptors(D1, {D1.occupancy(), D4.occupancy()}), std::invalid_argument);
}

TEST_CASE("sampled sphere: two arcs with eaten centers") {
    // Fibonacci points on S² plus dense samples of the two great circles, chordal metric
    const int n_sphere = 20000, n_circle = 1257;
    const double step = 2 * std::numbers::pi / n_circle;
    std::vector<Eigen::Vector3d> pts;
    const double golden = std::numbers::pi * (3 - std::sqrt(5.0));
    for (int i = 0; i < n_sphere; ++i) {
        double z = 1 - (2.0 * i + 1) / n_sphere, r = std::sqrt(1 - z * z);
        pts.emplace_back(r * std::cos(golden * i), r * std::sin(golden * i), z);
    }
    std::size_t first_xz = pts.size();
    for (int k = 0; k < n_circle; ++k) pts.emplace_back(std::cos(k * step), 0, std::sin(k * step));
    std::size_t first_xy = pts.size();
    // the circles cross at (±1, 0, 0); those points are already present
    for (int k = 0; k < n_circle; ++k) {
        if (k == 0) continue;
        double th = k * step;
        if (std::abs(th - std::numbers::pi) < step / 2) continue;
        pts.emplace_back(std::cos(th), std::sin(th), 0);
    }
    Eigen::MatrixXd coords(static_cast<Eigen::Index>(pts.size()), 3);
    for (std::size_t i = 0; i < pts.size(); ++i) coords.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    const double h = 0.01;
    auto X = FiniteSpace::from_points(coords, PointMetric::euclidean, h);
    REQUIRE(X.size() >= 20000);

    const Eigen::Vector3d east(1, 0, 0), west(-1, 0, 0);
    std::size_t n = pts.size();
    Mask viewA(n, false), viewB(n, false), A(n, false), B(n, false);
    auto crossing = [&](std::size_t i) { return (pts[i] - east).norm() < 1e-9 || (pts[i] - west).norm() < 1e-9; };
    for (std::size_t i = first_xz; i < first_xy; ++i) {
        viewA[i] = true;
        A[i] = (pts[i] - east).norm() >= 0.1;
        if (crossing(i)) {
            viewB[i] = true;
            B[i] = (pts[i] - west).norm() >= 0.1;
        }
    }
    for (std::size_t i = first_xy; i < n; ++i) {
        viewB[i] = true;
        B[i] = (pts[i] - west).norm() >= 0.1;
    }

    auto u = union_descriptors(X, {{A, viewA}, {B, viewB}});
    const double analytic = 2 * std::cos(std::asin(0.05));
    REQUIRE(u.parts[0].radius.is_finite());
    CHECK(std::abs(u.parts[0].radius.value() - analytic) <= 0.05);
    CHECK(std::abs(u.parts[1].radius.value() - analytic) <= 0.05);
    // chord to the far arc end is 2cos((φ+ψ)/2) at angular offset ψ, flat near
    // the antipode; a band of h plus one sample step allows ψ up to this
    const double phi = 2 * std::asin(0.05);
    const double spread = 2 * std::acos(std::cos(phi / 2) - (h + step) / 2) - phi;
    for (std::size_t i = 0; i < n; ++i) {
        if (u.parts[0].center[i]) CHECK((pts[i] - west).norm() <= spread);
        if (u.parts[1].center[i]) CHECK((pts[i] - east).norm() <= spread);
    }
    CHECK(u.tilde[0] == u.parts[0].center);
    CHECK(u.tilde[1] == u.parts[1].center);
    CHECK(u.tag == UnionCase::srad_below_tied);
    CHECK(u.direct.semi_radius < u.parts[0].radius);
    CHECK(u.srad.contains(u.direct.semi_radius));

    auto sep = separated_check(X, A, B);
    CHECK(sep.separated);
    CHECK(std::abs(sep.gap - 0.1) <= 2 * step);

    CHECK_THROWS_AS(union_descriptors(X, {whole(A), whole(A)}), std::invalid_argument);
}
