#include <random>

#include "doctest.h"
#include "metric_center/interval_set.hpp"
#include "oracles.hpp"

using namespace metric_center;

TEST_CASE("normalize merges touching closed ends only") {
    CHECK(IntervalSet::normalize({Interval::closed(0, 1), Interval::closed(1, 2)}) == IntervalSet::closed(0, 2));
    IntervalSet split = IntervalSet::normalize({{Rational(0), true, Rational(1), false}, {Rational(1), false, Rational(2), true}});
    CHECK(split.size() == 2);
    CHECK_FALSE(split.contains(1));
    CHECK(IntervalSet::normalize({{Rational(0), true, Rational(1), false}, Interval::point(1)}) == IntervalSet::closed(0, 1));
    CHECK_THROWS_AS(IntervalSet::normalize({Interval::open(3, 2)}), std::invalid_argument);
    CHECK(IntervalSet::normalize({Interval::open(1, 1)}).empty());
}

TEST_CASE("text syntax round trips") {
    for (const char* text : {"[0,1],(2,5/2],[3,inf)", "{7}", "{}", "(-inf,-1),{0},[1/3,1/2)", "(-inf,inf)"}) {
        IntervalSet s = IntervalSet::parse(text);
        CHECK(s.str() == text);
        CHECK(IntervalSet::parse(s.str()) == s);
    }
    CHECK(IntervalSet::parse("").empty());
    CHECK(IntervalSet::parse("[0, 0.5]") == IntervalSet::closed(0, Rational(1, 2)));
    CHECK_THROWS(IntervalSet::parse("[0,1"));
    CHECK_THROWS(IntervalSet::parse("[-inf,1]"));
    CHECK_THROWS(IntervalSet::parse("[0,5/0]"));
    CHECK_THROWS(IntervalSet::parse("(3,2)"));
}

TEST_CASE("closure, interior and complement on fixtures") {
    IntervalSet s = IntervalSet::parse("(0,1),{2},[3,4)");
    CHECK(s.closure() == IntervalSet::parse("[0,1],{2},[3,4]"));
    CHECK(s.interior() == IntervalSet::parse("(0,1),(3,4)"));
    CHECK(s.complement() == IntervalSet::parse("(-inf,0],[1,2),(2,3),[4,inf)"));
    CHECK(IntervalSet().complement() == IntervalSet::real_line());
    CHECK(IntervalSet::real_line().complement().empty());
}

TEST_CASE("set algebra agrees with pointwise membership on random piece lists") {
    std::mt19937_64 rng(11);
    auto probe = oracle::lattice(-3, 3, 20);
    for (int round = 0; round < 300; ++round) {
        auto ra = oracle::random_raw(rng, 4);
        auto rb = oracle::random_raw(rng, 4);
        IntervalSet a = IntervalSet::normalize(ra);
        IntervalSet b = IntervalSet::normalize(rb);

        auto shuffled = ra;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(IntervalSet::normalize(shuffled) == a);
        CHECK(IntervalSet::parse(a.str()) == a);

        IntervalSet u = a | b, i = a & b, d = a - b, c = a.complement();
        for (const auto& x : probe) {
            bool in_a = oracle::raw_contains(ra, x), in_b = oracle::raw_contains(rb, x);
            REQUIRE(a.contains(x) == in_a);
            CHECK(u.contains(x) == (in_a || in_b));
            CHECK(i.contains(x) == (in_a && in_b));
            CHECK(d.contains(x) == (in_a && !in_b));
            CHECK(c.contains(x) == !in_a);
        }
        CHECK(c.complement() == a);
        CHECK((a | b) == (b | a));
        CHECK(a.is_subset_of(u));
        CHECK(i.is_subset_of(a));
        CHECK(a.interior().is_subset_of(a));
        CHECK(a.is_subset_of(a.closure()));
        for (std::size_t k = 1; k < a.size(); ++k) CHECK(a.pieces()[k - 1].hi <= a.pieces()[k].lo);
    }
}
