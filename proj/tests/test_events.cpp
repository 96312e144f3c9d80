#include <doctest.h>

#include <cmath>
#include <numbers>

#include "slfv/errors.hpp"
#include "slfv/events.hpp"
#include "slfv/stats.hpp"

using namespace slfv;

TEST_CASE("shape law construction") {
    const ShapeLaw u = ShapeLaw::unit_rate(2.0, 0.5, 0.0);
    CHECK(u.atoms().size() == 1);
    CHECK(u.total_mass() == doctest::Approx(1.0 / std::numbers::pi));
    CHECK(jump_mass(u) == doctest::Approx(1.0));
    CHECK(u.r_max() == 2.0);
    CHECK_THROWS_AS(ShapeLaw(std::vector<ShapeAtom>{}), DomainError);
    CHECK_THROWS_AS(ShapeLaw({{0.0, 1, 1, 0}}), DomainError);
    CHECK_THROWS_AS(ShapeLaw({{1.0, 1, 1, 2.0}}), DomainError);
    CHECK_THROWS_AS(ShapeLaw::unit_rate(-1, 1, 0), DomainError);
}

TEST_CASE("mirror flips tilts only") {
    const ShapeLaw law({{0.2, 2, 0.5, 0.6}, {0.1, 1, 1, -0.2}});
    const ShapeLaw m = mirror(law);
    CHECK(m.atoms()[0].gamma == -0.6);
    CHECK(m.atoms()[1].gamma == 0.2);
    CHECK(m.total_mass() == law.total_mass());
    CHECK(mirror(m) == law);
}

TEST_CASE("area-biased mean extreme offset") {
    // Two atoms: jump mass 0.2*pi + 0.1*pi, D = sqrt(4cos^2 + 0.25 sin^2) and 1.
    const ShapeLaw law({{0.2, 2, 0.5, 0.6}, {0.1, 1, 1, 0}});
    const double d1 = std::sqrt(4 * std::cos(0.6) * std::cos(0.6) + 0.25 * std::sin(0.6) * std::sin(0.6));
    const double expect = (0.2 * std::numbers::pi * d1 + 0.1 * std::numbers::pi) / (0.3 * std::numbers::pi);
    CHECK(mean_extreme_offset(law) == doctest::Approx(expect));
}

TEST_CASE("atom draws follow weights and areas") {
    const ShapeLaw law({{0.3, 1, 1, 0}, {0.1, 2, 2, 0}});
    Rng rng(3);
    const int n = 200000;
    int first = 0, first_area = 0;
    for (int i = 0; i < n; ++i) {
        first += draw_atom(law, rng) == 0;
        first_area += draw_atom_area_biased(law, rng) == 0;
    }
    // weight share 0.75; area share 0.3 / (0.3 + 0.4) = 3/7.
    CHECK(std::abs(first / double(n) - 0.75) < 4 * std::sqrt(0.75 * 0.25 / n));
    CHECK(std::abs(first_area / double(n) - 3.0 / 7.0) < 4 * std::sqrt(3.0 / 7 * 4.0 / 7 / n));
}

TEST_CASE("poisson window counts and placement") {
    const ShapeLaw law = ShapeLaw::balls(1.0, 0.5);
    const Rect rect{-2, 3, 0, 4};
    Rng rng(8);
    const int reps = 2000;
    std::vector<double> counts;
    for (int r = 0; r < reps; ++r) {
        const auto evs = poisson_window(rect, 1.0, 3.0, law, rng);
        counts.push_back(static_cast<double>(evs.size()));
        for (std::size_t i = 0; i < evs.size(); ++i) {
            REQUIRE(rect.contains(evs[i].center));
            REQUIRE(evs[i].time >= 1.0);
            REQUIRE(evs[i].time < 3.0);
            if (i) REQUIRE(evs[i - 1].time <= evs[i].time);
        }
    }
    const Estimate e = estimate(counts);
    const double mean = 0.5 * 20 * 2;
    CHECK(std::abs(e.mean - mean) < 4 * std::sqrt(mean / reps));
    CHECK(e.variance == doctest::Approx(mean).epsilon(0.1));
}

TEST_CASE("poisson window errors") {
    const ShapeLaw law = ShapeLaw::balls(1.0, 1.0);
    Rng rng(1);
    CHECK_THROWS_AS(poisson_window({0, 1, 0, 1}, 2.0, 1.0, law, rng), DomainError);
    CHECK_THROWS_AS(poisson_window({0, 0, 0, 1}, 0.0, 1.0, law, rng), DomainError);
    CHECK(poisson_window({0, 1, 0, 1}, 1.0, 1.0, law, rng).empty());
}

TEST_CASE("event source is time ordered and deterministic") {
    const ShapeLaw law = ShapeLaw::balls(1.0, 1.0);
    EventSource a(law, {-5, 5, -5, 5}, Rng(42)), b(law, {-5, 5, -5, 5}, Rng(42));
    double last = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const Event e = a.next();
        CHECK(e == b.next());
        CHECK(e.time >= last);
        CHECK(a.window().contains(e.center));
        last = e.time;
    }
    CHECK(a.consumed_until() == last);
}

TEST_CASE("expanded area only receives future events at the full rate") {
    const ShapeLaw law = ShapeLaw::balls(1.0, 2.0);
    const double now = 0.25;
    std::vector<double> new_counts;
    for (std::uint64_t s = 0; s < 400; ++s) {
        EventSource src(law, {0, 1, 0, 1}, Rng(s));
        while (src.peek().time < now) src.next();
        REQUIRE(src.expand({0, 3, 0, 1}, 0.0, now));
        int in_new = 0;
        while (src.peek().time < 1.0) {
            const Event e = src.next();
            if (e.center.x > 1.0) {
                CHECK(e.time > now);
                ++in_new;
            }
        }
        new_counts.push_back(in_new);
    }
    // New strip of area 2 over (0.25, 1): mean 2 * 2 * 0.75 = 3.
    const Estimate e = estimate(new_counts);
    CHECK(std::abs(e.mean - 3.0) < 4 * std::sqrt(3.0 / 400));
}

TEST_CASE("expand is a no-op when the window already covers the request") {
    EventSource src(ShapeLaw::balls(1.0, 1.0), {-5, 5, -5, 5}, Rng(1));
    CHECK_FALSE(src.expand({-1, 1, -1, 1}, 2.0, 0.0));
    CHECK(src.window() == Rect{-5, 5, -5, 5});
    CHECK(src.expand({-1, 6, -1, 1}, 2.0, 0.0));
    CHECK(src.window().xmax == 8.0);
}
