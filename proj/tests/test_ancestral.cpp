#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "slfv/ancestral.hpp"
#include "slfv/errors.hpp"
#include "slfv/replicas.hpp"
#include "slfv/stats.hpp"

using namespace slfv;

TEST_CASE("region overlap queries") {
    Region r(2.0);
    CHECK(r.empty());
    CHECK_FALSE(r.overlaps(Ellipse{{0, 0}, 1, 1, 0}));
    r.add(Ellipse{{0, 0}, 1, 1, 0}, 0.0);
    r.add(Ellipse{{5, 0}, 1, 1, 0}, 2.0);
    r.add(Rect{10, 12, -1, 1}, 1.0);
    CHECK(r.size() == 3);
    CHECK(r.overlaps(Ellipse{{1.5, 0}, 1, 1, 0}));
    CHECK_FALSE(r.overlaps(Ellipse{{2.5, 0}, 1, 1, 0}));
    CHECK(r.overlaps(Ellipse{{9.5, 0.5}, 1, 1, 0}));
    CHECK_FALSE(r.overlaps(Ellipse{{8.9, 0}, 1, 1, 0}));
    CHECK(r.overlaps_at(Ellipse{{6, 0}, 1, 1, 0}, 2.0));
    CHECK_FALSE(r.overlaps_at(Ellipse{{6, 0}, 1, 1, 0}, 1.9));
    CHECK(r.contains({11, 0}));
    CHECK_FALSE(r.contains_at({11, 0}, 0.5));
    CHECK(r.reach() == 12.0);
    CHECK(r.bounds() == Rect{-1, 12, -1, 1});
}

TEST_CASE("region hash agrees with a linear scan") {
    Rng rng(17);
    std::uniform_real_distribution<double> pos(-20, 20), ax(0.3, 1.0), ang(-1.5, 1.5);
    Region r(2.0);
    std::vector<Ellipse> all;
    for (int i = 0; i < 300; ++i) {
        const Ellipse e{{pos(rng), pos(rng)}, ax(rng), ax(rng), ang(rng)};
        r.add(e, 0.0);
        all.push_back(e);
    }
    for (int k = 0; k < 3000; ++k) {
        const Ellipse q{{pos(rng), pos(rng)}, ax(rng), ax(rng), ang(rng)};
        bool brute = false;
        for (const auto& e : all) brute = brute || intersects_positively(e, q);
        CHECK(r.overlaps(q) == brute);
        const Point p{pos(rng), pos(rng)};
        bool inside = false;
        for (const auto& e : all) inside = inside || contains(e, p);
        CHECK(r.contains(p) == inside);
    }
}

TEST_CASE("point phase ends with the first covering event") {
    auto s = AncestralState::from_point({0, 0}, 1.0);
    CHECK(s.in_point_phase());
    CHECK(s.reach() == 0.0);
    CHECK_FALSE(s.apply_event({0.5, {1.5, 0}, 1, 1, 0}));
    CHECK(s.in_point_phase());
    CHECK(s.apply_event({0.7, {0.5, 0.2}, 1, 1, 0}));
    CHECK_FALSE(s.in_point_phase());
    CHECK(s.reach() == doctest::Approx(1.5));
    CHECK(s.apply_event({0.8, {2.3, 0}, 1, 1, 0}));
    CHECK(s.reach() == doctest::Approx(3.3));
    CHECK(s.accepted() == 2);
    CHECK_THROWS_AS(s.apply_event({0.1, {0, 0}, 1, 1, 0}), ContractViolation);
}

TEST_CASE("region seeds") {
    CHECK_THROWS_AS(AncestralState::from_region({}, 1.0), DomainError);
    CHECK_THROWS_AS(AncestralState::from_region({Rect{0, 0, 0, 1}}, 1.0), DomainError);
    auto s = AncestralState::from_region({Rect{0, 2, 0, 2}}, 1.0);
    CHECK_FALSE(s.in_point_phase());
    CHECK(s.apply_event({0.1, {2.9, 1}, 1, 1, 0}));
    CHECK_FALSE(s.apply_event({0.2, {-1.0, -1.0}, 1, 1, 0}));
}

TEST_CASE("lazy window keeps the state covered") {
    const ShapeLaw law = ShapeLaw::unit_rate(1.5, 0.6, 0.4);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        GrowthSimulation sim(AncestralState::from_point({0, 0}, law.r_max()), law, seed);
        while (sim.state().reach() < 6.0) {
            sim.step();
            REQUIRE(sim.window_covers_state());
        }
    }
}

TEST_CASE("lazy window has the law of a large static window") {
    // Streams differ, so compare the two hitting-time samples (two-sample KS).
    const ShapeLaw law = ShapeLaw::unit_rate(1.5, 0.6, 0.4);
    SimulationOptions fixed;
    fixed.lazy_window = false;
    fixed.static_window = Rect{-25, 25, -25, 25};
    const std::size_t n = 600;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = hit_halfplane(law, 5.0, replica_seed(1, i)).tau;
        b[i] = hit_halfplane(law, 5.0, replica_seed(2, i), fixed).tau;
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < n && j < n) {
        const double x = std::min(a[i], b[j]);
        while (i < n && a[i] <= x) ++i;
        while (j < n && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) - double(j)) / n);
    }
    // 0.1% critical value 1.95 * sqrt(2 / n).
    CHECK(d < 1.95 * std::sqrt(2.0 / n));
}

TEST_CASE("static window too small is detected") {
    const ShapeLaw law = ShapeLaw::balls(1.0, 1.0);
    SimulationOptions o;
    o.lazy_window = false;
    o.static_window = Rect{-3, 3, -3, 3};
    GrowthSimulation sim(AncestralState::from_point({0, 0}, 1.0), law, 3, o);
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 1'000'000; ++i) sim.step();
        }(),
        ContractViolation);
}

TEST_CASE("jump budget") {
    SimulationOptions o;
    o.max_jumps = 5;
    CHECK_THROWS_AS(hit_halfplane(ShapeLaw::balls(1.0, 1.0), 100.0, 1, o), BudgetExceeded);
    CHECK_THROWS_AS(hit_halfplane(ShapeLaw::balls(1.0, 1.0), 0.0, 1), DomainError);
}

TEST_CASE("hitting times are deterministic and monotone in the level") {
    const ShapeLaw law = ShapeLaw::unit_rate(1, 1);
    const auto a = hit_levels(law, {2, 4, 8}, 11);
    const auto b = hit_levels(law, {2, 4, 8}, 11);
    CHECK(a == b);
    CHECK(a[0] <= a[1]);
    CHECK(a[1] <= a[2]);
    CHECK(hit_halfplane(law, 8, 11).tau == a[2]);
    CHECK_THROWS_AS(hit_levels(law, {4, 2}, 1), DomainError);
}

TEST_CASE("first hitting time of a small level") {
    // Unit balls at rate 1/pi: the first event covering the origin arrives at
    // rate 1 and its reach is positive a.s., so a tiny level gives tau ~ Exp(1).
    const ShapeLaw law = ShapeLaw::unit_rate(1, 1);
    std::vector<double> taus;
    for (std::uint64_t s = 0; s < 4000; ++s) taus.push_back(hit_halfplane(law, 1e-9, replica_seed(7, s)).tau);
    std::sort(taus.begin(), taus.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double f = 1.0 - std::exp(-taus[i]);
        ks = std::max({ks, std::abs(f - double(i) / taus.size()), std::abs(f - double(i + 1) / taus.size())});
    }
    // Kolmogorov 0.1% critical value 1.95 / sqrt(n).
    CHECK(ks < 1.95 / std::sqrt(4000.0));
}

TEST_CASE("unit-ball speed exceeds the express lower bound") {
    const ShapeLaw law = ShapeLaw::unit_rate(1, 1);
    const auto est = estimate_speed(law, {10, 20, 30, 40}, 40, 5);
    CHECK(est.r2 > 0.98);
    CHECK(est.speed > 1.0);
    CHECK(est.speed < 4.0);
    CHECK(est.mean_tau.size() == 4);
}

TEST_CASE("serial and parallel replica paths agree") {
    const ShapeLaw law = ShapeLaw::unit_rate(2, 0.5, 0.3);
    const auto f = [&](std::size_t, std::uint64_t s) { return hit_levels(law, {5, 10}, s); };
    const auto a = run_replicas_serial(24, 99, f);
    const auto b = run_replicas_parallel(24, 99, 4, f);
    CHECK(a == b);
    const auto e1 = estimate_speed(law, {5, 10, 15}, 16, 3, 1);
    const auto e2 = estimate_speed(law, {5, 10, 15}, 16, 3, 3);
    CHECK(e1.mean_tau == e2.mean_tau);
}

TEST_CASE("replica errors name the replica") {
    const auto f = [](std::size_t i, std::uint64_t) -> int {
        if (i == 3 || i == 7) throw BudgetExceeded("boom");
        return 0;
    };
    for (int w : {1, 4}) {
        try {
            run_replicas(10, 1, w, f);
            FAIL("expected throw");
        } catch (const BudgetExceeded& e) {
            CHECK(std::string(e.what()) == "replica 3: boom");
        }
    }
}

TEST_CASE("trajectory csv replays the dual") {
    const ShapeLaw law = ShapeLaw::unit_rate(1.2, 0.8, -0.5);
    const auto rows = record_trajectory(law, 6.0, 21);
    REQUIRE(rows.size() > 2);
    std::ostringstream os;
    write_trajectory_csv(os, rows);
    CHECK(os.str().rfind("t,center_x,center_y,a,b,gamma,reach\n", 0) == 0);

    // Every accepted ellipse after the first overlaps the union of earlier ones,
    // and the recorded reach is the running max of horizontal reaches.
    Region r(2.0 * law.r_max());
    double reach = -1e300;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Ellipse e{rows[i].center, rows[i].a, rows[i].b, rows[i].gamma};
        if (i == 0)
            CHECK(contains(e, {0, 0}));
        else
            CHECK(r.overlaps(e));
        r.add(e, rows[i].t);
        reach = std::max(reach, horizontal_reach(e));
        CHECK(rows[i].reach == doctest::Approx(reach).epsilon(1e-14));
    }
    CHECK(rows.back().reach >= 6.0);
}
