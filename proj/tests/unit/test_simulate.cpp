#include <catch_amalgamated.hpp>

#include <cmath>

#include "bazykin/equilibria.hpp"
#include "bazykin/simulate.hpp"
#include "support.hpp"

using namespace bazykin;
using namespace bazykin::testing;

namespace {

double distance(State a, State b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Bistable eradication point: E2 = (0, 1.7) and an interior node near
// (13.43, 1.7) are both stable, separated by a saddle near x = 0.788.
Parameters bistable() { return {15.0, 0.0, 1.0, 0.01, 0.1, 0.45, 0.28}; }

}  // namespace

TEST_CASE("rest points stay put") {
    const Parameters p = set_a(2.0);
    const Trajectory at_origin = integrate(p, {0.0, 0.0}, 50.0, 0.01);
    for (const State& s : at_origin.states) CHECK((s.x == 0.0 && s.y == 0.0));
    const Trajectory at_e1 = integrate(p, {p.gamma, 0.0}, 50.0, 0.01);
    for (const State& s : at_e1.states) {
        CHECK(std::abs(s.x - p.gamma) < 1e-12);
        CHECK(s.y == 0.0);
    }
}

TEST_CASE("fixed-step run ends at a stable equilibrium and exactly at t_end") {
    const Parameters p = set_a(2.0);
    const Trajectory tr = integrate(p, {0.5, 0.5}, 200.0, 0.03);
    CHECK(tr.times.back() == 200.0);
    bool near_stable = false;
    for (const Equilibrium& e : all_equilibria(p)) {
        if (is_attracting(e.stability) && distance(e.location, tr.back()) < 1e-4) near_stable = true;
    }
    CHECK(near_stable);
}

TEST_CASE("fixed-step and adaptive endpoints agree") {
    const Parameters p = set_a(2.0);
    for (const State s0 : {State{0.0, 0.0}, State{p.gamma, 0.0}, State{0.5, 0.5}}) {
        const State a = integrate(p, s0, 200.0, 1e-3).back();
        const State b = integrate_adaptive(p, s0, 200.0, 1e-10, 1e-12).back();
        INFO("start " << s0.x << "," << s0.y);
        CHECK(distance(a, b) < 1e-5);
    }
    const Parameters q = set_b(0.03);
    const State a = integrate(q, {5.0, 5.0}, 300.0, 1e-3).back();
    const State b = integrate_adaptive(q, {5.0, 5.0}, 300.0, 1e-10, 1e-12).back();
    CHECK(distance(a, b) < 1e-5);
}

TEST_CASE("stiff start near the prey-free point keeps positivity") {
    Parameters p = set_a(3.5);
    p.delta = 40.0;
    const auto e2 = boundary_equilibria(p).back();
    REQUIRE(e2.kind == EquilibriumKind::PreyFree);
    CHECK_NOTHROW(integrate_adaptive(p, {0.01, e2.location.y * 0.99}, 100.0, 1e-8, 1e-10));
}

TEST_CASE("invalid integrator arguments") {
    const Parameters p = set_a();
    CHECK_THROWS_AS(integrate_adaptive(p, {0.5, 0.5}, 10.0, 0.0, 1e-9), InvalidInput);
    CHECK_THROWS_AS(integrate(p, {0.5, 0.5}, 10.0, 0.0), InvalidInput);
    CHECK_THROWS_AS(integrate(p, {0.5, 0.5}, -1.0, 0.01), InvalidInput);
    CHECK_THROWS_AS(integrate(p, {-0.5, 0.5}, 10.0, 0.01), InvalidInput);
}

TEST_CASE("limit cycle at epsilon = 0.024 and none at 0.03") {
    const Parameters cyc = set_b(0.024);
    const auto interior = interior_equilibria(cyc);
    REQUIRE(interior.size() == 1);
    const State s0{interior[0].location.x * 1.01, interior[0].location.y * 1.01};
    const auto found = detect_limit_cycle(integrate(cyc, s0, 2000.0, 0.01));
    REQUIRE(found.has_value());
    CHECK(found->period > 0.0);
    CHECK(found->amplitude_x > 1.0);

    CHECK_FALSE(detect_limit_cycle(integrate(set_b(0.03), s0, 2000.0, 0.01)).has_value());
}

TEST_CASE("trajectory settling on the predator-free point has no cycle") {
    const Trajectory tr = integrate(set_a(0.0), {0.5, 0.5}, 200.0, 0.01);
    CHECK(distance(tr.back(), {1.0, 0.0}) < 1e-6);
    CHECK_FALSE(detect_limit_cycle(tr).has_value());
}

TEST_CASE("cycle detection rejects short trajectories") {
    const Trajectory tr = integrate(set_a(0.0), {0.5, 0.5}, 0.05, 0.01);
    CHECK_THROWS_AS(detect_limit_cycle(tr), InsufficientData);
    CHECK_THROWS_AS(detect_limit_cycle(tr, 1.0), InvalidInput);
}

TEST_CASE("starts around a stable node share one endpoint") {
    const Parameters p = bistable();
    const std::vector<State> starts{{13.0, 1.2}, {13.0, 2.2}, {14.0, 1.2}, {14.0, 2.2}};
    const auto runs = phase_portrait(p, starts, 2000.0, 0.01);
    REQUIRE(runs.size() == 4);
    for (const auto& r : runs) {
        REQUIRE(r.trajectory.has_value());
        CHECK(distance(r.trajectory->back(), runs[0].trajectory->back()) < 1e-3);
    }
}

TEST_CASE("starts on both sides of the saddle separatrix split into two clusters") {
    const Parameters p = bistable();
    const auto runs = phase_portrait(p, {{0.3, 1.7}, {1.5, 1.7}}, 2000.0, 0.01);
    const State left = runs[0].trajectory->back();
    const State right = runs[1].trajectory->back();
    CHECK(distance(left, {0.0, 1.7}) < 1e-3);
    CHECK(right.x > 13.0);
    CHECK(distance(left, right) > 10.0);
}

TEST_CASE("portrait records per-start failures and rejects an empty list") {
    const auto runs = phase_portrait(set_a(), {{0.5, 0.5}, {-1.0, 0.5}}, 10.0, 0.01);
    CHECK(runs[0].trajectory.has_value());
    CHECK_FALSE(runs[1].trajectory.has_value());
    REQUIRE(runs[1].error.has_value());
    CHECK(*runs[1].error == ErrorCode::InvalidInput);
    CHECK_THROWS_AS(phase_portrait(set_a(), {}, 10.0, 0.01), InvalidInput);
}

TEST_CASE("parallel portrait equals the serial reference bit for bit") {
    std::vector<State> starts;
    for (int i = 1; i <= 24; ++i) starts.push_back({0.6 * i, 0.25 * i});
    const auto par = phase_portrait(set_b(0.024), starts, 100.0, 0.01);
    const auto ser = phase_portrait_serial(set_b(0.024), starts, 100.0, 0.01);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        REQUIRE(par[i].trajectory.has_value());
        CHECK(par[i].trajectory->times == ser[i].trajectory->times);
        CHECK(par[i].trajectory->states == ser[i].trajectory->states);
    }
}
