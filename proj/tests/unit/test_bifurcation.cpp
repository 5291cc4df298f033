#include <catch_amalgamated.hpp>

#include <cmath>

#include "bazykin/bifurcation.hpp"
#include "bazykin/equilibria.hpp"
#include "bazykin/simulate.hpp"
#include "support.hpp"

using namespace bazykin;
using namespace bazykin::testing;
using Catch::Matchers::WithinAbs;

namespace {

double e1_predator_eigenvalue(const Parameters& p) {
    const Jacobian2 j = jacobian(p, {p.gamma, 0.0});
    return j.j22;
}

bool has_prey_free(const Parameters& p) {
    for (const auto& e : boundary_equilibria(p)) {
        if (e.kind == EquilibriumKind::PreyFree) return true;
    }
    return false;
}

// Hopf set with a smaller carrying capacity, where the interior branch
// actually loses stability inside the bracket.
Parameters hopf_set(double epsilon) {
    Parameters p = set_b(epsilon);
    p.gamma = 3.0;
    return p;
}

Parameters bistable_base() { return {15.0, 0.0, 0.0, 0.01, 0.1, 0.45, 0.28}; }

}  // namespace

TEST_CASE("transcritical point of set A") {
    const Parameters p = set_a();
    CHECK_THAT(transcritical_xi(p), WithinAbs(2.8, 1e-12));
    CHECK(e1_predator_eigenvalue(set_a(2.8 - 1e-3)) < 0.0);
    CHECK(e1_predator_eigenvalue(set_a(2.8 + 1e-3)) > 0.0);
    CHECK_THAT(e1_predator_eigenvalue(set_a(2.8)), WithinAbs(0.0, 1e-12));
}

TEST_CASE("transcritical point is zero when the numerator vanishes") {
    // alpha = 0, gamma = omega = m = 1, delta = 3: m(omega gamma^2 + gamma + 1) = delta gamma.
    const Parameters p{1.0, 0.0, 0.0, 1.0, 0.5, 3.0, 1.0};
    CHECK_THAT(transcritical_xi(p), WithinAbs(0.0, 1e-15));
    Parameters degenerate = set_a();
    degenerate.delta = degenerate.m * degenerate.alpha;
    CHECK_THROWS_AS(transcritical_xi(degenerate), DegenerateParameter);
}

TEST_CASE("saddle-node point of set A") {
    const double xs = saddlenode_xi(set_a());
    CHECK_THAT(xs, WithinAbs(3.0, 1e-12));
    CHECK(set_a(xs).food_surplus() == 0.0);
    CHECK_FALSE(has_prey_free(set_a(xs - 1e-3)));
    CHECK(has_prey_free(set_a(xs + 1e-3)));
}

TEST_CASE("Sotomayor quantities at the transcritical point") {
    const SotomayorReport r = sotomayor_quantities(set_a(), BifurcationKind::Transcritical);
    CHECK_THAT(r.xi, WithinAbs(2.8, 1e-12));
    CHECK(r.at == State{1.0, 0.0});
    CHECK_THAT(r.critical_eigenvalue, WithinAbs(0.0, 1e-12));
    CHECK(r.wT_Hxi == 0.0);
    // J = [[-1, -1/20], [0, 0]]: W = (0, 1) and V is parallel to (1, -20).
    CHECK_THAT(std::abs(r.W[1]), WithinAbs(1.0, 1e-12));
    CHECK_THAT(r.V[1] / r.V[0], WithinAbs(-20.0, 1e-8));
    // d(J22)/d(xi) at E1 = delta (w D - (x + xi w) alpha w) / D^2 = 0.5 with w = 5, D = 20.
    const double sign_w = r.W[1] > 0 ? 1.0 : -1.0;
    CHECK_THAT(r.wT_DHxiV, WithinAbs(sign_w * 0.5 * r.V[1], 1e-6));
    // Second derivative along V: 2 g_xy V1 V2 + g_yy V2^2 with g_xy = -0.06, g_yy = -1.
    const double d2 = 2.0 * -0.06 * r.V[0] * r.V[1] - 1.0 * r.V[1] * r.V[1];
    CHECK_THAT(r.wT_D2HVV, WithinAbs(sign_w * d2, 1e-5));
    CHECK(r.transcritical_pattern);
    CHECK(r.nondegenerate);
}

TEST_CASE("Sotomayor quantities where E2 meets the origin") {
    const SotomayorReport r = sotomayor_quantities(set_a(), BifurcationKind::SaddleNode);
    CHECK_THAT(r.xi, WithinAbs(3.0, 1e-12));
    CHECK(r.at == State{0.0, 0.0});
    // J = diag(1, 0): V = W = (0, 1). The field's xi derivative carries a
    // factor y, so W.H_xi vanishes at the origin and the pattern is that of
    // an exchange of stability.
    CHECK(r.wT_Hxi == 0.0);
    CHECK_THAT(r.wT_DHxiV, WithinAbs(8.0 / 16.0, 1e-6));
    CHECK_THAT(r.wT_D2HVV, WithinAbs(-2.0 * 0.5, 1e-5));
    CHECK(r.transcritical_pattern);
    CHECK_FALSE(r.saddlenode_pattern);
}

TEST_CASE("W.H_xi at the predator-free point stays zero off the critical value") {
    // H_xi at (gamma, 0) is (0, 0) for every xi because both components carry y.
    for (double dxi : {0.01, 0.05, 0.1}) {
        const SotomayorReport r = sotomayor_quantities(set_a(), BifurcationKind::Transcritical, 2.8 + dxi);
        CHECK(r.wT_Hxi == 0.0);
        CHECK(r.xi == 2.8 + dxi);
    }
    CHECK_THROWS_AS(sotomayor_quantities(set_a(), BifurcationKind::Hopf), InvalidInput);
}

TEST_CASE("Hopf epsilon on a branch that changes stability") {
    const Parameters p = hopf_set(0.02);
    const auto interior = interior_equilibria(p);
    REQUIRE(interior.size() == 1);
    const auto found = hopf_epsilon(p, interior[0], 0.02, 0.04);
    REQUIRE(found.has_value());
    CHECK(found->epsilon > 0.02);
    CHECK(found->epsilon < 0.04);
    CHECK(std::abs(found->trace) < 1e-8);
    CHECK(found->det > 0.0);
    CHECK(found->x_differs_from_inv_sqrt_omega);
    CHECK(found->dtrace_depsilon != 0.0);

    const Parameters at = hopf_set(found->epsilon);
    CHECK_THAT(hopf_epsilon_at(at, found->equilibrium.location), WithinAbs(found->epsilon, 1e-8));
    CHECK(determinant_epsilon_bound(at, found->equilibrium.location) > found->epsilon);

    // Simulation oracle on either side of the critical value.
    for (double offset : {-0.002, 0.002}) {
        const Parameters q = hopf_set(found->epsilon + offset);
        const State s0{found->equilibrium.location.x * 1.01, found->equilibrium.location.y * 1.01};
        const auto cycle = detect_limit_cycle(integrate(q, s0, 2000.0, 0.01));
        INFO("offset " << offset);
        CHECK(cycle.has_value() == (offset < 0.0));
    }

    const CriticalityReport cr = hopf_criticality(p, *found, 0.002);
    CHECK(cr.criticality == HopfCriticality::Supercritical);
}

TEST_CASE("Hopf search reports a branch without a trace sign change") {
    const Parameters p = set_b(0.02);
    const auto interior = interior_equilibria(p);
    REQUIRE_FALSE(interior.empty());
    CHECK_THROWS_AS(hopf_epsilon(p, interior[0], 0.02, 0.04), NoHopfFound);
    CHECK_THROWS_AS(hopf_epsilon(p, boundary_equilibria(p)[0], 0.02, 0.04), InvalidInput);
}

TEST_CASE("phi curves") {
    const Parameters base = set_a();
    CHECK(phi_curves(base, 1.0, 3.0).phi1 == 0.0);
    CHECK(phi_curves(base, 1.0, 3.5).phi3 < 0.0);
    CHECK_THAT(phi_curves(base, 1.0, 3.5).phi3, WithinAbs(1.0 - 10.125, 1e-12));
    const double gap = (base.delta - base.m) * base.gamma / (base.omega * base.gamma * base.gamma + 1.0);
    for (double a : {0.0, 0.5, 2.0}) {
        for (double xi : {0.0, 1.0, 4.0}) {
            const PhiCurves phi = phi_curves(base, a, xi);
            CHECK_THAT(phi.phi2 - phi.phi1, WithinAbs(gap, 1e-12));
        }
    }
    Parameters flat = base;
    flat.omega = 0.0;
    CHECK_FALSE(phi_curves(flat, 1.0, 1.0).phi4_defined);
}

TEST_CASE("phi band ordering") {
    PhiCurves phi;
    phi.phi3 = 1.0, phi.phi1 = 2.0, phi.phi2 = 3.0, phi.phi4 = 4.0;
    CHECK(phi_band(phi) == 1);
    phi.phi3 = -1.0;
    CHECK(phi_band(phi) == 2);
    phi.phi1 = -0.5;
    CHECK(phi_band(phi) == 3);
    phi.phi2 = -0.25;
    CHECK(phi_band(phi) == 4);
    phi.phi4 = -0.1;
    CHECK(phi_band(phi) == 5);
}

TEST_CASE("outcomes implied by attractor sets") {
    using A = Attractor;
    CHECK(outcome_from_attractors({A::E2}) == Outcome::Eradication);
    CHECK(outcome_from_attractors({A::E1}) == Outcome::Dominance);
    CHECK(outcome_from_attractors({A::Interior}) == Outcome::Coexistence);
    CHECK(outcome_from_attractors({A::Cycle}) == Outcome::Coexistence);
    CHECK(outcome_from_attractors({A::E2, A::Interior}) == Outcome::BistableEradication);
    CHECK(outcome_from_attractors({A::E1, A::Interior}) == Outcome::BistableDominance);
    CHECK(outcome_from_attractors({}) == Outcome::Unresolved);
}

TEST_CASE("region labels") {
    // phi1 > phi3 > 0 with an interior point: E2 and the interior both attract.
    const RegionLabel erad = classify_region(bistable_base(), 0.0, 1.0);
    CHECK(erad.phi.phi1 > erad.phi.phi3);
    CHECK(erad.phi.phi3 > 0.0);
    REQUIRE(erad.outcome.has_value());
    CHECK(*erad.outcome == Outcome::BistableEradication);

    const RegionLabel dom = classify_region(set_a(), 1.0, 1.0);
    CHECK(dom.phi.phi2 < 0.0);
    CHECK(dom.phi.phi4 < 0.0);
    REQUIRE(dom.outcome.has_value());
    CHECK(*dom.outcome == Outcome::Dominance);
    CHECK(dom.subregion == "S5");

    const RegionLabel none = classify_region(set_a(), 1.0, 0.0);
    CHECK(none.subregion == std::string(to_string(none.base_region)));
    REQUIRE(none.outcome.has_value());
    CHECK(*none.outcome == outcome_from_attractors(stable_attractors(set_a())));

    const RegionLabel edge = classify_region(set_a(), 1.0, 3.0);
    CHECK(edge.boundary);
    CHECK_FALSE(edge.outcome.has_value());
}

TEST_CASE("parallel atlas equals the serial reference") {
    const GridAxis a{0.0, 2.0, 12};
    const GridAxis x{0.0, 5.0, 12};
    const auto par = region_atlas(set_a(), a, x);
    const auto ser = region_atlas_serial(set_a(), a, x);
    REQUIRE(par.size() == 144);
    REQUIRE(ser.size() == 144);
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].alpha == ser[i].alpha);
        CHECK(par[i].xi == ser[i].xi);
        CHECK(par[i].label.subregion == ser[i].label.subregion);
        CHECK(par[i].label.outcome == ser[i].label.outcome);
        CHECK(par[i].label.stable_attractors == ser[i].label.stable_attractors);
    }
    CHECK(par[13].alpha == a.lo + (a.hi - a.lo) / 11.0);
    CHECK(par[13].xi == x.lo + (x.hi - x.lo) / 11.0);
}

TEST_CASE("cusp scan in a monostable rectangle counts one attractor everywhere") {
    Parameters base = set_a();
    base.xi = 0.5;
    const CuspMap map = cusp_scan(base, CuspPlane::AlphaEpsilon, {1.5, 2.0, 6}, {0.3, 0.6, 6});
    for (const auto& c : map.cells) CHECK(c.n_attractors == 1);
    CHECK(map.bistable_cells == 0);
    CHECK(map.bistable_components == 0);
    CHECK(map.boundary.empty());
    CHECK_THROWS_AS(cusp_scan(base, CuspPlane::AlphaEpsilon, {0.0, 1.0, 1}, {0.1, 0.2, 4}), InvalidInput);
}

TEST_CASE("cusp scan finds a bistable patch next to monostable cells") {
    const GridAxis xi{0.0, 2.0, 16};
    const GridAxis eps{0.01, 0.3, 16};
    const CuspMap par = cusp_scan(bistable_base(), CuspPlane::XiEpsilon, xi, eps);
    const CuspMap ser = cusp_scan_serial(bistable_base(), CuspPlane::XiEpsilon, xi, eps);
    CHECK(par.bistable_cells > 0);
    CHECK(par.bistable_cells < par.cells.size());
    CHECK(par.adjacent_monostable);
    CHECK(par.bistable_components >= 1);
    CHECK_FALSE(par.boundary.empty());
    REQUIRE(par.cells.size() == ser.cells.size());
    for (std::size_t i = 0; i < par.cells.size(); ++i) {
        CHECK(par.cells[i].n_attractors == ser.cells[i].n_attractors);
        CHECK(par.cells[i].component == ser.cells[i].component);
    }
    CHECK(par.bistable_area == ser.bistable_area);
}
