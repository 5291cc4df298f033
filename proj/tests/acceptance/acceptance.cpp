// Acceptance checks, one per criterion. Usage: acceptance <1..10>
// Prints exactly one PASS/FAIL line and exits 0 on PASS, 1 on FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "bazykin/bifurcation.hpp"
#include "bazykin/control.hpp"
#include "bazykin/equilibria.hpp"
#include "bazykin/simulate.hpp"
#include "support.hpp"

using namespace bazykin;
using namespace bazykin::testing;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    const char* name;
    double time_limit_s;
    std::function<Verdict()> check;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

bool has_prey_free(const Parameters& p) {
    for (const auto& e : boundary_equilibria(p)) {
        if (e.kind == EquilibriumKind::PreyFree) return true;
    }
    return false;
}

Verdict transcritical() {
    const double xs = transcritical_xi(set_a());
    const double below = jacobian(set_a(xs - 1e-3), {1.0, 0.0}).j22;
    const double above = jacobian(set_a(xs + 1e-3), {1.0, 0.0}).j22;
    const bool ok = std::abs(xs - 2.8) <= 1e-12 && below < 0.0 && above > 0.0;
    return {ok, "xi* = " + fmt("%.15g", xs) + ", E1 eigenvalue " + fmt("%.3g", below) + " -> " + fmt("%.3g", above)};
}

Verdict saddle_node() {
    const double xs = saddlenode_xi(set_a());
    const bool before = has_prey_free(set_a(xs - 1e-3));
    const bool after = has_prey_free(set_a(xs + 1e-3));
    const bool ok = std::abs(xs - 3.0) <= 1e-12 && !before && after;
    return {ok, "xi* = " + fmt("%.15g", xs) + ", E2 present below/above: " + (before ? "yes" : "no") + "/" +
                    (after ? "yes" : "no")};
}

Verdict hopf_window() {
    const Parameters p = set_b(0.024);
    const auto interior = interior_equilibria(p);
    std::string eps_part;
    bool eps_ok = false;
    if (interior.size() != 1) {
        eps_part = "expected one interior point at epsilon 0.024, found " + std::to_string(interior.size());
    } else {
        try {
            const auto found = hopf_epsilon(p, interior[0], 0.02, 0.04);
            if (found) {
                eps_ok = found->epsilon > 0.024 && found->epsilon < 0.03;
                eps_part = "epsilon* = " + fmt("%.6g", found->epsilon);
            } else {
                eps_part = "no admissible trace zero on the branch";
            }
        } catch (const NoHopfFound& e) {
            eps_part = std::string("no Hopf point: ") + e.what();
        }
    }
    const State s0{interior.empty() ? 1.0 : interior[0].location.x * 1.01,
                   interior.empty() ? 1.0 : interior[0].location.y * 1.01};
    const bool cycle_lo = detect_limit_cycle(integrate(set_b(0.024), s0, 2000.0, 0.01)).has_value();
    const bool cycle_hi = detect_limit_cycle(integrate(set_b(0.03), s0, 2000.0, 0.01)).has_value();
    const bool ok = eps_ok && cycle_lo && !cycle_hi;
    return {ok, eps_part + "; cycle at 0.024: " + (cycle_lo ? "yes" : "no") + ", at 0.03: " + (cycle_hi ? "yes" : "no")};
}

Verdict control_problem(ControlKind which, State start, State target, double reference_T) {
    ControlProblem prob;
    prob.which = which;
    prob.params = {8.0, 0.1, 0.1, 0.01, 0.01, 0.96, 0.3};
    prob.start = start;
    prob.target = target;

    std::ostringstream detail;
    bool tier1 = false;
    double best_gap = INFINITY;
    double best_T = NAN;
    double best_hi = NAN;
    for (double hi : {2.0, 4.0, 6.0, 8.0, 10.0}) {
        prob.u_max = hi;
        try {
            const ControlSolution sol = solve_time_optimal(prob);
            const PmpReport pmp = verify_pmp(prob, sol);
            const State end = resimulate_endpoint(prob, sol);
            const double resim = std::hypot(end.x - target.x, end.y - target.y);
            const bool t1 = sol.report.endpoint_error < 1e-6 && pmp.consistency >= 0.95 && resim < 1e-6;
            if (hi == 2.0) {
                tier1 = t1;
                detail << "tier 1 at [0, 2]: endpoint " << sol.report.endpoint_error << ", PMP "
                       << pmp.consistency << ", resim " << resim << "; ";
            }
            const double gap = std::abs(sol.total_T - reference_T) / reference_T;
            if (gap < best_gap) {
                best_gap = gap;
                best_T = sol.total_T;
                best_hi = hi;
            }
        } catch (const NoConvergence& e) {
            if (hi == 2.0) {
                detail << "tier 1 at [0, 2]: no convergence (smallest violation " << e.best_residual() << "); ";
            } else {
                detail << "[0, " << hi << "] no convergence (" << e.best_residual() << "); ";
            }
        }
    }
    const bool tier2 = best_gap <= 0.15;
    if (std::isfinite(best_gap)) {
        detail << "tier 2 best T = " << best_T << " at [0, " << best_hi << "] vs " << reference_T;
    } else {
        detail << "tier 2: no bound choice reached the target";
    }
    return {tier1 && tier2, detail.str()};
}

Verdict boundedness() {
    std::mt19937_64 rng(601);
    double worst = -INFINITY;
    for (int i = 0; i < 100; ++i) {
        const Parameters p = random_parameters(rng);
        const State s0 = random_state(rng, 2.0 * p.gamma, 10.0);
        const BoundConstant b = bound_constant(p, 1.0);
        const double w0 = s0.x + s0.y / p.delta;
        double sup = 0.0;
        for (const State& s : integrate(p, s0, 200.0, 0.01).states) sup = std::max(sup, s.x + s.y / p.delta);
        worst = std::max(worst, sup - std::max(w0, b.ultimate_bound));
    }
    return {worst <= 1e-6, "max of sup W - max(W0, M/k) over 100 runs = " + fmt("%.3g", worst)};
}

Verdict quintic() {
    std::mt19937_64 rng(701);
    double worst_field = 0.0, worst_null = 0.0;
    int points = 0;
    bool reduces = true;
    for (int i = 0; i < 1000; ++i) {
        Parameters p = random_parameters(rng);
        for (const Equilibrium& e : interior_equilibria(p)) {
            const Rates r = vector_field(p, e.location);
            worst_field = std::max(worst_field, std::hypot(r.dx, r.dy));
            worst_null = std::max({worst_null, std::abs(prey_nullcline_residual(p, e.location)),
                                   std::abs(predator_nullcline_residual(p, e.location))});
            ++points;
        }
        p.epsilon = 0.0;
        const double phi1 = p.food_surplus();
        const std::array<double, 6> quad{0.0, 0.0, 0.0, p.omega * phi1, p.delta - p.m, phi1};
        reduces = reduces && quintic_coefficients(p).c == quad;
    }
    const bool ok = worst_field < 1e-8 && worst_null < 1e-8 && reduces;
    return {ok, std::to_string(points) + " interior points, max field residual " + fmt("%.3g", worst_field) +
                    ", max nullcline residual " + fmt("%.3g", worst_null) + ", epsilon = 0 reduction " +
                    (reduces ? "exact" : "differs")};
}

Verdict derivative_oracles() {
    std::mt19937_64 rng(801);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    double worst_j = 0.0, worst_adj = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Parameters p = random_parameters(rng);
        const State s = random_state(rng, 2.0 * p.gamma, 10.0);
        const double hx = 1e-6 * std::max(1.0, s.x), hy = 1e-6 * std::max(1.0, s.y);

        const Jacobian2 j = jacobian(p, s);
        const Rates xp = vector_field(p, {s.x + hx, s.y}), xm = vector_field(p, {s.x - hx, s.y});
        const Rates yp = vector_field(p, {s.x, s.y + hy}), ym = vector_field(p, {s.x, s.y - hy});
        const double fd[4] = {(xp.dx - xm.dx) / (2 * hx), (yp.dx - ym.dx) / (2 * hy), (xp.dy - xm.dy) / (2 * hx),
                              (yp.dy - ym.dy) / (2 * hy)};
        const double an[4] = {j.j11, j.j12, j.j21, j.j22};
        const double js = std::max({1.0, std::abs(an[0]), std::abs(an[1]), std::abs(an[2]), std::abs(an[3])});
        for (int k = 0; k < 4; ++k) worst_j = std::max(worst_j, std::abs(fd[k] - an[k]) / js);

        const Costate c{n(rng), n(rng)};
        const double ctl = u(rng);
        for (ControlKind which : {ControlKind::Quality, ControlKind::Quantity}) {
            const Costate a = adjoint_rhs(p, s, c, ctl, which);
            const auto H = [&](double x, double y) { return hamiltonian(p, {x, y}, c, ctl, which); };
            const double fx = -(H(s.x + hx, s.y) - H(s.x - hx, s.y)) / (2 * hx);
            const double fy = -(H(s.x, s.y + hy) - H(s.x, s.y - hy)) / (2 * hy);
            const double as = std::max({1.0, std::abs(a.p), std::abs(a.q)});
            worst_adj = std::max({worst_adj, std::abs(a.p - fx) / as, std::abs(a.q - fy) / as});
        }
    }
    const bool ok = worst_j <= 1e-6 && worst_adj <= 1e-6;
    return {ok, "max relative error: Jacobian " + fmt("%.3g", worst_j) + ", adjoint " + fmt("%.3g", worst_adj)};
}

// Outcome read directly off the equilibria: attracting iff Tr < 0 < Det.
Outcome direct_outcome(const Parameters& p, bool has_cycle) {
    bool e1 = false, e2 = false, interior = has_cycle;
    for (const Equilibrium& e : all_equilibria(p)) {
        const Jacobian2 j = jacobian(p, e.location);
        if (!(j.trace() < 0.0 && j.det() > 0.0)) continue;
        e1 = e1 || e.kind == EquilibriumKind::PredatorFree;
        e2 = e2 || e.kind == EquilibriumKind::PreyFree;
        interior = interior || e.kind == EquilibriumKind::Interior;
    }
    if (interior && e2) return Outcome::BistableEradication;
    if (interior && e1) return Outcome::BistableDominance;
    if (interior) return Outcome::Coexistence;
    if (e2) return Outcome::Eradication;
    if (e1) return Outcome::Dominance;
    return Outcome::Unresolved;
}

Verdict atlas_consistency() {
    const Parameters base = set_a();
    const auto cells = region_atlas(base, {0.0, 2.0, 100}, {0.0, 5.0, 100});
    int contradictions = 0, labelled = 0, boundary = 0;
    for (const RegionCell& c : cells) {
        if (c.label.boundary || !c.label.outcome) {
            ++boundary;
            continue;
        }
        ++labelled;
        Parameters p = base;
        p.alpha = c.alpha;
        p.xi = c.xi;
        const bool cycle = std::find(c.label.stable_attractors.begin(), c.label.stable_attractors.end(),
                                     Attractor::Cycle) != c.label.stable_attractors.end();
        if (direct_outcome(p, cycle) != *c.label.outcome) ++contradictions;
    }
    return {contradictions == 0 && labelled > 0, std::to_string(labelled) + " labelled cells, " +
                                                    std::to_string(boundary) + " on boundaries, " +
                                                    std::to_string(contradictions) + " contradictions"};
}

Verdict cusp() {
    const Parameters base{0.6545, 0.1, 1.0, 0.1, 0.1, 0.6, 0.2};
    std::ostringstream detail;
    bool ok = true;
    for (const auto& [plane, hi] : {std::pair{CuspPlane::AlphaEpsilon, 1.0}, std::pair{CuspPlane::XiEpsilon, 2.0}}) {
        const CuspMap coarse = cusp_scan(base, plane, {0.0, hi, 40}, {0.01, 1.0, 40});
        const CuspMap fine = cusp_scan(base, plane, {0.0, hi, 80}, {0.01, 1.0, 80});
        const double change = coarse.bistable_area > 0.0
                                  ? std::abs(fine.bistable_area - coarse.bistable_area) / coarse.bistable_area
                                  : INFINITY;
        const bool plane_ok = coarse.bistable_cells > 0 && coarse.adjacent_monostable && fine.bistable_cells > 0 &&
                              change < 0.05;
        ok = ok && plane_ok;
        detail << to_string(plane) << ": bistable cells " << coarse.bistable_cells << "/" << coarse.cells.size()
               << " -> " << fine.bistable_cells << "/" << fine.cells.size() << ", area change "
               << (std::isfinite(change) ? fmt("%.3g", change) : std::string("n/a")) << "; ";
    }
    return {ok, detail.str()};
}

const Criterion kCriteria[] = {
    {"transcritical value", 1.0, transcritical},
    {"saddle-node value", 1.0, saddle_node},
    {"Hopf window", 60.0, hopf_window},
    {"control problem A",
     300.0,
     [] { return control_problem(ControlKind::Quality, {4.0, 2.0}, {1.0, 3.0}, 2.97); }},
    {"control problem B",
     300.0,
     [] { return control_problem(ControlKind::Quantity, {5.0, 2.0}, {1.0, 4.0}, 1.62); }},
    {"boundedness", 120.0, boundedness},
    {"quintic correctness", 60.0, quintic},
    {"derivative oracles", 30.0, derivative_oracles},
    {"region atlas consistency", 120.0, atlas_consistency},
    {"cusp scan", 300.0, cusp},
};

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 0;
    if (n < 1 || n > 10) {
        std::fprintf(stderr, "usage: acceptance <1..10>\n");
        return 2;
    }
    const Criterion& c = kCriteria[n - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = c.check();
    } catch (const std::exception& e) {
        v = {false, std::string("unexpected error: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = elapsed < c.time_limit_s;
    const bool pass = v.pass && in_time;
    std::printf("ACCEPTANCE %2d %s  %s: %s [%.2f s of %.0f s]\n", n, pass ? "PASS" : "FAIL", c.name, v.detail.c_str(),
                elapsed, c.time_limit_s);
    return pass ? 0 : 1;
}
