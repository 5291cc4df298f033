#include "bazykin/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

#include "bazykin/errors.hpp"
#include "bazykin/sweep.hpp"

namespace bazykin {

std::string_view to_string(BifurcationKind kind) noexcept {
    switch (kind) {
        case BifurcationKind::Transcritical: return "transcritical";
        case BifurcationKind::SaddleNode: return "saddle_node";
        case BifurcationKind::Hopf: return "hopf";
    }
    return "unknown";
}

std::string_view to_string(HopfCriticality c) noexcept {
    switch (c) {
        case HopfCriticality::Supercritical: return "supercritical";
        case HopfCriticality::Subcritical: return "subcritical";
        case HopfCriticality::Undetermined: return "undetermined";
    }
    return "unknown";
}

std::string_view to_string(BaseRegion r) noexcept {
    switch (r) {
        case BaseRegion::R1: return "R1";
        case BaseRegion::R2: return "R2";
        case BaseRegion::R3: return "R3";
    }
    return "unknown";
}

std::string_view to_string(Attractor a) noexcept {
    switch (a) {
        case Attractor::E1: return "E1";
        case Attractor::E2: return "E2";
        case Attractor::Interior: return "interior";
        case Attractor::Cycle: return "cycle";
    }
    return "unknown";
}

std::string_view to_string(Outcome o) noexcept {
    switch (o) {
        case Outcome::Eradication: return "eradication";
        case Outcome::Dominance: return "dominance";
        case Outcome::Coexistence: return "coexistence";
        case Outcome::BistableEradication: return "bistable_eradication";
        case Outcome::BistableDominance: return "bistable_dominance";
        case Outcome::Unresolved: return "unresolved";
    }
    return "unknown";
}

std::string_view to_string(CuspPlane plane) noexcept {
    return plane == CuspPlane::AlphaEpsilon ? "alpha_epsilon" : "xi_epsilon";
}

// ---------------------------------------------------------------------------
// Closed-form critical values

double transcritical_xi(const Parameters& p) {
    require_valid(p);
    const double wg = p.omega * p.gamma * p.gamma + 1.0;
    const double denom = p.delta - p.m * p.alpha;
    if (std::abs(denom) <= kZeroTol) throw DegenerateParameter("transcritical xi*: delta == m alpha");
    if (std::abs((1.0 - p.alpha) * p.gamma + wg) <= kZeroTol) {
        throw DegenerateParameter("transcritical xi*: (1 - alpha) gamma + omega gamma^2 + 1 == 0");
    }
    return (p.m * (wg + p.gamma) - p.delta * p.gamma) / (denom * wg);
}

double saddlenode_xi(const Parameters& p) {
    require_valid(p);
    const double denom = p.delta - p.m * p.alpha;
    if (std::abs(denom) <= kZeroTol) throw DegenerateParameter("saddle-node xi*: delta == m alpha");
    return p.m / denom;
}

// ---------------------------------------------------------------------------
// Sotomayor quantities

namespace {

using Vec2 = std::array<double, 2>;

Vec2 apply(const Jacobian2& J, const Vec2& v) {
    return {J.j11 * v[0] + J.j12 * v[1], J.j21 * v[0] + J.j22 * v[1]};
}

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

// Unit null vector of [[a, b], [c, d]], oriented so its first significant
// component is positive.
Vec2 null_vector(double a, double b, double c, double d) {
    Vec2 v1{b, -a};
    Vec2 v2{d, -c};
    Vec2 v = (std::hypot(v1[0], v1[1]) >= std::hypot(v2[0], v2[1])) ? v1 : v2;
    double n = std::hypot(v[0], v[1]);
    if (n < 1e-300) {
        // Both rows vanish: every direction is null.
        v = {1.0, 0.0};
        n = 1.0;
    }
    v[0] /= n;
    v[1] /= n;
    const double lead = (std::abs(v[0]) > 1e-12) ? v[0] : v[1];
    if (lead < 0.0) {
        v[0] = -v[0];
        v[1] = -v[1];
    }
    return {v[0] + 0.0, v[1] + 0.0};  // no negative zeros
}

}  // namespace

SotomayorReport sotomayor_quantities(const Parameters& p, BifurcationKind which, std::optional<double> xi_override) {
    require_valid(p);
    if (which == BifurcationKind::Hopf) throw InvalidInput("Sotomayor quantities apply to transcritical/saddle-node");

    Parameters q = p;
    q.xi = xi_override ? *xi_override : (which == BifurcationKind::Transcritical ? transcritical_xi(p) : saddlenode_xi(p));
    if (!std::isfinite(q.xi) || q.xi < 0.0) throw DegenerateParameter("critical xi is negative or non-finite");

    SotomayorReport r;
    r.xi = q.xi;
    if (which == BifurcationKind::Transcritical) {
        r.at = {q.gamma, 0.0};
    } else {
        const double y = (q.epsilon > kZeroTol) ? q.food_surplus() / (q.epsilon * q.food_factor()) : 0.0;
        r.at = {0.0, std::abs(y) <= kZeroTol ? 0.0 : y};
    }

    const Jacobian2 J = jacobian(q, r.at);
    const double tr = J.trace();
    const double disc = tr * tr - 4.0 * J.det();
    if (disc < 0.0) throw DegenerateParameter("Jacobian has complex eigenvalues; no real null direction");
    const double s = std::sqrt(disc);
    const double l1 = 0.5 * (tr - s);
    const double l2 = 0.5 * (tr + s);
    const double lambda = (std::abs(l1) <= std::abs(l2)) ? l1 : l2;
    r.critical_eigenvalue = lambda;

    r.V = null_vector(J.j11 - lambda, J.j12, J.j21, J.j22 - lambda);
    r.W = null_vector(J.j11 - lambda, J.j21, J.j12, J.j22 - lambda);
    if (!std::isfinite(r.V[0] + r.V[1] + r.W[0] + r.W[1])) {
        throw DegenerateParameter("null vector normalization failed");
    }

    const Rates hxi = vector_field_dxi(q, r.at);
    r.wT_Hxi = dot(r.W, {hxi.dx, hxi.dy});

    const double hx = 1e-6 * std::max(1.0, q.xi);
    Parameters qp = q, qm = q;
    qp.xi += hx;
    qm.xi -= hx;
    const Jacobian2 Jp = jacobian(qp, r.at);
    const Jacobian2 Jm = jacobian(qm, r.at);
    const Vec2 dV = apply({(Jp.j11 - Jm.j11) / (2 * hx), (Jp.j12 - Jm.j12) / (2 * hx), (Jp.j21 - Jm.j21) / (2 * hx),
                           (Jp.j22 - Jm.j22) / (2 * hx)},
                          r.V);
    r.wT_DHxiV = dot(r.W, dV);

    const double hs = 1e-5 * std::max(1.0, std::hypot(r.at.x, r.at.y));
    const Jacobian2 Ja = jacobian(q, {r.at.x + hs * r.V[0], r.at.y + hs * r.V[1]});
    const Jacobian2 Jb = jacobian(q, {r.at.x - hs * r.V[0], r.at.y - hs * r.V[1]});
    const Vec2 d2 = apply({(Ja.j11 - Jb.j11) / (2 * hs), (Ja.j12 - Jb.j12) / (2 * hs), (Ja.j21 - Jb.j21) / (2 * hs),
                           (Ja.j22 - Jb.j22) / (2 * hs)},
                          r.V);
    r.wT_D2HVV = dot(r.W, d2);

    constexpr double zero = 1e-8;
    const bool h0 = std::abs(r.wT_Hxi) <= zero;
    const bool dh0 = std::abs(r.wT_DHxiV) <= zero;
    const bool d20 = std::abs(r.wT_D2HVV) <= zero;
    r.transcritical_pattern = h0 && !dh0 && !d20;
    r.saddlenode_pattern = !h0 && !d20;
    r.nondegenerate = (which == BifurcationKind::Transcritical) ? r.transcritical_pattern : r.saddlenode_pattern;
    return r;
}

// ---------------------------------------------------------------------------
// Hopf

double hopf_epsilon_at(const Parameters& p, State s) noexcept {
    const double x = s.x;
    const double y = s.y;
    const double A = p.food_factor();
    const double D = x + (p.omega * x * x + 1.0) * A;
    return (1.0 / y) * (1.0 - x / p.gamma) * (x + 2.0 * p.omega * x * x * A) / D - x / (p.gamma * y);
}

double determinant_epsilon_bound(const Parameters& p, State s) noexcept {
    const double x = s.x;
    const double A = p.food_factor();
    return (p.delta - p.m + 2.0 * p.omega * x * p.food_surplus()) / (2.0 * s.y * (2.0 * p.omega * x * A + 1.0));
}

namespace {

struct BranchPoint {
    double eps = 0.0;
    Equilibrium eq;
};

Parameters with_epsilon(Parameters p, double eps) {
    p.epsilon = eps;
    return p;
}

// Interior equilibrium at eps nearest to `guess`, or nullopt when none lies
// within `radius`.
std::optional<Equilibrium> nearest_interior(const Parameters& p, double eps, State guess, double radius) {
    std::optional<Equilibrium> best;
    double best_d = radius;
    for (const Equilibrium& e : interior_equilibria(with_epsilon(p, eps))) {
        const double d = std::hypot(e.location.x - guess.x, e.location.y - guess.y);
        if (d <= best_d) {
            best_d = d;
            best = e;
        }
    }
    return best;
}

// Follows the branch from `start` to `target` in steps no larger than h_max;
// stops where the branch folds.
std::vector<BranchPoint> follow_branch(const Parameters& p, BranchPoint start, double target, double h_max) {
    std::vector<BranchPoint> out{start};
    const double dir = (target >= start.eps) ? 1.0 : -1.0;
    double h = h_max;
    const double h_min = h_max * 1e-4;
    State prev_delta{0.0, 0.0};
    while ((target - out.back().eps) * dir > 1e-15) {
        const BranchPoint& cur = out.back();
        const double step = std::min(h, std::abs(target - cur.eps));
        const double eps = cur.eps + dir * step;
        const State guess{cur.eq.location.x + prev_delta.x * step / h_max,
                          cur.eq.location.y + prev_delta.y * step / h_max};
        const double scale = std::max({1.0, std::abs(cur.eq.location.x), std::abs(cur.eq.location.y)});
        const double radius = 0.05 * scale + 4.0 * std::hypot(prev_delta.x, prev_delta.y) * step / h_max;
        auto next = nearest_interior(p, eps, guess, radius);
        if (!next) {
            h *= 0.5;
            if (h < h_min) break;  // fold: the branch ends here
            continue;
        }
        prev_delta = {(next->location.x - cur.eq.location.x) * h_max / step,
                      (next->location.y - cur.eq.location.y) * h_max / step};
        out.push_back({eps, *next});
        h = std::min(h_max, h * 2.0);
    }
    return out;
}

double trace_at(const Parameters& p, const BranchPoint& b) {
    return jacobian(with_epsilon(p, b.eps), b.eq.location).trace();
}

}  // namespace

std::optional<HopfResult> hopf_epsilon(const Parameters& p, const Equilibrium& interior, double eps_lo, double eps_hi) {
    require_valid(p);
    if (interior.kind != EquilibriumKind::Interior) throw InvalidInput("hopf_epsilon needs an interior equilibrium");
    if (!(eps_lo >= 0.0) || !(eps_hi > eps_lo)) throw InvalidInput("hopf_epsilon bracket must satisfy 0 <= lo < hi");

    const double h_max = (eps_hi - eps_lo) / 400.0;
    const BranchPoint start{p.epsilon, interior};
    auto down = follow_branch(p, start, eps_lo, h_max);
    auto up = follow_branch(p, start, eps_hi, h_max);
    std::reverse(down.begin(), down.end());
    down.insert(down.end(), up.begin() + 1, up.end());

    std::vector<BranchPoint> branch;
    for (auto& b : down) {
        if (b.eps >= eps_lo - 1e-15 && b.eps <= eps_hi + 1e-15) branch.push_back(std::move(b));
    }

    bool sign_change = false;
    for (std::size_t i = 0; i + 1 < branch.size(); ++i) {
        const double ta = trace_at(p, branch[i]);
        const double tb = trace_at(p, branch[i + 1]);
        if ((ta < 0.0) == (tb < 0.0) && ta != 0.0 && tb != 0.0) continue;
        sign_change = true;

        BranchPoint a = branch[i];
        BranchPoint b = branch[i + 1];
        double fa = ta;
        BranchPoint mid = (std::abs(ta) <= std::abs(tb)) ? a : b;
        double fm = std::min(std::abs(ta), std::abs(tb));
        for (int it = 0; it < 200 && fm >= 1e-8 * 1e-3; ++it) {
            const double eps = 0.5 * (a.eps + b.eps);
            const State guess{0.5 * (a.eq.location.x + b.eq.location.x), 0.5 * (a.eq.location.y + b.eq.location.y)};
            const double radius = std::hypot(a.eq.location.x - b.eq.location.x, a.eq.location.y - b.eq.location.y) + 1e-9;
            auto e = nearest_interior(p, eps, guess, radius);
            if (!e) break;
            mid = {eps, *e};
            const double f = trace_at(p, mid);
            fm = std::abs(f);
            if (f == 0.0 || b.eps - a.eps < 1e-16) break;
            if ((f < 0.0) == (fa < 0.0)) {
                a = mid;
                fa = f;
            } else {
                b = mid;
            }
        }

        const Parameters q = with_epsilon(p, mid.eps);
        const Jacobian2 J = jacobian(q, mid.eq.location);
        HopfResult res;
        res.epsilon = mid.eps;
        res.equilibrium = mid.eq;
        res.trace = J.trace();
        res.det = J.det();
        res.x_differs_from_inv_sqrt_omega =
            p.omega <= 0.0 || std::abs(mid.eq.location.x - 1.0 / std::sqrt(p.omega)) > 1e-9;

        const double hd = 1e-6 * std::max(1e-3, mid.eps);
        const auto ep = nearest_interior(p, mid.eps + hd, mid.eq.location, 1e-2 * std::max(1.0, mid.eq.location.x));
        const auto em = nearest_interior(p, mid.eps - hd, mid.eq.location, 1e-2 * std::max(1.0, mid.eq.location.x));
        if (ep && em) {
            res.dtrace_depsilon =
                (jacobian(with_epsilon(p, mid.eps + hd), ep->location).trace() -
                 jacobian(with_epsilon(p, mid.eps - hd), em->location).trace()) / (2.0 * hd);
        }

        if (std::abs(res.trace) < 1e-8 && res.det > 0.0 && res.x_differs_from_inv_sqrt_omega) return res;
    }
    if (!sign_change) {
        std::ostringstream msg;
        msg << "trace of the Jacobian does not change sign along the interior branch over epsilon in [" << eps_lo
            << ", " << eps_hi << "]";
        if (!branch.empty()) {
            msg << " (followed " << branch.size() << " points from " << branch.front().eps << " to "
                << branch.back().eps << ")";
        }
        throw NoHopfFound(msg.str());
    }
    return std::nullopt;
}

CriticalityReport hopf_criticality(const Parameters& p, const HopfResult& hopf, double offset,
                                   const SimulationSettings& sim) {
    if (!(offset > 0.0)) throw InvalidInput("criticality offset must be positive");
    CriticalityReport rep;
    const bool unstable_below = hopf.dtrace_depsilon < 0.0;
    rep.eps_unstable_side = unstable_below ? hopf.epsilon - offset : hopf.epsilon + offset;
    rep.eps_stable_side = unstable_below ? hopf.epsilon + offset : hopf.epsilon - offset;

    const auto probe = [&](double eps, double& distance) -> std::optional<CycleInfo> {
        const Parameters q = with_epsilon(p, eps);
        const auto e = nearest_interior(p, eps, hopf.equilibrium.location, 0.5 * std::max(1.0, hopf.equilibrium.location.x));
        const State centre = e ? e->location : hopf.equilibrium.location;
        const State seed{centre.x * 1.01, centre.y * 1.01};
        try {
            const Trajectory traj = integrate(q, seed, sim.t_end, sim.dt);
            distance = std::hypot(traj.back().x - centre.x, traj.back().y - centre.y);
            return detect_limit_cycle(traj, sim.transient_fraction);
        } catch (const Error&) {
            distance = std::numeric_limits<double>::infinity();
            return std::nullopt;
        }
    };
    double unused = 0.0;
    rep.cycle_unstable_side = probe(rep.eps_unstable_side, unused);
    rep.cycle_stable_side = probe(rep.eps_stable_side, rep.stable_side_distance);

    if (rep.cycle_unstable_side && !rep.cycle_stable_side) {
        rep.criticality = HopfCriticality::Supercritical;
    } else if (!rep.cycle_unstable_side && !rep.cycle_stable_side) {
        rep.criticality = HopfCriticality::Subcritical;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Regions

PhiCurves phi_curves(const Parameters& p_base, double alpha, double xi) {
    Parameters q = p_base;
    q.alpha = alpha;
    q.xi = xi;
    require_valid(q);
    PhiCurves phi;
    const double A = q.food_factor();
    phi.phi1 = q.food_surplus();
    phi.phi2 = phi.phi1 + (q.delta - q.m) * q.gamma / (q.omega * q.gamma * q.gamma + 1.0);
    phi.phi3 = phi.phi1 - q.epsilon * A * A;
    if (q.omega > 0.0) {
        phi.phi4 = phi.phi1 + (q.delta - q.m) / (2.0 * std::sqrt(q.omega));
    } else {
        phi.phi4 = std::numeric_limits<double>::infinity();
        phi.phi4_defined = false;
    }
    return phi;
}

int phi_band(const PhiCurves& phi) noexcept {
    if (phi.phi3 > 0.0) return 1;
    if (phi.phi1 > 0.0) return 2;
    if (phi.phi2 > 0.0) return 3;
    if (phi.phi4 > 0.0) return 4;
    return 5;
}

namespace {

bool contains(const std::vector<Attractor>& v, Attractor a) { return std::find(v.begin(), v.end(), a) != v.end(); }

std::string sign_vector(const PhiCurves& phi) {
    std::string s = "S[";
    for (double v : {phi.phi1, phi.phi2, phi.phi3, phi.phi4}) s += (v > 0.0 ? '+' : '-');
    return s + "]";
}

// The sign vector is one of the five monotone patterns exactly when the
// chain phi3 <= phi1 <= phi2 <= phi4 holds (delta > m).
bool monotone(const PhiCurves& phi) {
    const int band = phi_band(phi);
    const bool s1 = phi.phi1 > 0, s2 = phi.phi2 > 0, s3 = phi.phi3 > 0, s4 = phi.phi4 > 0;
    switch (band) {
        case 1: return s1 && s2 && s3 && s4;
        case 2: return s1 && s2 && !s3 && s4;
        case 3: return !s1 && s2 && !s3 && s4;
        case 4: return !s1 && !s2 && !s3 && s4;
        default: return !s1 && !s2 && !s3 && !s4;
    }
}

std::string alias_for(BaseRegion base, int band) {
    const int row = static_cast<int>(base) + 1;
    int col = band;
    if (base == BaseRegion::R1) col = (band <= 2) ? band : band - 1;  // S2 and S3 merge into A12
    return "A" + std::to_string(row) + std::to_string(col);
}

}  // namespace

Outcome outcome_from_attractors(const std::vector<Attractor>& attractors) noexcept {
    const bool interior = contains(attractors, Attractor::Interior) || contains(attractors, Attractor::Cycle);
    if (contains(attractors, Attractor::E2)) return interior ? Outcome::BistableEradication : Outcome::Eradication;
    if (contains(attractors, Attractor::E1)) return interior ? Outcome::BistableDominance : Outcome::Dominance;
    if (interior) return Outcome::Coexistence;
    return Outcome::Unresolved;
}

std::vector<Attractor> stable_attractors(const Parameters& p, const CycleProbe& probe) {
    std::vector<Attractor> out;
    for (const Equilibrium& e : boundary_equilibria(p)) {
        if (!is_attracting(e.stability)) continue;
        if (e.kind == EquilibriumKind::PredatorFree) out.push_back(Attractor::E1);
        if (e.kind == EquilibriumKind::PreyFree) out.push_back(Attractor::E2);
    }
    const auto interior = interior_equilibria(p);
    bool stable_interior = false;
    bool cycle = false;
    for (const Equilibrium& e : interior) {
        if (is_attracting(e.stability)) stable_interior = true;
    }
    for (const Equilibrium& e : interior) {
        if (cycle) break;
        if (e.stability != Stability::UnstableFocus && e.stability != Stability::UnstableNode) continue;
        const State seed{e.location.x * probe.seed_scale, e.location.y * probe.seed_scale};
        try {
            const Trajectory traj = integrate(p, seed, probe.sim.t_end, probe.sim.dt);
            cycle = detect_limit_cycle(traj, probe.sim.transient_fraction).has_value();
        } catch (const Error&) {
            // an unresolvable probe contributes no cycle
        }
    }
    if (stable_interior) {
        // With two attracting interior points the count still reflects both.
        for (const Equilibrium& e : interior) {
            if (is_attracting(e.stability)) out.push_back(Attractor::Interior);
        }
    }
    if (cycle) out.push_back(Attractor::Cycle);
    return out;
}

BaseRegion base_region(const Parameters& p_base) {
    Parameters q = p_base;
    q.xi = 0.0;
    const auto interior = interior_equilibria(q);
    if (interior.empty()) return BaseRegion::R1;
    for (const Equilibrium& e : interior) {
        if (is_attracting(e.stability)) return BaseRegion::R3;
    }
    return BaseRegion::R2;
}

RegionLabel classify_region(const Parameters& p_base, double alpha, double xi, const CycleProbe& probe) {
    RegionLabel label;
    label.phi = phi_curves(p_base, alpha, xi);
    label.base_region = base_region(p_base);

    Parameters q = p_base;
    q.alpha = alpha;
    q.xi = xi;
    if (xi == 0.0) {
        label.subregion = std::string(to_string(label.base_region));
        label.alias = label.subregion;
    } else if (monotone(label.phi)) {
        const int band = phi_band(label.phi);
        label.subregion = "S" + std::to_string(band);
        label.alias = alias_for(label.base_region, band);
    } else {
        label.subregion = sign_vector(label.phi);
    }

    const auto near = [](double v) { return std::abs(v) < kPhiBoundaryTol; };
    label.boundary = near(label.phi.phi1) || near(label.phi.phi2) || near(label.phi.phi3) ||
                     (label.phi.phi4_defined && near(label.phi.phi4));
    label.stable_attractors = stable_attractors(q, probe);
    if (!label.boundary) label.outcome = outcome_from_attractors(label.stable_attractors);
    return label;
}

namespace {

template <bool Parallel>
std::vector<RegionCell> atlas_impl(const Parameters& p_base, const GridAxis& alpha, const GridAxis& xi,
                                   const CycleProbe& probe) {
    const auto as = linspace(alpha.lo, alpha.hi, alpha.n);
    const auto xs = linspace(xi.lo, xi.hi, xi.n);
    // The base region is shared by all cells.
    (void)base_region(p_base);
    const auto cell = [&](std::size_t idx) {
        RegionCell c;
        c.alpha = as[idx / xs.size()];
        c.xi = xs[idx % xs.size()];
        c.label = classify_region(p_base, c.alpha, c.xi, probe);
        return c;
    };
    const std::size_t n = as.size() * xs.size();
    if constexpr (Parallel) {
        return parallel_map<RegionCell>(n, cell);
    } else {
        return serial_map<RegionCell>(n, cell);
    }
}

void label_components(CuspMap& map) {
    const std::size_t nu = map.u_axis.n;
    const std::size_t ne = map.eps_axis.n;
    std::vector<std::size_t> sizes;
    for (std::size_t start = 0; start < map.cells.size(); ++start) {
        if (map.cells[start].n_attractors < 2 || map.cells[start].component >= 0) continue;
        const int id = static_cast<int>(sizes.size());
        std::size_t size = 0;
        std::queue<std::size_t> todo;
        todo.push(start);
        map.cells[start].component = id;
        while (!todo.empty()) {
            const std::size_t k = todo.front();
            todo.pop();
            ++size;
            const std::size_t i = k / ne;
            const std::size_t j = k % ne;
            const auto visit = [&](std::size_t ii, std::size_t jj) {
                const std::size_t kk = ii * ne + jj;
                if (map.cells[kk].n_attractors >= 2 && map.cells[kk].component < 0) {
                    map.cells[kk].component = id;
                    todo.push(kk);
                }
            };
            if (i > 0) visit(i - 1, j);
            if (i + 1 < nu) visit(i + 1, j);
            if (j > 0) visit(i, j - 1);
            if (j + 1 < ne) visit(i, j + 1);
        }
        sizes.push_back(size);
    }
    map.bistable_components = static_cast<int>(sizes.size());
    if (!sizes.empty()) {
        map.largest_component =
            static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    }
}

void trace_boundary(CuspMap& map, const std::vector<double>& us, const std::vector<double>& es) {
    const std::size_t nu = us.size();
    const std::size_t ne = es.size();
    const auto bist = [&](std::size_t i, std::size_t j) { return map.cells[i * ne + j].n_attractors >= 2; };
    const auto mid_u = [&](std::size_t i) { return 0.5 * (us[i] + us[i + 1]); };
    const auto mid_e = [&](std::size_t j) { return 0.5 * (es[j] + es[j + 1]); };
    const auto lo_u = [&](std::size_t i) { return i == 0 ? us[0] : mid_u(i - 1); };
    const auto hi_u = [&](std::size_t i) { return i + 1 == nu ? us[nu - 1] : mid_u(i); };
    const auto lo_e = [&](std::size_t j) { return j == 0 ? es[0] : mid_e(j - 1); };
    const auto hi_e = [&](std::size_t j) { return j + 1 == ne ? es[ne - 1] : mid_e(j); };

    using Seg = std::pair<Point2, Point2>;
    std::vector<Seg> segs;
    for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < ne; ++j) {
            if (i + 1 < nu && bist(i, j) != bist(i + 1, j)) {
                segs.push_back({{mid_u(i), lo_e(j)}, {mid_u(i), hi_e(j)}});
            }
            if (j + 1 < ne && bist(i, j) != bist(i, j + 1)) {
                segs.push_back({{lo_u(i), mid_e(j)}, {hi_u(i), mid_e(j)}});
            }
        }
    }
    if (!segs.empty()) map.adjacent_monostable = true;

    // Chain segments sharing endpoints into polylines.
    const auto key = [](const Point2& p) { return std::make_pair(p.u, p.epsilon); };
    std::multimap<std::pair<double, double>, std::size_t> ends;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        ends.emplace(key(segs[s].first), s);
        ends.emplace(key(segs[s].second), s);
    }
    std::vector<bool> used(segs.size(), false);
    const auto take_next = [&](const Point2& at) -> std::optional<Point2> {
        auto [lo, hi] = ends.equal_range(key(at));
        for (auto it = lo; it != hi; ++it) {
            const std::size_t s = it->second;
            if (used[s]) continue;
            used[s] = true;
            return (key(segs[s].first) == key(at)) ? segs[s].second : segs[s].first;
        }
        return std::nullopt;
    };
    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (used[s]) continue;
        used[s] = true;
        std::vector<Point2> line{segs[s].first, segs[s].second};
        while (auto nxt = take_next(line.back())) line.push_back(*nxt);
        std::vector<Point2> head;
        while (auto prv = take_next(line.front())) {
            line.insert(line.begin(), *prv);
        }
        map.boundary.push_back(std::move(line));
    }
}

template <bool Parallel>
CuspMap cusp_impl(const Parameters& p_base, CuspPlane plane, const GridAxis& u, const GridAxis& eps,
                  const CycleProbe& probe) {
    if (u.n < 2 || eps.n < 2) throw InvalidInput("cusp scan needs at least a 2x2 grid");
    require_valid(p_base);
    CuspMap map;
    map.plane = plane;
    map.u_axis = u;
    map.eps_axis = eps;
    const auto us = linspace(u.lo, u.hi, u.n);
    const auto es = linspace(eps.lo, eps.hi, eps.n);
    const auto cell = [&](std::size_t idx) {
        CuspCell c;
        c.u = us[idx / es.size()];
        c.epsilon = es[idx % es.size()];
        Parameters q = p_base;
        (plane == CuspPlane::AlphaEpsilon ? q.alpha : q.xi) = c.u;
        q.epsilon = c.epsilon;
        c.n_attractors = static_cast<int>(stable_attractors(q, probe).size());
        return c;
    };
    const std::size_t n = us.size() * es.size();
    if constexpr (Parallel) {
        map.cells = parallel_map<CuspCell>(n, cell);
    } else {
        map.cells = serial_map<CuspCell>(n, cell);
    }

    for (const CuspCell& c : map.cells) {
        if (c.n_attractors >= 2) ++map.bistable_cells;
    }
    map.bistable_fraction = static_cast<double>(map.bistable_cells) / static_cast<double>(n);
    map.bistable_area = map.bistable_fraction * (u.hi - u.lo) * (eps.hi - eps.lo);
    label_components(map);
    trace_boundary(map, us, es);
    return map;
}

}  // namespace

std::vector<RegionCell> region_atlas(const Parameters& p_base, const GridAxis& alpha, const GridAxis& xi,
                                     const CycleProbe& probe) {
    return atlas_impl<true>(p_base, alpha, xi, probe);
}

std::vector<RegionCell> region_atlas_serial(const Parameters& p_base, const GridAxis& alpha, const GridAxis& xi,
                                            const CycleProbe& probe) {
    return atlas_impl<false>(p_base, alpha, xi, probe);
}

CuspMap cusp_scan(const Parameters& p_base, CuspPlane plane, const GridAxis& u, const GridAxis& eps,
                  const CycleProbe& probe) {
    return cusp_impl<true>(p_base, plane, u, eps, probe);
}

CuspMap cusp_scan_serial(const Parameters& p_base, CuspPlane plane, const GridAxis& u, const GridAxis& eps,
                         const CycleProbe& probe) {
    return cusp_impl<false>(p_base, plane, u, eps, probe);
}

}  // namespace bazykin
