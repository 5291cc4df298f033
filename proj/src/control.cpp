#include "bazykin/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bazykin/rk4.hpp"

namespace bazykin {

std::string_view to_string(ControlKind kind) noexcept {
    return kind == ControlKind::Quality ? "quality" : "quantity";
}

std::string_view to_string(Objective objective) noexcept {
    return objective == Objective::PhysicalTime ? "physical_time" : "transformed_time";
}

void require_valid(const ControlProblem& prob) {
    require_valid(prob.params);
    if (!(prob.u_min < prob.u_max)) throw InvalidInput("control bounds need u_min < u_max");
    if (prob.u_min < 0.0) throw InvalidInput("control bounds must be nonnegative");
    if (!(prob.start.x > 0.0 && prob.start.y > 0.0)) throw InvalidInput("start state must be strictly positive");
    if (!(prob.target.x > 0.0 && prob.target.y > 0.0)) throw InvalidInput("target state must be strictly positive");
    if (prob.n_intervals < 2) throw InvalidInput("n_intervals must be at least 2");
    if (prob.rk4_steps_per_interval < 1) throw InvalidInput("rk4_steps_per_interval must be at least 1");
}

Parameters with_control(Parameters p, ControlKind which, double u) noexcept {
    (which == ControlKind::Quality ? p.alpha : p.xi) = u;
    return p;
}

Rates transformed_field(const Parameters& p, State s, double u, ControlKind which) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(u)) {
        throw InvalidInput("transformed_field needs a finite state and control");
    }
    const auto r = transformed_rates(p, which, s.x, s.y, u);
    return {r[0], r[1]};
}

double hamiltonian(const Parameters& p, State s, Costate c, double u, ControlKind which, double running_weight) {
    const auto r = transformed_rates(p, which, s.x, s.y, u);
    return running_weight * r[2] + c.p * r[0] + c.q * r[1];
}

Costate adjoint_rhs(const Parameters& p, State s, Costate c, double u, ControlKind which, double running_weight) {
    const Parameters q = with_control(p, which, u);
    const double x = s.x;
    const double y = s.y;
    const double A = q.food_factor();
    const double g = q.gamma;
    const double w = q.omega;
    const double eps = q.epsilon;
    const double dp =
        -c.p * (x * (2.0 - 3.0 * x / g) + A * (1.0 - 2.0 * x / g + 3.0 * w * x * x - 4.0 * w * x * x * x / g) - y) -
        c.q * y * (q.delta - q.m - eps * y + 2.0 * w * x * (q.delta * q.xi - (q.m + eps * y) * A)) -
        running_weight * (2.0 * w * x * A + 1.0);
    const double dq =
        c.p * x -
        c.q * ((q.delta - q.m - 2.0 * eps * y) * x + (w * x * x + 1.0) * (q.delta * q.xi - (q.m + 2.0 * eps * y) * A));
    return {dp, dq};
}

double switching_function(const Parameters& p, State s, Costate c, ControlKind which, double running_weight) {
    const double x = s.x;
    const double y = s.y;
    const double w = p.omega * x * x + 1.0;
    const double prey = x * (1.0 - x / p.gamma);
    const double loss = y * (p.m + p.epsilon * y);
    if (which == ControlKind::Quality) {
        return (c.p * prey - c.q * loss) * w * p.xi + running_weight * p.xi * w;
    }
    return (p.alpha * c.p * prey + c.q * p.delta * y - p.alpha * c.q * loss) * w + running_weight * p.alpha * w;
}

SingularRatios singular_ratios(const Parameters& p, State s, double u, ControlKind which) {
    constexpr double tiny = 1e-14;
    const Parameters q = with_control(p, which, u);
    const double x = s.x;
    const double y = s.y;
    const double g = q.gamma;
    const double w = q.omega;
    const double eps = q.epsilon;
    const double A = q.food_factor();
    const double prey = x * (1.0 - x / g);
    const double sq = (1.0 - x / g) * (1.0 - x / g);
    const double inf = std::numeric_limits<double>::infinity();

    SingularRatios r;
    const auto ratio = [&](double num, double den, bool& flag) {
        if (std::abs(den) < tiny) {
            flag = true;
            return inf;
        }
        return num / den;
    };
    if (which == ControlKind::Quality) {
        r.from_S = ratio(y * (q.m + eps * y), prey, r.degenerate_S);
        const double num = prey * (q.delta - q.m - eps * y + 2.0 * w * x * (q.delta * q.xi - (q.m + eps * y) * A)) +
                           q.delta * eps * y * (x + q.xi * (w * x * x + 1.0));
        const double den = x * y / g - x * sq * (1.0 + 2.0 * w * x * A) - (q.m + eps * y) * y;
        r.from_Sdot = ratio((y / x) * num, den, r.degenerate_Sdot);
        if (x == 0.0) r.degenerate_Sdot = true, r.from_Sdot = inf;
    } else {
        const double a = q.alpha;
        r.from_S = ratio(a * y * (q.m + eps * y) - q.delta * y, a * prey, r.degenerate_S);
        const double num = q.delta * eps * ((1.0 - a) * x + 1.0 + w * x * x);
        const double den = a * x * y / g - a * x * (1.0 + 2.0 * w * x * A) * sq + y * (q.delta - a * (q.m + eps * y));
        r.from_Sdot = ratio((y * y / x) * num, den, r.degenerate_Sdot);
        if (x == 0.0) r.degenerate_Sdot = true, r.from_Sdot = inf;
    }
    return r;
}

PmpReport verify_pmp(const ControlProblem& prob, const ControlSolution& sol, double tol) {
    require_valid(prob);
    const std::size_t N = sol.controls.size();
    if (N == 0 || sol.states.size() != N + 1) throw InvalidInput("verify_pmp needs a solution with nodes and controls");

    PmpReport rep;
    rep.running_weight = (prob.objective == Objective::PhysicalTime) ? 1.0 : 0.0;
    const int M = prob.rk4_steps_per_interval;
    const double h = sol.total_S / (static_cast<double>(N) * M);
    const Parameters& par = prob.params;
    const double lam0 = rep.running_weight;

    using Vec4 = std::array<double, 4>;
    std::vector<double> mean_s(N, 0.0);
    std::vector<double> min_s(N, 0.0);
    std::vector<double> max_s(N, 0.0);
    rep.costates.assign(N + 1, {});
    Costate c = sol.endpoint_multiplier;
    rep.costates[N] = c;

    for (std::size_t k = N; k-- > 0;) {
        const double u = sol.controls[k];
        const auto rhs = [&](const Vec4& z) -> Vec4 {
            const State s{z[0], z[1]};
            const Rates f = transformed_field(par, s, u, prob.which);
            const Costate a = adjoint_rhs(par, s, {z[2], z[3]}, u, prob.which, lam0);
            return {f.dx, f.dy, a.p, a.q};
        };
        Vec4 z{sol.states[k + 1].x, sol.states[k + 1].y, c.p, c.q};
        double sum = 0.0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int j = 0; j <= M; ++j) {
            const State s{z[0], z[1]};
            const double sw = switching_function(par, s, {z[2], z[3]}, prob.which, lam0);
            const double H = hamiltonian(par, s, {z[2], z[3]}, u, prob.which, lam0);
            if (!std::isfinite(sw) || !std::isfinite(H)) {
                throw VerificationFailed("adjoint integration produced a non-finite value in interval " +
                                         std::to_string(k));
            }
            rep.max_abs_hamiltonian = std::max(rep.max_abs_hamiltonian, std::abs(H));
            sum += (j == 0 || j == M) ? 0.5 * sw : sw;
            lo = std::min(lo, sw);
            hi = std::max(hi, sw);
            if (j < M) z = rk4_step<double, 4>(rhs, z, -h);
        }
        mean_s[k] = sum / M;
        min_s[k] = lo;
        max_s[k] = hi;
        c = {z[2], z[3]};
        rep.costates[k] = c;
    }

    double scale = 0.0;
    for (std::size_t k = 0; k < N; ++k) scale = std::max({scale, std::abs(min_s[k]), std::abs(max_s[k])});
    if (scale == 0.0) scale = 1.0;

    const double span = prob.u_max - prob.u_min;
    std::size_t good = 0;
    rep.switching.resize(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double s = mean_s[k] / scale;
        rep.switching[k] = s;
        const double u = sol.controls[k];
        const bool at_max = std::abs(u - prob.u_max) <= 1e-6 * span;
        const bool at_min = std::abs(u - prob.u_min) <= 1e-6 * span;
        const bool crosses = min_s[k] / scale < -tol && max_s[k] / scale > tol;
        bool ok = true;
        if (!crosses) {
            if (s < -tol) ok = at_max;
            if (s > tol) ok = at_min;
        }
        if (ok) {
            ++good;
        } else {
            rep.violations.push_back(static_cast<int>(k));
        }
    }
    rep.consistency = static_cast<double>(good) / static_cast<double>(N);
    return rep;
}

}  // namespace bazykin
