#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <sstream>

#include "bazykin/control.hpp"
#include "bazykin/dual.hpp"
#include "bazykin/rk4.hpp"

namespace bazykin {

IntervalPropagation propagate_interval(const ControlProblem& prob, State from, double u, double ds) {
    using D4 = Dual<4>;
    const int M = prob.rk4_steps_per_interval;
    const D4 h = D4::variable(ds, 3) / D4(static_cast<double>(M));
    const D4 uu = D4::variable(u, 2);
    std::array<D4, 3> z{D4::variable(from.x, 0), D4::variable(from.y, 1), D4(0.0)};
    const auto f = [&](const std::array<D4, 3>& s) {
        return transformed_rates(prob.params, prob.which, s[0], s[1], uu);
    };
    for (int i = 0; i < M; ++i) z = rk4_step<D4, 3>(f, z, h);

    IntervalPropagation out;
    out.end = {z[0].v, z[1].v};
    out.elapsed_t = z[2].v;
    for (std::size_t r = 0; r < 3; ++r) out.jacobian[r] = z[r].d;
    return out;
}

namespace {

using Vec = std::vector<double>;

// Decision vector: node states 1..N (2N), controls (N), total S.
struct Layout {
    int N;
    [[nodiscard]] std::size_t size() const { return 3 * static_cast<std::size_t>(N) + 1; }
    [[nodiscard]] std::size_t state(int k) const { return 2 * static_cast<std::size_t>(k - 1); }
    [[nodiscard]] std::size_t control(int k) const { return 2 * static_cast<std::size_t>(N) + k; }
    [[nodiscard]] std::size_t S() const { return 3 * static_cast<std::size_t>(N); }
    [[nodiscard]] std::size_t n_constraints() const { return 2 * static_cast<std::size_t>(N) + 2; }
};

constexpr double kMinS = 1e-8;

struct Evaluation {
    double objective = 0.0;
    double total_T = 0.0;
    Vec constraints;
    // Dense constraint Jacobian and objective gradient.
    Eigen::MatrixXd J;
    Vec grad_f;
};

State node(const ControlProblem& prob, const Layout& L, const Vec& z, int k) {
    if (k == 0) return prob.start;
    return {z[L.state(k)], z[L.state(k) + 1]};
}

Evaluation evaluate(const ControlProblem& prob, const Layout& L, const Vec& z, bool with_jacobian) {
    Evaluation ev;
    const int N = L.N;
    const double S = z[L.S()];
    const double ds = S / N;
    ev.constraints.assign(L.n_constraints(), 0.0);
    if (with_jacobian) {
        ev.J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(L.n_constraints()), static_cast<Eigen::Index>(L.size()));
        ev.grad_f.assign(L.size(), 0.0);
    }
    for (int k = 0; k < N; ++k) {
        const State from = node(prob, L, z, k);
        const double u = z[L.control(k)];
        const IntervalPropagation pr = propagate_interval(prob, from, u, ds);
        const State to = node(prob, L, z, k + 1);
        const auto row = static_cast<Eigen::Index>(2 * k);
        ev.constraints[2 * k] = pr.end.x - to.x;
        ev.constraints[2 * k + 1] = pr.end.y - to.y;
        ev.total_T += pr.elapsed_t;
        if (!with_jacobian) continue;
        for (int r = 0; r < 3; ++r) {
            const auto& jr = pr.jacobian[r];
            if (r < 2) {
                const Eigen::Index i = row + r;
                if (k > 0) {
                    ev.J(i, static_cast<Eigen::Index>(L.state(k))) += jr[0];
                    ev.J(i, static_cast<Eigen::Index>(L.state(k) + 1)) += jr[1];
                }
                ev.J(i, static_cast<Eigen::Index>(L.control(k))) += jr[2];
                ev.J(i, static_cast<Eigen::Index>(L.S())) += jr[3] / N;
                ev.J(i, static_cast<Eigen::Index>(L.state(k + 1) + r)) -= 1.0;
            } else if (prob.objective == Objective::PhysicalTime) {
                if (k > 0) {
                    ev.grad_f[L.state(k)] += jr[0];
                    ev.grad_f[L.state(k) + 1] += jr[1];
                }
                ev.grad_f[L.control(k)] += jr[2];
                ev.grad_f[L.S()] += jr[3] / N;
            }
        }
    }
    const State end = node(prob, L, z, N);
    ev.constraints[2 * N] = end.x - prob.target.x;
    ev.constraints[2 * N + 1] = end.y - prob.target.y;
    if (with_jacobian) {
        ev.J(2 * N, static_cast<Eigen::Index>(L.state(N))) = 1.0;
        ev.J(2 * N + 1, static_cast<Eigen::Index>(L.state(N) + 1)) = 1.0;
        if (prob.objective == Objective::TransformedTime) ev.grad_f[L.S()] = 1.0;
    }
    ev.objective = (prob.objective == Objective::PhysicalTime) ? ev.total_T : S;
    return ev;
}

double max_abs(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Augmented Lagrangian f + lambda.c + mu/2 |c|^2.
struct AugmentedLagrangian {
    const ControlProblem& prob;
    const Layout& L;
    Vec lambda;
    double mu = 10.0;

    struct Point {
        double value = 0.0;
        Eigen::VectorXd grad;
        Eigen::MatrixXd J;
    };

    Point operator()(const Vec& z) const {
        Evaluation ev = evaluate(prob, L, z, true);
        Point pt;
        pt.value = ev.objective;
        Eigen::VectorXd w(static_cast<Eigen::Index>(ev.constraints.size()));
        for (std::size_t i = 0; i < ev.constraints.size(); ++i) {
            const double c = ev.constraints[i];
            pt.value += lambda[i] * c + 0.5 * mu * c * c;
            w[static_cast<Eigen::Index>(i)] = lambda[i] + mu * c;
        }
        pt.grad = ev.J.transpose() * w;
        for (std::size_t i = 0; i < z.size(); ++i) pt.grad[static_cast<Eigen::Index>(i)] += ev.grad_f[i];
        if (!std::isfinite(pt.value)) pt.value = std::numeric_limits<double>::infinity();
        pt.J = std::move(ev.J);
        return pt;
    }
};

struct InnerResult {
    int iterations = 0;
    double projected_gradient = 0.0;
};

// Projected quasi-Newton on the augmented Lagrangian. The model Hessian is
// B + mu J^T J: the penalty curvature is exact in the Gauss-Newton sense and
// a damped BFGS matrix B learns the rest. Steps are taken on the variables
// not held at a bound, followed by an Armijo search along the projected path.
InnerResult projected_quasi_newton(const AugmentedLagrangian& fun, Vec& z, const Vec& lo, const Vec& hi, double tol,
                                   int max_iter, Eigen::MatrixXd& B) {
    const auto n = static_cast<Eigen::Index>(z.size());
    const auto project = [&](Vec& v) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], lo[i], hi[i]);
    };
    project(z);
    AugmentedLagrangian::Point pt = fun(z);
    InnerResult res;
    for (int it = 0; it < max_iter; ++it) {
        double pg = 0.0;
        std::vector<Eigen::Index> free;
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double g = pt.grad[i];
            pg = std::max(pg, std::abs(std::clamp(z[k] - g, lo[k], hi[k]) - z[k]));
            if (!((z[k] <= lo[k] && g > 0.0) || (z[k] >= hi[k] && g < 0.0))) free.push_back(i);
        }
        res.projected_gradient = pg;
        res.iterations = it;
        if (pg <= tol || free.empty()) return res;

        const auto nf = static_cast<Eigen::Index>(free.size());
        Eigen::MatrixXd Jf(pt.J.rows(), nf);
        Eigen::MatrixXd Bf(nf, nf);
        Eigen::VectorXd gf(nf);
        for (Eigen::Index a = 0; a < nf; ++a) {
            Jf.col(a) = pt.J.col(free[a]);
            gf[a] = pt.grad[free[a]];
            for (Eigen::Index b = 0; b < nf; ++b) Bf(a, b) = B(free[a], free[b]);
        }
        Eigen::MatrixXd H = Bf + fun.mu * Jf.transpose() * Jf;
        Eigen::VectorXd df;
        for (double shift = 0.0;; shift = (shift == 0.0) ? 1e-8 * (1.0 + H.diagonal().cwiseAbs().maxCoeff()) : shift * 10) {
            Eigen::LLT<Eigen::MatrixXd> llt(H + shift * Eigen::MatrixXd::Identity(nf, nf));
            if (llt.info() == Eigen::Success) {
                df = llt.solve(-gf);
                break;
            }
        }
        Vec d(z.size(), 0.0);
        for (Eigen::Index a = 0; a < nf; ++a) d[static_cast<std::size_t>(free[a])] = df[a];
        if (!(gf.dot(df) < 0.0)) {
            for (Eigen::Index a = 0; a < nf; ++a) d[static_cast<std::size_t>(free[a])] = -gf[a];
        }

        double step = 1.0;
        Vec zt(z.size());
        AugmentedLagrangian::Point trial;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < z.size(); ++i) zt[i] = z[i] + step * d[i];
            project(zt);
            double decrease = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) decrease += pt.grad[static_cast<Eigen::Index>(i)] * (zt[i] - z[i]);
            trial = fun(zt);
            if (std::isfinite(trial.value) && trial.value <= pt.value + 1e-4 * decrease) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) return res;

        // Damped BFGS update on the part of the curvature not covered by mu J^T J.
        Eigen::VectorXd s(n);
        for (Eigen::Index i = 0; i < n; ++i) s[i] = zt[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(i)];
        Eigen::VectorXd y = trial.grad - pt.grad - fun.mu * (trial.J.transpose() * (trial.J * s));
        const Eigen::VectorXd Bs = B * s;
        const double sBs = s.dot(Bs);
        if (sBs > 1e-300) {
            const double sy = s.dot(y);
            const double theta = (sy >= 0.2 * sBs) ? 1.0 : 0.8 * sBs / (sBs - sy);
            const Eigen::VectorXd r = theta * y + (1.0 - theta) * Bs;
            const double sr = s.dot(r);
            if (sr > 1e-300) B += r * r.transpose() / sr - Bs * Bs.transpose() / sBs;
        }
        z = std::move(zt);
        pt = std::move(trial);
    }
    res.iterations = max_iter;
    return res;
}

// Projected Levenberg-Marquardt on |c(z)|^2 / 2. Variables on a bound whose
// gradient pushes outward are held; the rest take a damped Gauss-Newton step
// that is clamped to the box.
void restore_feasibility(const ControlProblem& prob, const Layout& L, Vec& z, const Vec& lo, const Vec& hi) {
    const auto sumsq = [](const Vec& c) {
        double s = 0.0;
        for (double v : c) s += v * v;
        return s;
    };
    double damping = 1e-6;
    Evaluation ev = evaluate(prob, L, z, true);
    double f = sumsq(ev.constraints);
    for (int it = 0; it < 200 && max_abs(ev.constraints) > 1e-12; ++it) {
        const auto m = static_cast<Eigen::Index>(ev.constraints.size());
        Eigen::VectorXd c(m);
        for (Eigen::Index i = 0; i < m; ++i) c[i] = ev.constraints[static_cast<std::size_t>(i)];
        const Eigen::VectorXd g = ev.J.transpose() * c;
        std::vector<Eigen::Index> cols;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const auto k = static_cast<Eigen::Index>(i);
            if (!((z[i] <= lo[i] && g[k] > 0.0) || (z[i] >= hi[i] && g[k] < 0.0))) cols.push_back(k);
        }
        const auto n = static_cast<Eigen::Index>(cols.size());
        Eigen::MatrixXd Jf(m, n);
        for (Eigen::Index j = 0; j < n; ++j) Jf.col(j) = ev.J.col(cols[static_cast<std::size_t>(j)]);
        const Eigen::MatrixXd JtJ = Jf.transpose() * Jf;
        const Eigen::VectorXd rhs = -(Jf.transpose() * c);
        const double scale = std::max(1.0, JtJ.diagonal().maxCoeff());

        bool accepted = false;
        while (damping < 1e12) {
            const Eigen::MatrixXd H = JtJ + damping * scale * Eigen::MatrixXd::Identity(n, n);
            const Eigen::VectorXd step = H.ldlt().solve(rhs);
            Vec trial = z;
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto i = static_cast<std::size_t>(cols[static_cast<std::size_t>(j)]);
                trial[i] = std::clamp(z[i] + step[j], lo[i], hi[i]);
            }
            Evaluation te = evaluate(prob, L, trial, true);
            const double ft = sumsq(te.constraints);
            if (std::isfinite(ft) && ft < f) {
                z = std::move(trial);
                ev = std::move(te);
                f = ft;
                damping = std::max(1e-12, damping * 0.1);
                accepted = true;
                break;
            }
            damping *= 10.0;
        }
        if (!accepted) return;
    }
}

struct Attempt {
    Vec z;
    Vec lambda;
    double violation = std::numeric_limits<double>::infinity();
    double projected_gradient = 0.0;
    int outer = 0;
    int inner = 0;
    double mu = 0.0;
};

Attempt run_augmented_lagrangian(const ControlProblem& prob, const Layout& L, Vec z, const SolverOptions& opt) {
    Vec lo(L.size(), -std::numeric_limits<double>::infinity());
    Vec hi(L.size(), std::numeric_limits<double>::infinity());
    for (int k = 0; k < L.N; ++k) {
        lo[L.control(k)] = prob.u_min;
        hi[L.control(k)] = prob.u_max;
    }
    lo[L.S()] = kMinS;

    AugmentedLagrangian al{prob, L, Vec(L.n_constraints(), 0.0)};
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(L.size()), static_cast<Eigen::Index>(L.size()));
    Attempt best;
    double prev = std::numeric_limits<double>::infinity();
    int stagnant = 0;
    constexpr double mu_max = 1e9;
    for (int outer = 0; outer < opt.max_outer; ++outer) {
        const double inner_tol = std::max(1e-9, std::pow(10.0, -2.0 - outer));
        const InnerResult inner = projected_quasi_newton(al, z, lo, hi, inner_tol, opt.max_inner, B);
        const Evaluation ev = evaluate(prob, L, z, false);
        const double viol = max_abs(ev.constraints);
        best.inner += inner.iterations;
        best.outer = outer + 1;
        if (viol < best.violation || viol <= opt.defect_tol) {
            best.z = z;
            best.violation = viol;
            best.projected_gradient = inner.projected_gradient;
            best.lambda = al.lambda;
            for (std::size_t i = 0; i < ev.constraints.size(); ++i) best.lambda[i] += al.mu * ev.constraints[i];
            best.mu = al.mu;
        }
        if (opt.trace) {
            std::fprintf(stderr, "outer %2d mu %.1e inner %5d pg %.3e viol %.3e obj %.6f S %.6f\n", outer, al.mu,
                         inner.iterations, inner.projected_gradient, viol, ev.objective, z[L.S()]);
        }
        if (viol <= opt.defect_tol && inner.projected_gradient <= 1e-5) break;

        for (std::size_t i = 0; i < ev.constraints.size(); ++i) al.lambda[i] += al.mu * ev.constraints[i];
        if (viol > opt.defect_tol && viol > 0.25 * prev) al.mu = std::min(al.mu * 10.0, mu_max);
        // An unreachable target shows up as a violation that stops shrinking
        // once the penalty is saturated.
        stagnant = (al.mu >= mu_max && viol > 0.9 * prev) ? stagnant + 1 : 0;
        if (stagnant >= 3) break;
        prev = viol;
    }
    if (best.violation > opt.defect_tol && best.violation < 1e-3) {
        restore_feasibility(prob, L, best.z, lo, hi);
        best.violation = max_abs(evaluate(prob, L, best.z, false).constraints);
    }
    return best;
}

Vec initial_guess(const ControlProblem& prob, const Layout& L, int seed, const SolverOptions& opt) {
    const int N = L.N;
    Vec z(L.size(), 0.0);
    const double mid = 0.5 * (prob.u_min + prob.u_max);

    const Rates v = transformed_field(prob.params, prob.start, mid, prob.which);
    const double speed = std::hypot(v.dx, v.dy);
    const double dist = std::hypot(prob.target.x - prob.start.x, prob.target.y - prob.start.y);
    double S0 = (speed > 0.0) ? dist / speed : 1.0;
    S0 = std::clamp(S0, 1e-3, 1e3);

    for (int k = 0; k < N; ++k) {
        double u = mid;
        switch (seed) {
            case 1: u = prob.u_min; break;
            case 2: u = prob.u_max; break;
            case 3: u = (k < N / 2) ? prob.u_max : prob.u_min; break;
            case 4: u = (k < N / 2) ? prob.u_min : prob.u_max; break;
            default: break;
        }
        z[L.control(k)] = u;
    }
    const double scale[] = {1.0, 1.0, 1.0, 2.0, 0.5};
    z[L.S()] = S0 * scale[seed % 5];

    if (opt.initial_controls && seed == 0) {
        // Warm start: follow the supplied controls forward.
        for (int k = 0; k < N; ++k) z[L.control(k)] = std::clamp((*opt.initial_controls)[k], prob.u_min, prob.u_max);
        if (opt.initial_S) z[L.S()] = std::max(*opt.initial_S, kMinS);
        State s = prob.start;
        for (int k = 0; k < N; ++k) {
            s = propagate_interval(prob, s, z[L.control(k)], z[L.S()] / N).end;
            z[L.state(k + 1)] = s.x;
            z[L.state(k + 1) + 1] = s.y;
        }
        return z;
    }
    for (int k = 1; k <= N; ++k) {
        const double f = static_cast<double>(k) / N;
        z[L.state(k)] = prob.start.x + f * (prob.target.x - prob.start.x);
        z[L.state(k) + 1] = prob.start.y + f * (prob.target.y - prob.start.y);
    }
    return z;
}

ControlSolution assemble(const ControlProblem& prob, const Layout& L, const Attempt& at) {
    const int N = L.N;
    ControlSolution sol;
    sol.total_S = at.z[L.S()];
    const double ds = sol.total_S / N;
    sol.states.reserve(N + 1);
    sol.s_grid.reserve(N + 1);
    sol.t_grid.reserve(N + 1);
    double t = 0.0;
    double max_defect = 0.0;
    for (int k = 0; k <= N; ++k) {
        sol.states.push_back(node(prob, L, at.z, k));
        sol.s_grid.push_back(ds * k);
        sol.t_grid.push_back(t);
        if (k < N) {
            const double u = at.z[L.control(k)];
            sol.controls.push_back(u);
            const IntervalPropagation pr = propagate_interval(prob, sol.states.back(), u, ds);
            t += pr.elapsed_t;
            const State nxt = node(prob, L, at.z, k + 1);
            max_defect = std::max({max_defect, std::abs(pr.end.x - nxt.x), std::abs(pr.end.y - nxt.y)});
        }
    }
    sol.total_T = t;

    const double span = prob.u_max - prob.u_min;
    int last = 0;  // -1 at u_min, +1 at u_max
    for (int k = 0; k < N; ++k) {
        const double u = sol.controls[k];
        const int side = (u <= prob.u_min + 1e-3 * span) ? -1 : (u >= prob.u_max - 1e-3 * span ? 1 : 0);
        if (side != 0) {
            if (last != 0 && side != last) sol.switching_points.push_back(sol.s_grid[k]);
            last = side;
        }
    }

    sol.defect_multipliers.resize(N);
    for (int k = 0; k < N; ++k) sol.defect_multipliers[k] = {at.lambda[2 * k], at.lambda[2 * k + 1]};
    sol.endpoint_multiplier = {at.lambda[2 * N], at.lambda[2 * N + 1]};

    sol.report.outer_iterations = at.outer;
    sol.report.inner_iterations = at.inner;
    sol.report.max_defect = max_defect;
    sol.report.endpoint_error =
        std::max(std::abs(sol.states.back().x - prob.target.x), std::abs(sol.states.back().y - prob.target.y));
    sol.report.objective = (prob.objective == Objective::PhysicalTime) ? sol.total_T : sol.total_S;
    sol.report.penalty = at.mu;
    return sol;
}

}  // namespace

ControlSolution solve_time_optimal(const ControlProblem& prob, const SolverOptions& options) {
    require_valid(prob);
    if (options.initial_controls && options.initial_controls->size() != static_cast<std::size_t>(prob.n_intervals)) {
        throw InvalidInput("initial_controls must have one entry per interval");
    }
    const Layout L{prob.n_intervals};

    if (prob.start == prob.target) {
        ControlSolution sol;
        sol.states.assign(L.N + 1, prob.start);
        sol.s_grid.assign(L.N + 1, 0.0);
        sol.t_grid.assign(L.N + 1, 0.0);
        sol.controls.assign(L.N, prob.u_min);
        sol.defect_multipliers.assign(L.N, {});
        return sol;
    }

    double best_residual = std::numeric_limits<double>::infinity();
    const int starts = std::max(1, options.n_starts);
    for (int seed = 0; seed < starts; ++seed) {
        const Attempt at = run_augmented_lagrangian(prob, L, initial_guess(prob, L, seed, options), options);
        best_residual = std::min(best_residual, at.violation);
        if (at.violation > options.defect_tol) continue;
        ControlSolution sol = assemble(prob, L, at);
        if (sol.report.max_defect > options.defect_tol || sol.report.endpoint_error > options.endpoint_tol) continue;
        sol.report.start_index = seed;
        return sol;
    }
    std::ostringstream msg;
    msg << "target (" << prob.target.x << ", " << prob.target.y << ") not reached from (" << prob.start.x << ", "
        << prob.start.y << ") with " << to_string(prob.which) << " control in [" << prob.u_min << ", " << prob.u_max
        << "]; smallest constraint violation " << best_residual;
    throw NoConvergence(msg.str(), best_residual);
}

State resimulate_endpoint(const ControlProblem& prob, const ControlSolution& sol) {
    const int M = prob.rk4_steps_per_interval;
    const std::size_t N = sol.controls.size();
    if (N == 0) return prob.start;
    const double h = sol.total_S / (static_cast<double>(N) * M);
    std::array<double, 2> z{prob.start.x, prob.start.y};
    for (std::size_t k = 0; k < N; ++k) {
        const double u = sol.controls[k];
        const auto f = [&](const std::array<double, 2>& s) -> std::array<double, 2> {
            const Rates r = transformed_field(prob.params, {s[0], s[1]}, u, prob.which);
            return {r.dx, r.dy};
        };
        for (int i = 0; i < M; ++i) z = rk4_step<double, 2>(f, z, h);
    }
    return {z[0], z[1]};
}

}  // namespace bazykin
