#include "bazykin/equilibria.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "bazykin/errors.hpp"

namespace bazykin {

std::string_view to_string(EquilibriumKind kind) noexcept {
    switch (kind) {
        case EquilibriumKind::Trivial: return "trivial";
        case EquilibriumKind::PredatorFree: return "predator_free";
        case EquilibriumKind::PreyFree: return "prey_free";
        case EquilibriumKind::Interior: return "interior";
    }
    return "unknown";
}

std::string_view to_string(Stability stability) noexcept {
    switch (stability) {
        case Stability::StableNode: return "stable_node";
        case Stability::StableFocus: return "stable_focus";
        case Stability::UnstableNode: return "unstable_node";
        case Stability::UnstableFocus: return "unstable_focus";
        case Stability::Saddle: return "saddle";
        case Stability::Center: return "center";
        case Stability::Degenerate: return "degenerate";
    }
    return "unknown";
}

std::string_view to_string(PreyCase c) noexcept {
    switch (c) {
        case PreyCase::Case1: return "case1";
        case PreyCase::Case2: return "case2";
        case PreyCase::Case3: return "case3";
    }
    return "unknown";
}

std::string_view to_string(PredatorCase c) noexcept {
    switch (c) {
        case PredatorCase::CaseP: return "caseP";
        case PredatorCase::CaseQ: return "caseQ";
        case PredatorCase::Neither: return "neither";
    }
    return "unknown";
}

bool is_attracting(Stability stability) noexcept {
    return stability == Stability::StableNode || stability == Stability::StableFocus;
}

Stability classify(double trace, double det) noexcept {
    if (std::abs(det) < kClassificationTol) return Stability::Degenerate;
    if (det < 0.0) return Stability::Saddle;
    if (std::abs(trace) < kClassificationTol) return Stability::Center;
    const bool focus = trace * trace - 4.0 * det < 0.0;
    if (trace < 0.0) return focus ? Stability::StableFocus : Stability::StableNode;
    return focus ? Stability::UnstableFocus : Stability::UnstableNode;
}

std::array<std::complex<double>, 2> eigenvalues(double trace, double det) noexcept {
    const double disc = trace * trace - 4.0 * det;
    if (disc >= 0.0) {
        // Stable form of the quadratic roots.
        const double s = std::sqrt(disc);
        const double q = -0.5 * (-trace + (trace >= 0.0 ? -s : s));
        double r1 = q;
        double r2 = (q != 0.0) ? det / q : 0.0;
        if (q == 0.0) r1 = r2 = 0.5 * trace;
        if (r1 > r2) std::swap(r1, r2);
        return {std::complex<double>(r1, 0.0), std::complex<double>(r2, 0.0)};
    }
    const double im = 0.5 * std::sqrt(-disc);
    return {std::complex<double>(0.5 * trace, -im), std::complex<double>(0.5 * trace, im)};
}

namespace {

Equilibrium make_boundary(EquilibriumKind kind, State loc, double lambda1, double lambda2) {
    Equilibrium e;
    e.kind = kind;
    e.location = loc;
    if (lambda1 > lambda2) std::swap(lambda1, lambda2);
    e.eigenvalues = {std::complex<double>(lambda1, 0.0), std::complex<double>(lambda2, 0.0)};
    // Triangular Jacobian: trace and determinant follow from the diagonal.
    e.stability = classify(lambda1 + lambda2, lambda1 * lambda2);
    return e;
}

}  // namespace

std::vector<Equilibrium> boundary_equilibria(const Parameters& p) {
    require_valid(p);
    const double A = p.food_factor();
    const double phi1 = p.food_surplus();
    const double wg = p.omega * p.gamma * p.gamma + 1.0;

    std::vector<Equilibrium> out;
    out.push_back(make_boundary(EquilibriumKind::Trivial, {0.0, 0.0}, 1.0, phi1 / A));

    const double e1_growth = ((p.delta - p.m) * p.gamma + phi1 * wg) / (A * wg + p.gamma);
    out.push_back(make_boundary(EquilibriumKind::PredatorFree, {p.gamma, 0.0}, -1.0, e1_growth));

    if (phi1 > kZeroTol && p.epsilon > kZeroTol) {
        const double y2 = phi1 / (p.epsilon * A);
        out.push_back(make_boundary(EquilibriumKind::PreyFree, {0.0, y2}, 1.0 - phi1 / (p.epsilon * A * A),
                                    -phi1 / A));
    }
    return out;
}

double QuinticCoefficients::operator()(double x) const noexcept {
    double v = 0.0;
    for (double ci : c) v = v * x + ci;
    return v;
}

double QuinticCoefficients::derivative(double x) const noexcept {
    double v = 0.0;
    for (std::size_t i = 0; i < 5; ++i) v = v * x + static_cast<double>(5 - i) * c[i];
    return v;
}

double QuinticCoefficients::max_abs() const noexcept {
    double m = 0.0;
    for (double ci : c) m = std::max(m, std::abs(ci));
    return m;
}

QuinticCoefficients quintic_coefficients(const Parameters& p) {
    const double g = p.gamma;
    const double w = p.omega;
    const double e = p.epsilon;
    const double A = p.food_factor();
    const double phi1 = p.food_surplus();
    QuinticCoefficients q;
    q.c[0] = e * w * w * A * A / g;
    q.c[1] = e * w * A / g * (2.0 - g * w * A);
    q.c[2] = e / g * (1.0 + 2.0 * w * A * A - 2.0 * g * w * A);
    q.c[3] = w * phi1 + 2.0 * e / g * A - e - 2.0 * e * w * A * A;
    q.c[4] = p.delta - p.m - 2.0 * e * A + e / g * A * A;
    q.c[5] = phi1 - e * A * A;
    return q;
}

namespace {

double residual_gate(const QuinticCoefficients& q) { return 1e-10 * std::max(1.0, q.max_abs()); }

double newton_polish(const QuinticCoefficients& q, double x, double lo, double hi) {
    double best = x;
    double best_res = std::abs(q(x));
    for (int it = 0; it < 60; ++it) {
        const double f = q(x);
        const double df = q.derivative(x);
        if (f == 0.0 || df == 0.0 || !std::isfinite(df)) break;
        double next = x - f / df;
        if (!std::isfinite(next)) break;
        next = std::clamp(next, lo, hi);
        const double res = std::abs(q(next));
        if (res < best_res) {
            best = next;
            best_res = res;
        }
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) break;
        x = next;
    }
    return best;
}

double bisect(const QuinticCoefficients& q, double a, double b) {
    double fa = q(a);
    for (int it = 0; it < 200 && b - a > 1e-16 * std::max(1.0, std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = q(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

// Sign-change scan with bisection plus local minima of |q| that pass the
// residual gate (tangential roots).
std::vector<double> bisection_roots(const QuinticCoefficients& q, double x_max) {
    constexpr int kSamples = 4096;
    const double gate = residual_gate(q);
    std::vector<double> roots;
    double prev_x = 0.0;
    double prev_f = q(0.0);
    double prev_prev_abs = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= kSamples; ++i) {
        const double x = x_max * static_cast<double>(i) / kSamples;
        const double f = q(x);
        if (f == 0.0) {
            roots.push_back(x);
        } else if (prev_f != 0.0 && (f < 0.0) != (prev_f < 0.0)) {
            roots.push_back(bisect(q, prev_x, x));
        } else if (i >= 2 && std::abs(prev_f) < prev_prev_abs && std::abs(prev_f) <= std::abs(f)) {
            const double cand = newton_polish(q, prev_x, 0.0, x_max);
            if (cand > 0.0 && std::abs(q(cand)) < gate) roots.push_back(cand);
        }
        prev_prev_abs = std::abs(prev_f);
        prev_x = x;
        prev_f = f;
    }
    return roots;
}

}  // namespace

std::vector<PolynomialRoot> real_positive_roots(const QuinticCoefficients& q, double x_max) {
    const double scale = q.max_abs();
    if (scale == 0.0) throw InvalidInput("polynomial has all-zero coefficients");
    if (!(x_max > 0.0)) return {};

    // Deflate: leading negligible coefficients and trailing zeros (x = 0 roots).
    std::size_t lead = 0;
    while (lead < 6 && std::abs(q.c[lead]) <= 1e-15 * scale) ++lead;
    std::size_t tail = 6;
    while (tail > lead && q.c[tail - 1] == 0.0) --tail;
    const auto degree = static_cast<int>(tail - lead) - 1;

    std::vector<double> candidates;
    if (degree == 1) {
        candidates.push_back(-q.c[lead + 1] / q.c[lead]);
    } else if (degree >= 2) {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
        for (int j = 0; j < degree; ++j) {
            companion(0, j) = -q.c[lead + 1 + static_cast<std::size_t>(j)] / q.c[lead];
        }
        for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
        const auto& ev = solver.eigenvalues();
        for (int i = 0; i < degree; ++i) {
            const double re = ev[i].real();
            const double im = ev[i].imag();
            if (std::abs(im) <= 1e-5 * std::max(1.0, std::abs(re))) candidates.push_back(re);
        }
    }

    const double gate = residual_gate(q);
    const double slack = 1e-7 * std::max(1.0, x_max);
    std::vector<double> accepted;
    bool fallback = false;
    for (double c : candidates) {
        if (c <= -slack || c > x_max + slack) continue;
        const double x = newton_polish(q, std::clamp(c, 0.0, x_max), 0.0, x_max);
        if (std::abs(q(x)) < gate) {
            if (x > 0.0 && x <= x_max) accepted.push_back(x);
        } else {
            fallback = true;
        }
    }
    if (fallback) {
        for (double x : bisection_roots(q, x_max)) accepted.push_back(x);
    }

    std::sort(accepted.begin(), accepted.end());
    std::vector<PolynomialRoot> out;
    for (double x : accepted) {
        if (!out.empty() && std::abs(x - out.back().x) <= 1e-6 * std::max(1.0, std::abs(x))) {
            // Clustered companion eigenvalues: a repeated root.
            if (!fallback) ++out.back().multiplicity;
            continue;
        }
        out.push_back({x, 1});
    }
    return out;
}

double prey_nullcline_residual(const Parameters& p, State s) noexcept {
    return s.y - (1.0 - s.x / p.gamma) * response_denominator(p, s.x);
}

double predator_nullcline_residual(const Parameters& p, State s) noexcept {
    const double x = s.x;
    return p.epsilon * s.y * response_denominator(p, x) -
           ((p.delta - p.m) * x + p.food_surplus() * (p.omega * x * x + 1.0));
}

namespace {

// Newton on the two nullcline residuals; used when the root-derived point
// misses the residual gate.
State polish_on_nullclines(const Parameters& p, State s) {
    const double A = p.food_factor();
    const double phi1 = p.food_surplus();
    for (int it = 0; it < 20; ++it) {
        const double r1 = prey_nullcline_residual(p, s);
        const double r2 = predator_nullcline_residual(p, s);
        if (std::abs(r1) < 1e-13 && std::abs(r2) < 1e-13) break;
        const double D = response_denominator(p, s.x);
        const double dD = 2.0 * A * p.omega * s.x + 1.0;
        const double a11 = D / p.gamma - (1.0 - s.x / p.gamma) * dD;
        const double a12 = 1.0;
        const double a21 = p.epsilon * s.y * dD - (p.delta - p.m) - 2.0 * phi1 * p.omega * s.x;
        const double a22 = p.epsilon * D;
        const double det = a11 * a22 - a12 * a21;
        if (std::abs(det) < 1e-300) break;
        s.x -= (a22 * r1 - a12 * r2) / det;
        s.y -= (a11 * r2 - a21 * r1) / det;
    }
    return s;
}

}  // namespace

std::vector<Equilibrium> interior_equilibria(const Parameters& p) {
    require_valid(p);
    const QuinticCoefficients q = quintic_coefficients(p);
    if (q.max_abs() == 0.0) return {};

    std::vector<Equilibrium> out;
    for (const PolynomialRoot& root : real_positive_roots(q, p.gamma)) {
        const double x = root.x;
        const double D = response_denominator(p, x);
        double y = 0.0;
        if (p.epsilon > kZeroTol) {
            y = ((p.delta - p.m) * x + p.food_surplus() * (p.omega * x * x + 1.0)) / (p.epsilon * D);
        } else {
            y = (1.0 - x / p.gamma) * D;
        }
        if (!(y > kZeroTol)) continue;

        State s{x, y};
        const auto residual_ok = [&p](State t) {
            const Rates r = vector_field(p, t);
            return std::abs(r.dx) < 1e-8 && std::abs(r.dy) < 1e-8 &&
                   std::abs(prey_nullcline_residual(p, t)) < 1e-8 &&
                   std::abs(predator_nullcline_residual(p, t)) < 1e-8;
        };
        if (!residual_ok(s)) {
            s = polish_on_nullclines(p, s);
            if (!(s.x > 0.0 && s.y > 0.0) || !residual_ok(s)) continue;
        }

        Equilibrium e;
        e.kind = EquilibriumKind::Interior;
        e.location = s;
        e.multiplicity = root.multiplicity;
        const Jacobian2 J = jacobian(p, s);
        e.eigenvalues = eigenvalues(J.trace(), J.det());
        e.stability = classify(J.trace(), J.det());
        out.push_back(e);
    }
    return out;
}

std::vector<Equilibrium> all_equilibria(const Parameters& p) {
    auto out = boundary_equilibria(p);
    const auto interior = interior_equilibria(p);
    out.insert(out.end(), interior.begin(), interior.end());
    return out;
}

NullclineCase nullcline_case(const Parameters& p) {
    require_valid(p);
    constexpr double tol = kZeroTol;
    NullclineCase out;
    const double A = p.food_factor();
    const double wg2 = p.omega * p.gamma * p.gamma;

    if (std::abs(p.gamma - A) <= tol) {
        out.prey_case = PreyCase::Case1;
        out.degenerate = true;
    } else if (p.gamma > A) {
        out.prey_case = PreyCase::Case1;
    } else {
        out.prey_case = (wg2 >= 3.0) ? PreyCase::Case2 : PreyCase::Case3;
        if (std::abs(wg2 - 3.0) <= tol) out.degenerate = true;
    }

    const double phi1 = p.food_surplus();
    out.omega_zero = p.omega <= 0.0;
    const double lower =
        out.omega_zero ? -std::numeric_limits<double>::infinity() : -(p.delta - p.m) / (2.0 * std::sqrt(p.omega));
    if (std::abs(phi1) <= tol) {
        out.predator_case = PredatorCase::CaseP;
        out.degenerate = true;
    } else if (phi1 > 0.0) {
        out.predator_case = PredatorCase::CaseP;
    } else if (std::isfinite(lower) && std::abs(phi1 - lower) <= tol) {
        out.predator_case = PredatorCase::CaseQ;
        out.degenerate = true;
    } else if (phi1 > lower) {
        out.predator_case = PredatorCase::CaseQ;
    } else {
        out.predator_case = PredatorCase::Neither;
    }
    return out;
}

NullclineCurves nullcline_curves(const Parameters& p, const std::vector<double>& x_grid) {
    require_valid(p);
    NullclineCurves out;
    out.x = x_grid;
    out.prey_y.reserve(x_grid.size());
    const double phi1 = p.food_surplus();
    for (double x : x_grid) out.prey_y.push_back((1.0 - x / p.gamma) * response_denominator(p, x));

    if (p.epsilon > kZeroTol) {
        out.predator_y.reserve(x_grid.size());
        for (double x : x_grid) {
            const double num = (p.delta - p.m) * x + phi1 * (p.omega * x * x + 1.0);
            out.predator_y.push_back(num / (p.epsilon * response_denominator(p, x)));
        }
        return out;
    }

    // epsilon == 0: omega phi1 x^2 + (delta - m) x + phi1 = 0.
    const double a = p.omega * phi1;
    const double b = p.delta - p.m;
    const double c = phi1;
    if (std::abs(a) <= kZeroTol) {
        if (std::abs(b) > kZeroTol) {
            const double x = -c / b;
            if (x >= 0.0) out.predator_vertical_x.push_back(x);
        }
        return out;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return out;
    const double s = std::sqrt(disc);
    const double qq = -0.5 * (b + (b >= 0.0 ? s : -s));
    std::vector<double> xs;
    if (qq != 0.0) {
        xs.push_back(qq / a);
        xs.push_back(c / qq);
    } else {
        xs.push_back(0.0);
    }
    std::sort(xs.begin(), xs.end());
    for (double x : xs) {
        if (x >= 0.0 && (out.predator_vertical_x.empty() || x != out.predator_vertical_x.back())) {
            out.predator_vertical_x.push_back(x);
        }
    }
    return out;
}

}  // namespace bazykin
