#include "bazykin/model.hpp"

#include <cmath>
#include <sstream>

#include "bazykin/errors.hpp"

namespace bazykin {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidInput: return "invalid_input";
        case ErrorCode::PositivityViolation: return "positivity_violation";
        case ErrorCode::Divergence: return "divergence";
        case ErrorCode::InsufficientData: return "insufficient_data";
        case ErrorCode::DegenerateParameter: return "degenerate_parameter";
        case ErrorCode::NoHopfFound: return "no_hopf_found";
        case ErrorCode::NoConvergence: return "no_convergence";
        case ErrorCode::VerificationFailed: return "verification_failed";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

namespace {

void require_finite_state(State s) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
        throw InvalidInput("state has non-finite component");
    }
}

}  // namespace

double response_denominator(const Parameters& p, double x) noexcept {
    return p.food_factor() * (p.omega * x * x + 1.0) + x;
}

Rates vector_field(const Parameters& p, State s) {
    require_finite_state(s);
    const double x = s.x;
    const double y = s.y;
    const double D = response_denominator(p, x);
    const double food = x + p.xi * (p.omega * x * x + 1.0);
    return {x * (1.0 - x / p.gamma) - x * y / D,
            p.delta * food * y / D - p.m * y - p.epsilon * y * y};
}

Jacobian2 jacobian(const Parameters& p, State s) {
    require_finite_state(s);
    const double x = s.x;
    const double y = s.y;
    const double A = p.food_factor();
    const double D = response_denominator(p, x);
    const double D2 = D * D;
    const double bend = 1.0 - p.omega * x * x;
    const double food = x + p.xi * (p.omega * x * x + 1.0);
    Jacobian2 J;
    J.j11 = 1.0 - 2.0 * x / p.gamma - y * A * bend / D2;
    J.j12 = -x / D;
    J.j21 = p.delta * y * bend * (A - p.xi) / D2;
    J.j22 = p.delta * food / D - 2.0 * p.epsilon * y - p.m;
    return J;
}

Rates vector_field_dxi(const Parameters& p, State s) {
    require_finite_state(s);
    const double x = s.x;
    const double y = s.y;
    const double w = p.omega * x * x + 1.0;
    const double D = response_denominator(p, x);
    const double dD = p.alpha * w;
    const double food = x + p.xi * w;
    return {x * y * dD / (D * D), p.delta * y * (w * D - food * dD) / (D * D)};
}

NondimensionalResult nondimensionalize(const DimensionalParameters& dp, ScalingConvention convention) {
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    const auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!positive(dp.a) || !positive(dp.r) || !positive(dp.c) || !positive(dp.d)) {
        throw InvalidInput("dimensional parameters a, r, c, d must be positive");
    }
    if (!positive(dp.K) || !positive(dp.delta1) || !positive(dp.m1)) {
        throw InvalidInput("dimensional parameters K, delta1, m1 must be positive");
    }
    if (!nonneg(dp.A) || !nonneg(dp.b) || !nonneg(dp.eta) || !nonneg(dp.alpha)) {
        throw InvalidInput("dimensional parameters A, b, eta, alpha must be non-negative");
    }

    NondimensionalResult out;
    Parameters& p = out.params;
    p.gamma = dp.K / dp.a;
    p.xi = dp.eta * dp.A / dp.a;
    p.omega = dp.b * dp.a * dp.a;
    p.m = dp.m1 / dp.r;
    p.alpha = dp.alpha;
    if (convention == ScalingConvention::AsPublished) {
        p.epsilon = dp.c / (dp.a * dp.d);
        p.delta = dp.delta1 * dp.a * dp.r / dp.c;
        out.warnings.emplace_back(
            "published scaling epsilon = c/(a d), delta = delta1 a r / c is not dimensionally "
            "consistent with N = a x, P = a r y / c, t = r T; the substituted scaling gives "
            "epsilon = a d / c, delta = delta1 / r");
    } else {
        p.epsilon = dp.a * dp.d / dp.c;
        p.delta = dp.delta1 / dp.r;
    }
    return out;
}

BoundConstant bound_constant(const Parameters& p, double k) {
    if (!std::isfinite(k) || k <= 0.0) {
        throw InvalidInput("bound constant requires k > 0");
    }
    BoundConstant out;
    out.M = p.gamma * (1.0 + k) * (1.0 + k) / 4.0;
    if (p.epsilon > kZeroTol) {
        const double c = p.xi / p.food_factor() + k / p.delta - p.m / p.delta;
        out.M += p.delta / (4.0 * p.epsilon) * c * c;
    } else {
        out.degenerate = true;
    }
    out.ultimate_bound = out.M / k;
    return out;
}

std::vector<Diagnostic> validate(const Parameters& p) {
    std::vector<Diagnostic> out;
    const auto error = [&out](const char* field, const char* msg) {
        out.push_back({Severity::Error, field, msg});
    };
    const struct {
        const char* name;
        double value;
        bool strictly_positive;
    } fields[] = {
        {"gamma", p.gamma, true},  {"alpha", p.alpha, false},   {"xi", p.xi, false},
        {"omega", p.omega, false}, {"epsilon", p.epsilon, false}, {"delta", p.delta, true},
        {"m", p.m, true},
    };
    for (const auto& f : fields) {
        if (!std::isfinite(f.value)) {
            error(f.name, "must be finite");
        } else if (f.strictly_positive && f.value <= 0.0) {
            error(f.name, "must be > 0");
        } else if (!f.strictly_positive && f.value < 0.0) {
            error(f.name, "must be >= 0");
        }
    }
    if (std::isfinite(p.delta) && std::isfinite(p.m) && p.delta <= p.m) {
        out.push_back({Severity::Warning, "delta", "delta <= m: biologically infeasible (predator cannot grow)"});
    }
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) noexcept {
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::Error) return true;
    }
    return false;
}

void require_valid(const Parameters& p) {
    const auto diagnostics = validate(p);
    if (!has_errors(diagnostics)) return;
    std::ostringstream msg;
    msg << "invalid parameters:";
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::Error) msg << ' ' << d.field << ' ' << d.message << ';';
    }
    throw InvalidInput(msg.str());
}

}  // namespace bazykin
