#pragma once

// Nondimensional additional-food predator-prey model with Holling type-IV
// response and intra-specific predator competition:
//
//   dx/dt = x(1 - x/gamma) - x y / D
//   dy/dt = delta (x + xi(omega x^2 + 1)) y / D - m y - epsilon y^2
//   D     = (1 + alpha xi)(omega x^2 + 1) + x

#include <string>
#include <vector>

namespace bazykin {

struct Parameters {
    double gamma = 1.0;    ///< carrying capacity
    double alpha = 0.0;    ///< additional-food quality
    double xi = 0.0;       ///< additional-food quantity
    double omega = 0.0;    ///< group defence
    double epsilon = 0.0;  ///< intra-specific competition
    double delta = 1.0;    ///< predator maximum growth
    double m = 0.5;        ///< predator mortality

    [[nodiscard]] double food_factor() const noexcept { return 1.0 + alpha * xi; }
    /// delta xi - m (1 + alpha xi); its sign decides E0 and E2.
    [[nodiscard]] double food_surplus() const noexcept { return delta * xi - m * food_factor(); }

    friend bool operator==(const Parameters&, const Parameters&) = default;
};

/// Dimensional constants of the source model. `delta1` and `m1` are the
/// predator growth and mortality rates.
struct DimensionalParameters {
    double r = 1.0, K = 1.0, c = 1.0, a = 1.0, b = 0.0, A = 0.0, eta = 1.0;
    double delta1 = 1.0, m1 = 1.0, d = 1.0;
    double alpha = 0.0;
};

struct State {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const State&, const State&) = default;
};

struct Rates {
    double dx = 0.0;
    double dy = 0.0;
};

struct Jacobian2 {
    double j11 = 0.0, j12 = 0.0, j21 = 0.0, j22 = 0.0;
    [[nodiscard]] double trace() const noexcept { return j11 + j22; }
    [[nodiscard]] double det() const noexcept { return j11 * j22 - j12 * j21; }
};

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity;
    std::string field;
    std::string message;
};

/// Functional-response denominator D(x) >= 1 on the admissible domain.
[[nodiscard]] double response_denominator(const Parameters& p, double x) noexcept;

[[nodiscard]] Rates vector_field(const Parameters& p, State s);
[[nodiscard]] Jacobian2 jacobian(const Parameters& p, State s);

/// Partial derivative of the vector field with respect to xi.
[[nodiscard]] Rates vector_field_dxi(const Parameters& p, State s);

enum class ScalingConvention {
    /// epsilon = c/(a d), delta = delta1 a r / c, as printed with the model.
    AsPublished,
    /// epsilon = a d / c, delta = delta1 / r, obtained by substituting the
    /// scaling N = a x, P = a r y / c, t = r T into the dimensional system.
    Substituted,
};

struct NondimensionalResult {
    Parameters params;
    std::vector<std::string> warnings;
};

[[nodiscard]] NondimensionalResult nondimensionalize(
    const DimensionalParameters& dp, ScalingConvention convention = ScalingConvention::AsPublished);

struct BoundConstant {
    double M = 0.0;
    double ultimate_bound = 0.0;  ///< M / k
    /// True when epsilon == 0: the quadratic predator term vanishes and the
    /// completed square no longer bounds the y contribution.
    bool degenerate = false;
};

/// Constant M of dW/dt + kW <= M for W = x + y/delta.
[[nodiscard]] BoundConstant bound_constant(const Parameters& p, double k);

[[nodiscard]] std::vector<Diagnostic> validate(const Parameters& p);
[[nodiscard]] bool has_errors(const std::vector<Diagnostic>& diagnostics) noexcept;

/// Throws InvalidInput when validate() reports an error.
void require_valid(const Parameters& p);

/// Absolute tolerance for comparisons against zero.
inline constexpr double kZeroTol = 1e-12;

}  // namespace bazykin
