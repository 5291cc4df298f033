#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "bazykin/model.hpp"

namespace bazykin {

enum class EquilibriumKind { Trivial, PredatorFree, PreyFree, Interior };

enum class Stability { StableNode, StableFocus, UnstableNode, UnstableFocus, Saddle, Center, Degenerate };

[[nodiscard]] std::string_view to_string(EquilibriumKind kind) noexcept;
[[nodiscard]] std::string_view to_string(Stability stability) noexcept;
[[nodiscard]] bool is_attracting(Stability stability) noexcept;

struct Equilibrium {
    EquilibriumKind kind = EquilibriumKind::Trivial;
    State location;
    std::array<std::complex<double>, 2> eigenvalues{};
    Stability stability = Stability::Degenerate;
    int multiplicity = 1;  ///< > 1 for tangential nullcline intersections
};

/// |Tr| or |Det| below this is treated as a bifurcation point.
inline constexpr double kClassificationTol = 1e-9;

/// Stability class from trace and determinant of a planar Jacobian.
/// Det < 0 is a saddle; |Det| < tol is Degenerate; |Tr| < tol with Det > 0
/// is a linear Center; otherwise the sign of Tr picks stable/unstable and
/// the discriminant Tr^2 - 4 Det picks focus/node.
[[nodiscard]] Stability classify(double trace, double det) noexcept;

/// Roots of lambda^2 - trace lambda + det.
[[nodiscard]] std::array<std::complex<double>, 2> eigenvalues(double trace, double det) noexcept;

/// E0 and E1 always; E2 = (0, (delta xi - m(1+alpha xi)) / (epsilon (1+alpha xi)))
/// when that ordinate is positive and epsilon > 0. Eigenvalues come from the
/// closed forms for the triangular Jacobians at the axes.
[[nodiscard]] std::vector<Equilibrium> boundary_equilibria(const Parameters& p);

/// Coefficients c5..c0 (descending degree) of the interior-equilibrium
/// polynomial obtained by substituting the prey nullcline into the predator
/// nullcline: (delta - m) x + phi1 (omega x^2 + 1) - epsilon (1 - x/gamma) D(x)^2.
/// The sign is chosen so that c5 = epsilon omega^2 (1+alpha xi)^2 / gamma.
struct QuinticCoefficients {
    std::array<double, 6> c{};  ///< c[0] = c5 ... c[5] = c0

    [[nodiscard]] double operator()(double x) const noexcept;
    [[nodiscard]] double derivative(double x) const noexcept;
    [[nodiscard]] double max_abs() const noexcept;
};

[[nodiscard]] QuinticCoefficients quintic_coefficients(const Parameters& p);

struct PolynomialRoot {
    double x = 0.0;
    int multiplicity = 1;
};

/// Real roots in (0, x_max], ascending. Companion-matrix eigenvalues of the
/// deflated polynomial polished by Newton; falls back to sign-change
/// bisection when a candidate fails the residual gate
/// |poly(x)| < 1e-10 max(1, ||c||_inf). Throws InvalidInput for the zero
/// polynomial.
[[nodiscard]] std::vector<PolynomialRoot> real_positive_roots(const QuinticCoefficients& q, double x_max);

/// Interior equilibria (x* in (0, gamma], y* > 0), each polished on the full
/// vector field and checked against both nullclines.
[[nodiscard]] std::vector<Equilibrium> interior_equilibria(const Parameters& p);

/// Boundary followed by interior equilibria.
[[nodiscard]] std::vector<Equilibrium> all_equilibria(const Parameters& p);

/// Prey-nullcline residual y - (1 - x/gamma) D(x).
[[nodiscard]] double prey_nullcline_residual(const Parameters& p, State s) noexcept;
/// Predator-nullcline residual epsilon y D(x) - ((delta - m) x + phi1 (omega x^2 + 1)).
[[nodiscard]] double predator_nullcline_residual(const Parameters& p, State s) noexcept;

enum class PreyCase { Case1, Case2, Case3 };
enum class PredatorCase { CaseP, CaseQ, Neither };

[[nodiscard]] std::string_view to_string(PreyCase c) noexcept;
[[nodiscard]] std::string_view to_string(PredatorCase c) noexcept;

struct NullclineCase {
    PreyCase prey_case = PreyCase::Case1;
    PredatorCase predator_case = PredatorCase::Neither;
    /// A defining inequality held with equality (within 1e-12).
    bool degenerate = false;
    /// omega == 0: the CaseQ lower bound is -infinity.
    bool omega_zero = false;
};

[[nodiscard]] NullclineCase nullcline_case(const Parameters& p);

struct NullclineCurves {
    std::vector<double> x;
    std::vector<double> prey_y;
    /// Empty when epsilon == 0; the predator nullcline is then the set of
    /// vertical lines listed in predator_vertical_x.
    std::vector<double> predator_y;
    std::vector<double> predator_vertical_x;
};

[[nodiscard]] NullclineCurves nullcline_curves(const Parameters& p, const std::vector<double>& x_grid);

}  // namespace bazykin
