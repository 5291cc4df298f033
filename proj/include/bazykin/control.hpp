#pragma once

// Time-optimal steering with additional-food quality (alpha) or quantity
// (xi) as the control. Time is reparametrized by dt = D ds, which clears the
// response denominator from the dynamics and leaves them affine in the
// control.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bazykin/errors.hpp"
#include "bazykin/model.hpp"

namespace bazykin {

enum class ControlKind { Quality, Quantity };

[[nodiscard]] std::string_view to_string(ControlKind kind) noexcept;

/// What the NLP minimizes. PhysicalTime accumulates T = sum D ds along the
/// discretized path; TransformedTime minimizes S, as in the transformed
/// problem's Hamiltonian.
enum class Objective { PhysicalTime, TransformedTime };

[[nodiscard]] std::string_view to_string(Objective objective) noexcept;

struct ControlProblem {
    ControlKind which = ControlKind::Quality;
    Parameters params;  ///< the controlled field is ignored
    double u_min = 0.0;
    double u_max = 2.0;
    State start;
    State target;
    int n_intervals = 40;
    int rk4_steps_per_interval = 10;
    Objective objective = Objective::PhysicalTime;
};

/// Throws InvalidInput unless u_min < u_max, start and target are strictly
/// positive, n_intervals >= 2 and the parameters are admissible.
void require_valid(const ControlProblem& prob);

struct Costate {
    double p = 0.0;
    double q = 0.0;
};

[[nodiscard]] Parameters with_control(Parameters p, ControlKind which, double u) noexcept;

/// D times the model vector field with the controlled symbol replaced by u.
[[nodiscard]] Rates transformed_field(const Parameters& p, State s, double u, ControlKind which);

/// Generic form of the transformed field returning (dx/ds, dy/ds, D) so the
/// shooting code can push dual numbers through it.
template <class T>
std::array<T, 3> transformed_rates(const Parameters& p, ControlKind which, const T& x, const T& y, const T& u) {
    const T alpha = (which == ControlKind::Quality) ? u : T(p.alpha);
    const T xi = (which == ControlKind::Quantity) ? u : T(p.xi);
    const T w = p.omega * x * x + 1.0;
    const T D = (1.0 + alpha * xi) * w + x;
    const T dx = x * (1.0 - x / p.gamma) * D - x * y;
    const T dy = p.delta * (x + xi * w) * y - D * (p.m * y + p.epsilon * y * y);
    return {dx, dy, D};
}

/// H = running_weight D + p dx/ds + q dy/ds. Minimizing transformed time is
/// the running_weight = 0 case; minimizing physical time adds D.
[[nodiscard]] double hamiltonian(const Parameters& p, State s, Costate c, double u, ControlKind which,
                                 double running_weight = 0.0);

/// Adjoint right-hand side -dH/d(x, y). With running_weight = 0 this is the
/// transformed-time adjoint, shared by both control problems.
[[nodiscard]] Costate adjoint_rhs(const Parameters& p, State s, Costate c, double u, ControlKind which,
                                  double running_weight = 0.0);

/// dH/du. Quality: [p x (1-x/gamma) - q y (m + eps y)](1 + omega x^2) xi.
/// Quantity: [alpha p x (1-x/gamma) + q delta y - alpha q y (m + eps y)](omega x^2 + 1).
[[nodiscard]] double switching_function(const Parameters& p, State s, Costate c, ControlKind which,
                                        double running_weight = 0.0);

struct SingularRatios {
    double from_S = 0.0;     ///< p/q from S = 0
    double from_Sdot = 0.0;  ///< p/q from dS/ds = 0
    bool degenerate_S = false;
    bool degenerate_Sdot = false;
};

/// The two p/q expressions whose agreement marks a candidate singular arc.
/// A vanishing denominator yields an infinite ratio and sets the flag.
[[nodiscard]] SingularRatios singular_ratios(const Parameters& p, State s, double u, ControlKind which);

// ---------------------------------------------------------------------------
// Direct multiple shooting

/// Propagation of one shooting interval from `from` under constant control u
/// for transformed duration ds, with sensitivities of (x_end, y_end, t) with
/// respect to (x0, y0, u, ds).
struct IntervalPropagation {
    State end;
    double elapsed_t = 0.0;
    std::array<std::array<double, 4>, 3> jacobian{};
};

[[nodiscard]] IntervalPropagation propagate_interval(const ControlProblem& prob, State from, double u, double ds);

struct SolverReport {
    int outer_iterations = 0;
    int inner_iterations = 0;
    int start_index = 0;  ///< which deterministic start converged
    double max_defect = 0.0;
    double endpoint_error = 0.0;
    double objective = 0.0;
    double penalty = 0.0;
};

struct ControlSolution {
    std::vector<double> s_grid;  ///< node values of the transformed time
    std::vector<double> t_grid;  ///< physical time at the nodes
    std::vector<State> states;   ///< n_intervals + 1 nodes
    std::vector<double> controls;  ///< one per interval
    double total_S = 0.0;
    double total_T = 0.0;
    std::vector<double> switching_points;  ///< s where the control moves between bounds
    SolverReport report;
    /// Multipliers of the defect constraints; entry k belongs to the defect
    /// ending at node k+1 and approximates the costate there.
    std::vector<Costate> defect_multipliers;
    Costate endpoint_multiplier;
};

struct SolverOptions {
    int max_outer = 40;
    int max_inner = 400;
    int n_starts = 5;
    double defect_tol = 1e-8;
    double endpoint_tol = 1e-6;
    /// Warm start: per-interval controls and total S.
    std::optional<std::vector<double>> initial_controls;
    std::optional<double> initial_S;
    /// Print one line per outer iteration to standard error.
    bool trace = false;
};

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, double best_residual)
        : Error(ErrorCode::NoConvergence, what), best_residual_(best_residual) {}
    [[nodiscard]] double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

/// Augmented-Lagrangian multiple shooting with a projected quasi-Newton
/// inner solver. Sensitivities come from dual numbers pushed through the RK4
/// recursion. Throws NoConvergence carrying the smallest constraint
/// violation seen over all starts when the target is not reached.
[[nodiscard]] ControlSolution solve_time_optimal(const ControlProblem& prob, const SolverOptions& options = {});

/// Endpoint of a fixed-step re-integration of the solution's controls.
[[nodiscard]] State resimulate_endpoint(const ControlProblem& prob, const ControlSolution& sol);

// ---------------------------------------------------------------------------
// Maximum-principle check

class VerificationFailed : public Error {
public:
    explicit VerificationFailed(const std::string& what) : Error(ErrorCode::VerificationFailed, what) {}
};

inline constexpr double kSwitchingTol = 1e-4;

struct PmpReport {
    std::vector<Costate> costates;      ///< at the nodes, from backward integration
    std::vector<double> switching;      ///< per-interval mean, normalized by its max magnitude
    std::vector<int> violations;        ///< intervals whose control contradicts the sign of S
    double consistency = 0.0;           ///< fraction of consistent intervals
    double max_abs_hamiltonian = 0.0;   ///< should vanish for a free final time
    double running_weight = 0.0;
};

/// Integrates the adjoint backward from the endpoint multiplier and checks
/// the bang-bang law interval by interval.
[[nodiscard]] PmpReport verify_pmp(const ControlProblem& prob, const ControlSolution& sol,
                                   double tol = kSwitchingTol);

}  // namespace bazykin
