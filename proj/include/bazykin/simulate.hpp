#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bazykin/errors.hpp"
#include "bazykin/model.hpp"

namespace bazykin {

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] const State& back() const { return states.back(); }
};

struct CycleInfo {
    double period = 0.0;
    double amplitude_x = 0.0;  ///< peak-to-trough
    double amplitude_y = 0.0;
    State mean_state;
};

/// Raised when a component drops below -kPositivitySlack.
class PositivityViolation : public Error {
public:
    PositivityViolation(const std::string& what, std::size_t step)
        : Error(ErrorCode::PositivityViolation, what), step_(step) {}
    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Raised on a non-finite state; `step` is the first bad step.
class Divergence : public Error {
public:
    Divergence(const std::string& what, std::size_t step)
        : Error(ErrorCode::Divergence, what), step_(step) {}
    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& what) : Error(ErrorCode::InsufficientData, what) {}
};

inline constexpr double kPositivitySlack = 1e-9;

/// Fixed-step RK4 from t = 0 to t_end. The final step is shortened so the
/// trajectory ends exactly at t_end.
[[nodiscard]] Trajectory integrate(const Parameters& p, State s0, double t_end, double dt);

/// Embedded Runge-Kutta (Dormand-Prince 5(4)) with step halving on rejection
/// and doubling when the error estimate is comfortably small.
[[nodiscard]] Trajectory integrate_adaptive(const Parameters& p, State s0, double t_end, double rel_tol,
                                            double abs_tol);

struct CycleThresholds {
    double period_agreement = 0.02;  ///< relative spread of inter-peak intervals
    double min_amplitude = 1e-3;     ///< peak-to-trough in x
    int min_intervals = 3;
    /// Relative spread allowed among the last peak heights; rejects slowly
    /// decaying spirals whose peaks are regular but shrinking.
    double amplitude_agreement = 0.02;
    /// Post-transient span must cover this many periods.
    double min_periods = 5.0;
};

inline constexpr double kDefaultTransientFraction = 0.5;

[[nodiscard]] std::optional<CycleInfo> detect_limit_cycle(const Trajectory& traj,
                                                          double transient_fraction = kDefaultTransientFraction,
                                                          const CycleThresholds& thresholds = {});

struct PortraitRun {
    State start;
    std::optional<Trajectory> trajectory;
    std::optional<ErrorCode> error;
    std::string message;
};

/// One independent trajectory per start. Per-start failures are recorded in
/// the corresponding PortraitRun instead of aborting the batch. Runs on the
/// OpenMP team; phase_portrait_serial is the reference.
[[nodiscard]] std::vector<PortraitRun> phase_portrait(const Parameters& p, const std::vector<State>& starts,
                                                      double t_end, double dt);
[[nodiscard]] std::vector<PortraitRun> phase_portrait_serial(const Parameters& p,
                                                             const std::vector<State>& starts, double t_end,
                                                             double dt);

}  // namespace bazykin
