#include "bazykin/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "bazykin/rk4.hpp"
#include "bazykin/sweep.hpp"

namespace bazykin {

namespace {

using Vec2 = std::array<double, 2>;

void check_start(State s0) {
    if (!std::isfinite(s0.x) || !std::isfinite(s0.y)) throw InvalidInput("initial state must be finite");
    if (s0.x < 0.0 || s0.y < 0.0) throw InvalidInput("initial state must be non-negative");
}

Vec2 field(const Parameters& p, const Vec2& v) {
    const double x = v[0];
    const double y = v[1];
    const double D = response_denominator(p, x);
    const double food = x + p.xi * (p.omega * x * x + 1.0);
    return {x * (1.0 - x / p.gamma) - x * y / D, p.delta * food * y / D - p.m * y - p.epsilon * y * y};
}

// Clamps [-slack, 0) to zero. Returns false when a component is below -slack.
bool clamp_nonnegative(Vec2& v) {
    for (double& c : v) {
        if (c < -kPositivitySlack) return false;
        if (c < 0.0) c = 0.0;
    }
    return true;
}

[[noreturn]] void throw_divergence(std::size_t step, double t) {
    std::ostringstream msg;
    msg << "non-finite state at step " << step << " (t = " << t << ")";
    throw Divergence(msg.str(), step);
}

[[noreturn]] void throw_positivity(std::size_t step, double t, const Vec2& v) {
    std::ostringstream msg;
    msg << "state left the non-negative orthant at step " << step << " (t = " << t << ", x = " << v[0]
        << ", y = " << v[1] << ")";
    throw PositivityViolation(msg.str(), step);
}

}  // namespace

Trajectory integrate(const Parameters& p, State s0, double t_end, double dt) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidInput("t_end must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("dt must be positive");
    require_valid(p);
    check_start(s0);

    // Number of steps; a trailing fragment shorter than 1e-9 dt is absorbed.
    const double ratio = t_end / dt;
    auto steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
    steps = std::max<std::size_t>(steps, 1);

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(s0);

    const auto f = [&p](const Vec2& v) { return field(p, v); };
    Vec2 v{s0.x, s0.y};
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t_prev = static_cast<double>(k - 1) * dt;
        const double t = (k == steps) ? t_end : static_cast<double>(k) * dt;
        v = rk4_step(f, v, t - t_prev);
        if (!std::isfinite(v[0]) || !std::isfinite(v[1])) throw_divergence(k, t);
        if (!clamp_nonnegative(v)) throw_positivity(k, t, v);
        traj.times.push_back(t);
        traj.states.push_back({v[0], v[1]});
    }
    return traj;
}

Trajectory integrate_adaptive(const Parameters& p, State s0, double t_end, double rel_tol, double abs_tol) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidInput("t_end must be positive");
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) throw InvalidInput("rel_tol must be positive");
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) throw InvalidInput("abs_tol must be positive");
    require_valid(p);
    check_start(s0);

    // Dormand-Prince 5(4) tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2, (void)c3, (void)c4, (void)c5;

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(s0);

    const double h_min = 1e-14 * std::max(1.0, t_end);
    double h = std::min(1e-2, t_end);
    double t = 0.0;
    Vec2 y{s0.x, s0.y};
    Vec2 k1 = field(p, y);
    std::size_t step = 0;

    const auto combo = [&y](double hh, std::initializer_list<std::pair<double, const Vec2*>> terms) {
        Vec2 out = y;
        for (const auto& [w, k] : terms) {
            out[0] += hh * w * (*k)[0];
            out[1] += hh * w * (*k)[1];
        }
        return out;
    };

    while (t < t_end) {
        if (t + h > t_end) h = t_end - t;
        const Vec2 k2 = field(p, combo(h, {{a21, &k1}}));
        const Vec2 k3 = field(p, combo(h, {{a31, &k1}, {a32, &k2}}));
        const Vec2 k4 = field(p, combo(h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Vec2 k5 = field(p, combo(h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Vec2 k6 = field(p, combo(h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        Vec2 y_new = combo(h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const Vec2 k7 = field(p, y_new);

        double err = 0.0;
        bool finite = std::isfinite(y_new[0]) && std::isfinite(y_new[1]);
        for (int i = 0; i < 2 && finite; ++i) {
            const double e =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(e) / scale);
        }
        const bool positive = y_new[0] >= -kPositivitySlack && y_new[1] >= -kPositivitySlack;

        if (!finite || !std::isfinite(err) || err > 1.0 || !positive) {
            h *= 0.5;
            if (h < h_min) {
                if (!finite) throw_divergence(step + 1, t);
                if (!positive) throw_positivity(step + 1, t + 2.0 * h, y_new);
                throw_divergence(step + 1, t);
            }
            continue;
        }

        clamp_nonnegative(y_new);
        t = (t_end - (t + h) < h_min) ? t_end : t + h;
        y = y_new;
        k1 = field(p, y);  // FSAL would reuse k7, but clamping may have moved y.
        ++step;
        traj.times.push_back(t);
        traj.states.push_back({y[0], y[1]});
        if (err < 1.0 / 64.0) h *= 2.0;
    }
    return traj;
}

std::optional<CycleInfo> detect_limit_cycle(const Trajectory& traj, double transient_fraction,
                                            const CycleThresholds& thresholds) {
    if (!(transient_fraction >= 0.0 && transient_fraction < 1.0)) {
        throw InvalidInput("transient_fraction must lie in [0, 1)");
    }
    if (traj.size() < 16) throw InsufficientData("trajectory has fewer than 16 samples");

    const double t0 = traj.times.front();
    const double t_cut = t0 + transient_fraction * (traj.times.back() - t0);
    const auto first = static_cast<std::size_t>(
        std::lower_bound(traj.times.begin(), traj.times.end(), t_cut) - traj.times.begin());
    if (traj.size() - first < 16) throw InsufficientData("post-transient window has fewer than 16 samples");

    // Local maxima of x with parabolic refinement of the peak time.
    std::vector<double> peak_times;
    std::vector<double> peak_values;
    for (std::size_t i = std::max<std::size_t>(first, 1); i + 1 < traj.size(); ++i) {
        const double xm = traj.states[i - 1].x;
        const double x0 = traj.states[i].x;
        const double xp = traj.states[i + 1].x;
        if (!(x0 > xm && x0 >= xp)) continue;
        const double denom = xm - 2.0 * x0 + xp;
        double shift = 0.0;
        if (denom < 0.0) shift = 0.5 * (xm - xp) / denom;
        const double h = 0.5 * (traj.times[i + 1] - traj.times[i - 1]);
        peak_times.push_back(traj.times[i] + shift * h);
        peak_values.push_back(x0 - 0.25 * (xm - xp) * shift);
    }

    const std::size_t need = static_cast<std::size_t>(thresholds.min_intervals) + 1;
    const double span = traj.times.back() - traj.times[first];
    if (peak_times.size() >= 2) {
        const double period_est = (peak_times.back() - peak_times.front()) / static_cast<double>(peak_times.size() - 1);
        if (peak_times.size() < need && span < thresholds.min_periods * period_est) {
            throw InsufficientData("post-transient span covers fewer than the required number of periods");
        }
    }
    if (peak_times.size() < need) return std::nullopt;

    const std::size_t k0 = peak_times.size() - need;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (std::size_t k = k0; k + 1 < peak_times.size(); ++k) {
        const double dt = peak_times[k + 1] - peak_times[k];
        lo = std::min(lo, dt);
        hi = std::max(hi, dt);
        sum += dt;
    }
    const double period = sum / static_cast<double>(need - 1);
    if (!(period > 0.0) || (hi - lo) > thresholds.period_agreement * period) return std::nullopt;

    // Amplitudes over the window covered by the last intervals.
    const double w_start = peak_times[k0];
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    double xsum = 0.0, ysum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = first; i < traj.size(); ++i) {
        if (traj.times[i] < w_start) continue;
        const State& s = traj.states[i];
        xmin = std::min(xmin, s.x);
        xmax = std::max(xmax, s.x);
        ymin = std::min(ymin, s.y);
        ymax = std::max(ymax, s.y);
        xsum += s.x;
        ysum += s.y;
        ++count;
    }
    const double amp_x = xmax - xmin;
    if (count == 0 || !(amp_x > thresholds.min_amplitude)) return std::nullopt;

    const auto [pmin, pmax] = std::minmax_element(peak_values.begin() + static_cast<std::ptrdiff_t>(k0), peak_values.end());
    if (*pmax - *pmin > thresholds.amplitude_agreement * amp_x) return std::nullopt;

    CycleInfo info;
    info.period = period;
    info.amplitude_x = amp_x;
    info.amplitude_y = ymax - ymin;
    info.mean_state = {xsum / static_cast<double>(count), ysum / static_cast<double>(count)};
    return info;
}

namespace {

PortraitRun run_one(const Parameters& p, State start, double t_end, double dt) {
    PortraitRun run;
    run.start = start;
    try {
        run.trajectory = integrate(p, start, t_end, dt);
    } catch (const Error& e) {
        run.error = e.code();
        run.message = e.what();
    }
    return run;
}

void check_batch(const std::vector<State>& starts) {
    if (starts.empty()) throw InvalidInput("phase portrait needs at least one initial condition");
}

}  // namespace

std::vector<PortraitRun> phase_portrait_serial(const Parameters& p, const std::vector<State>& starts,
                                               double t_end, double dt) {
    check_batch(starts);
    std::vector<PortraitRun> out;
    out.reserve(starts.size());
    for (const State& s : starts) out.push_back(run_one(p, s, t_end, dt));
    return out;
}

std::vector<PortraitRun> phase_portrait(const Parameters& p, const std::vector<State>& starts, double t_end,
                                        double dt) {
    check_batch(starts);
    std::vector<PortraitRun> out(starts.size());
    const auto n = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic) num_threads(sweep_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = run_one(p, starts[static_cast<std::size_t>(i)], t_end, dt);
    }
    return out;
}

}  // namespace bazykin
