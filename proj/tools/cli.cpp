#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <random>
#include <stdexcept>

#include "bazykin/control.hpp"
#include "bazykin/io.hpp"
#include "bazykin/simulate.hpp"
#include "bazykin/sweep.hpp"

namespace bazykin::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParameterFlags {
    std::optional<double> gamma, alpha, xi, omega, epsilon, delta, m;

    // The regions command claims --alpha and --xi for its sweep axes.
    void attach(CLI::App& app, bool alpha_xi = true) {
        app.add_option("--gamma", gamma, "Carrying capacity (overrides config)");
        if (alpha_xi) {
            app.add_option("--alpha", alpha, "Additional-food quality (overrides config)");
            app.add_option("--xi", xi, "Additional-food quantity (overrides config)");
        }
        app.add_option("--omega", omega, "Group-defence strength (overrides config)");
        app.add_option("--epsilon", epsilon, "Predator competition (overrides config)");
        app.add_option("--delta", delta, "Predator growth (overrides config)");
        app.add_option("--m", m, "Predator mortality (overrides config)");
    }

    void apply(Parameters& p) const {
        if (gamma) p.gamma = *gamma;
        if (alpha) p.alpha = *alpha;
        if (xi) p.xi = *xi;
        if (omega) p.omega = *omega;
        if (epsilon) p.epsilon = *epsilon;
        if (delta) p.delta = *delta;
        if (m) p.m = *m;
    }
};

// Options every subcommand accepts.
struct Common {
    std::string config;
    std::string output = "-";
    ParameterFlags flags;

    void attach(CLI::App& app, bool alpha_xi = true) {
        app.add_option("-c,--config", config, "JSON config file");
        app.add_option("-o,--output", output, "Output path; '-' writes to standard output")->capture_default_str();
        flags.attach(app, alpha_xi);
    }

    [[nodiscard]] json document() const { return config.empty() ? json::object() : read_json_file(config); }

    // flags > config > defaults
    [[nodiscard]] Parameters parameters(const json& doc) const {
        LoadedParameters lp = parameters_from_json(doc);
        for (const std::string& w : lp.warnings) std::cerr << "warning: " << w << '\n';
        flags.apply(lp.params);
        return lp.params;
    }
};

json block(const json& doc, const char* key) {
    if (doc.contains(key)) {
        if (!doc.at(key).is_object()) throw InvalidInput(std::string("config block '") + key + "' must be an object");
        return doc.at(key);
    }
    return json::object();
}

template <class T>
T pick(const std::optional<T>& flag, const json& blk, const char* key, T fallback) {
    if (flag) return *flag;
    if (blk.contains(key)) {
        try {
            return blk.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw InvalidInput(std::string("config key '") + key + "': " + e.what());
        }
    }
    return fallback;
}

GridAxis axis_from(const std::optional<std::string>& flag, const json& blk, const char* key,
                   std::optional<GridAxis> fallback = std::nullopt) {
    std::string text;
    if (flag) {
        text = *flag;
    } else if (blk.contains(key)) {
        text = blk.at(key).get<std::string>();
    } else if (fallback) {
        return *fallback;
    } else {
        throw UsageError(std::string("missing sweep axis --") + key + " (syntax lo..hi:n)");
    }
    try {
        return parse_axis(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

State parse_pair(const std::vector<double>& v, const char* what) {
    if (v.size() != 2) throw UsageError(std::string(what) + " takes exactly two values");
    return {v[0], v[1]};
}

double& parameter_by_name(Parameters& p, const std::string& name) {
    if (name == "gamma") return p.gamma;
    if (name == "alpha") return p.alpha;
    if (name == "xi") return p.xi;
    if (name == "omega") return p.omega;
    if (name == "epsilon") return p.epsilon;
    if (name == "delta") return p.delta;
    if (name == "m") return p.m;
    throw UsageError("unknown parameter '" + name + "'");
}

json sotomayor_json(const SotomayorReport& r) {
    return json{{"xi", r.xi},
                {"at", {r.at.x, r.at.y}},
                {"V", {r.V[0], r.V[1]}},
                {"W", {r.W[0], r.W[1]}},
                {"critical_eigenvalue", r.critical_eigenvalue},
                {"wT_Hxi", r.wT_Hxi},
                {"wT_DHxiV", r.wT_DHxiV},
                {"wT_D2HVV", r.wT_D2HVV},
                {"transcritical_pattern", r.transcritical_pattern},
                {"saddlenode_pattern", r.saddlenode_pattern}};
}

// ---------------------------------------------------------------------------

struct SimulateCmd {
    Common common;
    std::optional<double> t_end, dt, x0, y0, rtol, atol;
    std::vector<std::vector<double>> starts;
    bool adaptive = false;
    bool detect = false;
    double transient = kDefaultTransientFraction;

    void attach(CLI::App& app) {
        common.attach(app);
        app.add_option("--t-end", t_end, "Final time (default 100)");
        app.add_option("--dt", dt, "RK4 step (default 0.01)");
        auto* ox = app.add_option("--x0", x0, "Initial prey (default 1)");
        auto* oy = app.add_option("--y0", y0, "Initial predator (default 1)");
        app.add_option("--start", starts, "Phase-portrait start x,y; repeatable")
            ->delimiter(',')
            ->expected(2)
            ->excludes(ox)
            ->excludes(oy);
        app.add_flag("--adaptive", adaptive, "Use the embedded Runge-Kutta pair");
        app.add_option("--rtol", rtol, "Adaptive relative tolerance (default 1e-8)");
        app.add_option("--atol", atol, "Adaptive absolute tolerance (default 1e-10)");
        app.add_flag("--detect", detect, "Report limit-cycle detection on standard error");
        app.add_option("--transient", transient, "Fraction discarded before cycle detection")->capture_default_str();
    }

    int operator()() const {
        const json doc = common.document();
        const Parameters p = common.parameters(doc);
        const json blk = block(doc, "simulate");
        const double T = pick(t_end, blk, "t_end", 100.0);
        const double h = pick(dt, blk, "dt", 0.01);

        std::vector<State> portrait;
        for (const auto& s : starts) portrait.push_back(parse_pair(s, "--start"));
        if (portrait.empty() && !x0 && !y0 && blk.contains("starts")) {
            for (const auto& s : blk.at("starts")) portrait.push_back(parse_pair(s.get<std::vector<double>>(), "starts"));
        }
        if (!portrait.empty()) {
            if (adaptive) throw UsageError("--adaptive applies to single trajectories only");
            write_output(common.output, portrait_csv(phase_portrait(p, portrait, T, h)));
            return 0;
        }

        State s0{1.0, 1.0};
        if (blk.contains("start")) s0 = parse_pair(blk.at("start").get<std::vector<double>>(), "start");
        if (x0) s0.x = *x0;
        if (y0) s0.y = *y0;
        const Trajectory traj = adaptive ? integrate_adaptive(p, s0, T, pick(rtol, blk, "rtol", 1e-8),
                                                              pick(atol, blk, "atol", 1e-10))
                                         : integrate(p, s0, T, h);
        write_output(common.output, trajectory_csv(traj));
        if (detect) {
            const auto cyc = detect_limit_cycle(traj, transient);
            std::cerr << "cycle: " << (cyc ? "true" : "false");
            if (cyc) {
                std::cerr << " period: " << format_number(cyc->period) << " amplitude_x: "
                          << format_number(cyc->amplitude_x) << " amplitude_y: " << format_number(cyc->amplitude_y);
            }
            std::cerr << '\n';
        }
        return 0;
    }
};

struct EquilibriaCmd {
    Common common;
    std::optional<std::string> nullclines;
    bool show_case = false;

    void attach(CLI::App& app) {
        common.attach(app);
        app.add_option("--nullclines", nullclines, "Emit nullcline CSV on the x grid lo..hi:n instead");
        app.add_flag("--case", show_case, "Emit the nullcline case classification as JSON instead");
    }

    int operator()() const {
        const json doc = common.document();
        const Parameters p = common.parameters(doc);
        if (nullclines && show_case) throw UsageError("--nullclines and --case are mutually exclusive");
        if (nullclines) {
            const GridAxis ax = axis_from(nullclines, json::object(), "nullclines");
            write_output(common.output, nullclines_csv(nullcline_curves(p, linspace(ax.lo, ax.hi, ax.n))));
            return 0;
        }
        if (show_case) {
            const NullclineCase c = nullcline_case(p);
            write_output(common.output, dump(json{{"prey_case", std::string(to_string(c.prey_case))},
                                                  {"predator_case", std::string(to_string(c.predator_case))},
                                                  {"degenerate", c.degenerate},
                                                  {"omega_zero", c.omega_zero}}));
            return 0;
        }
        write_output(common.output, dump(equilibria_json(all_equilibria(p))));
        return 0;
    }
};

struct BifurcateCmd {
    Common common;
    std::string kind = "transcritical";
    std::string eps_range = "0.001..1";
    std::optional<double> offset;
    std::optional<std::string> sweep;
    std::optional<std::string> range;

    void attach(CLI::App& app) {
        common.attach(app);
        app.add_option("--kind", kind, "transcritical | saddle-node | hopf")
            ->check(CLI::IsMember({"transcritical", "saddle-node", "hopf"}))
            ->capture_default_str();
        app.add_option("--eps-range", eps_range, "Hopf search bracket lo..hi")->capture_default_str();
        app.add_option("--criticality-offset", offset, "Classify the Hopf point by simulating at eps* -/+ offset");
        app.add_option("--sweep", sweep, "Emit an equilibrium diagram CSV over this parameter instead");
        app.add_option("--range", range, "Diagram grid lo..hi:n (with --sweep)");
    }

    int operator()() const {
        const json doc = common.document();
        const Parameters p = common.parameters(doc);
        if (sweep) {
            if (!range) throw UsageError("--sweep needs --range lo..hi:n");
            const GridAxis ax = axis_from(range, json::object(), "range");
            std::string csv = "value,kind,x,y,stability\n";
            for (double v : linspace(ax.lo, ax.hi, ax.n)) {
                Parameters q = p;
                parameter_by_name(q, *sweep) = v;
                for (const Equilibrium& e : all_equilibria(q)) {
                    csv += format_number(v) + ',' + std::string(to_string(e.kind)) + ',' + format_number(e.location.x) +
                           ',' + format_number(e.location.y) + ',' + std::string(to_string(e.stability)) + '\n';
                }
            }
            write_output(common.output, csv);
            return 0;
        }
        if (range) throw UsageError("--range needs --sweep");

        json out;
        if (kind == "transcritical" || kind == "saddle-node") {
            const bool tc = kind == "transcritical";
            out["kind"] = tc ? "transcritical" : "saddle_node";
            out["xi_star"] = tc ? transcritical_xi(p) : saddlenode_xi(p);
            out["sotomayor"] = sotomayor_json(
                sotomayor_quantities(p, tc ? BifurcationKind::Transcritical : BifurcationKind::SaddleNode));
        } else {
            std::string text = eps_range;
            const auto dots = text.find("..");
            if (dots == std::string::npos) throw UsageError("--eps-range must be lo..hi");
            double lo = 0.0, hi = 0.0;
            try {
                lo = std::stod(text.substr(0, dots));
                hi = std::stod(text.substr(dots + 2));
            } catch (const std::exception&) {
                throw UsageError("--eps-range must be lo..hi");
            }
            const auto interior = interior_equilibria(p);
            if (interior.empty()) throw NoHopfFound("no interior equilibrium at the configured epsilon");
            std::optional<HopfResult> found;
            std::optional<NoHopfFound> last_error;
            for (const Equilibrium& e : interior) {
                try {
                    found = hopf_epsilon(p, e, lo, hi);
                } catch (const NoHopfFound& err) {
                    last_error = err;
                }
                if (found) break;
            }
            if (!found) {
                if (last_error) throw *last_error;
                throw NoHopfFound("every trace zero on the interior branches has Det <= 0 or x* = 1/sqrt(omega)");
            }
            out["kind"] = "hopf";
            out["epsilon_star"] = found->epsilon;
            out["x"] = found->equilibrium.location.x;
            out["y"] = found->equilibrium.location.y;
            out["trace"] = found->trace;
            out["det"] = found->det;
            out["dtrace_depsilon"] = found->dtrace_depsilon;
            out["x_differs_from_inv_sqrt_omega"] = found->x_differs_from_inv_sqrt_omega;
            if (offset) {
                const CriticalityReport cr = hopf_criticality(p, *found, *offset);
                out["criticality"] = std::string(to_string(cr.criticality));
                out["cycle_unstable_side"] = cr.cycle_unstable_side.has_value();
                out["cycle_stable_side"] = cr.cycle_stable_side.has_value();
            }
        }
        write_output(common.output, dump(out));
        return 0;
    }
};

struct RegionsCmd {
    Common common;
    std::optional<std::string> alpha_axis, xi_axis;
    bool serial = false;
    double probe_t_end = CycleProbe{}.sim.t_end;

    void attach(CLI::App& app) {
        common.attach(app, false);
        app.add_option("--alpha", alpha_axis, "alpha grid lo..hi:n");
        app.add_option("--xi", xi_axis, "xi grid lo..hi:n");
        app.add_flag("--serial", serial, "Use the serial reference kernel");
        app.add_option("--probe-t-end", probe_t_end, "Horizon of the limit-cycle probe")->capture_default_str();
    }

    int operator()() const {
        const json doc = common.document();
        const Parameters p = common.parameters(doc);
        const json blk = block(doc, "regions");
        const GridAxis a = axis_from(alpha_axis, blk, "alpha");
        const GridAxis x = axis_from(xi_axis, blk, "xi");
        CycleProbe probe;
        probe.sim.t_end = probe_t_end;
        const auto cells = serial ? region_atlas_serial(p, a, x, probe) : region_atlas(p, a, x, probe);
        write_output(common.output, regions_csv(cells));
        return 0;
    }
};

struct CuspCmd {
    Common common;
    std::string plane = "alpha";
    std::optional<std::string> u_axis, eps_axis;
    std::optional<std::string> summary;
    bool serial = false;

    void attach(CLI::App& app) {
        common.attach(app);
        app.add_option("--plane", plane, "alpha | xi: the parameter paired with epsilon")
            ->check(CLI::IsMember({"alpha", "xi"}))
            ->capture_default_str();
        app.add_option("--u", u_axis, "Grid of the paired parameter lo..hi:n (default 0..10:60)");
        app.add_option("--eps", eps_axis, "epsilon grid lo..hi:n (default 0.001..1:60)");
        app.add_option("--summary", summary, "Write bistable-region statistics and boundary polylines as JSON");
        app.add_flag("--serial", serial, "Use the serial reference kernel");
    }

    int operator()() const {
        const json doc = common.document();
        const Parameters p = common.parameters(doc);
        const json blk = block(doc, "cusp");
        const GridAxis u = axis_from(u_axis, blk, "u", GridAxis{0.0, 10.0, 60});
        const GridAxis e = axis_from(eps_axis, blk, "eps", GridAxis{0.001, 1.0, 60});
        const CuspPlane pl = plane == "xi" ? CuspPlane::XiEpsilon : CuspPlane::AlphaEpsilon;
        const CuspMap map = serial ? cusp_scan_serial(p, pl, u, e) : cusp_scan(p, pl, u, e);
        write_output(common.output, cusp_csv(map));
        if (summary) write_output(*summary, dump(cusp_summary_json(map)));
        return 0;
    }
};

struct ControlCmd {
    Common common;
    std::optional<std::string> which, objective;
    std::vector<double> bounds, start, target;
    std::optional<int> n_intervals, rk4_steps;
    std::optional<std::string> summary;

    void attach(CLI::App& app) {
        common.attach(app);
        app.add_option("--which", which, "quality | quantity")->check(CLI::IsMember({"quality", "quantity"}));
        app.add_option("--bounds", bounds, "Control bounds lo,hi")->delimiter(',')->expected(2);
        app.add_option("--start", start, "Initial state x,y")->delimiter(',')->expected(2);
        app.add_option("--target", target, "Target state x,y")->delimiter(',')->expected(2);
        app.add_option("--n-intervals", n_intervals, "Shooting intervals (default 40)");
        app.add_option("--rk4-steps", rk4_steps, "RK4 steps per interval (default 10)");
        app.add_option("--objective", objective, "physical_time | transformed_time")
            ->check(CLI::IsMember({"physical_time", "transformed_time"}));
        app.add_option("--summary", summary, "Write solver and maximum-principle diagnostics as JSON");
    }

    [[nodiscard]] ControlProblem problem(const json& doc, const Parameters& p) const {
        json blk = block(doc, "control");
        if (which) blk["which"] = *which;
        if (objective) blk["objective"] = *objective;
        if (!bounds.empty()) blk["bounds"] = bounds;
        if (!start.empty()) blk["start"] = start;
        if (!target.empty()) blk["target"] = target;
        if (n_intervals) blk["n_intervals"] = *n_intervals;
        if (rk4_steps) blk["rk4_steps_per_interval"] = *rk4_steps;
        if (!blk.contains("start") || !blk.contains("target")) {
            throw UsageError("control needs start and target (flags or config 'control' block)");
        }
        return control_problem_from_json(blk, p);
    }

    int operator()() const {
        const json doc = common.document();
        const Parameters p = common.parameters(doc);
        const ControlProblem prob = problem(doc, p);
        const ControlSolution sol = solve_time_optimal(prob);
        const PmpReport pmp = verify_pmp(prob, sol);
        write_output(common.output, control_csv(prob, sol, pmp));
        if (summary) write_output(*summary, dump(control_summary_json(sol, pmp)));
        return 0;
    }
};

// Self-checks of the model invariants for one parameter set.
struct VerifyCmd {
    ControlCmd control;
    bool with_control = false;
    int samples = 200;
    unsigned seed = 12345;

    void attach(CLI::App& app) {
        control.attach(app);
        app.add_flag("--with-control", with_control, "Also solve the control problem and check the maximum principle");
        app.add_option("--samples", samples, "Random points for the derivative check")->capture_default_str();
        app.add_option("--seed", seed, "Seed for the random points")->capture_default_str();
    }

    int operator()() const {
        const json doc = control.common.document();
        const Parameters p = control.common.parameters(doc);
        require_valid(p);
        json checks = json::array();
        bool all = true;
        const auto record = [&](const std::string& name, bool ok, double value) {
            checks.push_back(json{{"name", name}, {"passed", ok}, {"value", value}});
            all = all && ok;
        };

        double worst = 0.0;
        for (const Equilibrium& e : interior_equilibria(p)) {
            const Rates r = vector_field(p, e.location);
            worst = std::max({worst, std::abs(r.dx), std::abs(r.dy), std::abs(prey_nullcline_residual(p, e.location)),
                              std::abs(predator_nullcline_residual(p, e.location))});
        }
        record("interior_residuals", worst < 1e-8, worst);

        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> ux(0.01, 1.5 * p.gamma);
        std::uniform_real_distribution<double> uy(0.01, 5.0);
        double jac_err = 0.0;
        for (int i = 0; i < samples; ++i) {
            const State s{ux(rng), uy(rng)};
            const Jacobian2 J = jacobian(p, s);
            const double h = 1e-6;
            const Rates fxp = vector_field(p, {s.x + h, s.y}), fxm = vector_field(p, {s.x - h, s.y});
            const Rates fyp = vector_field(p, {s.x, s.y + h}), fym = vector_field(p, {s.x, s.y - h});
            const double fd[4] = {(fxp.dx - fxm.dx) / (2 * h), (fyp.dx - fym.dx) / (2 * h), (fxp.dy - fxm.dy) / (2 * h),
                                  (fyp.dy - fym.dy) / (2 * h)};
            const double an[4] = {J.j11, J.j12, J.j21, J.j22};
            for (int k = 0; k < 4; ++k) jac_err = std::max(jac_err, std::abs(fd[k] - an[k]) / std::max(1.0, std::abs(an[k])));
        }
        record("jacobian_vs_finite_difference", jac_err < 1e-6, jac_err);

        const BoundConstant bc = bound_constant(p, 1.0);
        if (!bc.degenerate) {
            double excess = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < 5; ++i) {
                const State s0{ux(rng), uy(rng)};
                const Trajectory traj = integrate(p, s0, 50.0, 0.01);
                const double bound = std::max(s0.x + s0.y / p.delta, bc.ultimate_bound) + 1e-6;
                for (const State& s : traj.states) excess = std::max(excess, s.x + s.y / p.delta - bound);
            }
            record("ultimate_bound", excess <= 0.0, excess);
        }

        if (with_control) {
            const ControlProblem prob = control.problem(doc, p);
            const ControlSolution sol = solve_time_optimal(prob);
            const PmpReport pmp = verify_pmp(prob, sol);
            const State end = resimulate_endpoint(prob, sol);
            const double err = std::max(std::abs(end.x - prob.target.x), std::abs(end.y - prob.target.y));
            record("control_resimulation_endpoint", err < 1e-6, err);
            record("control_pmp_consistency", pmp.consistency >= 0.95, pmp.consistency);
        }

        write_output(control.common.output, dump(json{{"passed", all}, {"checks", checks}}));
        if (!all) throw VerificationFailed("one or more verification checks failed");
        return 0;
    }
};

void report_error(const Error& e) {
    std::cerr << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
}

}  // namespace

GridAxis parse_axis(const std::string& text) {
    const auto dots = text.find("..");
    const auto colon = text.rfind(':');
    if (dots == std::string::npos || colon == std::string::npos || colon < dots) {
        throw std::invalid_argument("sweep '" + text + "' must have the form lo..hi:n");
    }
    GridAxis ax;
    try {
        std::size_t used = 0;
        const std::string lo = text.substr(0, dots);
        const std::string hi = text.substr(dots + 2, colon - dots - 2);
        const std::string n = text.substr(colon + 1);
        ax.lo = std::stod(lo, &used);
        if (used != lo.size()) throw std::invalid_argument("lo");
        ax.hi = std::stod(hi, &used);
        if (used != hi.size()) throw std::invalid_argument("hi");
        const long count = std::stol(n, &used);
        if (used != n.size() || count < 1) throw std::invalid_argument("n");
        ax.n = static_cast<std::size_t>(count);
    } catch (const std::exception&) {
        throw std::invalid_argument("sweep '" + text + "' must have the form lo..hi:n with n >= 1");
    }
    if (!(ax.lo <= ax.hi)) throw std::invalid_argument("sweep '" + text + "' needs lo <= hi");
    return ax;
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Additional-food predator-prey analysis toolkit", "bazykin-af"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "bazykin-af 0.1.0");

    SimulateCmd simulate;
    EquilibriaCmd equilibria;
    BifurcateCmd bifurcate;
    RegionsCmd regions;
    CuspCmd cusp;
    ControlCmd control;
    VerifyCmd verify;
    simulate.attach(*app.add_subcommand("simulate", "Integrate trajectories (CSV t,x,y)"));
    equilibria.attach(*app.add_subcommand("equilibria", "Equilibria with eigenvalues and stability (JSON)"));
    bifurcate.attach(*app.add_subcommand("bifurcate", "Transcritical, saddle-node and Hopf critical values (JSON)"));
    regions.attach(*app.add_subcommand("regions", "Region atlas over an (alpha, xi) grid (CSV)"));
    cusp.attach(*app.add_subcommand("cusp", "Attractor counts over an (alpha or xi, epsilon) grid (CSV)"));
    control.attach(*app.add_subcommand("control", "Time-optimal control by multiple shooting (CSV)"));
    verify.attach(*app.add_subcommand("verify", "Check model invariants for a parameter set (JSON)"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("simulate")) return simulate();
        if (app.got_subcommand("equilibria")) return equilibria();
        if (app.got_subcommand("bifurcate")) return bifurcate();
        if (app.got_subcommand("regions")) return regions();
        if (app.got_subcommand("cusp")) return cusp();
        if (app.got_subcommand("control")) return control();
        if (app.got_subcommand("verify")) return verify();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        report_error(e);
        return 1;
    } catch (const nlohmann::json::exception& e) {
        report_error(InvalidInput(std::string("malformed config: ") + e.what()));
        return 1;
    }
    return 2;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"bazykin-af"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace bazykin::cli
