#include "bazykin/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace bazykin {

namespace {

constexpr const char* kParameterKeys[] = {"gamma", "alpha", "xi", "omega", "epsilon", "delta", "m"};

double& field(Parameters& p, std::string_view key) {
    if (key == "gamma") return p.gamma;
    if (key == "alpha") return p.alpha;
    if (key == "xi") return p.xi;
    if (key == "omega") return p.omega;
    if (key == "epsilon") return p.epsilon;
    if (key == "delta") return p.delta;
    return p.m;
}

double number(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_number()) throw InvalidInput("config key '" + key + "' must be a number");
    return v.get<double>();
}

State state_from(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw InvalidInput("config key '" + key + "' must be a two-element numeric array");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

LoadedParameters parameters_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("config must be a JSON object");
    LoadedParameters out;
    if (j.contains("dimensional")) {
        const json& d = j.at("dimensional");
        if (!d.is_object()) throw InvalidInput("'dimensional' must be an object");
        DimensionalParameters dp;
        const auto take = [&](const char* key, double& dst) {
            if (d.contains(key)) dst = number(d, key);
        };
        take("r", dp.r);
        take("K", dp.K);
        take("c", dp.c);
        take("a", dp.a);
        take("b", dp.b);
        take("A", dp.A);
        take("eta", dp.eta);
        take("delta1", dp.delta1);
        take("m1", dp.m1);
        take("d", dp.d);
        take("alpha", dp.alpha);
        ScalingConvention conv = ScalingConvention::AsPublished;
        if (d.contains("convention")) {
            const std::string c = d.at("convention").get<std::string>();
            if (c == "substituted") {
                conv = ScalingConvention::Substituted;
            } else if (c != "as_published") {
                throw InvalidInput("dimensional.convention must be 'as_published' or 'substituted'");
            }
        }
        NondimensionalResult nd = nondimensionalize(dp, conv);
        out.params = nd.params;
        out.warnings = std::move(nd.warnings);
    }
    for (const char* key : kParameterKeys) {
        if (j.contains(key)) field(out.params, key) = number(j, key);
    }
    return out;
}

json to_json(const Parameters& p) {
    return json{{"gamma", p.gamma}, {"alpha", p.alpha}, {"xi", p.xi},   {"omega", p.omega},
                {"epsilon", p.epsilon}, {"delta", p.delta}, {"m", p.m}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("malformed config '" + path + "': " + e.what());
    }
}

ControlProblem control_problem_from_json(const json& block, const Parameters& params) {
    if (!block.is_object()) throw InvalidInput("'control' block must be an object");
    ControlProblem prob;
    prob.params = params;
    try {
        if (block.contains("which")) {
            const std::string w = block.at("which").get<std::string>();
            if (w == "quality" || w == "alpha") {
                prob.which = ControlKind::Quality;
            } else if (w == "quantity" || w == "xi") {
                prob.which = ControlKind::Quantity;
            } else {
                throw InvalidInput("control.which must be 'quality' or 'quantity'");
            }
        }
        if (block.contains("bounds")) {
            const State b = state_from(block, "bounds");
            prob.u_min = b.x;
            prob.u_max = b.y;
        }
        if (block.contains("start")) prob.start = state_from(block, "start");
        if (block.contains("target")) prob.target = state_from(block, "target");
        if (block.contains("n_intervals")) prob.n_intervals = block.at("n_intervals").get<int>();
        if (block.contains("rk4_steps_per_interval")) {
            prob.rk4_steps_per_interval = block.at("rk4_steps_per_interval").get<int>();
        }
        if (block.contains("objective")) {
            const std::string o = block.at("objective").get<std::string>();
            if (o == "physical_time") {
                prob.objective = Objective::PhysicalTime;
            } else if (o == "transformed_time") {
                prob.objective = Objective::TransformedTime;
            } else {
                throw InvalidInput("control.objective must be 'physical_time' or 'transformed_time'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed control block: ") + e.what());
    }
    return prob;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw IoError("failed writing output file '" + path + "'");
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string s = "t,x,y\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        s += format_number(traj.times[i]) + ',' + format_number(traj.states[i].x) + ',' +
             format_number(traj.states[i].y) + '\n';
    }
    return s;
}

std::string portrait_csv(const std::vector<PortraitRun>& runs) {
    std::string s = "run,t,x,y\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
        if (!runs[r].trajectory) continue;
        const Trajectory& traj = *runs[r].trajectory;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            s += std::to_string(r) + ',' + format_number(traj.times[i]) + ',' + format_number(traj.states[i].x) +
                 ',' + format_number(traj.states[i].y) + '\n';
        }
    }
    return s;
}

json equilibria_json(const std::vector<Equilibrium>& eqs) {
    json arr = json::array();
    for (const Equilibrium& e : eqs) {
        json j;
        j["kind"] = std::string(to_string(e.kind));
        j["x"] = e.location.x;
        j["y"] = e.location.y;
        j["eig_re"] = {e.eigenvalues[0].real(), e.eigenvalues[1].real()};
        j["eig_im"] = {e.eigenvalues[0].imag(), e.eigenvalues[1].imag()};
        j["stability"] = std::string(to_string(e.stability));
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string nullclines_csv(const NullclineCurves& curves) {
    std::string s = "x,prey_y,predator_y\n";
    for (std::size_t i = 0; i < curves.x.size(); ++i) {
        s += format_number(curves.x[i]) + ',' + format_number(curves.prey_y[i]) + ',' +
             (curves.predator_y.empty() ? std::string("nan") : format_number(curves.predator_y[i])) + '\n';
    }
    return s;
}

std::string regions_csv(const std::vector<RegionCell>& cells) {
    std::string s = "alpha,xi,phi1,phi2,phi3,phi4,base_region,subregion,outcome\n";
    for (const RegionCell& c : cells) {
        const RegionLabel& l = c.label;
        s += format_number(c.alpha) + ',' + format_number(c.xi) + ',' + format_number(l.phi.phi1) + ',' +
             format_number(l.phi.phi2) + ',' + format_number(l.phi.phi3) + ',' + format_number(l.phi.phi4) + ',' +
             std::string(to_string(l.base_region)) + ',' + l.subregion + ',' +
             (l.outcome ? std::string(to_string(*l.outcome)) : std::string("boundary")) + '\n';
    }
    return s;
}

std::string cusp_csv(const CuspMap& map) {
    std::string s = "u,epsilon,n_attractors\n";
    for (const CuspCell& c : map.cells) {
        s += format_number(c.u) + ',' + format_number(c.epsilon) + ',' + std::to_string(c.n_attractors) + '\n';
    }
    return s;
}

json cusp_summary_json(const CuspMap& map) {
    json j;
    j["plane"] = std::string(to_string(map.plane));
    j["bistable_cells"] = map.bistable_cells;
    j["bistable_fraction"] = map.bistable_fraction;
    j["bistable_area"] = map.bistable_area;
    j["bistable_components"] = map.bistable_components;
    j["adjacent_monostable"] = map.adjacent_monostable;
    json lines = json::array();
    for (const auto& line : map.boundary) {
        json pts = json::array();
        for (const Point2& p : line) pts.push_back({p.u, p.epsilon});
        lines.push_back(std::move(pts));
    }
    j["boundary"] = std::move(lines);
    return j;
}

std::string control_csv(const ControlProblem& prob, const ControlSolution& sol, const PmpReport& pmp) {
    std::string s = "s,t,x,y,u,p,q,switching_function\n";
    const std::size_t N = sol.controls.size();
    for (std::size_t k = 0; k < sol.states.size(); ++k) {
        const double u = N == 0 ? prob.u_min : sol.controls[std::min(k, N - 1)];
        const Costate c = k < pmp.costates.size() ? pmp.costates[k] : Costate{};
        const Parameters par = with_control(prob.params, prob.which, u);
        const double sw = switching_function(par, sol.states[k], c, prob.which, pmp.running_weight);
        s += format_number(sol.s_grid[k]) + ',' + format_number(sol.t_grid[k]) + ',' + format_number(sol.states[k].x) +
             ',' + format_number(sol.states[k].y) + ',' + format_number(u) + ',' + format_number(c.p) + ',' +
             format_number(c.q) + ',' + format_number(sw) + '\n';
    }
    return s;
}

json control_summary_json(const ControlSolution& sol, const PmpReport& pmp) {
    json j;
    j["total_T"] = sol.total_T;
    j["total_S"] = sol.total_S;
    j["switching_points"] = sol.switching_points;
    j["max_defect"] = sol.report.max_defect;
    j["endpoint_error"] = sol.report.endpoint_error;
    j["outer_iterations"] = sol.report.outer_iterations;
    j["inner_iterations"] = sol.report.inner_iterations;
    j["start_index"] = sol.report.start_index;
    j["pmp_consistency"] = pmp.consistency;
    j["pmp_violations"] = pmp.violations;
    j["max_abs_hamiltonian"] = pmp.max_abs_hamiltonian;
    return j;
}

std::string dump(const json& j) { return j.dump(2) + '\n'; }

}  // namespace bazykin
