#pragma once

// Config ingestion and byte-stable CSV/JSON emission.

#include <json.hpp>

#include <string>
#include <vector>

#include "bazykin/bifurcation.hpp"
#include "bazykin/control.hpp"
#include "bazykin/equilibria.hpp"
#include "bazykin/errors.hpp"
#include "bazykin/model.hpp"
#include "bazykin/simulate.hpp"

namespace bazykin {

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

using json = nlohmann::ordered_json;

struct LoadedParameters {
    Parameters params;
    std::vector<std::string> warnings;
};

/// Reads gamma, alpha, xi, omega, epsilon, delta, m from a flat object.
/// Missing keys keep their defaults; a "dimensional" block, when present,
/// supplies every key it maps to before the flat keys are applied on top.
[[nodiscard]] LoadedParameters parameters_from_json(const json& j);
[[nodiscard]] json to_json(const Parameters& p);

/// Parses a JSON document from disk. Throws IoError when unreadable and
/// InvalidInput when malformed.
[[nodiscard]] json read_json_file(const std::string& path);

[[nodiscard]] ControlProblem control_problem_from_json(const json& block, const Parameters& params);

/// "%.17g": enough digits for every double to round-trip.
[[nodiscard]] std::string format_number(double v);

/// Writes `content` to `path`, or to standard output when path is empty or "-".
void write_output(const std::string& path, const std::string& content);

[[nodiscard]] std::string trajectory_csv(const Trajectory& traj);
[[nodiscard]] std::string portrait_csv(const std::vector<PortraitRun>& runs);
[[nodiscard]] json equilibria_json(const std::vector<Equilibrium>& eqs);
[[nodiscard]] std::string nullclines_csv(const NullclineCurves& curves);
[[nodiscard]] std::string regions_csv(const std::vector<RegionCell>& cells);
[[nodiscard]] std::string cusp_csv(const CuspMap& map);
[[nodiscard]] json cusp_summary_json(const CuspMap& map);
[[nodiscard]] std::string control_csv(const ControlProblem& prob, const ControlSolution& sol, const PmpReport& pmp);
[[nodiscard]] json control_summary_json(const ControlSolution& sol, const PmpReport& pmp);

/// Pretty-printed with a trailing newline.
[[nodiscard]] std::string dump(const json& j);

}  // namespace bazykin
