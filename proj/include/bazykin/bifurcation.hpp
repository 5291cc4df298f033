#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bazykin/equilibria.hpp"
#include "bazykin/model.hpp"
#include "bazykin/simulate.hpp"

namespace bazykin {

enum class BifurcationKind { Transcritical, SaddleNode, Hopf };

[[nodiscard]] std::string_view to_string(BifurcationKind kind) noexcept;

struct BifurcationPoint {
    BifurcationKind kind = BifurcationKind::Transcritical;
    std::string parameter_name;  ///< "xi" or "epsilon"
    double critical_value = 0.0;
    EquilibriumKind at_equilibrium = EquilibriumKind::Trivial;
};

/// xi* = (m(omega gamma^2 + gamma + 1) - delta gamma) / ((delta - m alpha)(omega gamma^2 + 1)),
/// where E1's predator eigenvalue crosses zero.
[[nodiscard]] double transcritical_xi(const Parameters& p);

/// xi* = m / (delta - m alpha), where E2 reaches the origin.
[[nodiscard]] double saddlenode_xi(const Parameters& p);

struct SotomayorReport {
    double xi = 0.0;  ///< bifurcation parameter value the report was evaluated at
    State at;         ///< equilibrium location
    std::array<double, 2> V{};  ///< right null vector of J (unit length)
    std::array<double, 2> W{};  ///< left null vector of J (unit length)
    double critical_eigenvalue = 0.0;
    double wT_Hxi = 0.0;
    double wT_DHxiV = 0.0;
    double wT_D2HVV = 0.0;
    bool nondegenerate = false;
    /// Sign pattern observed: (0, !=0, !=0) reads as transcritical,
    /// (!=0, -, !=0) as saddle-node.
    bool transcritical_pattern = false;
    bool saddlenode_pattern = false;
};

/// Sotomayor quantities at E1 (Transcritical) or E2 (SaddleNode). By default
/// evaluated at the closed-form critical xi; `xi_override` evaluates at
/// another xi using the eigen-directions of the eigenvalue closest to zero.
/// Throws DegenerateParameter when the null vectors cannot be normalized.
[[nodiscard]] SotomayorReport sotomayor_quantities(const Parameters& p, BifurcationKind which,
                                                   std::optional<double> xi_override = std::nullopt);

/// Trace-zero competition value for the given interior point:
/// epsilon* = (1/y)(1 - x/gamma)(x + 2 omega x^2 (1+alpha xi)) / D - x/(gamma y).
[[nodiscard]] double hopf_epsilon_at(const Parameters& p, State interior) noexcept;

/// Upper epsilon bound for a positive determinant at the interior point.
[[nodiscard]] double determinant_epsilon_bound(const Parameters& p, State interior) noexcept;

struct HopfResult {
    double epsilon = 0.0;
    Equilibrium equilibrium;
    double trace = 0.0;
    double det = 0.0;
    double dtrace_depsilon = 0.0;           ///< numeric transversality
    bool x_differs_from_inv_sqrt_omega = true;  ///< transversality side condition
};

class NoHopfFound : public Error {
public:
    explicit NoHopfFound(const std::string& what) : Error(ErrorCode::NoHopfFound, what) {}
};

/// Follows the interior branch through `interior` across [eps_lo, eps_hi]
/// and bisects on epsilon for epsilon = epsilon*(x*(epsilon), y*(epsilon)),
/// i.e. Tr J = 0 along the branch. Returns nullopt when every trace zero on
/// the branch has Det <= 0 or sits at x* = 1/sqrt(omega). Throws NoHopfFound
/// when the trace does not change sign on the followed branch.
[[nodiscard]] std::optional<HopfResult> hopf_epsilon(const Parameters& p, const Equilibrium& interior,
                                                     double eps_lo, double eps_hi);

enum class HopfCriticality { Supercritical, Subcritical, Undetermined };
[[nodiscard]] std::string_view to_string(HopfCriticality c) noexcept;

struct CriticalityReport {
    HopfCriticality criticality = HopfCriticality::Undetermined;
    double eps_unstable_side = 0.0;
    double eps_stable_side = 0.0;
    std::optional<CycleInfo> cycle_unstable_side;
    std::optional<CycleInfo> cycle_stable_side;
    double stable_side_distance = 0.0;  ///< terminal distance from the equilibrium
};

struct SimulationSettings {
    double t_end = 2000.0;
    double dt = 0.01;
    double transient_fraction = kDefaultTransientFraction;
};

/// Simulates at epsilon* -/+ offset from 1.01x the equilibrium: a small
/// stable cycle on the unstable side reads as supercritical.
[[nodiscard]] CriticalityReport hopf_criticality(const Parameters& p, const HopfResult& hopf, double offset,
                                                 const SimulationSettings& sim = {});

struct PhiCurves {
    double phi1 = 0.0;  ///< E0 curve: delta xi - m(1 + alpha xi)
    double phi2 = 0.0;  ///< E1 curve
    double phi3 = 0.0;  ///< E2 curve
    double phi4 = 0.0;  ///< interior-existence curve; +inf when omega == 0
    bool phi4_defined = true;
};

[[nodiscard]] PhiCurves phi_curves(const Parameters& p_base, double alpha, double xi);

enum class BaseRegion { R1, R2, R3 };
enum class Attractor { E1, E2, Interior, Cycle };
enum class Outcome { Eradication, Dominance, Coexistence, BistableEradication, BistableDominance, Unresolved };

[[nodiscard]] std::string_view to_string(BaseRegion r) noexcept;
[[nodiscard]] std::string_view to_string(Attractor a) noexcept;
[[nodiscard]] std::string_view to_string(Outcome o) noexcept;

/// Position of zero in the ordered chain phi3 <= phi1 <= phi2 <= phi4:
/// band 1 has all four positive, band 5 has all four negative.
[[nodiscard]] int phi_band(const PhiCurves& phi) noexcept;

/// Outcome implied by a set of attractors.
[[nodiscard]] Outcome outcome_from_attractors(const std::vector<Attractor>& attractors) noexcept;

struct RegionLabel {
    BaseRegion base_region = BaseRegion::R1;
    /// "S1".."S5" from phi_band, or the base region name when xi == 0.
    std::string subregion;
    /// Conventional A_ij name where the correspondence is unambiguous.
    std::string alias;
    std::vector<Attractor> stable_attractors;
    std::optional<Outcome> outcome;  ///< empty on a phi-curve boundary
    bool boundary = false;
    PhiCurves phi;
};

inline constexpr double kPhiBoundaryTol = 1e-9;

struct CycleProbe {
    SimulationSettings sim{500.0, 0.01, kDefaultTransientFraction};
    double seed_scale = 1.01;
};

/// Attractors from equilibrium stability plus a limit-cycle probe seeded at
/// seed_scale x each unstable interior focus/node.
[[nodiscard]] std::vector<Attractor> stable_attractors(const Parameters& p, const CycleProbe& probe = {});

[[nodiscard]] BaseRegion base_region(const Parameters& p_base);

[[nodiscard]] RegionLabel classify_region(const Parameters& p_base, double alpha, double xi,
                                          const CycleProbe& probe = {});

struct GridAxis {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n = 2;
};

struct RegionCell {
    double alpha = 0.0;
    double xi = 0.0;
    RegionLabel label;
};

/// Row-major over (alpha, xi): index = i_alpha * xi.n + i_xi.
[[nodiscard]] std::vector<RegionCell> region_atlas(const Parameters& p_base, const GridAxis& alpha,
                                                   const GridAxis& xi, const CycleProbe& probe = {});
[[nodiscard]] std::vector<RegionCell> region_atlas_serial(const Parameters& p_base, const GridAxis& alpha,
                                                          const GridAxis& xi, const CycleProbe& probe = {});

enum class CuspPlane { AlphaEpsilon, XiEpsilon };
[[nodiscard]] std::string_view to_string(CuspPlane plane) noexcept;

struct CuspCell {
    double u = 0.0;  ///< alpha or xi
    double epsilon = 0.0;
    int n_attractors = 0;
    int component = -1;  ///< bistable component id, -1 when monostable
};

struct Point2 {
    double u = 0.0;
    double epsilon = 0.0;
};

struct CuspMap {
    CuspPlane plane = CuspPlane::AlphaEpsilon;
    GridAxis u_axis;
    GridAxis eps_axis;
    std::vector<CuspCell> cells;  ///< row-major: index = i_u * eps.n + i_eps
    int bistable_components = 0;
    int largest_component = -1;
    std::size_t bistable_cells = 0;
    double bistable_fraction = 0.0;   ///< fraction of cells with >= 2 attractors
    double bistable_area = 0.0;       ///< fraction times rectangle area
    bool adjacent_monostable = false; ///< a monostable cell borders the bistable set
    /// Edges between bistable and monostable cells chained into polylines.
    std::vector<std::vector<Point2>> boundary;
};

[[nodiscard]] CuspMap cusp_scan(const Parameters& p_base, CuspPlane plane, const GridAxis& u,
                                const GridAxis& eps, const CycleProbe& probe = {});
[[nodiscard]] CuspMap cusp_scan_serial(const Parameters& p_base, CuspPlane plane, const GridAxis& u,
                                       const GridAxis& eps, const CycleProbe& probe = {});

}  // namespace bazykin
