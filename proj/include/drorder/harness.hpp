#pragma once

// Named regression instances with closed-form expectations, and the
// subspace/halfspace-vs-ball scenarios that compare the two orbit families.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "drorder/analysis.hpp"
#include "drorder/config.hpp"

namespace drorder::harness {

// Where an expected value comes from: a published closed form, an
// independent computation (oracle or golden run), or an immediate identity.
enum class Origin { Published, Computed, Immediate };

std::string_view origin_name(Origin o);

struct Check {
    std::string label;
    Origin origin;
    std::function<IdentityReport()> evaluate;
};

struct NamedInstance {
    std::string name;
    ProblemConfig config;
    std::vector<Check> checks;
};

/// One report per check, named "<instance>: <label> (<origin>)".
std::vector<IdentityReport> run_instance(const NamedInstance& inst);

/// The full corpus. `seed` drives the random sample points.
std::vector<NamedInstance> corpus(std::uint64_t seed = 0);
NamedInstance instance(const std::string& name, std::uint64_t seed = 0);

/// JSON array of {name, config}.
Json manifest_json(const std::vector<NamedInstance>& instances);

// Closed-form tolerance for exact expectations at unit scale.
inline constexpr double kExactTol = 1e-12;

// --- figure scenarios ---------------------------------------------------------

enum class FigureKind { SubspaceBall, HalfspaceBall };

/// U = span{(1, 1/2)} or the halfspace {y <= 1/2}; V = ball((2, 1), 1);
/// start (4, 3). Representative parameters, not a coordinate replica.
ProblemConfig figure_config(FigureKind kind);

/// Threshold the halfspace conjugation defect must exceed.
inline constexpr double kHalfspaceThreshold = 0.1;

struct FigureResult {
    Orbit red;                     // T_{A,B}^m R_A x0
    Orbit blue;                    // T_{B,A}^m x0
    std::vector<double> residuals; // ||blue_m - R_A red_m||
    IdentityReport report;
};

/// n >= 5. When `csv_dir` is non-empty writes <kind>_red.csv,
/// <kind>_blue.csv and <kind>_compare.csv there.
FigureResult figure_scenarios(FigureKind kind, const Point& x0, std::size_t n,
                              const std::string& csv_dir = {});

std::string_view figure_name(FigureKind kind);

} // namespace drorder::harness
