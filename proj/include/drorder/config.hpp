#pragma once

// Problem configuration files and the JSON forms of operators and reports.
//
// Operator objects carry a "kind" tag:
//   linear_monotone              {matrix}
//   affine_relation              {matrix, offset}
//   normal_cone_affine_subspace  {offset, directions}
//   normal_cone_halfspace        {normal, rhs}
//   normal_cone_ball             {center, radius}
//   normal_cone_ray              {direction}
//   normal_cone_box              {lower, upper}   ("-inf"/"inf" allowed)
//   sphere_selection             {center, radius, tie_direction}
//   inverse | rotation           {inner}
//   product                      {blocks}
// Matrices are arrays of rows; `directions` is an array of spanning vectors.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "drorder/analysis.hpp"
#include "drorder/operators.hpp"
#include "drorder/splitting.hpp"

namespace drorder {

using Json = nlohmann::ordered_json;

// Parse or schema error; `line` is 1-based, 0 when unknown.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct ProblemConfig {
    int version = 1;
    std::string name;
    Index dimension = 0;
    OperatorSpec operator_a = OperatorSpec::zero(1);
    OperatorSpec operator_b = OperatorSpec::zero(1);
    std::vector<Point> start_points;
    std::size_t max_iter = 10'000;
    double stop_tol = 1e-10;
    Tolerances tolerances;
    SplitMode mode = SplitMode::Standard;
};

Json operator_to_json(const OperatorSpec& op);
OperatorSpec operator_from_json(const Json& j, const Tolerances& tol = {});

Json config_to_json(const ProblemConfig& config);
/// Validates the schema (unknown fields rejected) and every operator
/// invariant. Errors are reported as ConfigError with the line of the
/// offending value when `source` is the text the JSON was parsed from.
ProblemConfig config_from_json(const Json& j, const std::string& source = {});
ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::string& path);

Json report_to_json(const IdentityReport& report);
Json reports_to_json(const std::vector<IdentityReport>& reports);

/// 1-based line where the value at `pointer` starts in `text`; 0 if not found.
std::size_t locate_line(const std::string& text, const Json::json_pointer& pointer);

} // namespace drorder
