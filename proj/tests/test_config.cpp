#include <doctest.h>

#include <string>

#include "drorder/config.hpp"
#include "drorder/csv.hpp"
#include "support/random_ops.hpp"

using namespace drorder;
using namespace drorder::testing;

namespace {

const char* kRayAxis = R"({
  "version": 1,
  "name": "ray-vs-axis",
  "dimension": 2,
  "operator_a": {"kind": "normal_cone_affine_subspace", "offset": [0, 0], "directions": [[1, 0]]},
  "operator_b": {"kind": "normal_cone_ray", "direction": [0, 1]},
  "start_points": [[5, -3]]
})";

std::size_t error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return static_cast<std::size_t>(-1);
}

std::string error_text(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto at = s.find(from);
    REQUIRE(at != std::string::npos);
    return s.replace(at, from.size(), to);
}

} // namespace

TEST_CASE("minimal config parses with defaults") {
    const ProblemConfig c = parse_config(kRayAxis);
    CHECK(c.name == "ray-vs-axis");
    CHECK(c.dimension == 2);
    CHECK(c.operator_a.kind() == OperatorKind::NormalConeAffineSubspace);
    CHECK(c.operator_b.kind() == OperatorKind::NormalConeRay);
    CHECK(c.start_points.size() == 1);
    CHECK(c.max_iter == 10000);
    CHECK(c.stop_tol == 1e-10);
    CHECK(c.mode == SplitMode::Standard);
    CHECK(c.tolerances.tau_num == 1e-9);
}

TEST_CASE("errors are anchored to the offending line") {
    CHECK(error_line(replace(kRayAxis, "\"version\": 1", "\"version\": 2")) == 2);
    CHECK(error_line(replace(kRayAxis, "\"dimension\": 2", "\"dimension\": 2, \"extra\": 0")) == 4);
    CHECK(error_line(replace(kRayAxis, "\"direction\": [0, 1]", "\"direction\": [0, 1, 0]")) == 6);
    CHECK(error_line(replace(kRayAxis, "[[5, -3]]", "[[5, -3, 1]]")) == 7);
    CHECK(error_line(replace(kRayAxis, "[[5, -3]]", "[[5, -3]")) == 8);
    CHECK(error_line(replace(kRayAxis, "\"normal_cone_ray\"", "\"mystery\"")) == 6);
    CHECK(error_text(replace(kRayAxis, "\"normal_cone_ray\"", "\"mystery\""))
              .find("line 6: ") == 0);
}

TEST_CASE("non-monotone matrix is rejected with a PSD message") {
    const std::string text = replace(
        kRayAxis,
        R"({"kind": "normal_cone_affine_subspace", "offset": [0, 0], "directions": [[1, 0]]})",
        R"({"kind": "linear_monotone", "matrix": [[1, 0], [0, -1]]})");
    CHECK(error_line(text) == 5);
    CHECK(error_text(text).find("PSD violation") != std::string::npos);
}

TEST_CASE("mode rules") {
    const std::string sphere = replace(
        kRayAxis, R"({"kind": "normal_cone_ray", "direction": [0, 1]})",
        R"({"kind": "sphere_selection", "center": [0, 0], "radius": 1, "tie_direction": [1, 0]})");
    CHECK(error_text(sphere).find("generalized") != std::string::npos);
    const std::string gen = replace(sphere, "\"version\": 1", "\"version\": 1, \"mode\": \"generalized\"");
    CHECK(parse_config(gen).mode == SplitMode::Generalized);
    const std::string bad_a = replace(
        gen, R"("operator_a": {"kind": "normal_cone_affine_subspace", "offset": [0, 0], "directions": [[1, 0]]})",
        R"("operator_a": {"kind": "normal_cone_ball", "center": [0, 0], "radius": 1})");
    CHECK(error_line(bad_a) == 5);
}

TEST_CASE("box infinities and nested kinds") {
    const std::string text = R"({
  "version": 1, "dimension": 3,
  "operator_a": {"kind": "rotation", "inner": {"kind": "normal_cone_box",
                 "lower": ["-inf", 0, -1], "upper": [1, "inf", 2]}},
  "operator_b": {"kind": "product", "blocks": [
      {"kind": "inverse", "inner": {"kind": "linear_monotone", "matrix": [[2]]}},
      {"kind": "affine_relation", "matrix": [[1, 0], [0, 1]], "offset": [1, 1]}]},
  "start_points": [[1, 2, 3]],
  "tolerances": {"tau_num": 1e-8}
})";
    const ProblemConfig c = parse_config(text);
    CHECK(c.operator_a.kind() == OperatorKind::Rotation);
    CHECK(c.operator_b.kind() == OperatorKind::Product);
    CHECK(c.tolerances.tau_num == 1e-8);
    CHECK(c.tolerances.tau_graph == 1e-8);
    const Json back = config_to_json(c);
    CHECK(back["operator_a"]["inner"]["lower"][0] == "-inf");
    CHECK(back["operator_a"]["inner"]["upper"][1] == "inf");
}

TEST_CASE("property: config round trip gives bit-identical evaluations") {
    Rng rng(41);
    for (int i = 0; i < 200; ++i) {
        const Index d = pick(rng, 1, 6);
        ProblemConfig c;
        c.dimension = d;
        c.operator_a = random_monotone(rng, d);
        c.operator_b = random_monotone(rng, d);
        c.start_points = {random_vector(rng, d)};
        const std::string text = config_to_json(c).dump(2);
        const ProblemConfig r = parse_config(text);
        CHECK(config_to_json(r).dump(2) == text);
        for (int k = 0; k < 5; ++k) {
            const Point x = random_vector(rng, d);
            const Point lhs = dr_apply(c.operator_a, c.operator_b, x);
            const Point rhs = dr_apply(r.operator_a, r.operator_b, x);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("report JSON fields") {
    IdentityReport r = make_report("probe", 0.1, Expectation::Exceeds);
    r.record(4.5);
    const Json j = report_to_json(r);
    CHECK(j["identity_name"] == "probe");
    CHECK(j["max_violation"] == 4.5);
    CHECK(j["sample_count"] == 1);
    CHECK(j["tolerance"] == 0.1);
    CHECK(j["passed"] == true);
    CHECK(j["expectation"] == "exceeds");
}

TEST_CASE("CSV layout and determinism") {
    const ProblemConfig c = parse_config(kRayAxis);
    auto render = [&] {
        std::ostringstream out;
        write_orbit_csv(out, iterate(SplitOperator::douglas_rachford(c.operator_a, c.operator_b),
                                     c.start_points[0]));
        return out.str();
    };
    const std::string csv = render();
    CHECK(csv == "n,x_1,x_2,shadow_1,shadow_2,residual\n"
                 "0,5,-3,5,0,5.8309518948453007\n"
                 "1,0,0,0,0,0\n");
    CHECK(render() == csv);
    CHECK(format_double(0.1) == "0.10000000000000001");
}
