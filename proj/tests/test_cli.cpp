#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "drorder/cli.hpp"

using namespace drorder;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "drorder");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string config(const std::string& name) {
    return (fs::path(DRORDER_DATA) / "configs" / (name + ".json")).string();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("drorder_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST_CASE("run: ray-vs-axis writes the two-row orbit and certifies z = 0") {
    const fs::path dir = scratch("run");
    const Result r = run({"run", "--config", config("ray-vs-axis"), "--order", "ab", "--out",
                          dir.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(dir / "orbit_0.csv") == "n,x_1,x_2,shadow_1,shadow_2,residual\n"
                                        "0,5,-3,5,0,5.8309518948453007\n"
                                        "1,0,0,0,0,0\n");
    const Json s = Json::parse(r.out);
    CHECK(s["runs"][0]["converged"] == true);
    CHECK(s["runs"][0]["iterations"] == 1);
    CHECK(s["runs"][0]["certified"] == true);
    CHECK(s["runs"][0]["z"] == Json::array({0.0, 0.0}));
    CHECK(s["runs"][0]["k"] == Json::array({0.0, 0.0}));
}

TEST_CASE("run: zero operators give a single row with residual 0") {
    const fs::path dir = scratch("zero");
    REQUIRE(run({"run", "--config", config("zero-operators"), "--out", dir.string()}).code == 0);
    CHECK(slurp(dir / "orbit_0.csv") == "n,x_1,x_2,shadow_1,shadow_2,residual\n"
                                        "0,1.5,-2,1.5,-2,0\n");
}

TEST_CASE("run: Borwein-Tam order on the linear pair reaches 0") {
    const fs::path dir = scratch("bt");
    const Result r =
        run({"run", "--config", config("linear-asymmetric"), "--order", "bt", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const Json s = Json::parse(r.out);
    CHECK(s["order"] == "bt");
    for (const auto& run : s["runs"]) {
        CHECK(run["converged"] == true);
        for (const auto& v : run["limit"])
            CHECK(std::abs(v.get<double>()) < 1e-9);
    }
    CHECK(fs::exists(dir / "orbit_1.csv"));
}

TEST_CASE("run is byte-deterministic") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    run({"run", "--config", config("subspace-ball"), "--out", a.string()});
    run({"run", "--config", config("subspace-ball"), "--out", b.string()});
    CHECK(slurp(a / "orbit_0.csv") == slurp(b / "orbit_0.csv"));
    CHECK_FALSE(slurp(a / "orbit_0.csv").empty());
}

TEST_CASE("verify: every shipped config and the corpus pass") {
    for (const auto& entry : fs::directory_iterator(fs::path(DRORDER_DATA) / "configs")) {
        CAPTURE(entry.path().string());
        const Result r = run({"verify", "--config", entry.path().string()});
        CHECK(r.code == 0);
        CHECK(Json::parse(r.out).is_array());
    }
    const fs::path dir = scratch("verify");
    const Result r = run({"verify", "--corpus", "--seed", "3", "--out", (dir / "rep.json").string()});
    CHECK(r.code == 0);
    const Json reports = Json::parse(slurp(dir / "rep.json"));
    bool saw_probe = false;
    for (const auto& rep : reports) {
        CHECK(rep["passed"] == true);
        if (rep["expectation"] == "exceeds") {
            saw_probe = true;
            CHECK(rep["max_violation"].get<double>() > rep["tolerance"].get<double>());
        }
    }
    CHECK(saw_probe);
}

TEST_CASE("verify: subspace-ball reports conjugation and shadow equality") {
    const Result r = run({"verify", "--config", config("subspace-ball")});
    REQUIRE(r.code == 0);
    bool conj = false, shadow = false;
    for (const auto& rep : Json::parse(r.out)) {
        const auto name = rep["identity_name"].get<std::string>();
        conj |= name.find("T_{B,A}^n = R_A T_{A,B}^n R_A") != std::string::npos;
        shadow |= name.find("J_A T_{B,A}^n") != std::string::npos;
    }
    CHECK(conj);
    CHECK(shadow);
}

TEST_CASE("config errors exit 2 with a line-anchored message") {
    const fs::path dir = scratch("bad");
    const fs::path bad = write(dir, "bad.json", R"({
  "version": 1,
  "dimension": 2,
  "operator_a": {"kind": "linear_monotone", "matrix": [[1, 0], [0, -1]]},
  "operator_b": {"kind": "normal_cone_ray", "direction": [0, 1]},
  "start_points": [[5, -3]]
})");
    const Result r = run({"verify", "--config", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 4: ") != std::string::npos);
    CHECK(r.err.find("PSD violation") != std::string::npos);

    const fs::path broken = write(dir, "broken.json", "{\n  \"version\": 1,\n  oops\n}\n");
    const Result b = run({"run", "--config", broken.string(), "--out", dir.string()});
    CHECK(b.code == 2);
    CHECK(b.err.find("line 3") != std::string::npos);

    CHECK(run({"run", "--config", (dir / "missing.json").string()}).code == 2);
    CHECK(run({"run", "--config", config("ray-vs-axis"), "--order", "xy"}).code == 2);
    CHECK(run({"verify"}).code == 2);
    CHECK(run({}).code == 2);
}

TEST_CASE("non-finite iterate exits 1") {
    const fs::path dir = scratch("diverge");
    const fs::path cfg = write(dir, "huge.json", R"({
  "version": 1,
  "dimension": 1,
  "operator_a": {"kind": "zero"},
  "operator_b": {"kind": "normal_cone_ray", "direction": [1]},
  "start_points": [[-1e308]]
})");
    // "zero" is not a kind; the config error comes first.
    CHECK(run({"run", "--config", cfg.string(), "--out", dir.string()}).code == 2);
    const fs::path ok = write(dir, "huge2.json", R"({
  "version": 1,
  "dimension": 1,
  "operator_a": {"kind": "linear_monotone", "matrix": [[0]]},
  "operator_b": {"kind": "normal_cone_ball", "center": [0], "radius": 1},
  "start_points": [[-1.7e308]]
})");
    // R_A x = 2x - x overflows, and the ball projection of -inf is NaN.
    const Result r = run({"run", "--config", ok.string(), "--out", dir.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("diverged") != std::string::npos);
}

TEST_CASE("verify fails with exit 3 when an identity is violated") {
    const fs::path dir = scratch("tol");
    // A zero tolerance on tau_num is met by the exact ray-vs-axis instance,
    // but not by the rounding in the subspace-ball identities.
    setenv("DR_ORDER_TOL", "1e-300", 1);
    const Result r = run({"verify", "--config", config("subspace-ball")});
    unsetenv("DR_ORDER_TOL");
    CHECK(r.code == 3);
    CHECK(r.err.find("FAIL") != std::string::npos);
    setenv("DR_ORDER_TOL", "not-a-number", 1);
    CHECK(run({"verify", "--config", config("ray-vs-axis")}).code == 2);
    unsetenv("DR_ORDER_TOL");
}

TEST_CASE("compare: subspace residuals vanish, halfspace grows past 0.1") {
    const fs::path dir = scratch("compare");
    const Result sub = run({"compare", "--config", config("subspace-ball"), "--n", "5", "--out",
                            (dir / "sub.csv").string()});
    REQUIRE(sub.code == 0);
    CHECK(Json::parse(sub.out)["max_residual"].get<double>() <= 1e-9);
    const std::string csv = slurp(dir / "sub.csv");
    CHECK(csv.rfind("n,red_1,red_2,blue_1,blue_2,residual\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

    const Result half = run({"compare", "--config", config("halfspace-ball"), "--n", "5", "--out",
                             (dir / "half.csv").string()});
    REQUIRE(half.code == 0);
    const Json s = Json::parse(half.out);
    CHECK(s["max_residual"].get<double>() > 0.1);
    CHECK(s["residuals"][5].get<double>() == doctest::Approx(0.3653562167384318));
}

TEST_CASE("compare from a solution: both columns constant") {
    const fs::path dir = scratch("const");
    const fs::path cfg = write(dir, "sol.json", R"({
  "version": 1,
  "dimension": 2,
  "operator_a": {"kind": "normal_cone_affine_subspace", "offset": [0, 0], "directions": [[1, 0.5]]},
  "operator_b": {"kind": "normal_cone_ball", "center": [2, 1], "radius": 1},
  "start_points": [[2, 1]]
})");
    REQUIRE(run({"compare", "--config", cfg.string(), "--out", (dir / "c.csv").string()}).code == 0);
    std::istringstream rows(slurp(dir / "c.csv"));
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line))
        CHECK(line.substr(line.find(',') + 1) == "2,1,2,1,0");
}

TEST_CASE("the installed binary behaves like the library entry point") {
    const fs::path dir = scratch("binary");
    const std::string cmd = std::string(DRORDER_BIN) + " run --config " + config("ray-vs-axis") +
                            " --out " + dir.string() + " > " + (dir / "out.json").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(Json::parse(slurp(dir / "out.json"))["runs"][0]["converged"] == true);
    const std::string bad = std::string(DRORDER_BIN) + " verify --config " +
                            (dir / "nope.json").string() + " 2> /dev/null";
    const int s2 = std::system(bad.c_str());
    CHECK(WEXITSTATUS(s2) == 2);
}
