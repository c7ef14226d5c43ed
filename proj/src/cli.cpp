#include "drorder/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "drorder/csv.hpp"
#include "drorder/harness.hpp"

namespace drorder::cli {

namespace {

Json vec_json(const Point& p) {
    Json j = Json::array();
    for (Index i = 0; i < p.size(); ++i)
        j.push_back(p[i]);
    return j;
}

std::string_view order_name(Order o) {
    switch (o) {
    case Order::AB: return "ab";
    case Order::BA: return "ba";
    case Order::BT: return "bt";
    }
    return "ab";
}

bool is_normal_cone(const OperatorSpec& op) {
    switch (op.kind()) {
    case OperatorKind::NormalConeAffineSubspace:
    case OperatorKind::NormalConeHalfspace:
    case OperatorKind::NormalConeBall:
    case OperatorKind::NormalConeRay:
    case OperatorKind::NormalConeBox:
        return true;
    default:
        return false;
    }
}

// Folds per-sample reports with the same identity into one.
class ReportSet {
public:
    void add(const IdentityReport& r) {
        for (auto& e : reports_)
            if (e.identity_name == r.identity_name) {
                e.merge(r);
                return;
            }
        reports_.push_back(r);
    }
    void add(const std::vector<IdentityReport>& rs) {
        for (const auto& r : rs)
            add(r);
    }
    std::vector<IdentityReport> take() { return std::move(reports_); }

private:
    std::vector<IdentityReport> reports_;
};

std::vector<Point> converged_limits(const SplitOperator& t, const ProblemConfig& c) {
    std::vector<Point> out;
    for (const auto& x0 : c.start_points) {
        const Orbit o = iterate(t, x0, {.max_iter = c.max_iter, .stop_tol = c.stop_tol});
        if (o.converged)
            out.push_back(o.last());
    }
    return out;
}

struct Options {
    std::string config;
    std::string order = "ab";
    std::size_t n = 0;
    std::string out;
    std::uint64_t seed = 0;
    bool corpus = false;
};

ProblemConfig load(const std::string& path) {
    ProblemConfig c = load_config(path);
    apply_env_overrides(c);
    return c;
}

int cmd_run(const Options& o, std::ostream& out) {
    const ProblemConfig c = load(o.config);
    const Order order = o.order == "ba" ? Order::BA : o.order == "bt" ? Order::BT : Order::AB;
    const OperatorSpec& first = order == Order::BA ? c.operator_b : c.operator_a;
    const OperatorSpec& second = order == Order::BA ? c.operator_a : c.operator_b;
    const SplitOperator t = order == Order::BT
                                ? SplitOperator::borwein_tam(first, second, c.mode)
                                : SplitOperator::douglas_rachford(first, second, c.mode);
    const std::string dir = o.out.empty() ? "." : o.out;

    Json runs = Json::array();
    for (std::size_t i = 0; i < c.start_points.size(); ++i) {
        const Orbit orbit =
            iterate(t, c.start_points[i], {.max_iter = c.max_iter, .stop_tol = c.stop_tol});
        const std::string path =
            (std::filesystem::path(dir) / ("orbit_" + std::to_string(i) + ".csv")).string();
        std::ostringstream csv;
        write_orbit_csv(csv, orbit);
        write_file_atomic(path, csv.str());

        Json r;
        r["start"] = vec_json(c.start_points[i]);
        r["csv"] = path;
        r["converged"] = orbit.converged;
        r["iterations"] = orbit.iterations;
        r["final_residual"] = orbit.final_residual;
        r["dropped"] = orbit.dropped;
        r["limit"] = vec_json(orbit.last());
        r["shadow"] = vec_json(orbit.last_shadow());
        // The solution pair belongs to (first, second); a Borwein-Tam limit is
        // certified as a fixed point of T_{first,second}.
        try {
            const SolutionPair s = extract_solution(first, second, orbit.last(), c.tolerances);
            r["z"] = vec_json(s.z);
            r["k"] = vec_json(s.k);
            r["certified"] = true;
            r["residual_a"] = s.residual_a;
            r["residual_b"] = s.residual_b;
        } catch (const CertificateError& e) {
            r["z"] = vec_json(resolve(first, orbit.last()));
            r["k"] = vec_json(orbit.last() - resolve(first, orbit.last()));
            r["certified"] = false;
            r["certificate_error"] = e.what();
        }
        runs.push_back(std::move(r));
    }
    Json summary;
    summary["name"] = c.name;
    summary["order"] = order_name(order);
    summary["runs"] = std::move(runs);
    out << summary.dump(2) << '\n';
    return kOk;
}

int finish_verify(const std::vector<IdentityReport>& reports, const Options& o,
                  std::ostream& out, std::ostream& err) {
    const std::string text = reports_to_json(reports).dump(2) + "\n";
    if (o.out.empty())
        out << text;
    else
        write_file_atomic(o.out, text);
    std::size_t failed = 0;
    for (const auto& r : reports)
        if (!r.passed()) {
            ++failed;
            err << "FAIL " << r.identity_name << " (max_violation " << r.max_violation
                << ", tolerance " << r.tolerance << ")\n";
        }
    return failed ? kVerifyFailed : kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    std::vector<IdentityReport> reports;
    if (o.corpus) {
        for (const auto& inst : harness::corpus(o.seed))
            for (auto& r : harness::run_instance(inst))
                reports.push_back(std::move(r));
    } else {
        const ProblemConfig c = load(o.config);
        reports = verify_config(c, o.seed, o.n ? o.n : 20);
    }
    return finish_verify(reports, o, out, err);
}

int cmd_compare(const Options& o, std::ostream& out) {
    const ProblemConfig c = load(o.config);
    const OperatorSpec& a = c.operator_a;
    const OperatorSpec& b = c.operator_b;
    const std::size_t n = o.n ? o.n : 5;
    const Point& x0 = c.start_points.front();
    const Orbit red = trace([&](const Point& p) { return dr_apply(a, b, p); },
                            [&](const Point& p) { return resolve(a, p); }, reflect(a, x0), n);
    const Orbit blue = trace([&](const Point& p) { return dr_apply(b, a, p); },
                             [&](const Point& p) { return resolve(b, p); }, x0, n);
    const std::vector<double> residuals = conjugation_profile(a, b, x0, n);
    std::ostringstream csv;
    write_compare_csv(csv, red, blue, residuals);
    const std::string path = o.out.empty() ? "compare.csv" : o.out;
    write_file_atomic(path, csv.str());

    double worst = 0.0;
    for (double r : residuals)
        worst = std::max(worst, r);
    Json summary;
    summary["name"] = c.name;
    summary["csv"] = path;
    summary["n"] = n;
    summary["residuals"] = residuals;
    summary["max_residual"] = worst;
    out << summary.dump(2) << '\n';
    return kOk;
}

int cmd_manifest(const Options& o, std::ostream& out) {
    const std::string text = harness::manifest_json(harness::corpus(o.seed)).dump(2) + "\n";
    if (o.out.empty())
        out << text;
    else
        write_file_atomic(o.out, text);
    return kOk;
}

} // namespace

void apply_env_overrides(ProblemConfig& config) {
    const char* env = std::getenv("DR_ORDER_TOL");
    if (!env || !*env)
        return;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (*end != '\0' || !(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string("DR_ORDER_TOL must be a positive number, got '") + env +
                              "'",
                          0);
    config.tolerances.tau_num = v;
}

std::vector<IdentityReport> verify_config(const ProblemConfig& c, std::uint64_t seed,
                                          std::size_t n, std::size_t extra) {
    const OperatorSpec& a = c.operator_a;
    const OperatorSpec& b = c.operator_b;
    const Tolerances& tol = c.tolerances;
    const bool monotone = a.monotone() && b.monotone();

    std::vector<Point> samples = c.start_points;
    double scale = 1.0;
    for (const auto& p : samples)
        scale = std::max(scale, p.cwiseAbs().maxCoeff());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    for (std::size_t i = 0; i < extra; ++i) {
        Point p(c.dimension);
        for (Index k = 0; k < p.size(); ++k)
            p[k] = u(rng);
        samples.push_back(p);
    }

    ReportSet set;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Point& x = samples[i];
        const Point& y = samples[(i + 1) % samples.size()];
        if (a.affine())
            set.add(check_commutation(a, b, x, n, tol, c.mode));
        if (a.affine_subspace_cone()) {
            set.add(check_conjugation(a, b, x, n, tol));
            set.add(check_shadow_equality(a, b, x, n, tol));
            set.add(check_borwein_tam_factorization(a, b, x, tol));
            if (b.monotone())
                set.add(check_nonexpansive_transfer(a, b, x, y, tol));
        }
        if (a.affine() && b.affine())
            set.add(check_commutator(a, b, x, tol));
        set.add(check_reflection_defect_identity(a, b, x, tol));
        if (monotone) {
            IdentityReport r = make_report("T_{A,B} firmly nonexpansive", tol.tau_num);
            r.record(std::max(0.0, -check_firmly_nonexpansive(
                                       [&](const Point& p) { return dr_apply(a, b, p); }, x, y)));
            set.add(r);
        }
        if (a.affine_subspace_cone() && b.affine_subspace_cone()) {
            set.add(check_borwein_tam_symmetric(a, b, x, tol));
            IdentityReport r = make_report("T_[A,B] firmly nonexpansive", tol.tau_num);
            r.record(std::max(0.0, -check_firmly_nonexpansive(
                                       [&](const Point& p) { return borwein_tam_apply(a, b, p); },
                                       x, y)));
            set.add(r);
        }
    }

    if (monotone) {
        const std::vector<Point> fixed =
            converged_limits(SplitOperator::douglas_rachford(a, b, c.mode), c);
        std::vector<SolutionPair> pairs;
        for (const auto& f : fixed)
            pairs.push_back(extract_solution(a, b, f, tol));
        if (!pairs.empty()) {
            set.add(check_dual_symmetry(a, b, pairs, tol));
            if (is_normal_cone(a) && is_normal_cone(b))
                set.add(check_product_structure(a, b, pairs, tol));
        }
        if (a.affine() && !fixed.empty()) {
            set.add(check_bijection(a, b, fixed, tol));
            set.add(check_isometry(a, fixed, tol));
            const std::vector<Point> fixed_ba =
                converged_limits(SplitOperator::douglas_rachford(b, a, c.mode), c);
            if (!fixed_ba.empty())
                set.add(check_primal_images(a, b, fixed_ba, tol));
        }
    }
    return set.take();
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Order-dependent Douglas-Rachford operators: iterate, verify, compare"};
    app.require_subcommand(1);
    Options o;

    auto* run = app.add_subcommand("run", "iterate one order from every start point");
    run->add_option("--config", o.config, "problem config (JSON)")->required();
    run->add_option("--order", o.order, "ab, ba or bt")
        ->check(CLI::IsMember({"ab", "ba", "bt"}));
    run->add_option("--out", o.out, "directory for orbit_<i>.csv");

    auto* verify = app.add_subcommand("verify", "run the identity checkers");
    auto* cfg_opt = verify->add_option("--config", o.config, "problem config (JSON)");
    auto* corpus_opt = verify->add_flag("--corpus", o.corpus, "run the built-in corpus");
    cfg_opt->excludes(corpus_opt);
    verify->add_option("--n", o.n, "iteration horizon for the identities (default 20)");
    verify->add_option("--seed", o.seed, "seed for random sample points");
    verify->add_option("--out", o.out, "report path (stdout when omitted)");

    auto* compare = app.add_subcommand("compare", "side-by-side orbits of both orders");
    compare->add_option("--config", o.config, "problem config (JSON)")->required();
    compare->add_option("--n", o.n, "number of steps (default 5)");
    compare->add_option("--out", o.out, "CSV path (default compare.csv)");

    auto* manifest = app.add_subcommand("manifest", "");
    manifest->group("");
    manifest->add_option("--seed", o.seed);
    manifest->add_option("--out", o.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (run->parsed())
            return cmd_run(o, out);
        if (verify->parsed()) {
            if (o.config.empty() && !o.corpus) {
                err << "error: verify needs --config or --corpus\n";
                return kConfigError;
            }
            return cmd_verify(o, out, err);
        }
        if (compare->parsed())
            return cmd_compare(o, out);
        if (manifest->parsed())
            return cmd_manifest(o, out);
    } catch (const ConfigError& e) {
        err << "error: " << (o.config.empty() ? "" : o.config + ": ") << e.what() << '\n';
        return kConfigError;
    } catch (const DivergenceError& e) {
        err << "error: diverged at step " << e.step() << ": " << e.what() << '\n';
        return kDiverged;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDiverged;
    }
    return kOk;
}

} // namespace drorder::cli
