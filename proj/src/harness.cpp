#include "drorder/harness.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "drorder/csv.hpp"

namespace drorder::harness {

namespace {

Point pt(std::initializer_list<double> v) {
    Point p(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v)
        p[i++] = x;
    return p;
}

double pos(double v) { return std::max(v, 0.0); }
double neg(double v) { return std::min(v, 0.0); }

std::vector<Point> grid21() {
    std::vector<Point> out;
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j)
            out.push_back(pt({-5.0 + 0.5 * i, -5.0 + 0.5 * j}));
    return out;
}

std::vector<Point> random_points(std::mt19937_64& rng, Index d, std::size_t count,
                                 double scale = 5.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<Point> out;
    for (std::size_t i = 0; i < count; ++i) {
        Point p(d);
        for (Index k = 0; k < d; ++k)
            p[k] = u(rng);
        out.push_back(p);
    }
    return out;
}

Tolerances exact_tolerances() {
    Tolerances t;
    t.tau_num = kExactTol;
    return t;
}

// Max deviation of a computed map from a closed form over a point set.
Check closed_form(std::string label, Origin origin, std::vector<Point> points,
                  std::function<Point(const Point&)> computed,
                  std::function<Point(const Point&)> expected, double tol = kExactTol) {
    return {std::move(label), origin,
            [points = std::move(points), computed = std::move(computed),
             expected = std::move(expected), tol] {
                IdentityReport r = make_report("closed form", tol);
                for (const auto& p : points)
                    r.record((computed(p) - expected(p)).cwiseAbs().maxCoeff());
                return r;
            }};
}

Check scalar(std::string label, Origin origin, std::function<double()> computed, double expected,
             double tol = kExactTol) {
    return {std::move(label), origin, [computed = std::move(computed), expected, tol] {
                IdentityReport r = make_report("value", tol);
                r.record(std::abs(computed() - expected));
                return r;
            }};
}

Check matrix_check(std::string label, Origin origin, std::function<Matrix()> computed,
                   Matrix expected, double tol = kExactTol) {
    return {std::move(label), origin,
            [computed = std::move(computed), expected = std::move(expected), tol] {
                IdentityReport r = make_report("matrix", tol);
                const Matrix m = computed();
                for (Index i = 0; i < m.rows(); ++i)
                    for (Index j = 0; j < m.cols(); ++j)
                        r.record(std::abs(m(i, j) - expected(i, j)));
                return r;
            }};
}

ProblemConfig base_config(std::string name, OperatorSpec a, OperatorSpec b,
                          std::vector<Point> starts) {
    ProblemConfig c;
    c.name = std::move(name);
    c.dimension = a.dimension();
    c.operator_a = std::move(a);
    c.operator_b = std::move(b);
    c.start_points = std::move(starts);
    return c;
}

OperatorSpec x_axis() { return OperatorSpec::affine_subspace(pt({0, 0}), pt({1, 0})); }

// --- instances --------------------------------------------------------------

NamedInstance ray_vs_axis() {
    const OperatorSpec a = x_axis();
    const OperatorSpec b = OperatorSpec::ray(pt({0, 1}));
    NamedInstance inst{"ray-vs-axis", base_config("ray-vs-axis", a, b, {pt({5, -3})}), {}};
    const auto grid = grid21();
    auto& c = inst.checks;
    const auto P = Origin::Published;
    c.push_back(closed_form("R_A(x,y) = (x,-y)", P, grid,
                            [a](const Point& p) { return reflect(a, p); },
                            [](const Point& p) { return pt({p[0], -p[1]}); }));
    c.push_back(closed_form("R_B(x,y) = (-x,|y|)", P, grid,
                            [b](const Point& p) { return reflect(b, p); },
                            [](const Point& p) { return pt({-p[0], std::abs(p[1])}); }));
    c.push_back(closed_form("T_{A,B}(x,y) = (0,y+)", P, grid,
                            [a, b](const Point& p) { return dr_apply(a, b, p); },
                            [](const Point& p) { return pt({0, pos(p[1])}); }));
    c.push_back(closed_form("T_{B,A}(x,y) = (0,y-)", P, grid,
                            [a, b](const Point& p) { return dr_apply(b, a, p); },
                            [](const Point& p) { return pt({0, neg(p[1])}); }));
    c.push_back(closed_form("R_B T_{A,B}(x,y) = (0,y+)", P, grid,
                            [a, b](const Point& p) { return reflect(b, dr_apply(a, b, p)); },
                            [](const Point& p) { return pt({0, pos(p[1])}); }));
    c.push_back(closed_form("T_{B,A} R_B(x,y) = (0,0)", P, grid,
                            [a, b](const Point& p) { return dr_apply(b, a, reflect(b, p)); },
                            [](const Point&) { return pt({0, 0}); }));
    c.push_back(closed_form("R_B T_{B,A}(x,y) = (0,(-y)+)", P, grid,
                            [a, b](const Point& p) { return reflect(b, dr_apply(b, a, p)); },
                            [](const Point& p) { return pt({0, pos(-p[1])}); }));
    c.push_back(closed_form("T_{A,B} R_B(x,y) = (0,|y|)", P, grid,
                            [a, b](const Point& p) { return dr_apply(a, b, reflect(b, p)); },
                            [](const Point& p) { return pt({0, std::abs(p[1])}); }));
    c.push_back({"R_A T_{A,B}^n = T_{B,A}^n R_A on the grid, n = 20", P, [a, b, grid] {
                     IdentityReport r = make_report("", kExactTol);
                     for (const auto& p : grid)
                         r.merge(check_commutation(a, b, p, 20, exact_tolerances()));
                     return r;
                 }});
    c.push_back(scalar("||R_B T_{A,B} x - T_{B,A} R_B x|| = 2 at x = (1,2)", P,
                       [a, b] {
                           return probe_commutation(a, b, pt({1, 2}), 1, ReflectorSlot::B, 0.0)
                               .max_violation;
                       },
                       2.0));
    c.push_back({"R_B T_{A,B} != T_{B,A} R_B", P,
                 [a, b] { return probe_commutation(a, b, pt({1, 2}), 1, ReflectorSlot::B, 1.0); }});
    c.push_back({"orbit from (5,-3) reaches (0,0) after one step", Origin::Computed, [a, b] {
                     const Orbit o = iterate(SplitOperator::douglas_rachford(a, b), pt({5, -3}));
                     IdentityReport r = make_report("", kExactTol);
                     r.record(o.last().norm());
                     r.record(std::abs(static_cast<double>(o.iterations) - 1.0));
                     r.record(o.converged ? 0.0 : 1.0);
                     return r;
                 }});
    c.push_back({"extract_solution at (0,0) gives z = k = 0", Origin::Computed, [a, b] {
                     const SolutionPair s = extract_solution(a, b, pt({0, 0}));
                     IdentityReport r = make_report("", kExactTol);
                     r.record(s.z.norm());
                     r.record(s.k.norm());
                     return r;
                 }});
    return inst;
}

NamedInstance linear_asymmetric() {
    const OperatorSpec a = x_axis();
    Matrix m(2, 2);
    m << 1, 1, 1, 1;
    const OperatorSpec b = OperatorSpec::linear_monotone(m);
    NamedInstance inst{"linear-asymmetric",
                       base_config("linear-asymmetric", a, b, {pt({1, 1}), pt({-3, 2})}),
                       {}};
    auto& c = inst.checks;
    Matrix ab(2, 2), ba(2, 2), diff(2, 2);
    ab << 5, -1, -1, 2;
    ba << 5, 1, 1, 2;
    diff << 0, -2, -2, 0;
    c.push_back(matrix_check(
        "T_{A,B} T_{B,A} = (1/9)[[5,-1],[-1,2]]", Origin::Published,
        [a, b] { return dr_matrix(SplitOperator::borwein_tam(a, b)).linear; }, ab / 9.0));
    c.push_back(matrix_check(
        "T_{B,A} T_{A,B} = (1/9)[[5,1],[1,2]]", Origin::Published,
        [a, b] { return dr_matrix(SplitOperator::borwein_tam(b, a)).linear; }, ba / 9.0));
    c.push_back(matrix_check(
        "offset of both products is 0", Origin::Immediate,
        [a, b] {
            Matrix out(2, 2);
            out.col(0) = dr_matrix(SplitOperator::borwein_tam(a, b)).offset;
            out.col(1) = dr_matrix(SplitOperator::borwein_tam(b, a)).offset;
            return out;
        },
        Matrix::Zero(2, 2)));
    c.push_back(matrix_check(
        "commutator matrix = (1/9)[[0,-2],[-2,0]]", Origin::Computed,
        [a, b] {
            Matrix out(2, 2);
            out.col(0) = commutator(a, b, pt({1, 0}));
            out.col(1) = commutator(a, b, pt({0, 1}));
            return out;
        },
        diff / 9.0));
    c.push_back({"commutator identities on the grid", Origin::Published, [a, b] {
                     IdentityReport r = make_report("", kExactTol);
                     for (const auto& p : grid21())
                         for (const auto& rep : check_commutator(a, b, p, exact_tolerances()))
                             r.merge(rep);
                     return r;
                 }});
    c.push_back({"Borwein-Tam orbit converges to the unique zero (0,0)", Origin::Computed,
                 [a, b] {
                     IdentityReport r = make_report("", 1e-8);
                     for (const auto& x0 : {pt({1, 1}), pt({-3, 2})}) {
                         const Orbit o = iterate(SplitOperator::borwein_tam(a, b), x0,
                                                 {.max_iter = 10'000, .stop_tol = 1e-13});
                         r.record(o.converged ? o.last().norm() : 1.0);
                     }
                     return r;
                 }});
    return inst;
}

NamedInstance bt_not_firm() {
    const OperatorSpec a = OperatorSpec::ray(pt({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}));
    const OperatorSpec b = x_axis();
    NamedInstance inst{"bt-not-firm", base_config("bt-not-firm", a, b, {pt({-2, 2})}), {}};
    auto& c = inst.checks;
    const auto P = Origin::Published;
    const auto grid = grid21();
    c.push_back(closed_form("T_{A,B}(x,y) = ((x+y)+/2, y - (x+y)+/2)", P, grid,
                            [a, b](const Point& p) { return dr_apply(a, b, p); },
                            [](const Point& p) {
                                const double s = 0.5 * pos(p[0] + p[1]);
                                return pt({s, p[1] - s});
                            }));
    c.push_back(closed_form("T_{B,A}(x,y) = ((x-y)+/2, y + (x-y)+/2)", P, grid,
                            [a, b](const Point& p) { return dr_apply(b, a, p); },
                            [](const Point& p) {
                                const double t = 0.5 * pos(p[0] - p[1]);
                                return pt({t, p[1] + t});
                            }));
    for (double alpha : {1.0, 2.0, 0.5}) {
        std::ostringstream tag;
        tag << "alpha = " << alpha;
        c.push_back(closed_form("T_[A,B](-2a,2a) = (a,a), " + tag.str(), P,
                                {pt({-2 * alpha, 2 * alpha})},
                                [a, b](const Point& p) { return borwein_tam_apply(a, b, p); },
                                [alpha](const Point&) { return pt({alpha, alpha}); }));
        c.push_back(scalar(
            "<T_[A,B]x - T_[A,B]y, (Id-T_[A,B])x - (Id-T_[A,B])y> = -2a^2, " + tag.str(), P,
            [a, b, alpha] {
                return check_firmly_nonexpansive(
                    [&](const Point& p) { return borwein_tam_apply(a, b, p); },
                    pt({-2 * alpha, 2 * alpha}), pt({0, 0}));
            },
            -2.0 * alpha * alpha));
        c.push_back(scalar(
            "<T_[B,A]x - T_[B,A]y, (Id-T_[B,A])x - (Id-T_[B,A])y> = -2a^2, " + tag.str(), P,
            [a, b, alpha] {
                return check_firmly_nonexpansive(
                    [&](const Point& p) { return borwein_tam_apply(b, a, p); },
                    pt({-2 * alpha, -2 * alpha}), pt({0, 0}));
            },
            -2.0 * alpha * alpha));
    }
    c.push_back(closed_form("T_[A,B](0,0) = (0,0)", P, {pt({0, 0})},
                            [a, b](const Point& p) { return borwein_tam_apply(a, b, p); },
                            [](const Point&) { return pt({0, 0}); }));
    return inst;
}

NamedInstance subspace_ball(std::uint64_t seed) {
    const ProblemConfig cfg = figure_config(FigureKind::SubspaceBall);
    const OperatorSpec a = cfg.operator_a, b = cfg.operator_b;
    NamedInstance inst{"subspace-ball", cfg, {}};
    inst.config.name = inst.name;
    std::mt19937_64 rng(seed ^ 0x5b);
    const auto samples = random_points(rng, 2, 20);
    auto& c = inst.checks;
    const Point x0 = cfg.start_points.front();
    c.push_back({"T_{B,A}^n = R_A T_{A,B}^n R_A, n = 5", Origin::Published,
                 [a, b, x0] { return check_conjugation(a, b, x0, 5, exact_tolerances()); }});
    c.push_back({"J_A T_{B,A}^n x = J_A T_{A,B}^n R_A x, n = 50", Origin::Published, [a, b, x0] {
                     return check_shadow_equality(a, b, x0, 50, exact_tolerances());
                 }});
    c.push_back({"conjugation at random starts, n = 20", Origin::Published, [a, b, samples] {
                     IdentityReport r = make_report("", 1e-9);
                     for (const auto& p : samples)
                         r.merge(check_conjugation(a, b, p, 20));
                     return r;
                 }});
    c.push_back({"nonexpansive transfer on random pairs", Origin::Published, [a, b, samples] {
                     IdentityReport r = make_report("", 1e-9);
                     for (std::size_t i = 0; i + 1 < samples.size(); i += 2)
                         r.merge(check_nonexpansive_transfer(a, b, samples[i], samples[i + 1]));
                     return r;
                 }});
    c.push_back({"Borwein-Tam factorizations", Origin::Published, [a, b, samples] {
                     IdentityReport r = make_report("", 1e-9);
                     for (const auto& p : samples)
                         r.merge(check_borwein_tam_factorization(a, b, p));
                     return r;
                 }});
    c.push_back({"shadow limit lies in U and V", Origin::Computed, [a, b, x0] {
                     const Orbit o = iterate(SplitOperator::douglas_rachford(a, b), x0,
                                             {.max_iter = 10'000, .stop_tol = 1e-12});
                     const Point z = o.last_shadow();
                     IdentityReport r = make_report("", 1e-8);
                     r.record(o.converged ? 0.0 : 1.0);
                     r.record((resolve(a, z) - z).norm());
                     r.record(std::max(0.0, (z - pt({2, 1})).norm() - 1.0));
                     return r;
                 }});
    c.push_back({"start in U and V: both orbits constant", Origin::Immediate, [] {
                     const FigureResult f =
                         figure_scenarios(FigureKind::SubspaceBall, pt({2, 1}), 5);
                     IdentityReport r = make_report("", kExactTol);
                     for (std::size_t m = 0; m < f.red.governing.size(); ++m) {
                         r.record((f.red.governing[m] - pt({2, 1})).norm());
                         r.record((f.blue.governing[m] - pt({2, 1})).norm());
                     }
                     return r;
                 }});
    return inst;
}

// Golden values of the halfspace probe at start (4, 3), from an independent
// NumPy evaluation of the closed-form projectors.
constexpr double kHalfspaceProbeMax = 4.335899411324313;   // max over m <= 5, both orders
constexpr double kHalfspaceProfileTail = 0.3653562167384318; // per-step defect for m >= 2

NamedInstance halfspace_ball() {
    const ProblemConfig cfg = figure_config(FigureKind::HalfspaceBall);
    const OperatorSpec a = cfg.operator_a, b = cfg.operator_b;
    NamedInstance inst{"halfspace-ball", cfg, {}};
    inst.config.name = inst.name;
    const Point x0 = cfg.start_points.front();
    auto& c = inst.checks;
    c.push_back({"conjugation fails for a halfspace", Origin::Published, [a, b, x0] {
                     return probe_conjugation(a, b, x0, 5, kHalfspaceThreshold);
                 }});
    c.push_back(scalar("probe maximum over n <= 5", Origin::Computed,
                       [a, b, x0] { return probe_conjugation(a, b, x0, 5, 0.0).max_violation; },
                       kHalfspaceProbeMax));
    c.push_back(scalar("per-step defect at n = 5", Origin::Computed,
                       [a, b, x0] { return conjugation_profile(a, b, x0, 5).back(); },
                       kHalfspaceProfileTail));
    return inst;
}

NamedInstance line_halfplane(std::uint64_t seed) {
    // U = R x {0}; V = {y >= 0} shares U as its boundary, so Z = U and
    // K = {0} x R+, and Fix T_{A,B} = R x R+ is a continuum.
    const OperatorSpec a = x_axis();
    const OperatorSpec b = OperatorSpec::halfspace(pt({0, -1}), 0.0);
    std::mt19937_64 rng(seed ^ 0x11);
    auto starts = random_points(rng, 2, 12);
    NamedInstance inst{"line-halfplane", base_config("line-halfplane", a, b, starts), {}};
    auto& c = inst.checks;
    auto fixed = [a, b, starts](bool ab) {
        std::vector<Point> out;
        const auto t = ab ? SplitOperator::douglas_rachford(a, b)
                          : SplitOperator::douglas_rachford(b, a);
        for (const auto& s : starts)
            out.push_back(find_fixed_point(t, s, 1e-12, 10'000));
        return out;
    };
    auto pairs = [a, b, fixed] {
        std::vector<SolutionPair> out;
        for (const auto& f : fixed(true))
            out.push_back(extract_solution(a, b, f));
        return out;
    };
    const auto C = Origin::Computed;
    c.push_back({"R_A maps Fix T_{A,B} into Fix T_{B,A}, round trip, z - k", C, [a, b, fixed] {
                     IdentityReport r = make_report("", 1e-9);
                     for (const auto& rep : check_bijection(a, b, fixed(true)))
                         r.merge(rep);
                     return r;
                 }});
    c.push_back({"isometry on Fix T_{A,B}", C,
                 [a, fixed] { return check_isometry(a, fixed(true)); }});
    c.push_back({"dual sign flip under order swap", C,
                 [a, b, pairs] { return check_dual_symmetry(a, b, pairs()); }});
    c.push_back({"S = Z x K cross certification", C,
                 [a, b, pairs] { return check_product_structure(a, b, pairs()); }});
    c.push_back({"Z and K from Fix T_{B,A}", C,
                 [a, b, fixed] { return check_primal_images(a, b, fixed(false)); }});
    c.push_back({"fixed points are not unique", C, [fixed] {
                     const auto f = fixed(true);
                     IdentityReport r = make_report("", 1e-3, Expectation::Exceeds);
                     for (std::size_t i = 1; i < f.size(); ++i)
                         r.record((f[i] - f[0]).norm());
                     return r;
                 }});
    return inst;
}

NamedInstance two_subspaces(std::uint64_t seed) {
    Matrix plane(3, 2);
    plane << 1, 0, 0, 1, 0, 0;
    const OperatorSpec a = OperatorSpec::affine_subspace(pt({0, 0, 0}), plane);
    const OperatorSpec b = OperatorSpec::affine_subspace(pt({1, 0, 0}), pt({1, 1, 1}));
    std::mt19937_64 rng(seed ^ 0x23);
    const auto samples = random_points(rng, 3, 100);
    NamedInstance inst{"two-subspaces",
                       base_config("two-subspaces", a, b, {pt({3, -2, 4})}), {}};
    auto& c = inst.checks;
    const auto P = Origin::Published;
    c.push_back({"T_[A,B] = T_[B,A] = (T_{A,B} + T_{B,A})/2", P, [a, b, samples] {
                     IdentityReport r = make_report("", 1e-9);
                     for (const auto& p : samples)
                         r.merge(check_borwein_tam_symmetric(a, b, p));
                     return r;
                 }});
    c.push_back({"T_[A,B] firmly nonexpansive on random pairs", P, [a, b, samples] {
                     IdentityReport r = make_report("", 1e-9);
                     for (std::size_t i = 0; i + 1 < samples.size(); ++i)
                         r.record(std::max(0.0, -check_firmly_nonexpansive(
                                                    [&](const Point& p) {
                                                        return borwein_tam_apply(a, b, p);
                                                    },
                                                    samples[i], samples[i + 1])));
                     return r;
                 }});
    c.push_back({"products commute", P, [a, b, samples] {
                     IdentityReport r = make_report("", 1e-9);
                     for (const auto& p : samples)
                         for (const auto& rep : check_commutator(a, b, p))
                             r.merge(rep);
                     return r;
                 }});
    return inst;
}

NamedInstance lifted_halfspaces(std::uint64_t seed) {
    const double s3 = std::sqrt(3.0);
    const std::vector<OperatorSpec> sets{
        OperatorSpec::halfspace(pt({1, 0, 0}), 1.0),
        OperatorSpec::halfspace(pt({0, 1, 0}), 1.0),
        OperatorSpec::halfspace(pt({-1 / s3, -1 / s3, -1 / s3}), 1.0 / s3),
    };
    const LiftedProblem lp = lift(sets);
    std::mt19937_64 rng(seed ^ 0x37);
    const auto samples = random_points(rng, 9, 20);
    NamedInstance inst{"lifted-halfspaces",
                       base_config("lifted-halfspaces", lp.diagonal, lp.product,
                                   {lp.broadcast(pt({3, 4, -6}))}),
                       {}};
    auto& c = inst.checks;
    const OperatorSpec a = lp.diagonal, b = lp.product;
    const Point x0 = inst.config.start_points.front();
    c.push_back({"shadow limit satisfies every constraint", Origin::Computed, [lp, sets, x0] {
                     const Orbit o = iterate(
                         SplitOperator::douglas_rachford(lp.diagonal, lp.product), x0);
                     IdentityReport r = make_report("", 1e-8);
                     r.record(o.converged ? 0.0 : 1.0);
                     const Point z = lp.average(o.last_shadow());
                     for (std::size_t i = 0; i < lp.copies(); ++i)
                         r.record((lp.block(o.last_shadow(), i) - z).norm());
                     for (const auto& h : sets)
                         r.record((resolve(h, z) - z).norm());
                     return r;
                 }});
    c.push_back({"commutation, conjugation and shadow identities", Origin::Computed,
                 [a, b, samples] {
                     IdentityReport r = make_report("", 1e-9);
                     for (const auto& p : samples) {
                         r.merge(check_commutation(a, b, p, 30));
                         r.merge(check_conjugation(a, b, p, 30));
                         r.merge(check_shadow_equality(a, b, p, 30));
                     }
                     return r;
                 }});
    return inst;
}

NamedInstance zero_operators() {
    const OperatorSpec z = OperatorSpec::zero(2);
    NamedInstance inst{"zero-operators", base_config("zero-operators", z, z, {pt({1.5, -2})}),
                       {}};
    auto& c = inst.checks;
    const auto I = Origin::Immediate;
    c.push_back(closed_form("T_{0,0} = Id", I, grid21(),
                            [z](const Point& p) { return dr_apply(z, z, p); },
                            [](const Point& p) { return p; }));
    c.push_back(matrix_check("dr_matrix = I", I,
                             [z] { return dr_matrix(SplitOperator::douglas_rachford(z, z)).linear; },
                             Matrix::Identity(2, 2)));
    c.push_back({"orbit is a single point with residual 0", I, [z] {
                     const Orbit o =
                         iterate(SplitOperator::douglas_rachford(z, z), pt({1.5, -2}));
                     IdentityReport r = make_report("", kExactTol);
                     r.record(static_cast<double>(o.governing.size()) - 1.0);
                     r.record(o.final_residual);
                     return r;
                 }});
    return inst;
}

} // namespace

std::string_view origin_name(Origin o) {
    switch (o) {
    case Origin::Published: return "published";
    case Origin::Computed: return "computed";
    case Origin::Immediate: return "immediate";
    }
    return "unknown";
}

std::vector<IdentityReport> run_instance(const NamedInstance& inst) {
    std::vector<IdentityReport> out;
    for (const auto& check : inst.checks) {
        IdentityReport r;
        try {
            r = check.evaluate();
        } catch (const Error& e) {
            r = make_report("", 0.0);
            r.record(std::numeric_limits<double>::infinity());
            r.identity_name = std::string(" threw: ") + e.what();
        }
        r.identity_name = inst.name + ": " + check.label + " (" +
                          std::string(origin_name(check.origin)) + ")" +
                          (r.identity_name.rfind(" threw", 0) == 0 ? r.identity_name : "");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<NamedInstance> corpus(std::uint64_t seed) {
    std::vector<NamedInstance> out;
    out.push_back(ray_vs_axis());
    out.push_back(linear_asymmetric());
    out.push_back(bt_not_firm());
    out.push_back(subspace_ball(seed));
    out.push_back(halfspace_ball());
    out.push_back(line_halfplane(seed));
    out.push_back(two_subspaces(seed));
    out.push_back(lifted_halfspaces(seed));
    out.push_back(zero_operators());
    return out;
}

NamedInstance instance(const std::string& name, std::uint64_t seed) {
    for (auto& inst : corpus(seed))
        if (inst.name == name)
            return inst;
    throw Error("unknown instance " + name);
}

Json manifest_json(const std::vector<NamedInstance>& instances) {
    Json out = Json::array();
    for (const auto& inst : instances) {
        Json j;
        j["name"] = inst.name;
        j["config"] = config_to_json(inst.config);
        out.push_back(j);
    }
    return out;
}

std::string_view figure_name(FigureKind kind) {
    return kind == FigureKind::SubspaceBall ? "subspace-ball" : "halfspace-ball";
}

ProblemConfig figure_config(FigureKind kind) {
    OperatorSpec a = kind == FigureKind::SubspaceBall
                         ? OperatorSpec::affine_subspace(pt({0, 0}), pt({1, 0.5}))
                         : OperatorSpec::halfspace(pt({0, 1}), 0.5);
    ProblemConfig c = base_config(std::string(figure_name(kind)), std::move(a),
                                  OperatorSpec::ball(pt({2, 1}), 1.0), {pt({4, 3})});
    return c;
}

FigureResult figure_scenarios(FigureKind kind, const Point& x0, std::size_t n,
                              const std::string& csv_dir) {
    if (n < 5)
        throw PreconditionError("figure scenarios need at least five terms");
    const ProblemConfig cfg = figure_config(kind);
    const OperatorSpec& a = cfg.operator_a;
    const OperatorSpec& b = cfg.operator_b;
    FigureResult out;
    out.red = trace([&](const Point& p) { return dr_apply(a, b, p); },
                    [&](const Point& p) { return resolve(a, p); }, reflect(a, x0), n);
    out.blue = trace([&](const Point& p) { return dr_apply(b, a, p); },
                     [&](const Point& p) { return resolve(b, p); }, x0, n);
    out.residuals = conjugation_profile(a, b, x0, n);
    out.report = kind == FigureKind::SubspaceBall
                     ? check_conjugation(a, b, x0, n)
                     : probe_conjugation(a, b, x0, n, kHalfspaceThreshold);
    if (!csv_dir.empty()) {
        const std::string stem =
            (std::filesystem::path(csv_dir) / std::string(figure_name(kind))).string();
        std::ostringstream red, blue, cmp;
        write_orbit_csv(red, out.red);
        write_orbit_csv(blue, out.blue);
        write_compare_csv(cmp, out.red, out.blue, out.residuals);
        write_file_atomic(stem + "_red.csv", red.str());
        write_file_atomic(stem + "_blue.csv", blue.str());
        write_file_atomic(stem + "_compare.csv", cmp.str());
    }
    return out;
}

} // namespace drorder::harness
