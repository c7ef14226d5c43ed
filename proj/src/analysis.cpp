#include "drorder/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace drorder {

namespace {

void require_affine(const OperatorSpec& op, const char* what) {
    if (!op.affine())
        throw PreconditionError(std::string(what) + " must be affine, got " +
                                std::string(kind_name(op.kind())));
}

void require_subspace_cone(const OperatorSpec& op) {
    if (!op.affine_subspace_cone())
        throw PreconditionError(
            std::string("A must be the normal cone of an affine subspace, got ") +
            std::string(kind_name(op.kind())));
}

void require_point(const OperatorSpec& a, const OperatorSpec& b, const Point& x) {
    if (a.dimension() != b.dimension() || x.size() != a.dimension())
        throw DimensionError("operands and point must share one dimension");
}

double fixed_point_residual(const OperatorSpec& a, const OperatorSpec& b, const Point& f) {
    return (dr_apply(a, b, f) - f).norm();
}

} // namespace

IdentityReport make_report(std::string name, double tolerance, Expectation expectation) {
    IdentityReport r;
    r.identity_name = std::move(name);
    r.tolerance = tolerance;
    r.expectation = expectation;
    return r;
}

Point find_fixed_point(const SplitOperator& t, const Point& x0, double tol,
                       std::size_t max_iter) {
    const Orbit orbit = iterate(t, x0, {.max_iter = max_iter, .stop_tol = tol, .store_cap = 2});
    if (!orbit.converged) {
        std::ostringstream os;
        os << "no fixed point within " << max_iter << " iterations; residual "
           << orbit.final_residual << " > " << tol;
        throw ConvergenceError(os.str(), orbit.last(), orbit.final_residual);
    }
    return orbit.last();
}

SolutionPair extract_solution(const OperatorSpec& a, const OperatorSpec& b, const Point& f,
                              const Tolerances& tol) {
    require_point(a, b, f);
    const double fp = fixed_point_residual(a, b, f);
    if (!(fp <= tol.tau_graph)) {
        std::ostringstream os;
        os << "point is not a fixed point of T_{A,B}: residual " << fp << " > " << tol.tau_graph;
        throw CertificateError(os.str(), fp);
    }
    SolutionPair s;
    s.z = resolve(a, f);
    s.k = f - s.z;
    s.cert_a = {s.z, s.k};
    s.cert_b = {s.z, -s.k};
    s.residual_a = graph_residual(a, s.cert_a);
    s.residual_b = graph_residual(b, s.cert_b);
    if (!(s.residual_a <= tol.tau_graph) || !(s.residual_b <= tol.tau_graph)) {
        std::ostringstream os;
        os << "graph certificate failed: (z,k) in gra A residual " << s.residual_a
           << ", (z,-k) in gra B residual " << s.residual_b;
        throw CertificateError(os.str(), std::max(s.residual_a, s.residual_b));
    }
    return s;
}

Point map_fixed_point(const OperatorSpec& a, const OperatorSpec& b, const Point& f,
                      MapDirection direction, const Tolerances& tol) {
    require_point(a, b, f);
    const bool forward = direction == MapDirection::AToB;
    const double fp = forward ? fixed_point_residual(a, b, f) : fixed_point_residual(b, a, f);
    if (!(fp <= tol.tau_graph)) {
        std::ostringstream os;
        os << "source point is not a fixed point of " << (forward ? "T_{A,B}" : "T_{B,A}")
           << ": residual " << fp;
        throw CertificateError(os.str(), fp);
    }
    return forward ? reflect(a, f) : reflect(b, f);
}

IdentityReport check_commutation(const OperatorSpec& a, const OperatorSpec& b, const Point& x,
                                 std::size_t n, const Tolerances& tol, SplitMode mode) {
    require_point(a, b, x);
    require_affine(a, "A");
    if (mode == SplitMode::Standard && !b.monotone())
        throw MonotonicityError("B must be monotone outside generalized mode");
    if (mode == SplitMode::Generalized && !a.affine_subspace_cone())
        throw PreconditionError("generalized mode requires A to be an affine-subspace normal cone");
    IdentityReport report = make_report("R_A T_{A,B}^n = T_{B,A}^n R_A", tol.tau_num);
    Point left = x;
    Point right = reflect(a, x);
    for (std::size_t m = 1; m <= n; ++m) {
        left = dr_apply(a, b, left);
        right = dr_apply(b, a, right);
        report.record((reflect(a, left) - right).norm());
    }
    return report;
}

std::vector<double> conjugation_profile(const OperatorSpec& a, const OperatorSpec& b,
                                        const Point& x, std::size_t n) {
    require_point(a, b, x);
    std::vector<double> out;
    out.reserve(n + 1);
    Point ba = x;
    Point ab = reflect(a, x);
    for (std::size_t m = 0;; ++m) {
        out.push_back((ba - reflect(a, ab)).norm());
        if (m == n)
            break;
        ba = dr_apply(b, a, ba);
        ab = dr_apply(a, b, ab);
    }
    return out;
}

namespace {

IdentityReport conjugation_defect(const OperatorSpec& a, const OperatorSpec& b, const Point& x,
                                  std::size_t n, IdentityReport report) {
    // T_{B,A}^m x vs R_A T_{A,B}^m R_A x, and T_{A,B}^m x vs R_A T_{B,A}^m R_A x.
    Point ba = x, ab_conj = reflect(a, x);
    Point ab = x, ba_conj = reflect(a, x);
    for (std::size_t m = 1; m <= n; ++m) {
        ba = dr_apply(b, a, ba);
        ab_conj = dr_apply(a, b, ab_conj);
        ab = dr_apply(a, b, ab);
        ba_conj = dr_apply(b, a, ba_conj);
        report.record((ba - reflect(a, ab_conj)).norm());
        report.record((ab - reflect(a, ba_conj)).norm());
    }
    return report;
}

} // namespace

IdentityReport check_conjugation(const OperatorSpec& a, const OperatorSpec& b, const Point& x,
                                 std::size_t n, const Tolerances& tol) {
    require_point(a, b, x);
    require_subspace_cone(a);
    return conjugation_defect(
        a, b, x, n, make_report("T_{B,A}^n = R_A T_{A,B}^n R_A (both orders)", tol.tau_num));
}

IdentityReport probe_conjugation(const OperatorSpec& a, const OperatorSpec& b, const Point& x,
                                 std::size_t n, double threshold) {
    require_point(a, b, x);
    return conjugation_defect(a, b, x, n,
                              make_report("probe: T_{B,A}^n vs R_A T_{A,B}^n R_A", threshold,
                                          Expectation::Exceeds));
}

IdentityReport check_shadow_equality(const OperatorSpec& a, const OperatorSpec& b,
                                     const Point& x, std::size_t n, const Tolerances& tol) {
    require_point(a, b, x);
    require_subspace_cone(a);
    IdentityReport report = make_report("J_A T_{B,A}^n x = J_A T_{A,B}^n R_A x", tol.tau_num);
    Point ba = x;
    Point ab = reflect(a, x);
    for (std::size_t m = 0;; ++m) {
        report.record((resolve(a, ba) - resolve(a, ab)).norm());
        if (m == n)
            break;
        ba = dr_apply(b, a, ba);
        ab = dr_apply(a, b, ab);
    }
    return report;
}

IdentityReport check_nonexpansive_transfer(const OperatorSpec& a, const OperatorSpec& b,
                                           const Point& x, const Point& y,
                                           const Tolerances& tol) {
    require_point(a, b, x);
    require_point(a, b, y);
    require_subspace_cone(a);
    if (!b.monotone())
        throw MonotonicityError("nonexpansive transfer needs a monotone B");
    IdentityReport report =
        make_report("||T_{A,B}x - T_{A,B}y|| = ||T_{B,A}R_A x - T_{B,A}R_A y|| <= ||R_A x - R_A y||",
                    tol.tau_num);
    const Point rx = reflect(a, x), ry = reflect(a, y);
    const double lhs = (dr_apply(a, b, x) - dr_apply(a, b, y)).norm();
    const double mid = (dr_apply(b, a, rx) - dr_apply(b, a, ry)).norm();
    const double rhs = (rx - ry).norm();
    report.record(std::abs(lhs - mid));
    report.record(std::max(0.0, mid - rhs));
    return report;
}

Point commutator(const OperatorSpec& a, const OperatorSpec& b, const Point& x) {
    return borwein_tam_apply(a, b, x) - borwein_tam_apply(b, a, x);
}

std::vector<IdentityReport> check_commutator(const OperatorSpec& a, const OperatorSpec& b,
                                             const Point& x, const Tolerances& tol) {
    require_point(a, b, x);
    require_affine(a, "A");
    require_affine(b, "B");
    std::vector<IdentityReport> out;

    IdentityReport iv = make_report(
        "4(T_{A,B}T_{B,A} - T_{B,A}T_{A,B}) = R_B R_A^2 R_B - R_A R_B^2 R_A", tol.tau_num);
    const Point lhs = 4.0 * commutator(a, b, x);
    const Point rhs = reflect(b, reflect(a, reflect(a, reflect(b, x)))) -
                      reflect(a, reflect(b, reflect(b, reflect(a, x))));
    iv.record((lhs - rhs).norm());
    out.push_back(std::move(iv));

    IdentityReport vi = make_report("T_{A,B} R_B R_A = R_B R_A T_{A,B}", tol.tau_num);
    vi.record((dr_apply(a, b, reflect(b, reflect(a, x))) -
               reflect(b, reflect(a, dr_apply(a, b, x))))
                  .norm());
    out.push_back(std::move(vi));

    if (a.affine_subspace_cone() && b.affine_subspace_cone()) {
        IdentityReport v = make_report("T_{A,B}T_{B,A} = T_{B,A}T_{A,B}", tol.tau_num);
        v.record(commutator(a, b, x).norm());
        out.push_back(std::move(v));
    }
    return out;
}

double check_firmly_nonexpansive(const PointMap& t, const Point& x, const Point& y) {
    const Point tx = t(x), ty = t(y);
    return (tx - ty).dot((x - tx) - (y - ty));
}

IdentityReport check_dual_symmetry(const OperatorSpec& a, const OperatorSpec& b,
                                   const std::vector<SolutionPair>& pairs,
                                   const Tolerances& tol) {
    IdentityReport report =
        make_report("(z,k) in S_(A,B) => (z,-k) in S_(B,A), R_A(z+k) = z-k", tol.tau_graph);
    for (const auto& p : pairs) {
        require_point(a, b, p.z);
        report.record(graph_residual(b, {p.z, -p.k}));
        report.record(graph_residual(a, {p.z, p.k}));
        const Point image = reflect(a, p.z + p.k);
        report.record((image - (p.z - p.k)).norm());
        // Extraction in the swapped order from the image.
        const Point z_swapped = resolve(b, image);
        const Point k_swapped = image - z_swapped;
        report.record((z_swapped - p.z).norm());
        report.record((k_swapped + p.k).norm());
        report.record(fixed_point_residual(b, a, image));
    }
    return report;
}

IdentityReport check_product_structure(const OperatorSpec& a, const OperatorSpec& b,
                                       const std::vector<SolutionPair>& pairs,
                                       const Tolerances& tol) {
    IdentityReport report = make_report("S_(A,B) = Z x K", tol.tau_graph);
    for (const auto& zp : pairs) {
        for (const auto& kp : pairs) {
            report.record(graph_residual(a, {zp.z, kp.k}));
            report.record(graph_residual(b, {zp.z, -kp.k}));
        }
    }
    return report;
}

std::vector<IdentityReport> check_bijection(const OperatorSpec& a, const OperatorSpec& b,
                                            const std::vector<Point>& fixed_points,
                                            const Tolerances& tol) {
    IdentityReport target = make_report("R_A maps Fix T_{A,B} into Fix T_{B,A}",
                                        3.0 * tol.tau_graph);
    IdentityReport round_trip = make_report("R_B R_A f = f on Fix T_{A,B}", tol.tau_num);
    IdentityReport image = make_report("R_A(z + k) = z - k", tol.tau_num);
    for (const auto& f : fixed_points) {
        const Point g = map_fixed_point(a, b, f, MapDirection::AToB, tol);
        target.record(fixed_point_residual(b, a, g));
        round_trip.record((reflect(b, g) - f).norm());
        const Point z = resolve(a, f);
        const Point k = f - z;
        image.record((g - (z - k)).norm());
    }
    return {target, round_trip, image};
}

IdentityReport check_isometry(const OperatorSpec& a, const std::vector<Point>& fixed_points,
                              const Tolerances& tol) {
    IdentityReport report = make_report("R_A is an isometry on Fix T_{A,B}", tol.tau_num);
    std::vector<Point> images;
    images.reserve(fixed_points.size());
    for (const auto& f : fixed_points)
        images.push_back(reflect(a, f));
    for (std::size_t i = 0; i < fixed_points.size(); ++i)
        for (std::size_t j = i + 1; j < fixed_points.size(); ++j)
            report.record(std::abs((images[i] - images[j]).norm() -
                                   (fixed_points[i] - fixed_points[j]).norm()));
    return report;
}

IdentityReport check_reflection_defect_identity(const OperatorSpec& a, const OperatorSpec& b,
                                                const Point& x, const Tolerances& tol) {
    require_point(a, b, x);
    IdentityReport report = make_report(
        "R_A T_{A,B} - T_{B,A} R_A = 2 J_A T_{A,B} - J_A - J_A R_B R_A", tol.tau_num);
    const Point tx = dr_apply(a, b, x);
    const Point lhs = reflect(a, tx) - dr_apply(b, a, reflect(a, x));
    const Point rhs = 2.0 * resolve(a, tx) - resolve(a, x) - resolve(a, reflect(b, reflect(a, x)));
    report.record((lhs - rhs).norm());
    return report;
}

IdentityReport check_primal_images(const OperatorSpec& a, const OperatorSpec& b,
                                   const std::vector<Point>& fixed_points_ba,
                                   const Tolerances& tol) {
    require_affine(a, "A");
    IdentityReport report = make_report(
        a.affine_subspace_cone() ? "R_A Z = J_A Fix T_{B,A}; Z, K from Fix T_{B,A}"
                                 : "R_A Z = J_A Fix T_{B,A}",
        tol.tau_graph);
    for (const auto& g : fixed_points_ba) {
        require_point(a, b, g);
        const Point f = reflect(b, g);
        const Point z = resolve(a, f);
        report.record(graph_residual(a, {z, f - z}));
        report.record(graph_residual(b, {z, z - f}));
        report.record((reflect(a, z) - resolve(a, g)).norm());
        if (a.affine_subspace_cone()) {
            const Point z2 = resolve(a, g);
            const Point k2 = z2 - g;
            report.record(graph_residual(a, {z2, k2}));
            report.record(graph_residual(b, {z2, -k2}));
        }
    }
    return report;
}

IdentityReport check_borwein_tam_factorization(const OperatorSpec& a, const OperatorSpec& b,
                                               const Point& x, const Tolerances& tol) {
    require_point(a, b, x);
    require_subspace_cone(a);
    IdentityReport report = make_report(
        "T_[A,B] = R_A T_[B,A] R_A = (T_{A,B} R_A)^2 = (R_A T_{B,A})^2", tol.tau_num);
    const Point bt = borwein_tam_apply(a, b, x);
    const Point conj = reflect(a, borwein_tam_apply(b, a, reflect(a, x)));
    auto t_ab_ra = [&](const Point& p) { return dr_apply(a, b, reflect(a, p)); };
    auto ra_t_ba = [&](const Point& p) { return reflect(a, dr_apply(b, a, p)); };
    report.record((bt - conj).norm());
    report.record((bt - t_ab_ra(t_ab_ra(x))).norm());
    report.record((bt - ra_t_ba(ra_t_ba(x))).norm());
    return report;
}

IdentityReport check_borwein_tam_symmetric(const OperatorSpec& a, const OperatorSpec& b,
                                           const Point& x, const Tolerances& tol) {
    require_point(a, b, x);
    require_subspace_cone(a);
    require_subspace_cone(b);
    IdentityReport report = make_report(
        "T_[A,B] = T_[B,A] = (R_B T_{A,B})^2 = (T_{B,A} R_B)^2 = (T_{A,B} + T_{B,A})/2",
        tol.tau_num);
    const Point bt = borwein_tam_apply(a, b, x);
    auto rb_t_ab = [&](const Point& p) { return reflect(b, dr_apply(a, b, p)); };
    auto t_ba_rb = [&](const Point& p) { return dr_apply(b, a, reflect(b, p)); };
    report.record((bt - borwein_tam_apply(b, a, x)).norm());
    report.record((bt - rb_t_ab(rb_t_ab(x))).norm());
    report.record((bt - t_ba_rb(t_ba_rb(x))).norm());
    report.record((bt - 0.5 * (dr_apply(a, b, x) + dr_apply(b, a, x))).norm());
    return report;
}

IdentityReport probe_commutation(const OperatorSpec& a, const OperatorSpec& b, const Point& x,
                                 std::size_t n, ReflectorSlot slot, double threshold) {
    require_point(a, b, x);
    const OperatorSpec& r = slot == ReflectorSlot::A ? a : b;
    IdentityReport report = make_report(
        slot == ReflectorSlot::A ? "probe: R_A T_{A,B}^n vs T_{B,A}^n R_A"
                                 : "probe: R_B T_{A,B}^n vs T_{B,A}^n R_B",
        threshold, Expectation::Exceeds);
    Point left = x;
    Point right = reflect(r, x);
    for (std::size_t m = 1; m <= n; ++m) {
        left = dr_apply(a, b, left);
        right = dr_apply(b, a, right);
        report.record((reflect(r, left) - right).norm());
    }
    return report;
}

} // namespace drorder
