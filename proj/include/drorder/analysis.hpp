#pragma once

// Fixed points, primal/dual extraction, and certifiers for the identities
// relating T_{A,B} and T_{B,A}.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "drorder/operators.hpp"
#include "drorder/splitting.hpp"

namespace drorder {

/// Vanishes: the identity holds, passed iff max_violation <= tolerance.
/// Exceeds: a counterexample, passed iff max_violation > tolerance.
enum class Expectation { Vanishes, Exceeds };

struct IdentityReport {
    std::string identity_name;
    double max_violation = 0.0;
    std::size_t sample_count = 0;
    double tolerance = 0.0;
    Expectation expectation = Expectation::Vanishes;

    bool passed() const {
        return expectation == Expectation::Vanishes ? max_violation <= tolerance
                                                    : max_violation > tolerance;
    }
    void record(double violation) {
        absorb(violation);
        ++sample_count;
    }
    void merge(const IdentityReport& other) {
        absorb(other.max_violation);
        sample_count += other.sample_count;
    }

private:
    // NaN is sticky: once seen, the report can only fail.
    void absorb(double v) {
        if (!std::isnan(max_violation) && !(v <= max_violation))
            max_violation = v;
    }
};

IdentityReport make_report(std::string name, double tolerance,
                           Expectation expectation = Expectation::Vanishes);

/// (z, k) with (z, k) in gra A and (z, -k) in gra B.
struct SolutionPair {
    Point z;
    Point k;
    GraphPair cert_a;
    GraphPair cert_b;
    double residual_a = 0.0;
    double residual_b = 0.0;
};

enum class MapDirection { AToB, BToA };

// --- fixed points and primal/dual solutions ---------------------------------

Point find_fixed_point(const SplitOperator& t, const Point& x0, double tol,
                       std::size_t max_iter);

/// z = J_A f, k = f - z. Requires ||T_{A,B} f - f|| <= tol.graph and checks
/// both graph certificates at tol.graph.
SolutionPair extract_solution(const OperatorSpec& a, const OperatorSpec& b, const Point& f,
                              const Tolerances& tol = {});

/// R_A f for f in Fix T_{A,B} (AToB) or R_B f for f in Fix T_{B,A} (BToA).
Point map_fixed_point(const OperatorSpec& a, const OperatorSpec& b, const Point& f,
                      MapDirection direction, const Tolerances& tol = {});

// --- identity certifiers ------------------------------------------------------

/// max_{1<=m<=n} ||R_A T_{A,B}^m x - T_{B,A}^m R_A x||; A affine.
IdentityReport check_commutation(const OperatorSpec& a, const OperatorSpec& b, const Point& x,
                                 std::size_t n, const Tolerances& tol = {},
                                 SplitMode mode = SplitMode::Standard);

/// Both T_{B,A}^m = R_A T_{A,B}^m R_A and T_{A,B}^m = R_A T_{B,A}^m R_A for
/// m <= n; A an affine-subspace normal cone, B monotone or a selection.
IdentityReport check_conjugation(const OperatorSpec& a, const OperatorSpec& b, const Point& x,
                                 std::size_t n, const Tolerances& tol = {});

/// max_{m<=n} ||J_A T_{B,A}^m x - J_A T_{A,B}^m R_A x||.
IdentityReport check_shadow_equality(const OperatorSpec& a, const OperatorSpec& b,
                                     const Point& x, std::size_t n, const Tolerances& tol = {});

/// ||T_{A,B}x - T_{A,B}y|| = ||T_{B,A}R_A x - T_{B,A}R_A y|| <= ||R_A x - R_A y||.
/// The report carries the larger of the equality defect and the excess in
/// the inequality.
IdentityReport check_nonexpansive_transfer(const OperatorSpec& a, const OperatorSpec& b,
                                           const Point& x, const Point& y,
                                           const Tolerances& tol = {});

/// Reports for the commutator identity
///   4(T_{A,B}T_{B,A} - T_{B,A}T_{A,B}) = R_B R_A^2 R_B - R_A R_B^2 R_A,
/// for T_{A,B} R_B R_A = R_B R_A T_{A,B}, and, when both operands are
/// affine-subspace normal cones, for T_{A,B}T_{B,A} = T_{B,A}T_{A,B}.
std::vector<IdentityReport> check_commutator(const OperatorSpec& a, const OperatorSpec& b,
                                             const Point& x, const Tolerances& tol = {});

/// (T_{A,B}T_{B,A} - T_{B,A}T_{A,B}) x.
Point commutator(const OperatorSpec& a, const OperatorSpec& b, const Point& x);

/// <Tx - Ty, (x - Tx) - (y - Ty)>; negative means T is not firmly nonexpansive.
double check_firmly_nonexpansive(const PointMap& t, const Point& x, const Point& y);

/// For each certified (z, k) of (A, B): (z, -k) is certified for (B, A), and
/// the R_A image z - k of z + k extracts to (z, -k) in the swapped order.
IdentityReport check_dual_symmetry(const OperatorSpec& a, const OperatorSpec& b,
                                   const std::vector<SolutionPair>& pairs,
                                   const Tolerances& tol = {});

/// Cross certification of every z with every k (Z x K structure). Only
/// meaningful for operands known to be paramonotone.
IdentityReport check_product_structure(const OperatorSpec& a, const OperatorSpec& b,
                                       const std::vector<SolutionPair>& pairs,
                                       const Tolerances& tol = {});

/// For fixed points f of T_{A,B}, three reports: R_A f is a fixed point of
/// T_{B,A} (at 3 tau_graph, the budget for an image of a tau_graph-approximate
/// fixed point), R_B R_A f = f, and R_A f = z - k with (z, k) extracted from f.
std::vector<IdentityReport> check_bijection(const OperatorSpec& a, const OperatorSpec& b,
                               const std::vector<Point>& fixed_points,
                               const Tolerances& tol = {});

/// | ||R_A f1 - R_A f2|| - ||f1 - f2|| | over all pairs of fixed points.
IdentityReport check_isometry(const OperatorSpec& a, const std::vector<Point>& fixed_points,
                              const Tolerances& tol = {});

/// ||(R_A T_{A,B} - T_{B,A} R_A) x - (2 J_A T_{A,B} - J_A - J_A R_B R_A) x||;
/// holds for every pair of single-valued resolvents.
IdentityReport check_reflection_defect_identity(const OperatorSpec& a, const OperatorSpec& b,
                                                const Point& x, const Tolerances& tol = {});

/// Samplewise primal-image identities from fixed points g of T_{B,A}.
/// A affine: z = J_A R_B g is a certified zero and R_A z = J_A g.
/// A an affine-subspace cone, additionally: (J_A g, (J_A - Id) g) is a
/// certified primal/dual pair for (A, B).
IdentityReport check_primal_images(const OperatorSpec& a, const OperatorSpec& b,
                                   const std::vector<Point>& fixed_points_ba,
                                   const Tolerances& tol = {});

/// For A an affine-subspace cone:
///   T_[A,B] = R_A T_[B,A] R_A = (T_{A,B} R_A)^2 = (R_A T_{B,A})^2 at x.
IdentityReport check_borwein_tam_factorization(const OperatorSpec& a, const OperatorSpec& b,
                                               const Point& x, const Tolerances& tol = {});

/// For two affine-subspace cones:
///   T_[A,B] = T_[B,A] = (R_B T_{A,B})^2 = (T_{B,A} R_B)^2 = 1/2 (T_{A,B} + T_{B,A}).
IdentityReport check_borwein_tam_symmetric(const OperatorSpec& a, const OperatorSpec& b,
                                           const Point& x, const Tolerances& tol = {});

// --- raw-violation probes -------------------------------------------------------
// Preconditions are waived. These exist to exhibit the counterexamples and
// must not be used to certify an identity.

enum class ReflectorSlot { A, B };

/// max_{1<=m<=n} ||R T_{A,B}^m x - T_{B,A}^m R x|| with R = R_A or R_B.
IdentityReport probe_commutation(const OperatorSpec& a, const OperatorSpec& b, const Point& x,
                                 std::size_t n, ReflectorSlot slot, double threshold);

/// Conjugation defect of check_conjugation without its precondition.
IdentityReport probe_conjugation(const OperatorSpec& a, const OperatorSpec& b, const Point& x,
                                 std::size_t n, double threshold);

/// Per-step ||T_{B,A}^m x - R_A T_{A,B}^m R_A x|| for m = 0..n.
std::vector<double> conjugation_profile(const OperatorSpec& a, const OperatorSpec& b,
                                        const Point& x, std::size_t n);

} // namespace drorder
