#pragma once

// Douglas-Rachford operators in both orders, the Borwein-Tam composite,
// fixed-point iteration with shadow tracking, and the product-space lift.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "drorder/operators.hpp"

namespace drorder {

enum class SplitForm { DouglasRachford, BorweinTam };

// Generalized mode admits a non-monotone projector selection opposite an
// affine-subspace normal cone. Convergence is not asserted in that mode.
enum class SplitMode { Standard, Generalized };

class SplitOperator {
public:
    static SplitOperator douglas_rachford(OperatorSpec first, OperatorSpec second,
                                          SplitMode mode = SplitMode::Standard);
    static SplitOperator borwein_tam(OperatorSpec first, OperatorSpec second,
                                     SplitMode mode = SplitMode::Standard);

    const OperatorSpec& first() const { return first_; }
    const OperatorSpec& second() const { return second_; }
    SplitForm form() const { return form_; }
    SplitMode mode() const { return mode_; }
    Index dimension() const { return first_.dimension(); }

    /// Same form with the operand order exchanged.
    SplitOperator swapped() const;

    Point operator()(const Point& x) const;

private:
    SplitOperator(OperatorSpec first, OperatorSpec second, SplitForm form, SplitMode mode);

    OperatorSpec first_;
    OperatorSpec second_;
    SplitForm form_;
    SplitMode mode_;
};

/// T_{A,B} x = x - J_A x + J_B R_A x. No monotonicity checks; used by the
/// checkers and probes that need the raw composite.
Point dr_apply(const OperatorSpec& a, const OperatorSpec& b, const Point& x);
/// 1/2 (x + R_B R_A x); kept for cross-checking the production form.
Point dr_apply_reflected(const OperatorSpec& a, const OperatorSpec& b, const Point& x);
/// T_{A,B} T_{B,A} x.
Point borwein_tam_apply(const OperatorSpec& a, const OperatorSpec& b, const Point& x);

Point dr_apply(const SplitOperator& t, const Point& x);
Point borwein_tam_apply(const SplitOperator& t, const Point& x);

/// T_{A,B} as an affine map, or T_{A,B} T_{B,A} for the Borwein-Tam form.
AffineMap dr_matrix(const SplitOperator& t);
/// Affine map of T_{A,B} for two affine operands.
AffineMap dr_matrix(const OperatorSpec& a, const OperatorSpec& b);

struct IterateOptions {
    std::size_t max_iter = 10'000;
    double stop_tol = 1e-10;
    std::size_t store_cap = 10'000;
};

/// governing[i] is the iterate with index steps[i] and shadow[i] its J_A
/// image. residuals[i] = ||T g_i - g_i|| for every stored point but the
/// last, whose value is final_residual. Past store_cap points only a head
/// and a running tail are kept; `dropped` counts the discarded middle.
struct Orbit {
    std::vector<std::size_t> steps;
    std::vector<Point> governing;
    std::vector<Point> shadow;
    std::vector<double> residuals;
    double final_residual = 0.0;
    std::size_t iterations = 0;
    std::size_t dropped = 0;
    bool converged = false;

    const Point& last() const { return governing.back(); }
    const Point& last_shadow() const { return shadow.back(); }
};

using PointMap = std::function<Point(const Point&)>;

/// x_{n+1} = T x_n until ||x_{n+1} - x_n|| <= stop_tol (the point x_{n+1}
/// is then not appended) or max_iter new points were produced.
Orbit iterate(const SplitOperator& t, const Point& x0, const IterateOptions& opts = {});
Orbit iterate(const PointMap& t, const PointMap& shadow, const Point& x0,
              const IterateOptions& opts = {});

/// Exactly `steps` applications of T, no early stop. Used for the figure
/// traces where orbits are compared term by term.
Orbit trace(const PointMap& t, const PointMap& shadow, const Point& x0, std::size_t steps);

struct LiftedProblem {
    std::vector<OperatorSpec> ops;
    Index block_dim = 0;
    OperatorSpec diagonal;   // N_Delta on R^{m d}
    OperatorSpec product;    // blockwise ops

    std::size_t copies() const { return ops.size(); }
    Point broadcast(const Point& x) const;
    Point block(const Point& lifted, std::size_t i) const;
    Point average(const Point& lifted) const;
};

LiftedProblem lift(std::span<const OperatorSpec> ops);

} // namespace drorder
