#pragma once

// Catalog of maximally monotone operators on R^d, represented through their
// resolvents. Every variant is immutable after construction.

#include <cstddef>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "drorder/errors.hpp"

namespace drorder {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Point = Vector;
using Index = Eigen::Index;

struct Tolerances {
    double tau_num = 1e-9;
    double tau_graph = 1e-8;
    double tau_psd = 1e-9;   // min eigenvalue of (M + M^T)/2 must be >= -tau_psd
    double tau_ortho = 1e-10;
};

/// Affine map x -> linear * x + offset.
struct AffineMap {
    Matrix linear;
    Vector offset;

    static AffineMap identity(Index d);
    Index dimension() const { return linear.rows(); }
    Point apply(const Point& x) const { return linear * x + offset; }
    /// (*this) o inner
    AffineMap after(const AffineMap& inner) const;
    /// 2 * (*this) - Id, the reflector built from a resolvent.
    AffineMap reflected() const;
};

class OperatorSpec;

namespace variants {

struct LinearMonotone {
    Matrix matrix;
    Matrix resolvent;   // (I + M)^{-1}
};

struct AffineRelation {
    Matrix matrix;
    Vector offset;
    Matrix resolvent;
};

struct NormalConeAffineSubspace {
    Vector offset;
    Matrix basis;       // d x r, orthonormal columns
};

struct NormalConeHalfspace {
    Vector normal;      // unit
    double rhs;
};

struct NormalConeBall {
    Vector center;
    double radius;
};

struct NormalConeRay {
    Vector direction;   // unit
};

struct NormalConeBox {
    Vector lower;       // entries may be -inf
    Vector upper;       // entries may be +inf
};

/// Single-valued selection of the (set-valued) projector onto a sphere.
/// Not monotone.
struct SphereSelection {
    Vector center;
    double radius;
    Vector tie_direction;
};

struct Inverse {
    std::shared_ptr<const OperatorSpec> inner;
};

/// A^v = (-Id) o A o (-Id)
struct Rotation {
    std::shared_ptr<const OperatorSpec> inner;
};

/// Blockwise operator on R^{d_1 + ... + d_m}.
struct Product {
    std::shared_ptr<const std::vector<OperatorSpec>> blocks;
};

} // namespace variants

enum class OperatorKind {
    LinearMonotone,
    AffineRelation,
    NormalConeAffineSubspace,
    NormalConeHalfspace,
    NormalConeBall,
    NormalConeRay,
    NormalConeBox,
    SphereSelection,
    Inverse,
    Rotation,
    Product,
};

std::string_view kind_name(OperatorKind kind);

class OperatorSpec {
public:
    using Repr = std::variant<variants::LinearMonotone, variants::AffineRelation,
                              variants::NormalConeAffineSubspace, variants::NormalConeHalfspace,
                              variants::NormalConeBall, variants::NormalConeRay,
                              variants::NormalConeBox, variants::SphereSelection,
                              variants::Inverse, variants::Rotation, variants::Product>;

    static OperatorSpec linear_monotone(Matrix m, const Tolerances& tol = {});
    static OperatorSpec zero(Index d);
    static OperatorSpec affine_relation(Matrix m, Vector b, const Tolerances& tol = {});
    /// U = offset + span(columns of `spanning`). The spanning set is
    /// orthonormalized (modified Gram-Schmidt); dependent columns are dropped.
    static OperatorSpec affine_subspace(Vector offset, const Matrix& spanning,
                                        const Tolerances& tol = {});
    static OperatorSpec halfspace(Vector normal, double rhs, const Tolerances& tol = {});
    static OperatorSpec ball(Vector center, double radius);
    static OperatorSpec ray(Vector direction, const Tolerances& tol = {});
    static OperatorSpec box(Vector lower, Vector upper);
    static OperatorSpec sphere_selection(Vector center, double radius, Vector tie_direction,
                                         const Tolerances& tol = {});
    static OperatorSpec inverse(OperatorSpec inner);
    static OperatorSpec rotation(OperatorSpec inner);
    static OperatorSpec product(std::vector<OperatorSpec> blocks);

    OperatorKind kind() const { return static_cast<OperatorKind>(repr_.index()); }
    Index dimension() const { return dim_; }
    const Repr& repr() const { return repr_; }

    /// False exactly when a SphereSelection occurs anywhere in the tree.
    bool monotone() const { return monotone_; }
    /// Resolvent is an affine map.
    bool affine() const { return affine_; }
    /// Normal cone of a closed affine subspace, so that J is an affine
    /// projector and R^2 = Id.
    bool affine_subspace_cone() const { return subspace_cone_; }

private:
    OperatorSpec(Repr repr, Index dim, bool monotone, bool affine, bool subspace_cone)
        : repr_(std::move(repr)), dim_(dim), monotone_(monotone), affine_(affine),
          subspace_cone_(subspace_cone) {}

    Repr repr_;
    Index dim_;
    bool monotone_;
    bool affine_;
    bool subspace_cone_;
};

struct GraphPair {
    Point x;
    Point u;
};

/// J_op(x). For SphereSelection this is the selection itself.
Point resolve(const OperatorSpec& op, const Point& x);
/// R_op(x) = 2 J_op(x) - x.
Point reflect(const OperatorSpec& op, const Point& x);
/// J_{op^{-1}}(x) = x - J_op(x). Rejects non-monotone operands.
Point inverse_resolvent(const OperatorSpec& op, const Point& x);
/// (x, u) in gra op  <=>  ||J_op(x + u) - x|| <= tol.
bool graph_contains(const OperatorSpec& op, const GraphPair& pair, double tol);
/// ||J_op(x + u) - x||, the quantity tested by graph_contains.
double graph_residual(const OperatorSpec& op, const GraphPair& pair);
bool is_monotone(const OperatorSpec& op);

/// Closed form of J_op as an affine map. Throws PreconditionError if
/// op is not affine.
AffineMap affine_resolvent(const OperatorSpec& op);

} // namespace drorder
