#include "drorder/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace drorder {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool all_finite(const Vector& v) { return v.allFinite(); }

void require_finite(const Vector& v, const char* what) {
    if (!all_finite(v))
        throw ValidationError(std::string(what) + " has non-finite entries");
}

void require_dimension(const OperatorSpec& op, const Point& x) {
    if (x.size() != op.dimension()) {
        std::ostringstream os;
        os << "dimension mismatch: operator " << kind_name(op.kind()) << " acts on R^"
           << op.dimension() << ", point has " << x.size() << " entries";
        throw DimensionError(os.str());
    }
}

void require_unit(const Vector& v, double tau_ortho, const char* what) {
    require_finite(v, what);
    if (v.size() == 0 || std::abs(v.norm() - 1.0) > tau_ortho) {
        std::ostringstream os;
        os << what << " must be a unit vector (norm " << v.norm() << ")";
        throw ValidationError(os.str());
    }
}

// Minimum eigenvalue of the symmetric part must be >= -tau_psd.
void require_monotone_matrix(const Matrix& m, double tau_psd) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionError("matrix operator must be square and non-empty");
    if (!m.allFinite())
        throw ValidationError("matrix has non-finite entries");
    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -tau_psd) {
        std::ostringstream os;
        os << "matrix is not monotone: symmetric part has eigenvalue " << min_eig
           << " < -tau_psd = " << -tau_psd << " (PSD violation)";
        throw MonotonicityError(os.str());
    }
}

Matrix resolvent_matrix(const Matrix& m) {
    const Index d = m.rows();
    Eigen::FullPivLU<Matrix> lu(Matrix::Identity(d, d) + m);
    if (!lu.isInvertible())
        throw InternalError("I + M is singular although M passed the monotonicity test");
    return lu.inverse();
}

// Modified Gram-Schmidt with one re-orthogonalization pass. A spanning set
// that is already orthonormal to tau_ortho is kept bit for bit.
Matrix orthonormalize(const Matrix& spanning, double tau_ortho) {
    const Index d = spanning.rows();
    const Index k = spanning.cols();
    if ((spanning.transpose() * spanning - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() <=
        tau_ortho)
        return spanning;
    std::vector<Vector> cols;
    for (Index j = 0; j < spanning.cols(); ++j) {
        Vector v = spanning.col(j);
        const double scale = v.norm();
        if (scale == 0.0)
            continue;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : cols)
                v -= q.dot(v) * q;
        if (v.norm() <= 1e-12 * scale)
            continue;
        cols.push_back(v / v.norm());
    }
    Matrix basis(d, static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        basis.col(static_cast<Index>(j)) = cols[j];
    const Index r = basis.cols();
    if (r > 0 && (basis.transpose() * basis - Matrix::Identity(r, r)).cwiseAbs().maxCoeff() >
                     tau_ortho)
        throw InternalError("Gram-Schmidt failed to produce an orthonormal basis");
    return basis;
}

} // namespace

std::string_view kind_name(OperatorKind kind) {
    switch (kind) {
    case OperatorKind::LinearMonotone: return "linear_monotone";
    case OperatorKind::AffineRelation: return "affine_relation";
    case OperatorKind::NormalConeAffineSubspace: return "normal_cone_affine_subspace";
    case OperatorKind::NormalConeHalfspace: return "normal_cone_halfspace";
    case OperatorKind::NormalConeBall: return "normal_cone_ball";
    case OperatorKind::NormalConeRay: return "normal_cone_ray";
    case OperatorKind::NormalConeBox: return "normal_cone_box";
    case OperatorKind::SphereSelection: return "sphere_selection";
    case OperatorKind::Inverse: return "inverse";
    case OperatorKind::Rotation: return "rotation";
    case OperatorKind::Product: return "product";
    }
    return "unknown";
}

AffineMap AffineMap::identity(Index d) { return {Matrix::Identity(d, d), Vector::Zero(d)}; }

AffineMap AffineMap::after(const AffineMap& inner) const {
    return {linear * inner.linear, linear * inner.offset + offset};
}

AffineMap AffineMap::reflected() const {
    const Index d = dimension();
    return {2.0 * linear - Matrix::Identity(d, d), 2.0 * offset};
}

OperatorSpec OperatorSpec::linear_monotone(Matrix m, const Tolerances& tol) {
    require_monotone_matrix(m, tol.tau_psd);
    const Index d = m.rows();
    Matrix res = resolvent_matrix(m);
    return {variants::LinearMonotone{std::move(m), std::move(res)}, d, true, true, false};
}

OperatorSpec OperatorSpec::zero(Index d) { return linear_monotone(Matrix::Zero(d, d)); }

OperatorSpec OperatorSpec::affine_relation(Matrix m, Vector b, const Tolerances& tol) {
    require_monotone_matrix(m, tol.tau_psd);
    if (b.size() != m.rows())
        throw DimensionError("affine relation offset length differs from matrix size");
    require_finite(b, "affine relation offset");
    const Index d = m.rows();
    Matrix res = resolvent_matrix(m);
    return {variants::AffineRelation{std::move(m), std::move(b), std::move(res)}, d, true, true,
            false};
}

OperatorSpec OperatorSpec::affine_subspace(Vector offset, const Matrix& spanning,
                                           const Tolerances& tol) {
    if (offset.size() == 0)
        throw DimensionError("affine subspace offset must be non-empty");
    if (spanning.cols() > 0 && spanning.rows() != offset.size())
        throw DimensionError("affine subspace spanning vectors differ in length from offset");
    require_finite(offset, "affine subspace offset");
    if (!spanning.allFinite())
        throw ValidationError("affine subspace spanning set has non-finite entries");
    const Index d = offset.size();
    Matrix basis = spanning.cols() == 0 ? Matrix(d, 0) : orthonormalize(spanning, tol.tau_ortho);
    return {variants::NormalConeAffineSubspace{std::move(offset), std::move(basis)}, d, true, true,
            true};
}

OperatorSpec OperatorSpec::halfspace(Vector normal, double rhs, const Tolerances& tol) {
    require_unit(normal, tol.tau_ortho, "halfspace normal");
    if (!std::isfinite(rhs))
        throw ValidationError("halfspace right-hand side must be finite");
    const Index d = normal.size();
    return {variants::NormalConeHalfspace{std::move(normal), rhs}, d, true, false, false};
}

OperatorSpec OperatorSpec::ball(Vector center, double radius) {
    if (center.size() == 0)
        throw DimensionError("ball center must be non-empty");
    require_finite(center, "ball center");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw ValidationError("ball radius must be finite and strictly positive");
    const Index d = center.size();
    return {variants::NormalConeBall{std::move(center), radius}, d, true, false, false};
}

OperatorSpec OperatorSpec::ray(Vector direction, const Tolerances& tol) {
    require_unit(direction, tol.tau_ortho, "ray direction");
    const Index d = direction.size();
    return {variants::NormalConeRay{std::move(direction)}, d, true, false, false};
}

OperatorSpec OperatorSpec::box(Vector lower, Vector upper) {
    if (lower.size() == 0 || lower.size() != upper.size())
        throw DimensionError("box bounds must be non-empty and of equal length");
    for (Index i = 0; i < lower.size(); ++i) {
        if (std::isnan(lower[i]) || std::isnan(upper[i]))
            throw ValidationError("box bounds must not be NaN");
        if (lower[i] == std::numeric_limits<double>::infinity() ||
            upper[i] == -std::numeric_limits<double>::infinity())
            throw ValidationError("box bound is infinite in the wrong direction");
        if (lower[i] > upper[i]) {
            std::ostringstream os;
            os << "box is empty: lower[" << i << "] = " << lower[i] << " > upper[" << i
               << "] = " << upper[i];
            throw ValidationError(os.str());
        }
    }
    const Index d = lower.size();
    return {variants::NormalConeBox{std::move(lower), std::move(upper)}, d, true, false, false};
}

OperatorSpec OperatorSpec::sphere_selection(Vector center, double radius, Vector tie_direction,
                                            const Tolerances& tol) {
    require_finite(center, "sphere center");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw ValidationError("sphere radius must be finite and strictly positive");
    require_unit(tie_direction, tol.tau_ortho, "sphere tie direction");
    if (tie_direction.size() != center.size())
        throw DimensionError("sphere tie direction differs in length from center");
    const Index d = center.size();
    return {variants::SphereSelection{std::move(center), radius, std::move(tie_direction)}, d,
            false, false, false};
}

OperatorSpec OperatorSpec::inverse(OperatorSpec inner) {
    if (!inner.monotone())
        throw MonotonicityError("inverse of a non-monotone operator is not supported");
    const Index d = inner.dimension();
    const bool affine = inner.affine();
    return {variants::Inverse{std::make_shared<const OperatorSpec>(std::move(inner))}, d, true,
            affine, false};
}

OperatorSpec OperatorSpec::rotation(OperatorSpec inner) {
    const Index d = inner.dimension();
    const bool mono = inner.monotone();
    const bool affine = inner.affine();
    const bool cone = inner.affine_subspace_cone();
    return {variants::Rotation{std::make_shared<const OperatorSpec>(std::move(inner))}, d, mono,
            affine, cone};
}

OperatorSpec OperatorSpec::product(std::vector<OperatorSpec> blocks) {
    if (blocks.empty())
        throw ValidationError("product operator needs at least one block");
    Index d = 0;
    bool mono = true, affine = true, cone = true;
    for (const auto& b : blocks) {
        d += b.dimension();
        mono = mono && b.monotone();
        affine = affine && b.affine();
        cone = cone && b.affine_subspace_cone();
    }
    return {variants::Product{std::make_shared<const std::vector<OperatorSpec>>(std::move(blocks))},
            d, mono, affine, cone};
}

Point resolve(const OperatorSpec& op, const Point& x) {
    require_dimension(op, x);
    return std::visit(
        overloaded{
            [&](const variants::LinearMonotone& v) -> Point { return v.resolvent * x; },
            [&](const variants::AffineRelation& v) -> Point {
                return v.resolvent * (x - v.offset);
            },
            [&](const variants::NormalConeAffineSubspace& v) -> Point {
                if (v.basis.cols() == 0)
                    return v.offset;
                return v.offset + v.basis * (v.basis.transpose() * (x - v.offset));
            },
            [&](const variants::NormalConeHalfspace& v) -> Point {
                const double excess = v.normal.dot(x) - v.rhs;
                if (excess <= 0.0)
                    return x;
                return x - excess * v.normal;
            },
            [&](const variants::NormalConeBall& v) -> Point {
                const Vector diff = x - v.center;
                const double dist = diff.norm();
                if (dist <= v.radius)
                    return x;
                return v.center + (v.radius / dist) * diff;
            },
            [&](const variants::NormalConeRay& v) -> Point {
                return std::max(v.direction.dot(x), 0.0) * v.direction;
            },
            [&](const variants::NormalConeBox& v) -> Point {
                return x.cwiseMax(v.lower).cwiseMin(v.upper);
            },
            [&](const variants::SphereSelection& v) -> Point {
                const Vector diff = x - v.center;
                const double dist = diff.norm();
                if (dist == 0.0)
                    return v.center + v.radius * v.tie_direction;
                return v.center + (v.radius / dist) * diff;
            },
            [&](const variants::Inverse& v) -> Point { return x - resolve(*v.inner, x); },
            [&](const variants::Rotation& v) -> Point {
                return -resolve(*v.inner, Point(-x));
            },
            [&](const variants::Product& v) -> Point {
                Point out(x.size());
                Index at = 0;
                for (const auto& block : *v.blocks) {
                    const Index n = block.dimension();
                    out.segment(at, n) = resolve(block, x.segment(at, n));
                    at += n;
                }
                return out;
            },
        },
        op.repr());
}

Point reflect(const OperatorSpec& op, const Point& x) { return 2.0 * resolve(op, x) - x; }

Point inverse_resolvent(const OperatorSpec& op, const Point& x) {
    if (!op.monotone())
        throw MonotonicityError("inverse_resolvent requires a monotone operator");
    return x - resolve(op, x);
}

double graph_residual(const OperatorSpec& op, const GraphPair& pair) {
    if (!op.monotone())
        throw MonotonicityError("graph membership requires a monotone operator");
    if (pair.u.size() != pair.x.size())
        throw DimensionError("graph pair components differ in length");
    return (resolve(op, pair.x + pair.u) - pair.x).norm();
}

bool graph_contains(const OperatorSpec& op, const GraphPair& pair, double tol) {
    return graph_residual(op, pair) <= tol;
}

bool is_monotone(const OperatorSpec& op) { return op.monotone(); }

AffineMap affine_resolvent(const OperatorSpec& op) {
    if (!op.affine())
        throw PreconditionError(std::string("operator ") + std::string(kind_name(op.kind())) +
                                " has no affine resolvent");
    const Index d = op.dimension();
    return std::visit(
        overloaded{
            [&](const variants::LinearMonotone& v) -> AffineMap {
                return {v.resolvent, Vector::Zero(d)};
            },
            [&](const variants::AffineRelation& v) -> AffineMap {
                return {v.resolvent, -(v.resolvent * v.offset)};
            },
            [&](const variants::NormalConeAffineSubspace& v) -> AffineMap {
                const Matrix proj = v.basis * v.basis.transpose();
                return {proj, v.offset - proj * v.offset};
            },
            [&](const variants::Inverse& v) -> AffineMap {
                const AffineMap inner = affine_resolvent(*v.inner);
                return {Matrix::Identity(d, d) - inner.linear, -inner.offset};
            },
            [&](const variants::Rotation& v) -> AffineMap {
                const AffineMap inner = affine_resolvent(*v.inner);
                return {inner.linear, -inner.offset};
            },
            [&](const variants::Product& v) -> AffineMap {
                AffineMap out{Matrix::Zero(d, d), Vector::Zero(d)};
                Index at = 0;
                for (const auto& block : *v.blocks) {
                    const Index n = block.dimension();
                    const AffineMap b = affine_resolvent(block);
                    out.linear.block(at, at, n, n) = b.linear;
                    out.offset.segment(at, n) = b.offset;
                    at += n;
                }
                return out;
            },
            [&](const auto&) -> AffineMap {
                throw InternalError("affine flag set on a non-affine variant");
            },
        },
        op.repr());
}

} // namespace drorder
