#include "drorder/splitting.hpp"

#include <deque>
#include <sstream>
#include <string>

namespace drorder {

namespace {

void require_same_dimension(const OperatorSpec& a, const OperatorSpec& b) {
    if (a.dimension() != b.dimension()) {
        std::ostringstream os;
        os << "operands act on different spaces: R^" << a.dimension() << " vs R^"
           << b.dimension();
        throw DimensionError(os.str());
    }
}

struct Entry {
    std::size_t step;
    Point governing;
    Point shadow;
    double residual = 0.0;
};

// Head of fixed size followed by a bounded running tail.
class OrbitRecorder {
public:
    explicit OrbitRecorder(std::size_t cap)
        : head_cap_(std::max<std::size_t>(1, cap / 2)),
          tail_cap_(std::max<std::size_t>(1, cap - std::min(cap, cap / 2))) {}

    void push(Entry e) {
        if (head_.size() < head_cap_) {
            head_.push_back(std::move(e));
            return;
        }
        tail_.push_back(std::move(e));
        if (tail_.size() > tail_cap_) {
            tail_.pop_front();
            ++dropped_;
        }
    }

    Entry& back() { return tail_.empty() ? head_.back() : tail_.back(); }

    Orbit finish(bool converged) {
        Orbit orbit;
        orbit.converged = converged;
        orbit.dropped = dropped_;
        const std::size_t total = head_.size() + tail_.size();
        orbit.steps.reserve(total);
        orbit.governing.reserve(total);
        orbit.shadow.reserve(total);
        auto take = [&](Entry& e) {
            orbit.steps.push_back(e.step);
            orbit.governing.push_back(std::move(e.governing));
            orbit.shadow.push_back(std::move(e.shadow));
            orbit.residuals.push_back(e.residual);
        };
        for (auto& e : head_)
            take(e);
        for (auto& e : tail_)
            take(e);
        orbit.final_residual = orbit.residuals.back();
        orbit.residuals.pop_back();
        orbit.iterations = orbit.steps.back();
        return orbit;
    }

private:
    std::size_t head_cap_;
    std::size_t tail_cap_;
    std::size_t dropped_ = 0;
    std::vector<Entry> head_;
    std::deque<Entry> tail_;
};

Orbit run(const PointMap& t, const PointMap& shadow, const Point& x0, std::size_t max_steps,
          double stop_tol, std::size_t cap) {
    if (!x0.allFinite())
        throw DivergenceError("start point has non-finite entries", x0, 0);
    OrbitRecorder rec(cap);
    Point x = x0;
    rec.push({0, x, shadow(x)});
    bool converged = false;
    for (std::size_t n = 0;; ++n) {
        Point y = t(x);
        if (!y.allFinite()) {
            std::ostringstream os;
            os << "non-finite iterate at step " << n + 1;
            throw DivergenceError(os.str(), x, n);
        }
        const double r = (y - x).norm();
        rec.back().residual = r;
        if (stop_tol >= 0.0 && r <= stop_tol) {
            converged = true;
            break;
        }
        if (n == max_steps)
            break;
        Point s = shadow(y);
        rec.push({n + 1, y, std::move(s)});
        x = std::move(y);
    }
    return rec.finish(converged);
}

} // namespace

SplitOperator::SplitOperator(OperatorSpec first, OperatorSpec second, SplitForm form,
                             SplitMode mode)
    : first_(std::move(first)), second_(std::move(second)), form_(form), mode_(mode) {
    require_same_dimension(first_, second_);
    if (mode_ == SplitMode::Standard) {
        if (!first_.monotone() || !second_.monotone())
            throw MonotonicityError(
                "splitting operands must be monotone outside generalized mode");
    } else if (!first_.affine_subspace_cone() && !second_.affine_subspace_cone()) {
        throw PreconditionError(
            "generalized mode requires an affine-subspace normal cone operand");
    }
}

SplitOperator SplitOperator::douglas_rachford(OperatorSpec first, OperatorSpec second,
                                              SplitMode mode) {
    return {std::move(first), std::move(second), SplitForm::DouglasRachford, mode};
}

SplitOperator SplitOperator::borwein_tam(OperatorSpec first, OperatorSpec second,
                                         SplitMode mode) {
    return {std::move(first), std::move(second), SplitForm::BorweinTam, mode};
}

SplitOperator SplitOperator::swapped() const { return {second_, first_, form_, mode_}; }

Point SplitOperator::operator()(const Point& x) const {
    return form_ == SplitForm::DouglasRachford ? dr_apply(first_, second_, x)
                                               : borwein_tam_apply(first_, second_, x);
}

Point dr_apply(const OperatorSpec& a, const OperatorSpec& b, const Point& x) {
    require_same_dimension(a, b);
    const Point ja = resolve(a, x);
    return x - ja + resolve(b, Point(2.0 * ja - x));
}

Point dr_apply_reflected(const OperatorSpec& a, const OperatorSpec& b, const Point& x) {
    require_same_dimension(a, b);
    return 0.5 * (x + reflect(b, reflect(a, x)));
}

Point borwein_tam_apply(const OperatorSpec& a, const OperatorSpec& b, const Point& x) {
    return dr_apply(a, b, dr_apply(b, a, x));
}

Point dr_apply(const SplitOperator& t, const Point& x) {
    if (t.form() != SplitForm::DouglasRachford)
        throw PreconditionError("dr_apply called on a Borwein-Tam operator");
    return dr_apply(t.first(), t.second(), x);
}

Point borwein_tam_apply(const SplitOperator& t, const Point& x) {
    if (t.form() != SplitForm::BorweinTam)
        throw PreconditionError("borwein_tam_apply called on a Douglas-Rachford operator");
    return borwein_tam_apply(t.first(), t.second(), x);
}

AffineMap dr_matrix(const OperatorSpec& a, const OperatorSpec& b) {
    require_same_dimension(a, b);
    if (!a.affine() || !b.affine())
        throw PreconditionError("dr_matrix needs two affine operands");
    const AffineMap ja = affine_resolvent(a);
    const AffineMap jb_ra = affine_resolvent(b).after(ja.reflected());
    const Index d = a.dimension();
    return {Matrix::Identity(d, d) - ja.linear + jb_ra.linear, jb_ra.offset - ja.offset};
}

AffineMap dr_matrix(const SplitOperator& t) {
    const AffineMap ab = dr_matrix(t.first(), t.second());
    if (t.form() == SplitForm::DouglasRachford)
        return ab;
    return ab.after(dr_matrix(t.second(), t.first()));
}

Orbit iterate(const SplitOperator& t, const Point& x0, const IterateOptions& opts) {
    if (x0.size() != t.dimension())
        throw DimensionError("start point dimension differs from operator dimension");
    const OperatorSpec& a = t.first();
    return iterate([&t](const Point& x) { return t(x); },
                   [&a](const Point& x) { return resolve(a, x); }, x0, opts);
}

Orbit iterate(const PointMap& t, const PointMap& shadow, const Point& x0,
              const IterateOptions& opts) {
    if (opts.max_iter < 1)
        throw PreconditionError("max_iter must be at least 1");
    if (!(opts.stop_tol >= 0.0))
        throw PreconditionError("stop_tol must be non-negative");
    return run(t, shadow, x0, opts.max_iter, opts.stop_tol, opts.store_cap);
}

Orbit trace(const PointMap& t, const PointMap& shadow, const Point& x0, std::size_t steps) {
    return run(t, shadow, x0, steps, -1.0, steps + 2);
}

Point LiftedProblem::broadcast(const Point& x) const {
    return x.replicate(static_cast<Index>(ops.size()), 1);
}

Point LiftedProblem::block(const Point& lifted, std::size_t i) const {
    return lifted.segment(static_cast<Index>(i) * block_dim, block_dim);
}

Point LiftedProblem::average(const Point& lifted) const {
    Point sum = Point::Zero(block_dim);
    for (std::size_t i = 0; i < ops.size(); ++i)
        sum += block(lifted, i);
    return sum / static_cast<double>(ops.size());
}

LiftedProblem lift(std::span<const OperatorSpec> ops) {
    if (ops.size() < 2)
        throw PreconditionError("lift needs at least two operators");
    const Index d = ops.front().dimension();
    for (const auto& op : ops) {
        if (op.dimension() != d)
            throw DimensionError("lifted operators must share one dimension");
        if (!op.monotone())
            throw MonotonicityError("lifted operators must be monotone");
    }
    const Index m = static_cast<Index>(ops.size());
    Matrix spanning(m * d, d);
    for (Index i = 0; i < m; ++i)
        spanning.block(i * d, 0, d, d).setIdentity();
    std::vector<OperatorSpec> copy(ops.begin(), ops.end());
    return LiftedProblem{copy, d, OperatorSpec::affine_subspace(Vector::Zero(m * d), spanning),
                         OperatorSpec::product(copy)};
}

} // namespace drorder
