#include <doctest.h>

#include <cmath>

#include "drorder/operators.hpp"
#include "support/random_ops.hpp"

using namespace drorder;
using namespace drorder::testing;

namespace {

Point pt(std::initializer_list<double> v) {
    Point p(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v)
        p[i++] = x;
    return p;
}

double dist(const Point& a, const Point& b) { return (a - b).norm(); }

} // namespace

TEST_CASE("linear resolvent matches a hand-inverted 2x2") {
    Matrix m(2, 2);
    m << 1, 1, 1, 1;
    const OperatorSpec b = OperatorSpec::linear_monotone(m);
    // (I + M)^{-1} = [[2,1],[1,2]]^{-1} = (1/3)[[2,-1],[-1,2]].
    CHECK(dist(resolve(b, pt({1, 0})), pt({2.0 / 3, -1.0 / 3})) < 1e-15);
    CHECK(dist(resolve(b, pt({0, 3})), pt({-1, 2})) < 1e-14);
    CHECK(dist(inverse_resolvent(b, pt({1, 0})), pt({1.0 / 3, 1.0 / 3})) < 1e-15);
    const AffineMap j = affine_resolvent(b);
    Matrix want(2, 2);
    want << 2, -1, -1, 2;
    CHECK((j.linear - want / 3).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(j.offset.norm() == 0);
}

TEST_CASE("affine relation shifts the linear resolvent") {
    Matrix m(2, 2);
    m << 2, 0, 0, 1;
    const OperatorSpec a = OperatorSpec::affine_relation(m, pt({1, -2}));
    // (I + M) y + b = x  =>  y = ((x1 - 1) / 3, (x2 + 2) / 2).
    CHECK(dist(resolve(a, pt({4, 0})), pt({1, 1})) < 1e-15);
}

TEST_CASE("skew matrices are monotone, indefinite ones are not") {
    Matrix skew(2, 2);
    skew << 0, -1, 1, 0;
    CHECK(is_monotone(OperatorSpec::linear_monotone(skew)));
    // (I + J)^{-1} = (1/2)[[1,1],[-1,1]].
    CHECK(dist(resolve(OperatorSpec::linear_monotone(skew), pt({2, 0})), pt({1, -1})) < 1e-15);
    Matrix bad(2, 2);
    bad << 1, 0, 0, -1;
    CHECK_THROWS_AS(OperatorSpec::linear_monotone(bad), MonotonicityError);
    try {
        OperatorSpec::linear_monotone(bad);
    } catch (const MonotonicityError& e) {
        CHECK(std::string(e.what()).find("PSD violation") != std::string::npos);
    }
}

TEST_CASE("normal cone projections") {
    const OperatorSpec u = OperatorSpec::affine_subspace(pt({0, 0}), pt({1, 0}));
    CHECK(dist(resolve(u, pt({3, 4})), pt({3, 0})) == 0);
    CHECK(dist(inverse_resolvent(u, pt({3, 4})), pt({0, 4})) == 0);

    const OperatorSpec h = OperatorSpec::halfspace(pt({0, 1}), 0.5);
    CHECK(dist(resolve(h, pt({4, 3})), pt({4, 0.5})) < 1e-15);
    CHECK(dist(resolve(h, pt({4, -3})), pt({4, -3})) == 0);

    const OperatorSpec ball = OperatorSpec::ball(pt({2, 1}), 1.0);
    // (4,3) is at distance 2*sqrt(2); the projection sits at radius 1 along (1,1)/sqrt(2).
    const double s = 1 / std::sqrt(2.0);
    CHECK(dist(resolve(ball, pt({4, 3})), pt({2 + s, 1 + s})) < 1e-15);
    CHECK(dist(resolve(ball, pt({2.5, 1})), pt({2.5, 1})) == 0);

    const OperatorSpec ray = OperatorSpec::ray(pt({0, 1}));
    CHECK(dist(resolve(ray, pt({5, -3})), pt({0, 0})) == 0);
    CHECK(dist(resolve(ray, pt({5, 3})), pt({0, 3})) == 0);

    const double inf = std::numeric_limits<double>::infinity();
    const OperatorSpec box = OperatorSpec::box(pt({-1, -inf}), pt({1, 2}));
    CHECK(dist(resolve(box, pt({5, -100})), pt({1, -100})) == 0);
    CHECK(dist(resolve(box, pt({-5, 7})), pt({-1, 2})) == 0);
}

TEST_CASE("graph membership via the resolvent") {
    const OperatorSpec u = OperatorSpec::affine_subspace(pt({0, 0}), pt({1, 0}));
    CHECK(graph_contains(u, {pt({2, 0}), pt({0, 5})}, 1e-12));
    CHECK_FALSE(graph_contains(u, {pt({2, 1}), pt({0, 0})}, 1e-12));
    CHECK_FALSE(graph_contains(u, {pt({2, 0}), pt({1, 0})}, 1e-12));

    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const Index d = pick(rng, 1, 6);
        const Matrix m = random_monotone_matrix(rng, d);
        const OperatorSpec op = OperatorSpec::linear_monotone(m);
        const Point x = random_vector(rng, d);
        CHECK(graph_contains(op, {x, m * x}, 1e-9));
    }
    const OperatorSpec sphere = OperatorSpec::sphere_selection(pt({0, 0}), 1.0, pt({1, 0}));
    CHECK_THROWS_AS(graph_residual(sphere, {pt({1, 0}), pt({0, 0})}), MonotonicityError);
}

TEST_CASE("sphere selection, including the declared tie") {
    const OperatorSpec s = OperatorSpec::sphere_selection(pt({1, 1}), 2.0, pt({0, 1}));
    CHECK_FALSE(is_monotone(s));
    CHECK(dist(resolve(s, pt({1, 1})), pt({1, 3})) == 0);
    CHECK(dist(resolve(s, pt({4, 1})), pt({3, 1})) < 1e-15);
    CHECK(dist(resolve(s, pt({1.5, 1})), pt({3, 1})) < 1e-15);
    CHECK_THROWS_AS(inverse_resolvent(s, pt({0, 0})), MonotonicityError);
    CHECK_THROWS_AS(OperatorSpec::inverse(s), MonotonicityError);
}

TEST_CASE("inverse and rotation against independent closed forms") {
    Rng rng(12);
    for (int i = 0; i < 30; ++i) {
        const Index d = pick(rng, 1, 5);
        Matrix m = random_monotone_matrix(rng, d) + Matrix::Identity(d, d) * 0.5;
        const OperatorSpec op = OperatorSpec::linear_monotone(m);
        const Point x = random_vector(rng, d);
        const Matrix inv = m.inverse();
        const Point direct = (Matrix::Identity(d, d) + inv).inverse() * x;
        CHECK(dist(resolve(OperatorSpec::inverse(op), x), direct) < 1e-10);
        // A linear: -M(-x) = Mx, so the rotation has the same resolvent.
        CHECK(dist(resolve(OperatorSpec::rotation(op), x), resolve(op, x)) < 1e-13);
    }
    // Rotating N_C gives N_{-C}.
    const OperatorSpec ball = OperatorSpec::ball(pt({2, 1}), 1.0);
    const OperatorSpec flipped = OperatorSpec::ball(pt({-2, -1}), 1.0);
    for (int i = 0; i < 20; ++i) {
        const Point x = random_vector(rng, 2);
        CHECK(dist(resolve(OperatorSpec::rotation(ball), x), resolve(flipped, x)) < 1e-14);
    }
}

TEST_CASE("validation errors") {
    CHECK_THROWS_AS(OperatorSpec::ball(pt({0, 0}), 0.0), ValidationError);
    CHECK_THROWS_AS(OperatorSpec::ball(pt({0, 0}), -1.0), ValidationError);
    CHECK_THROWS_AS(OperatorSpec::ray(pt({1, 1})), ValidationError);
    CHECK_THROWS_AS(OperatorSpec::halfspace(pt({0, 2}), 0.0), ValidationError);
    CHECK_THROWS_AS(OperatorSpec::box(pt({1, 0}), pt({0, 1})), ValidationError);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(OperatorSpec::box(pt({inf}), pt({inf})), ValidationError);
    Matrix rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(OperatorSpec::linear_monotone(rect), DimensionError);
    CHECK_THROWS_AS(resolve(OperatorSpec::zero(2), pt({1, 2, 3})), DimensionError);
    CHECK_THROWS_AS(affine_resolvent(OperatorSpec::ball(pt({0}), 1.0)), PreconditionError);
}

TEST_CASE("kind flags") {
    const OperatorSpec u = OperatorSpec::affine_subspace(pt({0, 0}), pt({1, 0}));
    CHECK(u.affine());
    CHECK(u.affine_subspace_cone());
    CHECK(OperatorSpec::rotation(u).affine_subspace_cone());
    CHECK_FALSE(OperatorSpec::inverse(u).affine_subspace_cone());
    CHECK(OperatorSpec::inverse(u).affine());
    CHECK_FALSE(OperatorSpec::halfspace(pt({0, 1}), 0).affine());
    CHECK(OperatorSpec::product({u, u}).affine_subspace_cone());
    CHECK_FALSE(OperatorSpec::product({u, OperatorSpec::ball(pt({0, 0}), 1)}).affine());
    CHECK(kind_name(u.kind()) == "normal_cone_affine_subspace");
}

TEST_CASE("property: resolvents are firmly nonexpansive, reflectors nonexpansive") {
    Rng rng(13);
    for (int i = 0; i < 300; ++i) {
        const Index d = pick(rng, 1, 8);
        const OperatorSpec op = random_monotone(rng, d);
        const Point x = random_vector(rng, d), y = random_vector(rng, d);
        const Point jx = resolve(op, x), jy = resolve(op, y);
        const double scale = 1.0 + (x - y).squaredNorm();
        CHECK((jx - jy).dot((x - jx) - (y - jy)) >= -1e-10 * scale);
        CHECK(dist(reflect(op, x), reflect(op, y)) <= dist(x, y) * (1 + 1e-12) + 1e-12);
    }
}

TEST_CASE("property: affine resolvents preserve affine combinations and match closed form") {
    Rng rng(14);
    for (int i = 0; i < 200; ++i) {
        const Index d = pick(rng, 1, 8);
        const OperatorSpec op = random_affine(rng, d);
        const Point x = random_vector(rng, d), y = random_vector(rng, d);
        const double t = uniform(rng, -2, 3);
        const Point lhs = reflect(op, t * x + (1 - t) * y);
        const Point rhs = t * reflect(op, x) + (1 - t) * reflect(op, y);
        CHECK(dist(lhs, rhs) < 1e-9);
        CHECK(dist(affine_resolvent(op).apply(x), resolve(op, x)) < 1e-10);
    }
}

TEST_CASE("property: projections are idempotent, inverse and rotation identities hold") {
    Rng rng(15);
    for (int i = 0; i < 200; ++i) {
        const Index d = pick(rng, 1, 8);
        const OperatorSpec op = random_monotone(rng, d);
        const Point x = random_vector(rng, d);
        CHECK(dist(resolve(op, x) + inverse_resolvent(op, x), x) < 1e-12);
        CHECK(dist(reflect(OperatorSpec::inverse(op), x), -reflect(op, x)) < 1e-10);
        CHECK(dist(resolve(OperatorSpec::rotation(op), x), -resolve(op, -x)) < 1e-12);
        const OperatorSpec cone = random_subspace_cone(rng, d);
        const Point p = resolve(cone, x);
        CHECK(dist(resolve(cone, p), p) < 1e-12);
    }
}

TEST_CASE("orthonormal spanning sets are kept exactly") {
    Matrix q(3, 2);
    q << 1, 0, 0, 0.6, 0, 0.8;
    const OperatorSpec u = OperatorSpec::affine_subspace(pt({0, 0, 1}), q);
    const auto& s = std::get<variants::NormalConeAffineSubspace>(u.repr());
    CHECK(s.basis == q);
    // A dependent column is dropped.
    Matrix dep(2, 2);
    dep << 1, 2, 1, 2;
    const auto& s2 = std::get<variants::NormalConeAffineSubspace>(
        OperatorSpec::affine_subspace(pt({0, 0}), dep).repr());
    CHECK(s2.basis.cols() == 1);
}
