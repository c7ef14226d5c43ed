#pragma once

// Hand-rolled generators for property suites. Everything is driven by one
// std::mt19937_64 so a seed reproduces a whole suite.

#include <cmath>
#include <random>

#include "drorder/operators.hpp"

namespace drorder::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Vector random_vector(Rng& rng, Index d, double scale = 5.0) {
    Vector v(d);
    for (Index i = 0; i < d; ++i)
        v[i] = uniform(rng, -scale, scale);
    return v;
}

inline Vector random_unit(Rng& rng, Index d) {
    Vector v;
    do {
        v = random_vector(rng, d, 1.0);
    } while (v.norm() < 1e-3);
    return v / v.norm();
}

inline Matrix random_matrix(Rng& rng, Index r, Index c, double scale = 1.0) {
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j)
            m(i, j) = uniform(rng, -scale, scale);
    return m;
}

// PSD symmetric part plus a skew part: monotone, generally not symmetric.
inline Matrix random_monotone_matrix(Rng& rng, Index d) {
    const Matrix g = random_matrix(rng, d, pick(rng, 1, static_cast<int>(d)));
    const Matrix s = random_matrix(rng, d, d);
    return g * g.transpose() + (s - s.transpose()) * uniform(rng, 0.0, 1.0);
}

inline OperatorSpec random_subspace_cone(Rng& rng, Index d) {
    const Index k = pick(rng, 0, static_cast<int>(d) - 1);
    return OperatorSpec::affine_subspace(random_vector(rng, d, 2.0),
                                         random_matrix(rng, d, k));
}

/// LinearMonotone, AffineRelation, subspace cones, and their inverses and
/// rotations.
inline OperatorSpec random_affine(Rng& rng, Index d, int depth = 0) {
    switch (pick(rng, 0, depth > 0 ? 2 : 4)) {
    case 0:
        return OperatorSpec::linear_monotone(random_monotone_matrix(rng, d));
    case 1:
        return OperatorSpec::affine_relation(random_monotone_matrix(rng, d),
                                             random_vector(rng, d, 2.0));
    case 2:
        return random_subspace_cone(rng, d);
    case 3:
        return OperatorSpec::inverse(random_affine(rng, d, depth + 1));
    default:
        return OperatorSpec::rotation(random_affine(rng, d, depth + 1));
    }
}

inline OperatorSpec random_box(Rng& rng, Index d) {
    Vector lo(d), hi(d);
    const double inf = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < d; ++i) {
        const double a = uniform(rng, -3, 3), b = uniform(rng, -3, 3);
        lo[i] = pick(rng, 0, 5) == 0 ? -inf : std::min(a, b);
        hi[i] = pick(rng, 0, 5) == 0 ? inf : std::max(a, b);
    }
    return OperatorSpec::box(lo, hi);
}

/// The full maximally monotone catalog.
inline OperatorSpec random_monotone(Rng& rng, Index d, int depth = 0) {
    const int last = depth > 0 ? 6 : (d >= 2 ? 9 : 8);
    switch (pick(rng, 0, last)) {
    case 0:
    case 1:
        return random_affine(rng, d, depth);
    case 2:
        return OperatorSpec::halfspace(random_unit(rng, d), uniform(rng, -2, 2));
    case 3:
        return OperatorSpec::ball(random_vector(rng, d, 2.0), uniform(rng, 0.5, 3.0));
    case 4:
        return OperatorSpec::ray(random_unit(rng, d));
    case 5:
        return random_box(rng, d);
    case 6:
        return OperatorSpec::zero(d);
    case 7:
        return OperatorSpec::inverse(random_monotone(rng, d, depth + 1));
    case 8:
        return OperatorSpec::rotation(random_monotone(rng, d, depth + 1));
    default: {
        const Index d1 = pick(rng, 1, static_cast<int>(d) - 1);
        return OperatorSpec::product(
            {random_monotone(rng, d1, depth + 1), random_monotone(rng, d - d1, depth + 1)});
    }
    }
}

inline OperatorSpec random_sphere(Rng& rng, Index d) {
    return OperatorSpec::sphere_selection(random_vector(rng, d, 2.0), uniform(rng, 0.5, 3.0),
                                          random_unit(rng, d));
}

} // namespace drorder::testing
