#include <doctest.h>

#include <cmath>

#include "qpmaps/errors.hpp"
#include "qpmaps/linalg.hpp"
#include "qpmaps/random_map.hpp"
#include "qpmaps/rng.hpp"
#include "qpmaps/transform.hpp"
#include "test_util.hpp"

using namespace qpmaps;
using namespace qpmaps::testutil;

namespace {

Scalar r(long n, long d = 1) { return Scalar::rational(n, d); }

// Exact rational invertible matrix with entries num/den, |num| <= 8,
// den <= 4. Retries until the exact determinant is nonzero.
QMT random_rational_qmt(Rng& rng, std::size_t n) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Matrix<Scalar> c(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                c(i, j) = Scalar::rational(rng.uniform_int(-8, 8),
                                           rng.uniform_int(1, 4));
        if (determinant(c) != r(0)) return QMT(std::move(c));
    }
    throw std::logic_error("failed to draw an invertible matrix");
}

} // namespace

TEST_CASE("transformation matrices must be square and invertible") {
    CHECK_THROWS_AS(QMT(Matrix<Scalar>(2, 3)), DimensionMismatch);
    CHECK_THROWS_AS(QMT(Matrix<Scalar>{{r(1), r(2)}, {r(2), r(4)}}),
                    SingularMatrix);
    CHECK_THROWS_AS(QMT(Matrix<Scalar>(0, 0)), InvalidParameter);
}

TEST_CASE("identity transformation leaves a map untouched") {
    QPMap ex1 = make_example1(r(1, 10), r(-1, 20), r(7, 10));
    QMT id = QMT::identity(3);
    CanonLog log;
    QPMap same = apply_qmt(ex1, id, kStructTol, &log);
    CHECK(maps_equal(same, ex1));
    CHECK(!log.changed);
    CHECK_THROWS_AS(apply_qmt(ex1, QMT::identity(2)), DimensionMismatch);
}

TEST_CASE("pair-swap change of variables empties a row of the rate block") {
    // C = [[1,1],[0,-1]] is an involution. On any 2-d map with opposite
    // rates and opposite coefficient rows it zeroes the first row of
    // (lambda | A) and the second column of the exponent matrix: the
    // first new coordinate y1 = x1 x2 is frozen.
    QMT t(Matrix<Scalar>{{r(1), r(1)}, {r(0), r(-1)}});
    CHECK(t.C_inv() == t.C());

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        QPMap map = random_map(seed, 2, 2, {-0.5, 0.5}, Profile::conservative_2d());
        QPMap conj = apply_qmt(map, t);
        CHECK(conj.lambda[0] == r(0));
        for (std::size_t j = 0; j < conj.m; ++j) {
            CHECK(conj.A(0, j) == r(0));
            CHECK(conj.B(j, 1) == r(0));
        }
        CHECK(conj.m == map.m); // nothing merged or dropped
    }
}

TEST_CASE("triangular change of variables on the one-monomial example") {
    Scalar l1 = r(1, 10), l2 = r(-1, 20), a13 = r(7, 10);
    QPMap ex1 = make_example1(l1, l2, a13);
    QMT t(Matrix<Scalar>{{r(1), r(-1), r(-1)},
                         {r(0), r(1), r(0)},
                         {r(0), r(0), r(1)}});
    // C^-1 has first row all ones: the first new coordinate is x1 x2 x3.
    CHECK(t.C_inv()(0, 0) == r(1));
    CHECK(t.C_inv()(0, 1) == r(1));
    CHECK(t.C_inv()(0, 2) == r(1));

    QPMap conj = apply_qmt(ex1, t);
    CHECK(conj.m == 1);
    CHECK(conj.lambda[0] == r(0));
    CHECK(conj.lambda[1] == l2);
    CHECK(conj.lambda[2] == -l1 - l2);
    CHECK(conj.A(0, 0) == r(0));
    CHECK(conj.A(1, 0) == -a13);
    CHECK(conj.A(2, 0) == r(0));
    CHECK(conj.B(0, 0) == r(0));
    CHECK(conj.B(0, 1) == r(0));
    CHECK(conj.B(0, 2) == r(1));
}

TEST_CASE("states move by C in log coordinates") {
    QMT t(Matrix<Scalar>{{r(2), r(0)}, {r(0), r(-1)}});
    double e = std::exp(1.0);
    State y = State::from_x({e, e});
    State x = transform_state(t, y);
    CHECK(x.u[0] == doctest::Approx(2.0).epsilon(1e-14));  // x1 = y1^2 = e^2
    CHECK(x.u[1] == doctest::Approx(-1.0).epsilon(1e-14)); // x2 = 1/y2
    State back = inverse_transform_state(t, x);
    CHECK(log_distance(back, y) <= 1e-13);
    CHECK_THROWS_AS(transform_state(t, State::from_x({1.0, 1.0, 1.0})),
                    DimensionMismatch);
}

TEST_CASE("aggregate coordinate picks up the product of the originals") {
    QMT t(Matrix<Scalar>{{r(1), r(0), r(0)},
                         {r(0), r(1), r(0)},
                         {r(-1), r(-1), r(1)}});
    State x = State::from_x({2.0, 3.0, 4.0});
    State y = inverse_transform_state(t, x);
    CHECK(y.u[0] == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(y.u[1] == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(y.u[2] == doctest::Approx(std::log(24.0)).epsilon(1e-14));
}

TEST_CASE("composition chains transformations") {
    QMT swap(Matrix<Scalar>{{r(1), r(1)}, {r(0), r(-1)}});
    QMT both = compose(swap, swap);
    CHECK(both.C() == Matrix<Scalar>::identity(2));
    QMT left = compose(swap, QMT::identity(2));
    CHECK(left.C() == swap.C());
    CHECK_THROWS_AS(compose(swap, QMT::identity(3)), DimensionMismatch);

    // Random rational checks: conjugating by t1 then t2 equals conjugating
    // by the composite in one shot, entry for entry, and state transport
    // chains the same way.
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(mix_seed(seed, 9001));
        QMT t1 = random_rational_qmt(rng, 3);
        QMT t2 = random_rational_qmt(rng, 3);
        QPMap map = random_map(seed, 3, 2, {-0.5, 0.5}, Profile::unconstrained());
        QPMap nested = apply_qmt(apply_qmt(map, t1), t2);
        QPMap direct = apply_qmt(map, compose(t1, t2));
        CHECK(maps_equal(nested, direct));

        State y = random_state(rng, 3, 0.5);
        State once = transform_state(compose(t1, t2), y);
        State twice = transform_state(t1, transform_state(t2, y));
        CHECK(log_distance(once, twice) <= 1e-12);
    }
}

TEST_CASE("the exponent-rate product is a class invariant") {
    Scalar l1 = r(1, 10), l2 = r(-1, 20), a13 = r(7, 10);
    QPMap ex1 = make_example1(l1, l2, a13);
    ClassInvariant inv = class_invariant(ex1);
    REQUIRE(inv.bm.rows() == 1);
    REQUIRE(inv.bm.cols() == 2);
    CHECK(inv.bm(0, 0) == -l1 - l2);
    CHECK(inv.bm(0, 1) == r(0));

    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(mix_seed(seed, 1234));
        QMT t = random_rational_qmt(rng, 3);
        QPMap map = random_map(seed, 3, 2, {-0.5, 0.5}, Profile::unconstrained());
        QPMap conj = apply_qmt(map, t);
        CHECK(class_invariant(conj).bm == class_invariant(map).bm);
    }
}

TEST_CASE("conjugated orbits shadow the original through the change of variables") {
    QPMap ex1 = make_example1(r(1, 10), r(-1, 20), r(7, 10));
    QMT t(Matrix<Scalar>{{r(1), r(-1), r(-1)},
                         {r(0), r(1), r(0)},
                         {r(0), r(0), r(1)}});
    Rng rng(77);
    for (int k = 0; k < 5; ++k) {
        State x0 = random_state(rng, 3, 0.5);
        CHECK(check_conjugacy(ex1, t, x0, 50) <= 1e-9);
    }
}
