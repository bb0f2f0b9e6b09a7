#include <doctest.h>

#include "qpmaps/errors.hpp"
#include "qpmaps/linalg.hpp"
#include "qpmaps/matrix.hpp"

using namespace qpmaps;

namespace {
Scalar r(long n, long d = 1) { return Scalar::rational(n, d); }
}

TEST_CASE("exact inverse of a rational matrix") {
    Matrix<Scalar> c{{r(1), r(1)}, {r(0), r(1)}};
    Matrix<Scalar> inv = inverse(c);
    CHECK(inv(0, 0) == r(1));
    CHECK(inv(0, 1) == r(-1));
    CHECK(inv(1, 0) == r(0));
    CHECK(inv(1, 1) == r(1));
    CHECK(inv(0, 1).exact());

    Matrix<Scalar> prod = c * inv;
    CHECK(prod == Matrix<Scalar>::identity(2));
}

TEST_CASE("singular matrices are rejected") {
    Matrix<Scalar> sing{{r(1), r(2)}, {r(2), r(4)}};
    CHECK_THROWS_AS(inverse(sing), SingularMatrix);

    // Float path: numerically singular and ill-conditioned inputs throw too.
    Matrix<Scalar> fsing{{Scalar(1.0), Scalar(2.0)}, {Scalar(2.0), Scalar(4.0)}};
    CHECK_THROWS_AS(inverse(fsing), SingularMatrix);
    Matrix<Scalar> illcond{{Scalar(1.0), Scalar(1.0)}, {Scalar(1.0), Scalar(1.0 + 1e-14)}};
    CHECK_THROWS_AS(inverse(illcond), SingularMatrix);
}

TEST_CASE("float inverse is accurate on well-conditioned input") {
    Matrix<Scalar> c{{Scalar(2.0), Scalar(1.0)}, {Scalar(1.0), Scalar(3.0)}};
    Matrix<Scalar> inv = inverse(c);
    // inverse = 1/5 [[3, -1], [-1, 2]]
    CHECK(inv(0, 0).value() == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(inv(0, 1).value() == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(inv(1, 1).value() == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("exact determinant") {
    Matrix<Scalar> a{{r(1, 2), r(1, 3)}, {r(1, 4), r(1, 5)}};
    CHECK(determinant(a) == r(1, 60)); // 1/10 - 1/12
    CHECK(determinant(Matrix<Scalar>::identity(4)) == r(1));
    Matrix<Scalar> sing{{r(1), r(2)}, {r(2), r(4)}};
    CHECK(determinant(sing) == r(0));
}

TEST_CASE("double determinant via pivoted elimination") {
    Matrix<double> a{{0.0, 1.0}, {1.0, 0.0}}; // needs the pivot swap
    CHECK(det_double(a) == doctest::Approx(-1.0));
    Matrix<double> b{{2.0, 0.0, 0.0}, {0.0, 3.0, 0.0}, {0.0, 0.0, 4.0}};
    CHECK(det_double(b) == doctest::Approx(24.0));
}

TEST_CASE("left kernel basis, exact and normalized") {
    // c^T M = 0 with M = [[1,1],[0,0]]: kernel spanned by (0,1).
    Matrix<Scalar> m{{r(1), r(1)}, {r(0), r(0)}};
    auto basis = left_kernel_basis(m);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0][0] == r(0));
    CHECK(basis[0][1] == r(1));

    // Full-rank: empty kernel.
    CHECK(left_kernel_basis(Matrix<Scalar>::identity(3)).empty());

    // Two identical rows: kernel (1,-1) after first-entry normalization.
    Matrix<Scalar> dup{{r(2), r(3)}, {r(2), r(3)}};
    auto basis2 = left_kernel_basis(dup);
    REQUIRE(basis2.size() == 1);
    CHECK(basis2[0][0] == r(1));
    CHECK(basis2[0][1] == r(-1));
}

TEST_CASE("left kernel normalization yields leading one and lowest terms") {
    // Rows: r0 = 2*r1, so kernel contains (1, -2); the basis vector is
    // scaled so its first structurally nonzero entry is exactly 1.
    Matrix<Scalar> m{{r(4), r(6)}, {r(2), r(3)}};
    auto basis = left_kernel_basis(m);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0][0] == r(1));
    CHECK(basis[0][1] == r(-2));
}

TEST_CASE("float kernel extraction is thresholded") {
    Matrix<Scalar> m{{Scalar(1.0), Scalar(2.0)}, {Scalar(0.5), Scalar(1.0 + 1e-15)}};
    auto basis = left_kernel_basis(m);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0][0].value() == doctest::Approx(1.0));
    CHECK(basis[0][1].value() == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("all_exact and norm helpers") {
    Matrix<Scalar> e{{r(1), r(2)}, {r(3), r(4)}};
    CHECK(all_exact(e));
    Matrix<Scalar> f{{r(1), Scalar(2.0)}, {r(3), r(4)}};
    CHECK(!all_exact(f));
    Matrix<double> d{{1.0, -5.0}, {2.0, 2.0}};
    CHECK(norm_inf(d) == doctest::Approx(6.0)); // max row sum of |entries|
}
