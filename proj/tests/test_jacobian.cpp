#include <doctest.h>

#include <cmath>

#include "qpmaps/errors.hpp"
#include "qpmaps/jacobian.hpp"
#include "qpmaps/linalg.hpp"
#include "qpmaps/random_map.hpp"
#include "qpmaps/rng.hpp"
#include "test_util.hpp"

using namespace qpmaps;
using namespace qpmaps::testutil;

namespace {

Scalar r(long n, long d = 1) { return Scalar::rational(n, d); }

double matrix_gap(const Matrix<double>& a, const Matrix<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

} // namespace

TEST_CASE("identity map has the identity Jacobian everywhere") {
    QPMap id;
    id.n = 2;
    id.m = 0;
    id.lambda = {r(0), r(0)};
    id.A = Matrix<Scalar>(2, 0);
    id.B = Matrix<Scalar>(0, 2);
    validate(id);

    Rng rng(3);
    for (int k = 0; k < 10; ++k) {
        State s = random_state(rng, 2, 2.0);
        JacobianEval ev = analytic_jacobian(id, s);
        CHECK(ev.det == 1.0);
        CHECK(matrix_gap(ev.J, Matrix<double>{{1.0, 0.0}, {0.0, 1.0}}) == 0.0);
        CHECK(matrix_gap(ev.K, Matrix<double>(2, 2, 0.0)) == 0.0);
        CHECK(matrix_gap(fd_jacobian(id, s),
                         Matrix<double>{{1.0, 0.0}, {0.0, 1.0}}) <= 1e-10);
    }
}

TEST_CASE("unit determinant at the unit point of the example family") {
    QPMap ex1 = make_example1(r(1, 10), r(-1, 20), r(7, 10));
    State unit = State::from_x({1.0, 1.0, 1.0});
    JacobianEval ev = analytic_jacobian(ex1, unit);
    CHECK(std::abs(ev.det - 1.0) <= 1e-12);

    QPMap ex2 = make_example2(r(1, 10), r(1, 5), r(1, 2), r(3, 10), r(-1, 10));
    JacobianEval ev2 = analytic_jacobian(ex2, unit);
    CHECK(std::abs(ev2.det - 1.0) <= 1e-12);
}

TEST_CASE("1-d self-coupled map has a closed-form derivative") {
    // x' = x e^x has derivative e^x (1 + x); at x = 1 that is 2e.
    QPMap map;
    map.n = 1;
    map.m = 1;
    map.lambda = {r(0)};
    map.A = Matrix<Scalar>{{r(1)}};
    map.B = Matrix<Scalar>{{r(1)}};
    validate(map);
    State s = State::from_x({1.0});
    JacobianEval ev = analytic_jacobian(map, s);
    CHECK(ev.det == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-14));
    CHECK(ev.J(0, 0) == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-14));
    CHECK(ev.K(0, 0) == doctest::Approx(1.0).epsilon(1e-14)); // A Q B at Q = x = 1
    Matrix<double> fd = fd_jacobian(map, s);
    CHECK(fd(0, 0) == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-8));
}

TEST_CASE("finite differences confirm the analytic Jacobian") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        std::size_t n = 2 + seed % 2;
        QPMap map = random_map(seed, n, 2, {-0.5, 0.5}, Profile::unconstrained());
        Rng rng(mix_seed(seed, 12));
        State s = random_state(rng, n, 0.5);
        JacobianEval ev = analytic_jacobian(map, s);
        Matrix<double> fd = fd_jacobian(map, s);
        CHECK(matrix_gap(ev.J, fd) <= 1e-5 * (1.0 + norm_inf(ev.J)));
    }

    QPMap ex2 = make_example2(r(1, 10), r(1, 5), r(1, 2), r(3, 10), r(-1, 10));
    Rng rng(99);
    for (int k = 0; k < 10; ++k) {
        State s = random_state(rng, 3, 1.0);
        Matrix<double> fd = fd_jacobian(ex2, s);
        CHECK(std::abs(det_double(fd) - 1.0) <= 1e-6);
    }
}

TEST_CASE("finite differences validate their inputs") {
    QPMap ex1 = make_example1(r(1, 10), r(-1, 20), r(7, 10));
    State unit = State::from_x({1.0, 1.0, 1.0});
    CHECK_THROWS_AS(fd_jacobian(ex1, unit, 0.0), InvalidParameter);
    CHECK_THROWS_AS(fd_jacobian(ex1, unit, 1.5), InvalidParameter);
}

TEST_CASE("determinant expansion for 3-d maps with zero column sums") {
    SUBCASE("one-monomial example collapses to the constant 1") {
        QPMap ex1 = make_example1(r(1, 10), r(-1, 20), r(7, 10));
        DetExpansion3 e = delta3_expansion(ex1);
        CHECK(e.lambda_sum == r(0));
        REQUIRE(e.linear.size() == 1);
        CHECK(e.linear[0] == r(0));
        CHECK(e.quadratic.empty());
        Rng rng(4);
        State s = random_state(rng, 3, 1.0);
        CHECK(evaluate_expansion(e, ex1, s) == 1.0);
    }
    SUBCASE("two-monomial example has vanishing coefficients too") {
        QPMap ex2 = make_example2(r(1, 10), r(1, 5), r(1, 2), r(3, 10), r(-1, 10));
        DetExpansion3 e = delta3_expansion(ex2);
        CHECK(e.lambda_sum == r(0));
        CHECK(e.linear[0] == r(0));
        CHECK(e.linear[1] == r(0));
        REQUIRE(e.quadratic.size() == 1);
        CHECK(std::get<0>(e.quadratic[0]) == 0);
        CHECK(std::get<1>(e.quadratic[0]) == 1);
        CHECK(std::get<2>(e.quadratic[0]) == r(0));
    }
    SUBCASE("nonzero coefficients appear for self-coupled species") {
        QPMap lv;
        lv.n = 3;
        lv.m = 3;
        lv.lambda = {r(1, 4), r(0), r(-1, 4)};
        lv.A = Matrix<Scalar>{{r(1), r(0), r(1)},
                              {r(-1), r(1), r(-1)},
                              {r(0), r(-1), r(0)}};
        lv.B = Matrix<Scalar>::identity(3);
        validate(lv);
        DetExpansion3 e = delta3_expansion(lv);
        CHECK(e.lambda_sum == r(0));
        CHECK(e.linear[0] == r(1));  // A(0,0) B(0,0)
        CHECK(e.linear[1] == r(1));  // A(1,1) B(1,1)
        CHECK(e.linear[2] == r(0));
        REQUIRE(e.quadratic.size() == 3);
        CHECK(std::get<2>(e.quadratic[0]) == r(1)); // pair (0,1)
    }
    SUBCASE("preconditions") {
        QPMap bad;
        bad.n = 3;
        bad.m = 1;
        bad.lambda = {r(0), r(0), r(0)};
        bad.A = Matrix<Scalar>{{r(1)}, {r(1)}, {r(-1)}};
        bad.B = Matrix<Scalar>{{r(0), r(0), r(1)}};
        validate(bad);
        try {
            delta3_expansion(bad);
            FAIL("expected ConditionsNotMet");
        } catch (const ConditionsNotMet& e) {
            CHECK(e.failed_conditions == "a-column-sums-zero");
        }
        QPMap two = random_map(1, 2, 2, {-0.5, 0.5}, Profile::conservative_2d());
        CHECK_THROWS_AS(delta3_expansion(two), WrongDimension);
    }
}

TEST_CASE("expansion matches the determinant along random states") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        QPMap map = random_map(seed, 3, 2, {-0.5, 0.5},
                               Profile::trace_conservative());
        DetExpansion3 e = delta3_expansion(map);
        Rng rng(mix_seed(seed, 88));
        for (int k = 0; k < 5; ++k) {
            State s = random_state(rng, 3, 1.0);
            double det = analytic_jacobian(map, s).det;
            double approx = evaluate_expansion(e, map, s);
            CHECK(std::abs(det - approx) <= 1e-9 * (1.0 + std::abs(det)));
        }
    }
}

TEST_CASE("zero column sums make the coupling matrix singular") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::size_t n = 3 + seed % 2;
        QPMap map = random_map(seed, n, 2, {-0.5, 0.5},
                               Profile::trace_conservative());
        Rng rng(mix_seed(seed, 17));
        State s = random_state(rng, n, 1.0);
        JacobianEval ev = analytic_jacobian(map, s);
        double scale = std::max(1.0, norm_inf(ev.K));
        CHECK(std::abs(det_double(ev.K)) <= 1e-10 * std::pow(scale, n));
    }
}

TEST_CASE("jacobian evaluation respects the overflow guard") {
    QPMap map;
    map.n = 1;
    map.m = 1;
    map.lambda = {r(0)};
    map.A = Matrix<Scalar>{{r(1)}};
    map.B = Matrix<Scalar>{{r(1)}};
    validate(map);

    State deep;
    deep.u = {800.0};
    CHECK_THROWS_AS(analytic_jacobian(map, deep), OverflowGuard);
    // Exponent passes the monomial guard but the row rate e^u does not.
    State wide;
    wide.u = {650.0};
    CHECK_THROWS_AS(analytic_jacobian(map, wide), OverflowGuard);
}
