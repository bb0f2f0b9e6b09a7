#include "qpmaps/jacobian.hpp"

#include <cmath>

#include "qpmaps/classify.hpp"
#include "qpmaps/linalg.hpp"

namespace qpmaps {

JacobianEval analytic_jacobian(const QPMap& map, const State& s, double guard) {
    std::vector<double> q = eval_quasimonomials(map, s, guard);
    std::vector<double> x = s.x();
    const std::size_t n = map.n;

    std::vector<double> phi(n);
    double phi_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double p = map.lambda[i].value();
        for (std::size_t j = 0; j < map.m; ++j)
            p += map.A(i, j).value() * q[j];
        if (!(std::abs(p) <= guard))
            throw OverflowGuard(i, p, guard);
        phi[i] = p;
        phi_sum += p;
    }

    Matrix<double> K(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < map.m; ++j)
                K(i, k) += map.A(i, j).value() * q[j] * map.B(j, k).value();

    // G is J with the exp(phi_i) row scales divided out; computing the
    // determinant from G and multiplying by exp(sum phi) avoids losing
    // accuracy when individual phi_i are large but their sum is not (the
    // usual situation for volume-preserving maps).
    Matrix<double> G(n, n);
    Matrix<double> J(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double e = std::exp(phi[i]);
        for (std::size_t k = 0; k < n; ++k) {
            G(i, k) = (i == k ? 1.0 : 0.0) + x[i] * K(i, k) / x[k];
            J(i, k) = e * G(i, k);
        }
    }

    JacobianEval out;
    out.J = std::move(J);
    out.K = std::move(K);
    out.det = std::exp(phi_sum) * det_double(G);
    return out;
}

Matrix<double> fd_jacobian(const QPMap& map, const State& s, double h) {
    if (!(h > 0.0))
        throw InvalidParameter("finite-difference step must be positive");
    const std::size_t n = map.n;
    std::vector<double> x = s.x();
    Matrix<double> J(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double dx = h * std::max(1.0, std::abs(x[k]));
        std::vector<double> hi = x, lo = x;
        hi[k] += dx;
        lo[k] -= dx;
        if (lo[k] <= 0.0)
            throw InvalidParameter("finite-difference step leaves the orthant");
        std::vector<double> fhi = step(map, State::from_x(hi)).x();
        std::vector<double> flo = step(map, State::from_x(lo)).x();
        for (std::size_t i = 0; i < n; ++i)
            J(i, k) = (fhi[i] - flo[i]) / (2.0 * dx);
    }
    return J;
}

DetExpansion3 delta3_expansion(const QPMap& map, double struct_tol) {
    if (map.n != 3)
        throw WrongDimension("determinant expansion is defined for n = 3");
    for (std::size_t j = 0; j < map.m; ++j) {
        Scalar colsum = map.A(0, j) + map.A(1, j) + map.A(2, j);
        if (!struct_zero(colsum, struct_tol))
            throw ConditionsNotMet(
                "determinant expansion needs zero column sums of A; column " +
                    std::to_string(j) + " sums to " + colsum.str(),
                "a-column-sums-zero");
    }

    DetExpansion3 e;
    e.lambda_sum = map.lambda[0] + map.lambda[1] + map.lambda[2];
    e.linear.resize(map.m);
    for (std::size_t j = 0; j < map.m; ++j)
        e.linear[j] = map.A(0, j) * map.B(j, 0) + map.A(1, j) * map.B(j, 1) +
                      map.A(2, j) * map.B(j, 2);
    for (std::size_t k = 0; k < map.m; ++k)
        for (std::size_t l = k + 1; l < map.m; ++l) {
            Scalar w = omega(map, 0, 1, k, l) + omega(map, 0, 2, k, l) +
                       omega(map, 1, 2, k, l);
            e.quadratic.emplace_back(k, l, w);
        }
    return e;
}

double evaluate_expansion(const DetExpansion3& e, const QPMap& map,
                          const State& s, double guard) {
    std::vector<double> q = eval_quasimonomials(map, s, guard);
    double v = 1.0;
    for (std::size_t j = 0; j < map.m; ++j)
        v += e.linear[j].value() * q[j];
    for (const auto& [k, l, w] : e.quadratic)
        v += w.value() * q[k] * q[l];
    return std::exp(e.lambda_sum.value()) * v;
}

} // namespace qpmaps
