#pragma once

// Jacobian of a quasipolynomial map in orthant coordinates. Writing
// phi_i(x) = lambda_i + sum_j A_ij Q_j(x), the update is
// x'_i = x_i exp(phi_i) and
//
//   J_ik = exp(phi_i) (delta_ik + x_i K_ik / x_k),   K = A diag(Q) B.
//
// For n = 3 maps whose A columns each sum to zero, K has rank at most 2
// and the determinant collapses to a quasipolynomial with only constant,
// linear, and pairwise-quadratic terms in the Q_j; delta3_expansion
// computes those coefficients exactly.

#include <cstddef>
#include <tuple>
#include <vector>

#include "qpmaps/qp_map.hpp"

namespace qpmaps {

struct JacobianEval {
    Matrix<double> J; // d x'_i / d x_k
    double det;
    Matrix<double> K; // A diag(Q) B
};

// Overflow-guarded evaluation at a state; determinant by pivoted
// elimination after factoring the exp(phi_i) row scales out, which keeps
// it accurate when individual phi_i are large but their sum is small.
JacobianEval analytic_jacobian(const QPMap& map, const State& s,
                               double guard = kOverflowLimit);

// Central differences in orthant coordinates with relative step
// h * max(1, |x_k|) per column.
Matrix<double> fd_jacobian(const QPMap& map, const State& s, double h = 1e-6);

// Coefficients of the n = 3 determinant quasipolynomial
//   det J = exp(lambda_sum) * (1 + sum_j linear_j Q_j
//                                + sum_{k<l} quad_kl Q_k Q_l).
struct DetExpansion3 {
    Scalar lambda_sum;
    std::vector<Scalar> linear;                                   // per monomial
    std::vector<std::tuple<std::size_t, std::size_t, Scalar>> quadratic; // k < l
};

// Requires n = 3 and zero column sums of A (otherwise a cubic term
// survives and the collapse above is wrong); throws ConditionsNotMet.
DetExpansion3 delta3_expansion(const QPMap& map, double struct_tol = kStructTol);

// Pointwise value of the expansion at a state.
double evaluate_expansion(const DetExpansion3& e, const QPMap& map, const State& s,
                          double guard = kOverflowLimit);

} // namespace qpmaps
