#pragma once

// Quasimonomial changes of variables x_i = prod_j y_j^{C_ij} with
// invertible C. In log coordinates the change is linear, u_x = C u_y, and
// conjugating a map by it yields another map of the same family:
//
//   lambda' = C^-1 lambda,   A' = C^-1 A,   B' = B C.
//
// The product B (lambda | A) is unchanged by any such transformation, so
// it is an invariant of the equivalence class, and conjugate maps have
// orbit structures identified by the (homeomorphic) change of variables.

#include <cstddef>

#include "qpmaps/qp_map.hpp"

namespace qpmaps {

class QMT {
public:
    // Computes and caches the inverse. Throws SingularMatrix when C is
    // singular (exact entries) or too ill-conditioned (float entries),
    // DimensionMismatch when C is not square.
    explicit QMT(Matrix<Scalar> C, double struct_tol = kStructTol);

    static QMT identity(std::size_t n);

    std::size_t dim() const { return c_.rows(); }
    const Matrix<Scalar>& C() const { return c_; }
    const Matrix<Scalar>& C_inv() const { return c_inv_; }

private:
    Matrix<Scalar> c_;
    Matrix<Scalar> c_inv_;
};

// The product B (lambda | A) of a map, an m x (m+1) matrix (empty when
// m = 0).
struct ClassInvariant {
    Matrix<Scalar> bm;
};

// Conjugates the map by t and canonicalizes the result (the exponent
// matrix B C can acquire zero or duplicate rows for float data); what
// canonicalization did is reported through log. Exact entries stay exact.
QPMap apply_qmt(const QPMap& map, const QMT& t, double struct_tol = kStructTol,
                CanonLog* log = nullptr);

// u_x = C u_y.
State transform_state(const QMT& t, const State& y);

// u_y = C^-1 u_x.
State inverse_transform_state(const QMT& t, const State& x);

// Composite with C = C1 C2: on states it applies t2 first, then t1; on
// maps, apply_qmt(map, compose(t1,t2)) equals applying t1 then t2.
QMT compose(const QMT& t1, const QMT& t2);

ClassInvariant class_invariant(const QPMap& map);

// Iterates the map from x0 and its conjugate from the pulled-back state,
// returning max_t || u_x(t) - C u_y(t) ||_inf over the run.
double check_conjugacy(const QPMap& map, const QMT& t, const State& x0,
                       std::size_t steps, double guard = kOverflowLimit);

} // namespace qpmaps
