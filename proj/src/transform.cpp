#include "qpmaps/transform.hpp"

#include <algorithm>
#include <cmath>

#include "qpmaps/linalg.hpp"

namespace qpmaps {

QMT::QMT(Matrix<Scalar> C, double struct_tol) : c_(std::move(C)) {
    if (c_.rows() != c_.cols())
        throw DimensionMismatch("transformation matrix must be square");
    if (c_.rows() == 0)
        throw InvalidParameter("transformation matrix must be nonempty");
    c_inv_ = inverse(c_, struct_tol);
}

QMT QMT::identity(std::size_t n) {
    return QMT(Matrix<Scalar>::identity(n));
}

QPMap apply_qmt(const QPMap& map, const QMT& t, double struct_tol, CanonLog* log) {
    if (t.dim() != map.n)
        throw DimensionMismatch("transformation dimension does not match map");
    QPMap raw;
    raw.n = map.n;
    raw.m = map.m;
    raw.lambda = t.C_inv() * map.lambda;
    raw.A = t.C_inv() * map.A;
    raw.B = map.B * t.C();
    return canonicalize(raw, struct_tol, log);
}

State transform_state(const QMT& t, const State& y) {
    if (y.size() != t.dim())
        throw DimensionMismatch("state dimension does not match transformation");
    const Matrix<Scalar>& c = t.C();
    State x;
    x.u.assign(t.dim(), 0.0);
    for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = 0; j < t.dim(); ++j)
            x.u[i] += c(i, j).value() * y.u[j];
    return x;
}

State inverse_transform_state(const QMT& t, const State& x) {
    if (x.size() != t.dim())
        throw DimensionMismatch("state dimension does not match transformation");
    const Matrix<Scalar>& ci = t.C_inv();
    State y;
    y.u.assign(t.dim(), 0.0);
    for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = 0; j < t.dim(); ++j)
            y.u[i] += ci(i, j).value() * x.u[j];
    return y;
}

QMT compose(const QMT& t1, const QMT& t2) {
    if (t1.dim() != t2.dim())
        throw DimensionMismatch("composed transformations must share a dimension");
    return QMT(t1.C() * t2.C());
}

ClassInvariant class_invariant(const QPMap& map) {
    return ClassInvariant{map.B * m_matrix(map)};
}

double check_conjugacy(const QPMap& map, const QMT& t, const State& x0,
                       std::size_t steps, double guard) {
    QPMap conj = apply_qmt(map, t);
    State y0 = inverse_transform_state(t, x0);
    Trajectory tx = iterate(map, x0, steps, guard);
    Trajectory ty = iterate(conj, y0, steps, guard);
    double worst = 0.0;
    for (std::size_t k = 0; k < tx.states.size(); ++k) {
        State pushed = transform_state(t, ty.states[k]);
        for (std::size_t i = 0; i < map.n; ++i)
            worst = std::max(worst, std::abs(tx.states[k].u[i] - pushed.u[i]));
    }
    return worst;
}

} // namespace qpmaps
