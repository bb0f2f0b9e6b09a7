#include "qpmaps/reduce.hpp"

#include <cmath>
#include <utility>

#include "qpmaps/classify.hpp"
#include "qpmaps/linalg.hpp"

namespace qpmaps {

double ClosedForm2D::k() const { return std::exp(log_k); }

State ClosedForm2D::at(std::size_t t) const {
    double shift = static_cast<double>(t) * log_k;
    return State({x0.u[0] + shift, x0.u[1] - shift});
}

ClosedForm2D solve_2d(const QPMap& map, const State& s0, double struct_tol) {
    if (map.n != 2)
        throw WrongDimension("closed-form solution is defined for n = 2");
    if (s0.size() != 2)
        throw DimensionMismatch("initial state must be 2-dimensional");
    ClassificationReport rep = classify_2d(map, struct_tol);
    if (rep.verdict != Verdict::Conservative) {
        std::string failed;
        for (const auto& c : rep.conditions)
            if (!c.holds) failed += (failed.empty() ? "" : ", ") + c.id;
        throw ConditionsNotMet("map is not in the 2-d conservative class (" +
                                   failed + ")",
                               failed);
    }

    // The product x1 x2 is constant, so each quasimonomial is frozen at
    // its initial value and the log increment of x1 is the constant
    // lambda_1 + sum_j A_1j exp(B_j1 (u1 + u2)).
    double leaf = s0.u[0] + s0.u[1];
    double log_k = map.lambda[0].value();
    for (std::size_t j = 0; j < map.m; ++j)
        log_k += map.A(0, j).value() * std::exp(map.B(j, 0).value() * leaf);

    ClosedForm2D out;
    out.x0 = s0;
    out.log_k = log_k;
    return out;
}

namespace {

// C with inverse = identity except an all-ones last row; then the last
// transformed coordinate is the product of the originals.
Matrix<Scalar> reduction_matrix(std::size_t n) {
    Matrix<Scalar> c = Matrix<Scalar>::identity(n);
    for (std::size_t j = 0; j + 1 < n; ++j) c(n - 1, j) = Scalar(-1);
    return c;
}

} // namespace

Reduction reduce_conservative(const QPMap& map, const State& s0,
                              double struct_tol) {
    if (map.n < 2)
        throw WrongDimension("reduction needs dimension at least 2");
    if (s0.size() != map.n)
        throw DimensionMismatch("initial state dimension does not match map");

    {
        Scalar ls(0);
        for (const auto& l : map.lambda) ls += l;
        if (!struct_zero(ls, struct_tol))
            throw ConditionsNotMet("lambda does not sum to zero (sum = " +
                                       ls.str() + ")",
                                   "lambda-sum-zero");
        for (std::size_t j = 0; j < map.m; ++j) {
            Scalar cs(0);
            for (std::size_t i = 0; i < map.n; ++i) cs += map.A(i, j);
            if (!struct_zero(cs, struct_tol))
                throw ConditionsNotMet("column " + std::to_string(j) +
                                           " of A does not sum to zero (sum = " +
                                           cs.str() + ")",
                                       "a-column-sums-zero");
        }
    }

    const std::size_t n = map.n;
    QMT qmt(reduction_matrix(n));

    // Conjugate without canonicalizing yet: the reduced map is built from
    // slices of the transformed matrices, and only the slice should be
    // canonicalized (its own rows may collapse).
    QPMap tr;
    tr.n = n;
    tr.m = map.m;
    tr.lambda = qmt.C_inv() * map.lambda;
    tr.A = qmt.C_inv() * map.A;
    tr.B = map.B * qmt.C();

    // The trace conditions said exactly that the last transformed row of
    // (lambda | A) vanishes; anything else is a logic error upstream.
    if (!struct_zero(tr.lambda[n - 1], struct_tol))
        throw ConditionsNotMet("transformed map is not leaf-decoupled",
                               "lambda-sum-zero");
    for (std::size_t j = 0; j < tr.m; ++j)
        if (!struct_zero(tr.A(n - 1, j), struct_tol))
            throw ConditionsNotMet("transformed map is not leaf-decoupled",
                                   "a-column-sums-zero");

    Reduction red{.source = map,
                  .qmt = qmt,
                  .reduced = QPMap{},
                  .reduced0 = State{},
                  .constant_coordinate = 1.0,
                  .log_leaf = 0.0,
                  .lift_exponents = {},
                  .log = {}};

    for (double u : s0.u) red.log_leaf += u;
    red.constant_coordinate = std::exp(red.log_leaf);

    // On the leaf the last coordinate is frozen at the leaf value, so each
    // quasimonomial splits off a constant factor leaf^{B'_{j,n}} which is
    // absorbed into the coefficient column.
    QPMap raw;
    raw.n = n - 1;
    raw.m = tr.m;
    raw.lambda.assign(tr.lambda.begin(), tr.lambda.end() - 1);
    raw.A = Matrix<Scalar>(n - 1, tr.m);
    raw.B = Matrix<Scalar>(tr.m, n - 1);
    red.lift_exponents.reserve(tr.m);
    for (std::size_t j = 0; j < tr.m; ++j) {
        Scalar e = tr.B(j, n - 1);
        red.lift_exponents.push_back(e);
        Scalar scale = red.log_leaf == 0.0
                           ? Scalar(1)
                           : Scalar(std::exp(red.log_leaf * e.value()));
        for (std::size_t i = 0; i + 1 < n; ++i)
            raw.A(i, j) = tr.A(i, j) * scale;
        for (std::size_t k = 0; k + 1 < n; ++k)
            raw.B(j, k) = tr.B(j, k);
    }
    red.reduced = canonicalize(raw, struct_tol, &red.log);

    State y0 = inverse_transform_state(qmt, s0);
    red.reduced0 = State(std::vector<double>(y0.u.begin(), y0.u.end() - 1));
    return red;
}

Trajectory lift_trajectory(const Reduction& red, const Trajectory& reduced_tr) {
    const std::size_t n = red.source.n;
    Trajectory out;
    out.map = red.source;
    out.states.reserve(reduced_tr.states.size());
    for (const State& v : reduced_tr.states) {
        if (v.size() != n - 1)
            throw DimensionMismatch("reduced trajectory has the wrong dimension");
        State y;
        y.u = v.u;
        y.u.push_back(red.log_leaf);
        out.states.push_back(transform_state(red.qmt, y));
    }
    return out;
}

QmtReduction reduce_with_qmt(const QPMap& map, const QMT& t, const State& x0,
                             double struct_tol) {
    if (x0.size() != map.n)
        throw DimensionMismatch("initial state dimension does not match map");

    QmtReduction qr{.transformed = QPMap{},
                    .qmt = t,
                    .y0 = inverse_transform_state(t, x0),
                    .coords = {},
                    .coupled = {},
                    .log = {}};
    qr.transformed = apply_qmt(map, t, struct_tol, &qr.log);
    const QPMap& m = qr.transformed;

    std::vector<bool> constant(m.n, false);
    qr.coords.assign(m.n, CoordStatus{});
    for (std::size_t i = 0; i < m.n; ++i) qr.coords[i].initial = qr.y0.u[i];

    // Constants: zero row of (lambda' | A').
    for (std::size_t i = 0; i < m.n; ++i) {
        bool zero = struct_zero(m.lambda[i], struct_tol);
        for (std::size_t j = 0; zero && j < m.m; ++j)
            if (!struct_zero(m.A(i, j), struct_tol)) zero = false;
        if (zero) {
            constant[i] = true;
            qr.coords[i].kind = CoordKind::Constant;
        }
    }

    // Geometric: every quasimonomial this row actually uses depends only
    // on constant coordinates, so its increment is frozen at t = 0.
    std::vector<double> q0 = eval_quasimonomials(m, qr.y0);
    for (std::size_t i = 0; i < m.n; ++i) {
        if (constant[i]) continue;
        bool frozen = true;
        for (std::size_t j = 0; frozen && j < m.m; ++j) {
            if (struct_zero(m.A(i, j), struct_tol)) continue;
            for (std::size_t k = 0; k < m.n; ++k)
                if (!constant[k] && !struct_zero(m.B(j, k), struct_tol)) {
                    frozen = false;
                    break;
                }
        }
        if (frozen) {
            qr.coords[i].kind = CoordKind::Geometric;
            double r = m.lambda[i].value();
            for (std::size_t j = 0; j < m.m; ++j)
                r += m.A(i, j).value() * q0[j];
            qr.coords[i].log_ratio = r;
        } else {
            qr.coupled.push_back(i);
        }
    }
    return qr;
}

Trajectory iterate_decomposed(const QmtReduction& qr, std::size_t steps,
                              double guard) {
    if (steps < 1)
        throw InvalidParameter("iterate needs at least one step");
    Trajectory tr;
    tr.map = qr.transformed;
    tr.states.reserve(steps + 1);
    tr.states.push_back(qr.y0);
    for (std::size_t t = 0; t < steps; ++t) {
        State next = step(qr.transformed, tr.states.back(), guard);
        // Pin the decomposed coordinates to their closed forms so rounding
        // cannot leak into the residual subsystem through them.
        for (std::size_t i = 0; i < qr.coords.size(); ++i) {
            const CoordStatus& c = qr.coords[i];
            if (c.kind == CoordKind::Constant)
                next.u[i] = c.initial;
            else if (c.kind == CoordKind::Geometric)
                next.u[i] = c.initial + static_cast<double>(t + 1) * c.log_ratio;
        }
        tr.states.push_back(std::move(next));
    }
    return tr;
}

} // namespace qpmaps
