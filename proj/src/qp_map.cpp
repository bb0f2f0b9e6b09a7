#include "qpmaps/qp_map.hpp"

#include <cmath>
#include <utility>

#include "qpmaps/linalg.hpp"

namespace qpmaps {

namespace {

bool row_struct_zero(const Matrix<Scalar>& m, std::size_t i, double tol) {
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!struct_zero(m(i, j), tol)) return false;
    return true;
}

bool col_struct_zero(const Matrix<Scalar>& m, std::size_t j, double tol) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (!struct_zero(m(i, j), tol)) return false;
    return true;
}

bool rows_struct_equal(const Matrix<Scalar>& m, std::size_t i, std::size_t k,
                       double tol) {
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!struct_equal(m(i, j), m(k, j), tol)) return false;
    return true;
}

void require_finite(const Scalar& s, const char* what) {
    if (!s.exact() && !std::isfinite(s.value()))
        throw InvalidParameter(std::string("non-finite entry in ") + what);
}

void check_shapes(const QPMap& map) {
    if (map.n == 0)
        throw InvalidParameter("map dimension must be at least 1");
    if (map.lambda.size() != map.n)
        throw DimensionMismatch("lambda length does not match n");
    if (map.A.rows() != map.n || map.A.cols() != map.m)
        throw DimensionMismatch("A must be n x m");
    if (map.B.rows() != map.m || map.B.cols() != map.n)
        throw DimensionMismatch("B must be m x n");
    for (const auto& s : map.lambda) require_finite(s, "lambda");
    for (std::size_t i = 0; i < map.A.rows(); ++i)
        for (std::size_t j = 0; j < map.A.cols(); ++j)
            require_finite(map.A(i, j), "A");
    for (std::size_t i = 0; i < map.B.rows(); ++i)
        for (std::size_t j = 0; j < map.B.cols(); ++j)
            require_finite(map.B(i, j), "B");
}

} // namespace

State State::from_x(const std::vector<double>& x) {
    State s;
    s.u.reserve(x.size());
    for (double v : x) {
        if (!std::isfinite(v) || v <= 0.0)
            throw InvalidParameter("orthant coordinates must be finite and positive");
        s.u.push_back(std::log(v));
    }
    return s;
}

std::vector<double> State::x() const {
    std::vector<double> out;
    out.reserve(u.size());
    for (double v : u) out.push_back(std::exp(v));
    return out;
}

bool QPMap::all_exact() const {
    if (!qpmaps::all_exact(lambda)) return false;
    return qpmaps::all_exact(A) && qpmaps::all_exact(B);
}

QPMap validate(QPMap raw, double struct_tol) {
    check_shapes(raw);
    for (std::size_t j = 0; j < raw.m; ++j)
        if (col_struct_zero(raw.A, j, struct_tol)) throw ZeroColumnInA(j);
    for (std::size_t i = 0; i < raw.m; ++i)
        if (row_struct_zero(raw.B, i, struct_tol)) throw ZeroRowInB(i);
    for (std::size_t i = 0; i < raw.m; ++i)
        for (std::size_t k = i + 1; k < raw.m; ++k)
            if (rows_struct_equal(raw.B, i, k, struct_tol))
                throw DuplicateBRows(i, k);
    return raw;
}

QPMap validate(std::size_t n, std::size_t m, std::vector<Scalar> lambda,
               Matrix<Scalar> A, Matrix<Scalar> B, double struct_tol) {
    QPMap raw;
    raw.n = n;
    raw.m = m;
    raw.lambda = std::move(lambda);
    raw.A = std::move(A);
    raw.B = std::move(B);
    return validate(std::move(raw), struct_tol);
}

Matrix<Scalar> m_matrix(const QPMap& map) {
    Matrix<Scalar> m(map.n, map.m + 1);
    for (std::size_t i = 0; i < map.n; ++i) {
        m(i, 0) = map.lambda[i];
        for (std::size_t j = 0; j < map.m; ++j) m(i, j + 1) = map.A(i, j);
    }
    return m;
}

std::vector<double> eval_quasimonomials(const QPMap& map, const State& s,
                                        double guard) {
    if (s.size() != map.n)
        throw DimensionMismatch("state dimension does not match map");
    std::vector<double> q(map.m);
    for (std::size_t j = 0; j < map.m; ++j) {
        double e = 0.0;
        for (std::size_t k = 0; k < map.n; ++k)
            e += map.B(j, k).value() * s.u[k];
        if (!(std::abs(e) <= guard))
            throw OverflowGuard(j, e, guard);
        q[j] = std::exp(e);
    }
    return q;
}

State step(const QPMap& map, const State& s, double guard) {
    std::vector<double> q = eval_quasimonomials(map, s, guard);
    State out = s;
    for (std::size_t i = 0; i < map.n; ++i) {
        double du = map.lambda[i].value();
        for (std::size_t j = 0; j < map.m; ++j)
            du += map.A(i, j).value() * q[j];
        out.u[i] += du;
        if (!std::isfinite(out.u[i]))
            throw NonFiniteState(i);
    }
    return out;
}

Trajectory iterate(const QPMap& map, const State& s0, std::size_t steps,
                   double guard) {
    if (steps < 1)
        throw InvalidParameter("iterate needs at least one step");
    Trajectory tr;
    tr.map = map;
    tr.states.reserve(steps + 1);
    tr.states.push_back(s0);
    for (std::size_t t = 0; t < steps; ++t) {
        try {
            tr.states.push_back(step(map, tr.states.back(), guard));
        } catch (const OverflowGuard& e) {
            throw OverflowGuard(e.monomial, e.exponent, e.limit, t);
        } catch (const NonFiniteState& e) {
            throw NonFiniteState(e.component, t);
        }
    }
    return tr;
}

QPMap canonicalize(const QPMap& raw, double struct_tol, CanonLog* log) {
    check_shapes(raw);
    CanonLog local;
    CanonLog& lg = log ? *log : local;
    lg.notes.clear();
    lg.changed = false;

    std::vector<Scalar> lambda = raw.lambda;

    // Pass 1: constant quasimonomials (zero B rows) fold into lambda.
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < raw.m; ++j) {
        if (row_struct_zero(raw.B, j, struct_tol)) {
            for (std::size_t i = 0; i < raw.n; ++i)
                lambda[i] += raw.A(i, j);
            lg.notes.push_back("folded constant quasimonomial " + std::to_string(j) +
                               " into lambda");
            lg.changed = true;
        } else {
            kept.push_back(j);
        }
    }

    // Pass 2: duplicate B rows merge into the first occurrence, summing the
    // A columns.
    std::vector<std::size_t> reps;
    std::vector<std::vector<Scalar>> rep_cols;
    for (std::size_t j : kept) {
        bool merged = false;
        for (std::size_t r = 0; r < reps.size(); ++r) {
            if (rows_struct_equal(raw.B, reps[r], j, struct_tol)) {
                for (std::size_t i = 0; i < raw.n; ++i)
                    rep_cols[r][i] += raw.A(i, j);
                lg.notes.push_back("merged duplicate quasimonomial " +
                                   std::to_string(j) + " into " +
                                   std::to_string(reps[r]));
                lg.changed = true;
                merged = true;
                break;
            }
        }
        if (!merged) {
            reps.push_back(j);
            rep_cols.push_back(raw.A.col(j));
        }
    }

    // Pass 3: quasimonomials whose merged coefficient column vanished drop
    // entirely.
    std::vector<std::size_t> final_rows;
    std::vector<std::vector<Scalar>> final_cols;
    for (std::size_t r = 0; r < reps.size(); ++r) {
        bool zero = true;
        for (const Scalar& s : rep_cols[r])
            if (!struct_zero(s, struct_tol)) { zero = false; break; }
        if (zero) {
            lg.notes.push_back("dropped unused quasimonomial " +
                               std::to_string(reps[r]));
            lg.changed = true;
        } else {
            final_rows.push_back(reps[r]);
            final_cols.push_back(rep_cols[r]);
        }
    }

    QPMap out;
    out.n = raw.n;
    out.m = final_rows.size();
    out.lambda = std::move(lambda);
    out.A = Matrix<Scalar>(raw.n, out.m);
    out.B = Matrix<Scalar>(out.m, raw.n);
    for (std::size_t c = 0; c < out.m; ++c) {
        for (std::size_t i = 0; i < raw.n; ++i) out.A(i, c) = final_cols[c][i];
        for (std::size_t k = 0; k < raw.n; ++k)
            out.B(c, k) = raw.B(final_rows[c], k);
    }
    return validate(std::move(out), struct_tol);
}

bool is_lotka_volterra(const QPMap& map, double struct_tol) {
    if (map.m != map.n) return false;
    for (std::size_t j = 0; j < map.m; ++j)
        for (std::size_t k = 0; k < map.n; ++k)
            if (!struct_equal(map.B(j, k), Scalar(j == k ? 1 : 0), struct_tol))
                return false;
    return true;
}

QPMap make_example1(const Scalar& l1, const Scalar& l2, const Scalar& a13) {
    if (struct_zero(a13))
        throw InvalidParameter("example family 1 needs a nonzero coupling a13");
    std::vector<Scalar> lambda{l1, l2, -(l1 + l2)};
    Matrix<Scalar> A(3, 1);
    A(0, 0) = a13;
    A(1, 0) = -a13;
    A(2, 0) = Scalar(0);
    Matrix<Scalar> B{{Scalar(0), Scalar(0), Scalar(1)}};
    return validate(3, 1, std::move(lambda), std::move(A), std::move(B));
}

QPMap make_example2(const Scalar& l1, const Scalar& l2, const Scalar& a13,
                    const Scalar& a14, const Scalar& a24) {
    if (struct_zero(a13))
        throw InvalidParameter("example family 2 needs a nonzero coupling a13");
    if (struct_zero(a14) && struct_zero(a24))
        throw InvalidParameter("example family 2 needs (a14, a24) != (0, 0)");
    std::vector<Scalar> lambda{l1, l2, -(l1 + l2)};
    Matrix<Scalar> A(3, 2);
    A(0, 0) = a13;
    A(1, 0) = -a13;
    A(2, 0) = Scalar(0);
    A(0, 1) = a14;
    A(1, 1) = a24;
    A(2, 1) = -(a14 + a24);
    Matrix<Scalar> B{{Scalar(0), Scalar(0), Scalar(1)},
                     {Scalar(1), Scalar(1), Scalar(1)}};
    return validate(3, 2, std::move(lambda), std::move(A), std::move(B));
}

} // namespace qpmaps
