#pragma once

// Quasipolynomial maps. A map of dimension n with m quasimonomials sends a
// positive state x to
//
//   x_i <- x_i * exp(lambda_i + sum_j A_ij * Q_j(x)),   Q_j(x) = prod_k x_k^{B_jk},
//
// with lambda an n-vector, A an n x m coefficient matrix and B an m x n
// exponent matrix. States live in the positive orthant; we store them in
// log coordinates u = ln x, where the update is u <- u + lambda + A exp(B u).
//
// Well-formed maps have no structurally zero column in A (a quasimonomial
// nobody uses), no structurally zero row in B (the constant quasimonomial,
// which belongs in lambda) and no duplicate rows in B (the same
// quasimonomial listed twice). canonicalize() repairs all three.
// Lotka-Volterra maps are the special case m = n, B = identity.

#include <cstddef>
#include <string>
#include <vector>

#include "qpmaps/matrix.hpp"
#include "qpmaps/scalar.hpp"

namespace qpmaps {

// A point of the positive orthant, stored as u = ln x.
struct State {
    std::vector<double> u;

    State() = default;
    explicit State(std::vector<double> log_coords) : u(std::move(log_coords)) {}

    // From orthant coordinates; every entry must be finite and positive.
    static State from_x(const std::vector<double>& x);

    std::vector<double> x() const;
    std::size_t size() const { return u.size(); }
};

struct QPMap {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<Scalar> lambda; // n entries
    Matrix<Scalar> A;           // n x m
    Matrix<Scalar> B;           // m x n

    bool all_exact() const;
};

struct Trajectory {
    QPMap map;
    std::vector<State> states; // states[t] for t = 0..steps

    std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
};

// Checks shapes and the three structural invariants, returning the map.
// Throws DimensionMismatch, ZeroColumnInA, ZeroRowInB, DuplicateBRows, or
// InvalidParameter (non-finite floating entries, n = 0).
QPMap validate(std::size_t n, std::size_t m, std::vector<Scalar> lambda,
               Matrix<Scalar> A, Matrix<Scalar> B, double struct_tol = kStructTol);
QPMap validate(QPMap raw, double struct_tol = kStructTol);

// The n x (m+1) block matrix (lambda | A); column 0 is lambda.
Matrix<Scalar> m_matrix(const QPMap& map);

// Q_j(x) = exp((B u)_j) for each quasimonomial. Throws OverflowGuard when
// some |(B u)_j| exceeds the guard.
std::vector<double> eval_quasimonomials(const QPMap& map, const State& s,
                                        double guard = kOverflowLimit);

// One application of the map in log coordinates.
State step(const QPMap& map, const State& s, double guard = kOverflowLimit);

// steps >= 1 applications; the result holds states[0..steps]. Iterating is
// a pure function of (map, s0), so batches over many initial states can
// run concurrently with bitwise identical results.
Trajectory iterate(const QPMap& map, const State& s0, std::size_t steps,
                   double guard = kOverflowLimit);

// What canonicalize() did, in order of application.
struct CanonLog {
    std::vector<std::string> notes;
    bool changed = false;
};

// Repairs a shape-consistent map whose structural invariants may fail:
// structurally zero B rows fold their A column into lambda (their
// quasimonomial is the constant 1), duplicate B rows merge by summing A
// columns into the first occurrence, and structurally zero A columns drop
// together with their B row. Exact entries stay exact. Idempotent.
QPMap canonicalize(const QPMap& raw, double struct_tol = kStructTol,
                   CanonLog* log = nullptr);

// True iff m = n and B is the identity.
bool is_lotka_volterra(const QPMap& map, double struct_tol = kStructTol);

// Built-in example family #1: the 3-d single-monomial map
//   lambda = (l1, l2, -l1-l2), A = (a13, -a13, 0)^T, B = (0 0 1),
// volume preserving on the whole orthant. Requires a13 != 0.
QPMap make_example1(const Scalar& l1, const Scalar& l2, const Scalar& a13);

// Built-in example family #2: the 3-d two-monomial map
//   lambda = (l1, l2, -l1-l2),
//   A = [[a13, a14], [-a13, a24], [0, -a14-a24]],
//   B = [[0,0,1], [1,1,1]],
// also volume preserving. Requires a13 != 0 and (a14, a24) != (0, 0).
QPMap make_example2(const Scalar& l1, const Scalar& l2, const Scalar& a13,
                    const Scalar& a14, const Scalar& a24);

} // namespace qpmaps
