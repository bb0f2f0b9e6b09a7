#pragma once

// Reductions of conservative maps.
//
// In dimension 2 the conservative class integrates in closed form: the
// product x1 x2 is constant, the one-step multiplier
// k = exp(lambda_1 + sum_j A_1j (x1(0) x2(0))^{B_j1}) is constant along
// the orbit, and x1(t) = x1(0) k^t, x2(t) = x2(0) k^-t.
//
// In any dimension, the two trace conditions (lambda sums to zero, A
// columns sum to zero) make the product prod_i x_i a first integral; the
// change of variables whose inverse is the identity with last row all
// ones decouples that product as the last coordinate, and the remaining
// dynamics is an (n-1)-dimensional map of the same family on each leaf,
// with coefficients rescaled by powers of the leaf value.
//
// reduce_with_qmt runs a user-chosen change of variables instead and
// classifies each transformed coordinate: CONSTANT (zero row of
// (lambda'|A')), GEOMETRIC (its quasimonomials are frozen, so it moves by
// a constant log increment), or COUPLED (genuine residual dynamics).

#include <cstddef>
#include <vector>

#include "qpmaps/qp_map.hpp"
#include "qpmaps/transform.hpp"

namespace qpmaps {

struct ClosedForm2D {
    State x0;
    double log_k = 0.0;

    double k() const;
    // u1(t) = u1(0) + t log_k, u2(t) = u2(0) - t log_k.
    State at(std::size_t t) const;
};

// Requires a 2-d map passing the exact conservative characterization;
// throws ConditionsNotMet otherwise (WrongDimension when n != 2).
ClosedForm2D solve_2d(const QPMap& map, const State& s0,
                      double struct_tol = kStructTol);

struct Reduction {
    QPMap source;              // the map that was reduced
    QMT qmt;                   // change of variables (last coord = product)
    QPMap reduced;             // (n-1)-dimensional leaf dynamics
    State reduced0;            // initial state for the reduced map
    double constant_coordinate = 1.0; // prod_i x_i(0), the leaf value
    double log_leaf = 0.0;            // its logarithm
    std::vector<Scalar> lift_exponents; // leaf exponent per transformed monomial
    CanonLog log;              // canonicalization of the reduced map
};

// Requires n >= 2 and the two trace conditions (checked structurally;
// ConditionsNotMet names the failing one). Exact entries stay exact when
// the initial state lies on the unit leaf (prod x_i(0) = 1).
Reduction reduce_conservative(const QPMap& map, const State& s0,
                              double struct_tol = kStructTol);

// Rebuilds the full n-dimensional trajectory from a trajectory of the
// reduced map: append the constant leaf coordinate, push through the
// change of variables.
Trajectory lift_trajectory(const Reduction& red, const Trajectory& reduced_tr);

enum class CoordKind { Constant, Geometric, Coupled };

struct CoordStatus {
    CoordKind kind = CoordKind::Coupled;
    double initial = 0.0; // u_i(0) in transformed coordinates
    double log_ratio = 0.0; // per-step log increment (Geometric only)
};

struct QmtReduction {
    QPMap transformed;
    QMT qmt;
    State y0;
    std::vector<CoordStatus> coords;
    std::vector<std::size_t> coupled; // indices of the residual subsystem
    CanonLog log;
};

QmtReduction reduce_with_qmt(const QPMap& map, const QMT& t, const State& x0,
                             double struct_tol = kStructTol);

// Iterates the decomposition: constant and geometric coordinates advance
// by their closed forms, coupled ones by the transformed map. Agrees with
// plain iteration of the transformed map up to accumulated rounding.
Trajectory iterate_decomposed(const QmtReduction& qr, std::size_t steps,
                              double guard = kOverflowLimit);

} // namespace qpmaps
