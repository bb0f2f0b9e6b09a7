#pragma once

// Conservativity classification. A map is conservative when |det J| = 1
// everywhere on the positive orthant. Exact characterizations exist in
// low dimension:
//
//   n = 1: only the identity map.
//   n = 2: iff lambda sums to zero, every A column sums to zero, and
//          every B row has equal entries (then det J = +1).
//   n = 3: iff, for non-negative and non-degenerate B, the two trace
//          conditions above hold together with a per-monomial contraction
//          sum_i A_ij B_ji = 0 and vanishing pairwise omega sums.
//
// In general dimension the two trace conditions are necessary (for
// non-negative B), and an even-dimensional sufficient family is given by
// the symplectic pairing conditions. Every check runs exactly on rational
// entries and against a structural tolerance on floats.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qpmaps/qp_map.hpp"

namespace qpmaps {

enum class Verdict {
    Conservative,
    NotConservative,
    NecessaryConditionsHold,
    Indeterminate,
};

enum class Orientation { Preserving, Unknown };

std::string to_string(Verdict v);
std::string to_string(Orientation o);

struct ConditionCheck {
    std::string id;
    bool holds = false;
    std::vector<std::size_t> witnesses; // offending indices, 0-based
    std::string detail;                 // human-readable failure note
};

struct HypothesisCheck {
    std::string id;
    bool holds = false;
    std::string detail;
};

struct ClassificationReport {
    Verdict verdict = Verdict::Indeterminate;
    Orientation orientation = Orientation::Unknown;
    std::vector<HypothesisCheck> hypotheses;
    std::vector<ConditionCheck> conditions;
    std::string note; // which classifier produced this

    const ConditionCheck* find_condition(const std::string& id) const;
    bool all_conditions_hold() const;
    bool all_hypotheses_hold() const;
};

// n = 1: conservative iff the canonicalized map is the identity.
ClassificationReport classify_1d(const QPMap& map, double struct_tol = kStructTol);

// n = 2 exact characterization; conservative maps have det J = +1.
ClassificationReport classify_2d(const QPMap& map, double struct_tol = kStructTol);

// Non-degeneracy of the exponent matrix for n = 3: no row equals the sum
// of two other rows (m >= 3), and no two disjoint row pairs share a sum
// (m >= 4). Returns the offending row indices on failure.
std::pair<bool, std::vector<std::size_t>> is_b_nondegenerate(
    const QPMap& map, double struct_tol = kStructTol);

// omega(i,j,k,l) = det [[A_ik, A_il], [A_jk, A_jl]]
//                * det [[B_ki, B_kj], [B_li, B_lj]],
// 0-based with i < j < n and k < l < m. Exact on rational entries.
Scalar omega(const QPMap& map, std::size_t i, std::size_t j, std::size_t k,
             std::size_t l);

// n = 3 characterization under non-negative, non-degenerate B; verdict
// Indeterminate when a hypothesis fails (the test does not apply there).
ClassificationReport classify_3d(const QPMap& map, double struct_tol = kStructTol);

// Necessary conditions in any dimension for non-negative B: lambda sums
// to zero and every A column sums to zero. Verdict is
// NecessaryConditionsHold / NotConservative / Indeterminate (negative B).
ClassificationReport necessary_conditions(const QPMap& map,
                                          double struct_tol = kStructTol);

// Dispatcher: exact classifiers for n <= 3, necessary_conditions beyond.
ClassificationReport classify_map(const QPMap& map, double struct_tol = kStructTol);

// Even-dimensional sufficient conditions (n = 2s): writing states as s
// conjugate pairs (x_i, x_{s+i}),
//   (a) A_ij + A_{s+i,j} = 0,
//   (b) lambda_i + lambda_{s+i} = 0,
//   (c) A_ip B_pj = A_ip B_{p,s+j} = 0 for i != j (both <= s), all p,
//   (d) A_ip (B_pi - B_{p,s+i}) = 0 for all i <= s, p.
// All hold -> Conservative (orientation preserving). Any failure ->
// Indeterminate: the conditions are sufficient only.
ClassificationReport symplectic_conditions(const QPMap& map,
                                           double struct_tol = kStructTol);

// Basis of quasimonomial first integrals: every exponent vector c with
// c^T (lambda | A) = 0 makes prod x_i^{c_i} constant along orbits.
struct IntegralBasis {
    std::vector<std::vector<Scalar>> exponents;
};

IntegralBasis find_integrals(const QPMap& map, double struct_tol = kStructTol);

// Numerical spot check of |det J| at log-uniform random states; never
// authoritative in the positive direction.
enum class OracleVerdict { ConsistentWithConservative, NotConservative };

struct OracleResult {
    OracleVerdict verdict = OracleVerdict::ConsistentWithConservative;
    double max_deviation = 0.0; // max over points of | |det J| - 1 |
    std::size_t points = 0;
    std::size_t resampled = 0; // points skipped for overflow
    std::uint64_t seed = 0;
};

OracleResult sampling_oracle(const QPMap& map, std::uint64_t seed,
                             std::size_t npoints = 200, double threshold = 1e-6,
                             double box_halfwidth = 2.0);

} // namespace qpmaps
