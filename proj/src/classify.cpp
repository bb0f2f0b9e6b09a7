#include "qpmaps/classify.hpp"

#include <cmath>

#include "qpmaps/jacobian.hpp"
#include "qpmaps/linalg.hpp"
#include "qpmaps/rng.hpp"

namespace qpmaps {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Conservative: return "Conservative";
        case Verdict::NotConservative: return "NotConservative";
        case Verdict::NecessaryConditionsHold: return "NecessaryConditionsHold";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

std::string to_string(Orientation o) {
    return o == Orientation::Preserving ? "Preserving" : "Unknown";
}

const ConditionCheck* ClassificationReport::find_condition(const std::string& id) const {
    for (const auto& c : conditions)
        if (c.id == id) return &c;
    return nullptr;
}

bool ClassificationReport::all_conditions_hold() const {
    for (const auto& c : conditions)
        if (!c.holds) return false;
    return true;
}

bool ClassificationReport::all_hypotheses_hold() const {
    for (const auto& h : hypotheses)
        if (!h.holds) return false;
    return true;
}

namespace {

Scalar lambda_sum(const QPMap& map) {
    Scalar s(0);
    for (const auto& l : map.lambda) s += l;
    return s;
}

Scalar column_sum(const Matrix<Scalar>& a, std::size_t j) {
    Scalar s(0);
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j);
    return s;
}

ConditionCheck lambda_sum_condition(const QPMap& map, double tol) {
    ConditionCheck c;
    c.id = "lambda-sum-zero";
    Scalar s = lambda_sum(map);
    c.holds = struct_zero(s, tol);
    if (!c.holds) c.detail = "sum of lambda is " + s.str();
    return c;
}

ConditionCheck column_sums_condition(const QPMap& map, double tol) {
    ConditionCheck c;
    c.id = "a-column-sums-zero";
    c.holds = true;
    for (std::size_t j = 0; j < map.m; ++j) {
        Scalar s = column_sum(map.A, j);
        if (!struct_zero(s, tol)) {
            c.holds = false;
            c.witnesses.push_back(j);
            if (c.detail.empty())
                c.detail = "column " + std::to_string(j) + " of A sums to " + s.str();
        }
    }
    return c;
}

} // namespace

ClassificationReport classify_1d(const QPMap& map, double struct_tol) {
    if (map.n != 1)
        throw WrongDimension("1-d classifier needs a 1-dimensional map");
    QPMap c = canonicalize(map, struct_tol);

    ClassificationReport r;
    r.note = "exact 1-d classification: only the identity map is conservative";
    ConditionCheck cc;
    cc.id = "identity-map";
    cc.holds = c.m == 0 && struct_zero(c.lambda[0], struct_tol);
    if (!cc.holds)
        cc.detail = c.m != 0
                        ? "map retains " + std::to_string(c.m) + " quasimonomial(s)"
                        : "lambda is " + c.lambda[0].str();
    r.conditions.push_back(std::move(cc));
    if (r.all_conditions_hold()) {
        r.verdict = Verdict::Conservative;
        r.orientation = Orientation::Preserving;
    } else {
        r.verdict = Verdict::NotConservative;
    }
    return r;
}

ClassificationReport classify_2d(const QPMap& map, double struct_tol) {
    if (map.n != 2)
        throw WrongDimension("2-d classifier needs a 2-dimensional map");

    ClassificationReport r;
    r.note = "exact 2-d characterization";
    r.conditions.push_back(lambda_sum_condition(map, struct_tol));
    r.conditions.push_back(column_sums_condition(map, struct_tol));

    ConditionCheck c3;
    c3.id = "b-row-entries-equal";
    c3.holds = true;
    for (std::size_t i = 0; i < map.m; ++i) {
        if (!struct_equal(map.B(i, 0), map.B(i, 1), struct_tol)) {
            c3.holds = false;
            c3.witnesses.push_back(i);
            if (c3.detail.empty())
                c3.detail = "B row " + std::to_string(i) + " has entries " +
                            map.B(i, 0).str() + " and " + map.B(i, 1).str();
        }
    }
    r.conditions.push_back(std::move(c3));

    if (r.all_conditions_hold()) {
        r.verdict = Verdict::Conservative;
        r.orientation = Orientation::Preserving;
    } else {
        r.verdict = Verdict::NotConservative;
    }
    return r;
}

std::pair<bool, std::vector<std::size_t>> is_b_nondegenerate(const QPMap& map,
                                                             double struct_tol) {
    if (map.n != 3)
        throw WrongDimension("non-degeneracy test is defined for n = 3");
    const std::size_t m = map.m;

    auto row_plus_row = [&](std::size_t a, std::size_t b) {
        std::vector<Scalar> s(map.n);
        for (std::size_t k = 0; k < map.n; ++k) s[k] = map.B(a, k) + map.B(b, k);
        return s;
    };
    auto row_equals = [&](std::size_t a, const std::vector<Scalar>& v) {
        for (std::size_t k = 0; k < map.n; ++k)
            if (!struct_equal(map.B(a, k), v[k], struct_tol)) return false;
        return true;
    };
    auto vec_equals = [&](const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
        for (std::size_t k = 0; k < a.size(); ++k)
            if (!struct_equal(a[k], b[k], struct_tol)) return false;
        return true;
    };

    // No row may equal the sum of two other rows.
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                if (j == i || k == i) continue;
                if (row_equals(i, row_plus_row(j, k)))
                    return {false, {i, j, k}};
            }

    // No two disjoint row pairs may share a componentwise sum.
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = i + 1; k < m; ++k)
                for (std::size_t l = k + 1; l < m; ++l) {
                    if (k == j || l == j) continue;
                    if (vec_equals(row_plus_row(i, j), row_plus_row(k, l)))
                        return {false, {i, j, k, l}};
                }

    return {true, {}};
}

Scalar omega(const QPMap& map, std::size_t i, std::size_t j, std::size_t k,
             std::size_t l) {
    if (!(i < j && j < map.n))
        throw IndexOutOfRange("omega needs state indices i < j < n");
    if (!(k < l && l < map.m))
        throw IndexOutOfRange("omega needs quasimonomial indices k < l < m");
    Scalar det_a = map.A(i, k) * map.A(j, l) - map.A(i, l) * map.A(j, k);
    Scalar det_b = map.B(k, i) * map.B(l, j) - map.B(k, j) * map.B(l, i);
    return det_a * det_b;
}

ClassificationReport classify_3d(const QPMap& map, double struct_tol) {
    if (map.n != 3)
        throw WrongDimension("3-d classifier needs a 3-dimensional map");

    ClassificationReport r;
    r.note = "exact 3-d characterization for non-negative, non-degenerate B";

    HypothesisCheck nonneg;
    nonneg.id = "b-nonnegative";
    nonneg.holds = true;
    for (std::size_t j = 0; j < map.m && nonneg.holds; ++j)
        for (std::size_t k = 0; k < map.n; ++k)
            if (!struct_nonneg(map.B(j, k), struct_tol)) {
                nonneg.holds = false;
                nonneg.detail = "B(" + std::to_string(j) + "," + std::to_string(k) +
                                ") = " + map.B(j, k).str() + " is negative";
                break;
            }
    r.hypotheses.push_back(nonneg);

    HypothesisCheck nondeg;
    nondeg.id = "b-nondegenerate";
    auto [ok, witness] = is_b_nondegenerate(map, struct_tol);
    nondeg.holds = ok;
    if (!ok) {
        nondeg.detail = "degenerate row combination:";
        for (std::size_t w : witness) nondeg.detail += " " + std::to_string(w);
    }
    r.hypotheses.push_back(std::move(nondeg));

    r.conditions.push_back(lambda_sum_condition(map, struct_tol));
    r.conditions.push_back(column_sums_condition(map, struct_tol));

    ConditionCheck c3;
    c3.id = "ab-contraction-zero";
    c3.holds = true;
    for (std::size_t j = 0; j < map.m; ++j) {
        Scalar s = map.A(0, j) * map.B(j, 0) + map.A(1, j) * map.B(j, 1) +
                   map.A(2, j) * map.B(j, 2);
        if (!struct_zero(s, struct_tol)) {
            c3.holds = false;
            c3.witnesses.push_back(j);
            if (c3.detail.empty())
                c3.detail = "sum_i A(i," + std::to_string(j) + ")*B(" +
                            std::to_string(j) + ",i) = " + s.str();
        }
    }
    r.conditions.push_back(std::move(c3));

    ConditionCheck c4;
    c4.id = "omega-sums-zero";
    c4.holds = true;
    for (std::size_t k = 0; k < map.m; ++k)
        for (std::size_t l = k + 1; l < map.m; ++l) {
            Scalar s = omega(map, 0, 1, k, l) + omega(map, 0, 2, k, l) +
                       omega(map, 1, 2, k, l);
            if (!struct_zero(s, struct_tol)) {
                c4.holds = false;
                c4.witnesses.push_back(k);
                c4.witnesses.push_back(l);
                if (c4.detail.empty())
                    c4.detail = "omega sum for quasimonomial pair (" +
                                std::to_string(k) + "," + std::to_string(l) +
                                ") = " + s.str();
            }
        }
    r.conditions.push_back(std::move(c4));

    if (!r.all_hypotheses_hold()) {
        r.verdict = Verdict::Indeterminate;
        r.note += "; hypotheses fail, conditions reported for information only";
    } else if (r.all_conditions_hold()) {
        r.verdict = Verdict::Conservative;
        r.orientation = Orientation::Preserving;
    } else {
        r.verdict = Verdict::NotConservative;
    }
    return r;
}

ClassificationReport necessary_conditions(const QPMap& map, double struct_tol) {
    ClassificationReport r;
    r.note = "necessary conditions for non-negative B, any dimension";

    HypothesisCheck nonneg;
    nonneg.id = "b-nonnegative";
    nonneg.holds = true;
    for (std::size_t j = 0; j < map.m && nonneg.holds; ++j)
        for (std::size_t k = 0; k < map.n; ++k)
            if (!struct_nonneg(map.B(j, k), struct_tol)) {
                nonneg.holds = false;
                nonneg.detail = "B(" + std::to_string(j) + "," + std::to_string(k) +
                                ") = " + map.B(j, k).str() + " is negative";
                break;
            }
    r.hypotheses.push_back(std::move(nonneg));

    r.conditions.push_back(lambda_sum_condition(map, struct_tol));
    r.conditions.push_back(column_sums_condition(map, struct_tol));

    if (!r.all_hypotheses_hold())
        r.verdict = Verdict::Indeterminate;
    else if (r.all_conditions_hold())
        r.verdict = Verdict::NecessaryConditionsHold;
    else
        r.verdict = Verdict::NotConservative;
    return r;
}

ClassificationReport classify_map(const QPMap& map, double struct_tol) {
    switch (map.n) {
        case 1: return classify_1d(map, struct_tol);
        case 2: return classify_2d(map, struct_tol);
        case 3: return classify_3d(map, struct_tol);
        default: return necessary_conditions(map, struct_tol);
    }
}

ClassificationReport symplectic_conditions(const QPMap& map, double struct_tol) {
    if (map.n % 2 != 0)
        throw WrongDimension("symplectic conditions need an even dimension");
    const std::size_t s = map.n / 2;

    ClassificationReport r;
    r.note = "symplectic pairing conditions (sufficient only)";

    ConditionCheck a;
    a.id = "pair-coefficients-antisymmetric";
    a.holds = true;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t p = 0; p < map.m; ++p) {
            Scalar v = map.A(i, p) + map.A(s + i, p);
            if (!struct_zero(v, struct_tol)) {
                a.holds = false;
                a.witnesses.push_back(i);
                a.witnesses.push_back(p);
                if (a.detail.empty())
                    a.detail = "A(" + std::to_string(i) + "," + std::to_string(p) +
                               ") + A(" + std::to_string(s + i) + "," +
                               std::to_string(p) + ") = " + v.str();
            }
        }
    r.conditions.push_back(std::move(a));

    ConditionCheck b;
    b.id = "pair-rates-antisymmetric";
    b.holds = true;
    for (std::size_t i = 0; i < s; ++i) {
        Scalar v = map.lambda[i] + map.lambda[s + i];
        if (!struct_zero(v, struct_tol)) {
            b.holds = false;
            b.witnesses.push_back(i);
            if (b.detail.empty())
                b.detail = "lambda " + std::to_string(i) + " + lambda " +
                           std::to_string(s + i) + " = " + v.str();
        }
    }
    r.conditions.push_back(std::move(b));

    ConditionCheck c;
    c.id = "cross-coupling-zero";
    c.holds = true;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            if (i == j) continue;
            for (std::size_t p = 0; p < map.m; ++p) {
                Scalar v1 = map.A(i, p) * map.B(p, j);
                Scalar v2 = map.A(i, p) * map.B(p, s + j);
                if (!struct_zero(v1, struct_tol) || !struct_zero(v2, struct_tol)) {
                    c.holds = false;
                    c.witnesses.push_back(i);
                    c.witnesses.push_back(j);
                    c.witnesses.push_back(p);
                    if (c.detail.empty())
                        c.detail = "A(" + std::to_string(i) + "," + std::to_string(p) +
                                   ") couples to exponent column of pair " +
                                   std::to_string(j);
                }
            }
        }
    r.conditions.push_back(std::move(c));

    ConditionCheck d;
    d.id = "own-pair-exponents-match";
    d.holds = true;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t p = 0; p < map.m; ++p) {
            Scalar v = map.A(i, p) * (map.B(p, i) - map.B(p, s + i));
            if (!struct_zero(v, struct_tol)) {
                d.holds = false;
                d.witnesses.push_back(i);
                d.witnesses.push_back(p);
                if (d.detail.empty())
                    d.detail = "A(" + std::to_string(i) + "," + std::to_string(p) +
                               ")*(B(" + std::to_string(p) + "," + std::to_string(i) +
                               ") - B(" + std::to_string(p) + "," +
                               std::to_string(s + i) + ")) = " + v.str();
            }
        }
    r.conditions.push_back(std::move(d));

    if (r.all_conditions_hold()) {
        r.verdict = Verdict::Conservative;
        r.orientation = Orientation::Preserving;
    } else {
        r.verdict = Verdict::Indeterminate;
        r.note += "; failed conditions prove nothing about conservativity";
    }
    return r;
}

IntegralBasis find_integrals(const QPMap& map, double struct_tol) {
    return IntegralBasis{left_kernel_basis(m_matrix(map), struct_tol)};
}

OracleResult sampling_oracle(const QPMap& map, std::uint64_t seed,
                             std::size_t npoints, double threshold,
                             double box_halfwidth) {
    if (npoints < 1)
        throw InvalidParameter("sampling oracle needs at least one point");
    if (!(box_halfwidth > 0.0))
        throw InvalidParameter("sampling box halfwidth must be positive");

    OracleResult out;
    out.seed = seed;
    constexpr std::size_t kMaxAttempts = 10;
    for (std::size_t idx = 0; idx < npoints; ++idx) {
        for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
            Rng rng(mix_seed(seed, idx * kMaxAttempts + attempt));
            State s;
            s.u.reserve(map.n);
            for (std::size_t i = 0; i < map.n; ++i)
                s.u.push_back(rng.uniform(-box_halfwidth, box_halfwidth));
            try {
                double det = analytic_jacobian(map, s).det;
                double dev = std::abs(std::abs(det) - 1.0);
                out.max_deviation = std::max(out.max_deviation, dev);
                ++out.points;
                break;
            } catch (const OverflowGuard&) {
                ++out.resampled;
            }
        }
    }
    out.verdict = out.max_deviation > threshold
                      ? OracleVerdict::NotConservative
                      : OracleVerdict::ConsistentWithConservative;
    return out;
}

} // namespace qpmaps
