#include "qpmaps/linalg.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace qpmaps {

bool all_exact(const std::vector<Scalar>& v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.exact(); });
}

bool all_exact(const Matrix<Scalar>& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).exact()) return false;
    return true;
}

Matrix<double> to_double(const Matrix<Scalar>& m) {
    Matrix<double> d(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            d(i, j) = m(i, j).value();
    return d;
}

std::vector<double> to_double(const std::vector<Scalar>& v) {
    std::vector<double> d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d[i] = v[i].value();
    return d;
}

double norm_inf(const Matrix<double>& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
        worst = std::max(worst, s);
    }
    return worst;
}

namespace {

Matrix<mpq_class> to_rational(const Matrix<Scalar>& m) {
    Matrix<mpq_class> q(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            q(i, j) = m(i, j).rat();
    return q;
}

Matrix<Scalar> inverse_exact(const Matrix<Scalar>& m) {
    const std::size_t n = m.rows();
    Matrix<mpq_class> a = to_rational(m);
    Matrix<mpq_class> inv(n, n, mpq_class(0));
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = 1;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a(pivot, col) == 0) ++pivot;
        if (pivot == n)
            throw SingularMatrix("matrix is singular");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        mpq_class p = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a(i, col) == 0) continue;
            mpq_class f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    Matrix<Scalar> out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = Scalar(inv(i, j));
    return out;
}

Matrix<Scalar> inverse_double(const Matrix<Scalar>& m) {
    const std::size_t n = m.rows();
    Matrix<double> a = to_double(m);
    const double norm_a = norm_inf(a);
    Matrix<double> inv(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(a(i, col)) > std::abs(a(pivot, col))) pivot = i;
        if (!(std::abs(a(pivot, col)) > 0.0))
            throw SingularMatrix("matrix is numerically singular");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        double p = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col) continue;
            double f = a(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    double cond = norm_a * norm_inf(inv);
    if (!std::isfinite(cond) || cond > kConditionLimit)
        throw SingularMatrix("matrix is too ill-conditioned to invert reliably");
    Matrix<Scalar> out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = Scalar(inv(i, j));
    return out;
}

// Reduced row echelon form over exact rationals; returns pivot columns.
std::vector<std::size_t> rref_exact(Matrix<mpq_class>& a) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t pivot = row;
        while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
        if (pivot == a.rows()) continue;
        if (pivot != row)
            for (std::size_t j = 0; j < a.cols(); ++j)
                std::swap(a(pivot, j), a(row, j));
        mpq_class p = a(row, col);
        for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) /= p;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a(i, col) == 0) continue;
            mpq_class f = a(i, col);
            for (std::size_t j = 0; j < a.cols(); ++j)
                a(i, j) -= f * a(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

// Same over doubles; entries at or below tol count as zero.
std::vector<std::size_t> rref_double(Matrix<double>& a, double tol) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t pivot = row;
        for (std::size_t i = row + 1; i < a.rows(); ++i)
            if (std::abs(a(i, col)) > std::abs(a(pivot, col))) pivot = i;
        if (std::abs(a(pivot, col)) <= tol) {
            for (std::size_t i = row; i < a.rows(); ++i) a(i, col) = 0.0;
            continue;
        }
        if (pivot != row)
            for (std::size_t j = 0; j < a.cols(); ++j)
                std::swap(a(pivot, j), a(row, j));
        double p = a(row, col);
        for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) /= p;
        a(row, col) = 1.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row) continue;
            double f = a(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < a.cols(); ++j)
                a(i, j) -= f * a(row, j);
            a(i, col) = 0.0;
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <typename T>
std::vector<std::vector<T>> kernel_from_rref(const Matrix<T>& r,
                                             const std::vector<std::size_t>& pivots) {
    std::vector<std::vector<T>> basis;
    std::size_t next_pivot = 0;
    for (std::size_t col = 0; col < r.cols(); ++col) {
        if (next_pivot < pivots.size() && pivots[next_pivot] == col) {
            ++next_pivot;
            continue;
        }
        std::vector<T> v(r.cols(), T(0));
        v[col] = T(1);
        for (std::size_t k = 0; k < pivots.size(); ++k)
            v[pivots[k]] = -r(k, col);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace

Matrix<Scalar> inverse(const Matrix<Scalar>& m, double) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("inverse of a non-square matrix");
    if (m.rows() == 0)
        return m;
    return all_exact(m) ? inverse_exact(m) : inverse_double(m);
}

double det_double(Matrix<double> m) {
    const std::size_t n = m.rows();
    if (n != m.cols())
        throw DimensionMismatch("determinant of a non-square matrix");
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(m(i, col)) > std::abs(m(pivot, col))) pivot = i;
        if (m(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(m(pivot, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            double f = m(i, col) / m(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
        }
    }
    return det;
}

Scalar determinant(const Matrix<Scalar>& m) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("determinant of a non-square matrix");
    if (m.rows() == 0) return Scalar(1);
    if (!all_exact(m)) return Scalar(det_double(to_double(m)));
    Matrix<mpq_class> a = to_rational(m);
    mpq_class det = 1;
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a(pivot, col) == 0) ++pivot;
        if (pivot == n) return Scalar(0);
        if (pivot != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            if (a(i, col) == 0) continue;
            mpq_class f = a(i, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
        }
    }
    return Scalar(std::move(det));
}

std::vector<std::vector<Scalar>> left_kernel_basis(const Matrix<Scalar>& m,
                                                   double struct_tol) {
    // c^T m = 0  <=>  m^T c = 0, so reduce m^T and read off its null space.
    std::vector<std::vector<Scalar>> basis;
    if (all_exact(m)) {
        Matrix<mpq_class> t(m.cols(), m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                t(j, i) = m(i, j).rat();
        auto pivots = rref_exact(t);
        for (auto& v : kernel_from_rref(t, pivots)) {
            std::vector<Scalar> s(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) s[i] = Scalar(v[i]);
            basis.push_back(std::move(s));
        }
    } else {
        Matrix<double> t(m.cols(), m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                t(j, i) = m(i, j).value();
        auto pivots = rref_double(t, struct_tol);
        for (auto& v : kernel_from_rref(t, pivots)) {
            std::vector<Scalar> s(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) s[i] = Scalar(v[i]);
            basis.push_back(std::move(s));
        }
    }
    // Scale each vector so its first structurally nonzero entry is 1.
    for (auto& v : basis) {
        for (const Scalar& s : v) {
            if (!struct_zero(s, struct_tol)) {
                Scalar lead = s;
                for (Scalar& e : v) e /= lead;
                break;
            }
        }
    }
    return basis;
}

} // namespace qpmaps
