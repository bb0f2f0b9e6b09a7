#pragma once

// Dense linear algebra over Scalar matrices, small sizes only. Each entry
// point picks the exact rational path when every input entry is exact and
// falls back to double arithmetic otherwise.

#include <vector>

#include "qpmaps/matrix.hpp"
#include "qpmaps/scalar.hpp"

namespace qpmaps {

// Floating-point inverses with condition estimates beyond this are
// rejected as untrustworthy.
inline constexpr double kConditionLimit = 1e12;

bool all_exact(const std::vector<Scalar>& v);
bool all_exact(const Matrix<Scalar>& m);

Matrix<double> to_double(const Matrix<Scalar>& m);
std::vector<double> to_double(const std::vector<Scalar>& v);

// Exact Gauss-Jordan when all entries are rational, otherwise partial-pivot
// elimination in double with an infinity-norm condition estimate. Throws
// SingularMatrix when singular or (float path) when cond > kConditionLimit.
Matrix<Scalar> inverse(const Matrix<Scalar>& m, double struct_tol = kStructTol);

// Exact when all entries are rational, double LU otherwise.
Scalar determinant(const Matrix<Scalar>& m);

// Partial-pivot LU determinant, destroys its argument.
double det_double(Matrix<double> m);

double norm_inf(const Matrix<double>& m);

// Basis of the left kernel {c : c^T m = 0}. Vectors come out in a
// deterministic order (ascending free column of the reduced echelon form
// of m^T) and are scaled so the first structurally nonzero component is 1.
std::vector<std::vector<Scalar>> left_kernel_basis(const Matrix<Scalar>& m,
                                                   double struct_tol = kStructTol);

} // namespace qpmaps
