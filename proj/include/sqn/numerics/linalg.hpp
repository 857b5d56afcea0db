#pragma once

#include <cstddef>

#include "sqn/numerics/matrix.hpp"
#include "sqn/numerics/vector.hpp"

namespace sqn {

Vector mat_vec(const Matrix& m, const Vector& x);

struct EigenExtremes {
  double min = 0.0;
  double max = 0.0;
};

/// Extreme eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm is at most tol * ||M||_F.
/// Throws NotSymmetricError when ||M - M^T||_max > 1e-12 ||M||_max and
/// ConvergenceError if max_sweeps is exhausted. Test/analysis use only.
EigenExtremes sym_eig_extremes(const Matrix& m, double tol = 1e-14, int max_sweeps = 100);

struct TraceDet {
  double trace = 0.0;
  double det = 0.0;
};

/// Trace and determinant (LU with partial pivoting; singular gives det 0).
TraceDet trace_det(const Matrix& m);

/// Lower Cholesky factor. Throws NotSpdError on a non-positive pivot.
Matrix cholesky(const Matrix& m);

/// Solves M x = rhs for symmetric positive definite M.
Vector solve_spd(const Matrix& m, const Vector& rhs);

/// Throws NotSymmetricError unless m is symmetric to 1e-12 relative.
void require_symmetric(const Matrix& m);

}  // namespace sqn
