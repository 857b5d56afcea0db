#include "sqn/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "sqn/errors.hpp"

namespace sqn {
namespace {

void require_same_size(const Vector& x, const Vector& y, const char* what) {
  if (x.size() != y.size()) {
    throw DimensionError(std::string(what) + ": length " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
  }
}

void require_same_size(const Matrix& a, const Matrix& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": order " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

}  // namespace

// ---- vectors ---------------------------------------------------------------

double dot(const Vector& x, const Vector& y) {
  require_same_size(x, y, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm_sq(const Vector& x) { return dot(x, x); }

double norm(const Vector& x) { return std::sqrt(norm_sq(x)); }

double norm_inf(const Vector& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double alpha, const Vector& x, Vector& y) {
  require_same_size(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, Vector& x) {
  for (double& v : x) v *= alpha;
}

Vector operator+(const Vector& x, const Vector& y) {
  require_same_size(x, y, "vector +");
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

Vector operator-(const Vector& x, const Vector& y) {
  require_same_size(x, y, "vector -");
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
  return z;
}

Vector operator*(double alpha, const Vector& x) {
  Vector z = x;
  scale(alpha, z);
  return z;
}

bool all_finite(const Vector& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

// ---- matrices --------------------------------------------------------------

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
  data_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) throw DimensionError("Matrix literal is not square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n, double scale) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = scale;
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::outer(const Vector& x, const Vector& y) {
  require_same_size(x, y, "outer");
  Matrix m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) m(i, j) = x[i] * y[j];
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::asymmetry() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_size(a, b, "matrix +");
  Matrix c = a;
  for (std::size_t k = 0; k < a.size() * a.size(); ++k) c.data()[k] += b.data()[k];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_size(a, b, "matrix -");
  Matrix c = a;
  for (std::size_t k = 0; k < a.size() * a.size(); ++k) c.data()[k] -= b.data()[k];
  return c;
}

Matrix operator*(double alpha, const Matrix& a) {
  Matrix c = a;
  for (std::size_t k = 0; k < a.size() * a.size(); ++k) c.data()[k] *= alpha;
  return c;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_size(a, b, "matrix *");
  const std::size_t n = a.size();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

// ---- kernels ---------------------------------------------------------------

Vector mat_vec(const Matrix& m, const Vector& x) {
  if (m.size() != x.size()) {
    throw DimensionError("mat_vec: matrix order " + std::to_string(m.size()) + " vs vector length " +
                         std::to_string(x.size()));
  }
  const std::size_t n = m.size();
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    const double* row = m.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

void require_symmetric(const Matrix& m) {
  if (m.asymmetry() > 1e-12 * m.max_abs()) throw NotSymmetricError("matrix is not symmetric");
}

EigenExtremes sym_eig_extremes(const Matrix& m, double tol, int max_sweeps) {
  require_symmetric(m);
  const std::size_t n = m.size();
  if (n == 0) throw DimensionError("sym_eig_extremes: empty matrix");

  // Work on the symmetrized copy so rounding asymmetry does not leak in.
  Matrix a(n);
  double frob_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = 0.5 * (m(i, j) + m(j, i));
      frob_sq += a(i, j) * a(i, j);
    }
  const double target = tol * std::sqrt(frob_sq);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > target) {
    if (sweep++ >= max_sweeps) throw ConvergenceError("sym_eig_extremes: Jacobi sweep budget exhausted");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  EigenExtremes out{a(0, 0), a(0, 0)};
  for (std::size_t i = 1; i < n; ++i) {
    out.min = std::min(out.min, a(i, i));
    out.max = std::max(out.max, a(i, i));
  }
  return out;
}

TraceDet trace_det(const Matrix& m) {
  const std::size_t n = m.size();
  TraceDet out;
  for (std::size_t i = 0; i < n; ++i) out.trace += m(i, i);

  Matrix lu = m;
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    if (lu(pivot, k) == 0.0) {
      out.det = 0.0;
      return out;
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
      det = -det;
    }
    det *= lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }
  out.det = det;
  return out;
}

Matrix cholesky(const Matrix& m) {
  const std::size_t n = m.size();
  Matrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw NotSpdError("cholesky: non-positive pivot at column " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Vector solve_spd(const Matrix& m, const Vector& rhs) {
  if (m.size() != rhs.size()) throw DimensionError("solve_spd: dimension mismatch");
  const Matrix l = cholesky(m);
  const std::size_t n = m.size();
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  Vector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

}  // namespace sqn
