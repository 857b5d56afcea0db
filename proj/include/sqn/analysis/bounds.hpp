#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sqn/numerics/matrix.hpp"
#include "sqn/optimizers/curvature.hpp"

namespace sqn {

inline constexpr double kBoundTol = 1e-9;

/// Constants of the eigenvalue and rate bounds. m, M bound the Hessian of F;
/// m_tilde, M_tilde bound every instantaneous Hessian; s_sq bounds E||s||^2.
struct BoundConstants {
  double m_tilde = 0.0;
  double M_tilde = 0.0;
  double m = 0.0;
  double M = 0.0;
  double s_sq = 0.0;
  double c = 0.0;   // lower eigenvalue bound of the Hessian approximation
  double C = 0.0;   // upper eigenvalue bound
  double C0 = 0.0;  // filled by rate_constant_c0 when a schedule is known
  double K = 0.0;   // filled by res_constant_k
};

/// c = m~^{n+mem} / [(n+mem) M~]^{n+mem-1}, C = (n+mem) M~. c is evaluated in
/// log space and may underflow to zero for large n + mem.
BoundConstants bound_constants(std::size_t n, std::size_t mem, double m_tilde, double M_tilde, double m, double M,
                               double s_sq);

/// K = M S^2 (1/delta + Gamma)^2 / 2.
double res_constant_k(double M, double s_sq, double delta, double gamma_big);

struct Lemma1Check {
  std::size_t t = 0;
  double curvature = 0.0;  // r^T v / ||v||^2
  double scale = 0.0;      // ||r||^2 / r^T v
  bool curvature_ok = false;
  bool scale_ok = false;
  bool pass() const noexcept { return curvature_ok && scale_ok; }
};

/// m~ ||v||^2 <= r^T v and m~ <= ||r||^2 / r^T v <= M~, to kBoundTol relative.
Lemma1Check check_lemma1(const CurvaturePair& pair, double m_tilde, double M_tilde);

struct BoundRow {
  std::size_t t = 0;
  double trace = 0.0;
  double det = 0.0;
  double eig_min = 0.0;
  double eig_max = 0.0;
  double trace_bound = 0.0;
  double det_bound = 0.0;
  double c = 0.0;
  double C = 0.0;
  bool trace_ok = false;
  bool det_ok = false;
  bool eig_ok = false;
  bool pass() const noexcept { return trace_ok && det_ok && eig_ok; }
};

/// Trace <= (n+mem) M~, det >= m~^{n+mem} / [(n+mem) M~]^mem and
/// eigenvalues in [c, C], all to kBoundTol relative. Throws NotSymmetricError.
BoundRow check_lemma2_3(const Matrix& b_dense, const BoundConstants& consts, std::size_t n, std::size_t mem);

struct BoundReport {
  std::vector<BoundRow> rows;
  std::vector<Lemma1Check> pairs;

  bool all_pass() const noexcept;
};

/// One row per monitored iterate:
/// t,trace,det,eig_min,eig_max,trace_bound,det_bound,c,C,pass
void write_bound_report_csv(std::ostream& out, const BoundReport& report);

}  // namespace sqn
