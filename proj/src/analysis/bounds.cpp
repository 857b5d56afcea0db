#include "sqn/analysis/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sqn/errors.hpp"
#include "sqn/numerics/format.hpp"
#include "sqn/numerics/linalg.hpp"

namespace sqn {

BoundConstants bound_constants(std::size_t n, std::size_t mem, double m_tilde, double M_tilde, double m, double M,
                               double s_sq) {
  if (!(m_tilde > 0.0) || !(M_tilde >= m_tilde)) throw InvalidArgument("bound_constants: need 0 < m~ <= M~");
  if (n == 0) throw InvalidArgument("bound_constants: n must be positive");
  const double k = static_cast<double>(n + mem);
  BoundConstants out;
  out.m_tilde = m_tilde;
  out.M_tilde = M_tilde;
  out.m = m;
  out.M = M;
  out.s_sq = s_sq;
  out.C = k * M_tilde;
  out.c = std::exp(k * std::log(m_tilde) - (k - 1.0) * std::log(k * M_tilde));
  return out;
}

double res_constant_k(double M, double s_sq, double delta, double gamma_big) {
  if (!(delta > 0.0)) throw InvalidArgument("res_constant_k: delta must be positive");
  const double f = 1.0 / delta + gamma_big;
  return M * s_sq * f * f / 2.0;
}

Lemma1Check check_lemma1(const CurvaturePair& pair, double m_tilde, double M_tilde) {
  const double rv = dot(pair.r_hat, pair.v);
  const double vv = norm_sq(pair.v);
  const double rr = norm_sq(pair.r_hat);
  Lemma1Check out;
  out.curvature = rv / vv;
  out.scale = rr / rv;
  out.curvature_ok = m_tilde * vv * (1.0 - kBoundTol) <= rv;
  out.scale_ok = m_tilde * (1.0 - kBoundTol) <= out.scale && out.scale <= M_tilde * (1.0 + kBoundTol);
  return out;
}

BoundRow check_lemma2_3(const Matrix& b_dense, const BoundConstants& consts, std::size_t n, std::size_t mem) {
  if (b_dense.size() != n) throw DimensionError("check_lemma2_3: matrix is not n x n");
  require_symmetric(b_dense);
  const double k = static_cast<double>(n + mem);
  const TraceDet td = trace_det(b_dense);
  const EigenExtremes eig = sym_eig_extremes(b_dense);

  BoundRow row;
  row.trace = td.trace;
  row.det = td.det;
  row.eig_min = eig.min;
  row.eig_max = eig.max;
  row.c = consts.c;
  row.C = consts.C;
  row.trace_bound = k * consts.M_tilde;
  const double log_det_bound =
      k * std::log(consts.m_tilde) - static_cast<double>(mem) * std::log(k * consts.M_tilde);
  row.det_bound = std::exp(log_det_bound);
  row.trace_ok = td.trace <= row.trace_bound * (1.0 + kBoundTol);
  // Compared in logs so the check stays meaningful when the bound underflows.
  row.det_ok = td.det > 0.0 && std::log(td.det) >= log_det_bound + std::log1p(-kBoundTol);
  row.eig_ok = eig.min >= consts.c * (1.0 - kBoundTol) && eig.max <= consts.C * (1.0 + kBoundTol);
  return row;
}

bool BoundReport::all_pass() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.pass(); }) &&
         std::all_of(pairs.begin(), pairs.end(), [](const Lemma1Check& p) { return p.pass(); });
}

void write_bound_report_csv(std::ostream& out, const BoundReport& report) {
  out << "t,trace,det,eig_min,eig_max,trace_bound,det_bound,c,C,pass\n";
  for (const BoundRow& r : report.rows) {
    out << r.t << ',' << fmt17(r.trace) << ',' << fmt17(r.det) << ',' << fmt17(r.eig_min) << ','
        << fmt17(r.eig_max) << ',' << fmt17(r.trace_bound) << ',' << fmt17(r.det_bound) << ',' << fmt17(r.c) << ','
        << fmt17(r.C) << ',' << (r.pass() ? 1 : 0) << '\n';
  }
}

}  // namespace sqn
