#pragma once

#include <vector>

#include "lqo/matfun.hpp"
#include "lqo/system.hpp"

namespace lqo {

/// Time-limited Gramians of one system over [t1, t2]:
///
///   P = int e^{At} B B^T e^{A^T t} dt
///   Y = int e^{A^T t} C^T C e^{At} dt
///   Z = int e^{A^T t} (sum_i M_i P M_i) e^{At} dt
///   Q = Y + Z
struct GramianSet {
  Matrix p;
  Matrix y;
  Matrix z;
  Matrix q;
  TimeInterval interval;
};

/// Coupled Gramian blocks of a (full, reduced) pair. The "t" members are
/// N x n, the "h" members n x n. Off-diagonal error-system blocks carry the
/// sign convention of the block partition, so that e.g. the error
/// observability Gramian reads [[Q, -qt], [-qt^T, qh]].
struct CrossGramianSet {
  Matrix pt;
  Matrix ph;
  Matrix yt;
  Matrix yh;
  Matrix zt;
  Matrix zh;
  Matrix qt;
  Matrix qh;
  TimeInterval interval;

  /// Yt + 2 Zt, the combined observability block used for projection.
  Matrix combined_tilde() const { return yt + 2.0 * zt; }
  Matrix combined_hat() const { return yh + 2.0 * zh; }
};

struct HankelSpectrum {
  std::vector<double> sigma;  // nonincreasing
  double clamp_magnitude = 0.0;  // largest negative eigenvalue clamped to zero
};

/// e^{A t1} and e^{A t2} for an interval; at_end is unused when the interval
/// is infinite.
struct BoundaryExponentials {
  Matrix at_start;
  Matrix at_end;
  bool finite_end = false;
};

BoundaryExponentials boundary_exponentials(const Matrix& a, const TimeInterval& interval);

/// e_l(t1) F e_r(t1)^T - e_l(t2) F e_r(t2)^T, the right-hand side weighting of
/// controllability-type equations.
Matrix weight_controllability(const BoundaryExponentials& left, const Matrix& f,
                              const BoundaryExponentials& right);

/// e_l(t1)^T F e_r(t1) - e_l(t2)^T F e_r(t2), for observability-type equations.
Matrix weight_observability(const BoundaryExponentials& left, const Matrix& f,
                            const BoundaryExponentials& right);

/// Finite intervals only need the Lyapunov operators to be nonsingular;
/// infinite ones require A Hurwitz.
GramianSet timelimited_gramians(const LqoSystem& system, const TimeInterval& interval);

/// Solves, in order, Pt, Ph, then Yt, Yh, Zt (uses Pt) and Zh (uses Ph).
CrossGramianSet cross_gramians(const LqoSystem& full, const LqoSystem& rom,
                               const TimeInterval& interval);

/// sigma_i = sqrt(lambda_i(P Q)) via the symmetric form L^T Q L with P = L L^T.
HankelSpectrum hankel_singular_values(const Matrix& p, const Matrix& q);

/// L with X = L L^T for a symmetric positive semidefinite X. Eigenvalues in
/// [-1e-10 * max, 0) are clamped; more negative ones raise NumericalError.
Matrix psd_factor(const Matrix& x, std::string_view what = "matrix");

/// sum_i left_i * mid * right_i over the quadratic output matrices.
Matrix quadratic_sum(const std::vector<Matrix>& left, const Matrix& mid,
                     const std::vector<Matrix>& right);

}  // namespace lqo
