#pragma once

// Dense matrix-function and matrix-equation kernels.
//
// Every function here is a pure function of its arguments and may be called
// concurrently. Inputs containing NaN or Inf are rejected before any
// factorization is attempted.

#include <Eigen/Dense>

#include <string_view>

namespace lqo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// e^{A t}. Exactly the identity for t == 0.
Matrix expm(const Matrix& a, double t = 1.0);

/// Fréchet derivative of X -> e^{X t} at A in direction V, i.e. the L with
/// e^{(A + hV)t} = e^{At} + h L + o(h). Evaluated as the upper-right block of
/// exp([[A, V], [0, A]] t).
Matrix expm_frechet(const Matrix& a, const Matrix& direction, double t);

enum class LyapunovSide {
  controllability,  // A X + X A^T + Q = 0
  observability,    // A^T X + X A + Q = 0
};

/// Dense Lyapunov solve. A must be Hurwitz (see require_hurwitz). When Q is
/// symmetric the result is symmetrized.
Matrix solve_lyapunov(const Matrix& a, const Matrix& q, LyapunovSide side);

/// Right-hand side given as a product left * right (N x d times d x n).
/// Large sparse-dense problems factor their data this way; the backend here
/// is dense and simply forms the product.
struct FactoredRhs {
  Matrix left;
  Matrix right;
};

/// Solves A X + X B + C = 0 for X (N x n). Only requires the spectra of A and
/// -B to be disjoint; throws NumericalError on (near) overlap.
Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c);
Matrix solve_sylvester(const Matrix& a, const Matrix& b, const FactoredRhs& c);

/// Reusable Bartels-Stewart solver for a fixed coefficient pair (A, B).
class SylvesterSolver {
 public:
  SylvesterSolver(const Matrix& a, const Matrix& b);

  Matrix solve(const Matrix& c) const;

  Eigen::Index rows() const { return a_.rows(); }
  Eigen::Index cols() const { return b_.rows(); }

 private:
  Matrix solve_once(const Matrix& c) const;

  Matrix a_;
  Matrix b_;
  ComplexMatrix ua_;
  ComplexMatrix ta_;
  ComplexMatrix ub_;
  ComplexMatrix tb_;
};

ComplexVector eigenvalues(const Matrix& a);

/// Largest real part of the spectrum.
double spectral_abscissa(const Matrix& a);

/// max Re(lambda) < -1e-12 * ||A||_2.
bool is_hurwitz(const Matrix& a);

/// Throws ValidationError naming `what` and the offending eigenvalue.
void require_hurwitz(const Matrix& a, std::string_view what);

void require_finite(const Matrix& a, std::string_view what);
void require_square(const Matrix& a, std::string_view what);

/// Spectral norm (largest singular value); 0 for empty matrices.
double norm2(const Matrix& a);

bool is_symmetric(const Matrix& a, double rel_tol = 1e-12);

inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace lqo
