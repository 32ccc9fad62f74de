#include "lqo/matfun.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "lqo/errors.hpp"

namespace lqo {

namespace {

constexpr double kHurwitzTol = 1e-12;
constexpr double kOverlapTol = 1e-13;

std::string describe(std::complex<double> z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

void require_finite(const Matrix& a, std::string_view what) {
  if (!a.allFinite()) {
    throw ValidationError(std::string(what) + " contains non-finite entries");
  }
}

void require_square(const Matrix& a, std::string_view what) {
  if (a.rows() != a.cols()) {
    throw ValidationError(std::string(what) + " must be square, got " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

double norm2(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) return a.norm();
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(a.norm(), 1e-300);
  return (a - a.transpose()).norm() <= rel_tol * scale;
}

Matrix expm(const Matrix& a, double t) {
  require_square(a, "expm argument");
  require_finite(a, "expm argument");
  if (!std::isfinite(t) || t < 0.0) {
    throw ValidationError("expm time must be finite and nonnegative");
  }
  if (t == 0.0) return Matrix::Identity(a.rows(), a.cols());
  const Matrix scaled = a * t;
  return scaled.exp();
}

Matrix expm_frechet(const Matrix& a, const Matrix& direction, double t) {
  require_square(a, "expm_frechet base");
  if (direction.rows() != a.rows() || direction.cols() != a.cols()) {
    throw ValidationError("expm_frechet direction must match the base matrix dimensions");
  }
  require_finite(direction, "expm_frechet direction");
  const Eigen::Index n = a.rows();
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = a;
  block.topRightCorner(n, n) = direction;
  block.bottomRightCorner(n, n) = a;
  return expm(block, t).topRightCorner(n, n);
}

ComplexVector eigenvalues(const Matrix& a) {
  require_square(a, "eigenvalue argument");
  if (a.size() == 0) return {};
  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigenvalue iteration did not converge");
  }
  return es.eigenvalues();
}

double spectral_abscissa(const Matrix& a) {
  const ComplexVector ev = eigenvalues(a);
  double m = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) m = std::max(m, ev(i).real());
  return m;
}

bool is_hurwitz(const Matrix& a) {
  if (a.rows() != a.cols() || !a.allFinite()) return false;
  return spectral_abscissa(a) < -kHurwitzTol * norm2(a);
}

void require_hurwitz(const Matrix& a, std::string_view what) {
  require_square(a, what);
  require_finite(a, what);
  const ComplexVector ev = eigenvalues(a);
  const double bound = -kHurwitzTol * norm2(a);
  Eigen::Index worst = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    if (ev(i).real() > ev(worst).real()) worst = i;
  }
  if (ev.size() > 0 && ev(worst).real() >= bound) {
    throw ValidationError(std::string(what) + " is not Hurwitz: eigenvalue " +
                              describe(ev(worst)) + " has nonnegative real part",
                          describe(ev(worst)));
  }
}

SylvesterSolver::SylvesterSolver(const Matrix& a, const Matrix& b) : a_(a), b_(b) {
  require_square(a, "Sylvester coefficient A");
  require_square(b, "Sylvester coefficient B");
  require_finite(a, "Sylvester coefficient A");
  require_finite(b, "Sylvester coefficient B");

  Eigen::ComplexSchur<ComplexMatrix> sa(a.cast<std::complex<double>>());
  Eigen::ComplexSchur<ComplexMatrix> sb(b.cast<std::complex<double>>());
  if (sa.info() != Eigen::Success || sb.info() != Eigen::Success) {
    throw NumericalError("Schur decomposition did not converge");
  }
  ua_ = sa.matrixU();
  ta_ = sa.matrixT();
  ub_ = sb.matrixU();
  tb_ = sb.matrixT();

  const double scale = std::max(norm2(a) + norm2(b), 1e-300);
  for (Eigen::Index k = 0; k < tb_.rows(); ++k) {
    for (Eigen::Index i = 0; i < ta_.rows(); ++i) {
      const std::complex<double> s = ta_(i, i) + tb_(k, k);
      if (std::abs(s) <= kOverlapTol * scale) {
        throw NumericalError(
            "Sylvester operator is singular: eigenvalue " + describe(ta_(i, i)) +
                " of A and " + describe(tb_(k, k)) + " of B sum to zero",
            "spectral overlap");
      }
    }
  }
}

Matrix SylvesterSolver::solve_once(const Matrix& c) const {
  const Eigen::Index n_rows = ta_.rows();
  const Eigen::Index n_cols = tb_.rows();
  // T_a Y + Y T_b = -U_a^* C U_b with both T upper triangular: sweep columns.
  const ComplexMatrix f = ua_.adjoint() * c.cast<std::complex<double>>() * ub_;
  ComplexMatrix y(n_rows, n_cols);
  ComplexMatrix shifted = ta_;
  for (Eigen::Index k = 0; k < n_cols; ++k) {
    Eigen::VectorXcd rhs = -f.col(k);
    if (k > 0) rhs.noalias() -= y.leftCols(k) * tb_.col(k).head(k);
    shifted.diagonal() = ta_.diagonal().array() + tb_(k, k);
    y.col(k) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return (ua_ * y * ub_.adjoint()).real();
}

Matrix SylvesterSolver::solve(const Matrix& c) const {
  if (c.rows() != a_.rows() || c.cols() != b_.rows()) {
    throw ValidationError("Sylvester right-hand side is " + std::to_string(c.rows()) + "x" +
                          std::to_string(c.cols()) + ", expected " +
                          std::to_string(a_.rows()) + "x" + std::to_string(b_.rows()));
  }
  require_finite(c, "Sylvester right-hand side");
  Matrix x = solve_once(c);
  // One step of iterative refinement on the true residual.
  const Matrix residual = a_ * x + x * b_ + c;
  x += solve_once(residual);
  return x;
}

Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c) {
  return SylvesterSolver(a, b).solve(c);
}

Matrix solve_sylvester(const Matrix& a, const Matrix& b, const FactoredRhs& c) {
  if (c.left.cols() != c.right.rows()) {
    throw ValidationError("factored right-hand side has inconsistent inner dimension");
  }
  return solve_sylvester(a, b, Matrix(c.left * c.right));
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& q, LyapunovSide side) {
  require_hurwitz(a, "Lyapunov coefficient");
  if (q.rows() != a.rows() || q.cols() != a.cols()) {
    throw ValidationError("Lyapunov right-hand side must match the coefficient dimensions");
  }
  Matrix x = side == LyapunovSide::controllability
                 ? solve_sylvester(a, a.transpose(), q)
                 : solve_sylvester(a.transpose(), a, q);
  if (is_symmetric(q)) x = symmetrize(x);
  return x;
}

}  // namespace lqo
