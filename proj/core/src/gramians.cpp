#include "lqo/gramians.hpp"

#include <algorithm>
#include <cmath>

#include "lqo/errors.hpp"

namespace lqo {

namespace {

constexpr double kClampTol = 1e-10;

Matrix maybe_symmetrize(Matrix x, const Matrix& rhs) {
  if (is_symmetric(rhs)) return symmetrize(x);
  return x;
}

}  // namespace

BoundaryExponentials boundary_exponentials(const Matrix& a, const TimeInterval& interval) {
  BoundaryExponentials e;
  e.at_start = expm(a, interval.start());
  e.finite_end = !interval.is_infinite();
  if (e.finite_end) e.at_end = expm(a, interval.end());
  return e;
}

Matrix weight_controllability(const BoundaryExponentials& left, const Matrix& f,
                              const BoundaryExponentials& right) {
  Matrix out = left.at_start * f * right.at_start.transpose();
  if (left.finite_end) out -= left.at_end * f * right.at_end.transpose();
  return out;
}

Matrix weight_observability(const BoundaryExponentials& left, const Matrix& f,
                            const BoundaryExponentials& right) {
  Matrix out = left.at_start.transpose() * f * right.at_start;
  if (left.finite_end) out -= left.at_end.transpose() * f * right.at_end;
  return out;
}

Matrix quadratic_sum(const std::vector<Matrix>& left, const Matrix& mid,
                     const std::vector<Matrix>& right) {
  Matrix out = Matrix::Zero(left.empty() ? mid.rows() : left.front().rows(),
                            right.empty() ? mid.cols() : right.front().cols());
  for (std::size_t i = 0; i < left.size(); ++i) out.noalias() += left[i] * mid * right[i];
  return out;
}

GramianSet timelimited_gramians(const LqoSystem& system, const TimeInterval& interval) {
  const Matrix& a = system.a();
  if (interval.is_infinite()) require_hurwitz(a, "A");

  const BoundaryExponentials e = boundary_exponentials(a, interval);
  const SylvesterSolver ctrl(a, a.transpose());
  const SylvesterSolver obs(a.transpose(), a);

  GramianSet g;
  g.interval = interval;

  const Matrix p_rhs = weight_controllability(e, system.b() * system.b().transpose(), e);
  g.p = symmetrize(ctrl.solve(p_rhs));

  const Matrix y_rhs = weight_observability(e, system.c().transpose() * system.c(), e);
  g.y = symmetrize(obs.solve(y_rhs));

  const Matrix z_rhs = weight_observability(e, quadratic_sum(system.m(), g.p, system.m()), e);
  g.z = maybe_symmetrize(obs.solve(z_rhs), z_rhs);

  g.q = g.y + g.z;
  return g;
}

CrossGramianSet cross_gramians(const LqoSystem& full, const LqoSystem& rom,
                               const TimeInterval& interval) {
  require_compatible(full, rom);
  if (interval.is_infinite()) {
    require_hurwitz(full.a(), "A");
    require_hurwitz(rom.a(), "reduced A");
  }
  const Matrix& a = full.a();
  const Matrix& ar = rom.a();
  const BoundaryExponentials e = boundary_exponentials(a, interval);
  const BoundaryExponentials er = boundary_exponentials(ar, interval);

  const SylvesterSolver cross_ctrl(a, ar.transpose());
  const SylvesterSolver rom_ctrl(ar, ar.transpose());
  const SylvesterSolver cross_obs(a.transpose(), ar);
  const SylvesterSolver rom_obs(ar.transpose(), ar);

  CrossGramianSet g;
  g.interval = interval;

  g.pt = cross_ctrl.solve(weight_controllability(e, full.b() * rom.b().transpose(), er));
  g.ph = symmetrize(rom_ctrl.solve(weight_controllability(er, rom.b() * rom.b().transpose(), er)));

  g.yt = cross_obs.solve(weight_observability(e, full.c().transpose() * rom.c(), er));
  g.yh = symmetrize(rom_obs.solve(weight_observability(er, rom.c().transpose() * rom.c(), er)));

  g.zt = cross_obs.solve(weight_observability(e, quadratic_sum(full.m(), g.pt, rom.m()), er));
  const Matrix zh_rhs = weight_observability(er, quadratic_sum(rom.m(), g.ph, rom.m()), er);
  g.zh = maybe_symmetrize(rom_obs.solve(zh_rhs), zh_rhs);

  g.qt = g.yt + g.zt;
  g.qh = g.yh + g.zh;
  return g;
}

Matrix psd_factor(const Matrix& x, std::string_view what) {
  require_square(x, what);
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(x));
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  Vector w = es.eigenvalues();
  const double top = std::max(w.cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < 0.0) {
      if (-w(i) > kClampTol * top) {
        throw NumericalError(std::string(what) + " is indefinite beyond tolerance (eigenvalue " +
                             std::to_string(w(i)) + ")");
      }
      w(i) = 0.0;
    }
  }
  return es.eigenvectors() * w.cwiseSqrt().asDiagonal();
}

HankelSpectrum hankel_singular_values(const Matrix& p, const Matrix& q) {
  require_square(p, "P");
  require_square(q, "Q");
  if (p.rows() != q.rows()) throw ValidationError("P and Q must have equal dimensions");
  const Matrix l = psd_factor(p, "P");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(l.transpose() * q * l), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  const Vector lambda = es.eigenvalues();

  HankelSpectrum out;
  const double top = lambda.size() > 0 ? std::max(lambda.maxCoeff(), 0.0) : 0.0;
  out.sigma.reserve(static_cast<std::size_t>(lambda.size()));
  for (Eigen::Index i = lambda.size() - 1; i >= 0; --i) {
    double v = lambda(i);
    if (v < 0.0) {
      if (-v > kClampTol * top) {
        throw NumericalError("P Q has a negative eigenvalue " + std::to_string(v) +
                             "; Q is indefinite beyond tolerance");
      }
      out.clamp_magnitude = std::max(out.clamp_magnitude, -v);
      v = 0.0;
    }
    out.sigma.push_back(std::sqrt(v));
  }
  return out;
}

}  // namespace lqo
