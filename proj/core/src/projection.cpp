#include "lqo/projection.hpp"

#include <cmath>

#include "lqo/errors.hpp"

namespace lqo {

ProjectionPair biorthogonalize(const Matrix& v, const Matrix& w) {
  if (v.rows() != w.rows() || v.cols() != w.cols()) {
    throw ValidationError("projection bases must have equal shapes");
  }
  if (v.cols() > v.rows()) {
    throw ValidationError("projection bases have more columns than rows");
  }
  require_finite(v, "V");
  require_finite(w, "W");

  ProjectionPair out{v, w};
  for (Eigen::Index l = 0; l < v.cols(); ++l) {
    Vector x = out.v.col(l);
    Vector y = out.w.col(l);
    for (Eigen::Index j = 0; j < l; ++j) {
      x -= out.v.col(j) * out.w.col(j).dot(x);
      y -= out.w.col(j) * out.v.col(j).dot(y);
    }
    const double nx = x.norm();
    const double ny = y.norm();
    if (nx == 0.0 || ny == 0.0) {
      throw NumericalError("projection basis is rank deficient at column " + std::to_string(l),
                           "column " + std::to_string(l));
    }
    x /= nx;
    y /= ny;
    const double coupling = y.dot(x);
    if (std::abs(coupling) < 1e-13) {
      throw NumericalError("projection bases are numerically orthogonal at column " +
                               std::to_string(l) + " (w^T v = " + std::to_string(coupling) + ")",
                           "column " + std::to_string(l));
    }
    out.v.col(l) = x / coupling;
    out.w.col(l) = y;
  }
  return out;
}

LqoSystem project(const LqoSystem& system, const ProjectionPair& pair) {
  const Matrix& v = pair.v;
  const Matrix& w = pair.w;
  if (v.rows() != system.states() || w.rows() != system.states() || v.cols() != w.cols()) {
    throw ValidationError("projection bases do not match the system dimension");
  }
  std::vector<Matrix> m;
  m.reserve(system.m().size());
  for (const Matrix& mi : system.m()) m.push_back(v.transpose() * mi * v);
  return LqoSystem(w.transpose() * system.a() * v, w.transpose() * system.b(), system.c() * v,
                   std::move(m));
}

}  // namespace lqo
