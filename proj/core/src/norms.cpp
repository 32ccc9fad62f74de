#include "lqo/norms.hpp"

#include <cmath>

#include "lqo/errors.hpp"

namespace lqo {

namespace {

std::vector<double> simpson_weights(int intervals, double h) {
  std::vector<double> w(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) {
    double c = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    w[static_cast<std::size_t>(k)] = c * h / 3.0;
  }
  return w;
}

}  // namespace

double checked_sqrt(double squared, double scale, std::string_view what) {
  if (squared >= 0.0) return std::sqrt(squared);
  if (-squared <= 1e-12 * std::max(scale, 1e-300)) return 0.0;
  throw NumericalError(std::string(what) + " has a negative radicand " + std::to_string(squared) +
                       "; a Gramian solve likely failed");
}

NormReport h2tau_norm(const LqoSystem& system, const TimeInterval& interval) {
  const GramianSet g = timelimited_gramians(system, interval);
  const double squared = (system.b().transpose() * g.q * system.b()).trace();
  const double scale = (system.b().transpose() * g.y * system.b()).trace() +
                       std::abs((system.b().transpose() * g.z * system.b()).trace());
  NormReport r;
  r.value = checked_sqrt(squared, scale, "H2,tau norm");
  r.method = NormMethod::gramian;
  r.interval = interval;
  return r;
}

NormReport h2tau_norm_quadrature(const LqoSystem& system, const TimeInterval& interval,
                                 int resolution) {
  if (interval.is_infinite()) {
    throw ValidationError("the quadrature oracle needs a finite interval");
  }
  if (resolution < 2) throw ValidationError("quadrature resolution must be at least 2");
  if (resolution % 2 == 1) ++resolution;

  const double t0 = interval.start();
  const double h = (interval.end() - t0) / resolution;
  const auto points = static_cast<std::size_t>(resolution) + 1;
  const std::vector<double> w = simpson_weights(resolution, h);

  // e^{A t_k} B at every node.
  std::vector<Matrix> eb(points);
  for (std::size_t k = 0; k < points; ++k) {
    eb[k] = expm(system.a(), t0 + static_cast<double>(k) * h) * system.b();
  }

  double linear = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    linear += w[k] * (system.c() * eb[k]).squaredNorm();
  }

  double quadratic = 0.0;
  for (const Matrix& m : system.m()) {
    std::vector<Matrix> left(points);
    for (std::size_t k = 0; k < points; ++k) left[k] = eb[k].transpose() * m;
    for (std::size_t i = 0; i < points; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < points; ++j) row += w[j] * (left[i] * eb[j]).squaredNorm();
      quadratic += w[i] * row;
    }
  }

  NormReport r;
  r.value = std::sqrt(linear + quadratic);
  r.method = NormMethod::quadrature;
  r.interval = interval;
  return r;
}

double h2tau_inner(const LqoSystem& full, const LqoSystem& rom, const TimeInterval& interval) {
  const CrossGramianSet g = cross_gramians(full, rom, interval);
  return (full.b().transpose() * g.qt * rom.b()).trace();
}

ErrorDecomposition error_decomposition(const LqoSystem& full, const LqoSystem& rom,
                                       const GramianSet& full_gramians,
                                       const CrossGramianSet& cross) {
  ErrorDecomposition d;
  d.full = (full.b().transpose() * full_gramians.q * full.b()).trace();
  d.inner = (full.b().transpose() * cross.qt * rom.b()).trace();
  d.rom = (rom.b().transpose() * cross.qh * rom.b()).trace();
  return d;
}

NormReport h2tau_error(const LqoSystem& full, const LqoSystem& rom, const TimeInterval& interval) {
  const GramianSet gf = timelimited_gramians(full, interval);
  const CrossGramianSet gc = cross_gramians(full, rom, interval);
  const ErrorDecomposition d = error_decomposition(full, rom, gf, gc);

  NormReport r;
  const double scale = std::abs(d.full) + 2.0 * std::abs(d.inner) + std::abs(d.rom);
  r.value = checked_sqrt(d.full - 2.0 * d.inner + d.rom, scale, "H2,tau error");
  r.method = NormMethod::gramian;
  r.interval = interval;
  r.decomposition = d;
  return r;
}

}  // namespace lqo
