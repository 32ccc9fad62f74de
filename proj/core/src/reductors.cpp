#include "lqo/reductors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "lqo/errors.hpp"

namespace lqo {

namespace {

constexpr double kRcondFloor = 1e-12;

// rhs * m^{-1} through an LU solve of the transposed system.
Matrix right_divide(const Matrix& rhs, const Matrix& m, const std::string& what) {
  Eigen::PartialPivLU<Matrix> lu(m.transpose());
  const double rcond = lu.rcond();
  if (!(rcond > kRcondFloor)) {
    throw NumericalError(what + " is singular to working precision (rcond " +
                             std::to_string(rcond) + ")",
                         what);
  }
  return lu.solve(rhs.transpose()).transpose();
}

void check_order(const LqoSystem& system, int order) {
  if (order < 1 || order > system.states()) {
    throw ValidationError("reduced order must lie in [1, " + std::to_string(system.states()) +
                          "], got " + std::to_string(order));
  }
}

void check_initial_guess(const LqoSystem& system, const LqoSystem& rom0) {
  require_compatible(system, rom0);
  if (rom0.states() > system.states()) {
    throw ValidationError("initial guess has more states than the full model");
  }
  require_hurwitz(rom0.a(), "initial reduced A");
}

ReductionReport balanced(const LqoSystem& system, int order, const TimeInterval& interval,
                         Method method) {
  check_order(system, order);
  const GramianSet g = timelimited_gramians(system, interval);
  const Matrix lp = psd_factor(g.p, "P");
  const Matrix lq = psd_factor(g.q, "Q");

  Eigen::JacobiSVD<Matrix> svd(lq.transpose() * lp, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector sigma = svd.singularValues();
  const double top = sigma.size() > 0 ? sigma(0) : 0.0;
  const Eigen::Index n = order;
  if (!(top > 0.0) || sigma(n - 1) < 1e-12 * top) {
    throw NumericalError("order " + std::to_string(order) +
                             " exceeds the numerical rank of the Hankel spectrum",
                         "sigma_n = " + std::to_string(n > 0 ? sigma(n - 1) : 0.0));
  }

  const Vector scale = sigma.head(n).cwiseSqrt().cwiseInverse();
  ReductionReport r;
  r.method = method;
  r.interval = interval;
  r.projection.v = lp * svd.matrixV().leftCols(n) * scale.asDiagonal();
  r.projection.w = lq * svd.matrixU().leftCols(n) * scale.asDiagonal();
  r.rom = project(system, r.projection);

  HankelSpectrum hsv;
  hsv.sigma.assign(sigma.data(), sigma.data() + sigma.size());
  r.hsv = hsv;

  r.pole_history.push_back(sorted_poles(r.rom.a()));
  r.termination = Termination::direct;
  r.converged = true;
  r.rom_hurwitz = is_hurwitz(r.rom.a());
  if (!r.rom_hurwitz) r.diagnostics.push_back("reduced A is not Hurwitz");

  try {
    r.residuals = interval.is_infinite() ? h2_residuals(system, r.rom)
                                         : tl_residuals(system, r.rom, interval);
  } catch (const Error& e) {
    r.diagnostics.push_back(std::string("residuals unavailable: ") + e.what());
  }
  return r;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::bt: return "bt";
    case Method::tlbt: return "tlbt";
    case Method::homora: return "homora";
    case Method::tlhnoia: return "tlhnoia";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "bt") return Method::bt;
  if (name == "tlbt") return Method::tlbt;
  if (name == "homora") return Method::homora;
  if (name == "tlhnoia") return Method::tlhnoia;
  throw ValidationError("unknown method '" + std::string(name) + "'");
}

std::string to_string(Termination termination) {
  switch (termination) {
    case Termination::direct: return "direct";
    case Termination::converged: return "converged";
    case Termination::max_iterations: return "max_iterations";
    case Termination::non_hurwitz_abort: return "non_hurwitz_abort";
    case Termination::numerical_abort: return "numerical_abort";
  }
  return "unknown";
}

ComplexVector sorted_poles(const Matrix& a) {
  ComplexVector ev = eigenvalues(a);
  std::sort(ev.data(), ev.data() + ev.size(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              if (x.real() != y.real()) return x.real() < y.real();
              return x.imag() < y.imag();
            });
  return ev;
}

double pole_change(const ComplexVector& prev, const ComplexVector& next) {
  if (prev.size() != next.size()) {
    throw ValidationError("pole lists differ in length: " + std::to_string(prev.size()) + " vs " +
                          std::to_string(next.size()));
  }
  auto sorted = [](ComplexVector v) {
    std::sort(v.data(), v.data() + v.size(),
              [](const std::complex<double>& x, const std::complex<double>& y) {
                if (x.real() != y.real()) return x.real() < y.real();
                return x.imag() < y.imag();
              });
    return v;
  };
  const ComplexVector p = sorted(prev);
  const ComplexVector q = sorted(next);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    worst = std::max(worst, std::abs(p(i) - q(i)) / std::max(1.0, std::abs(p(i))));
  }
  return worst;
}

ReductionReport bt(const LqoSystem& system, int order) {
  return balanced(system, order, TimeInterval::infinite(), Method::bt);
}

ReductionReport tlbt(const LqoSystem& system, int order, const TimeInterval& interval) {
  return balanced(system, order, interval, Method::tlbt);
}

ReductionReport homora(const LqoSystem& system, const LqoSystem& rom0,
                       const IterationOptions& options) {
  require_hurwitz(system.a(), "A");
  check_initial_guess(system, rom0);

  ReductionReport r;
  r.method = Method::homora;
  r.interval = TimeInterval::infinite();
  r.rom = rom0;
  r.pole_history.push_back(sorted_poles(rom0.a()));
  r.termination = Termination::max_iterations;

  for (int it = 1; it <= options.max_iter; ++it) {
    LqoSystem next;
    ProjectionPair pair;
    try {
      const CrossGramianSet g = cross_gramians(system, r.rom, TimeInterval::infinite());
      const Matrix k = g.combined_tilde();
      pair.v = g.pt;
      pair.w = right_divide(k, g.pt.transpose() * k, "Pt^T (Yt + 2 Zt)");
      next = project(system, pair);
    } catch (const NumericalError& e) {
      r.termination = Termination::numerical_abort;
      r.diagnostics.push_back("iteration " + std::to_string(it) + ": " + e.what());
      break;
    }
    if (!is_hurwitz(next.a())) {
      r.termination = Termination::non_hurwitz_abort;
      r.non_hurwitz_iterations.push_back(it);
      r.diagnostics.push_back("iteration " + std::to_string(it) +
                              " produced a non-Hurwitz reduced A; returning iterate " +
                              std::to_string(it - 1));
      break;
    }
    const ComplexVector poles = sorted_poles(next.a());
    const double change = pole_change(r.pole_history.back(), poles);
    r.rom = std::move(next);
    r.projection = std::move(pair);
    r.iterations = it;
    r.pole_history.push_back(poles);
    r.convergence_metric.push_back(change);
    if (change <= options.tol) {
      r.converged = true;
      r.termination = Termination::converged;
      break;
    }
  }

  r.rom_hurwitz = is_hurwitz(r.rom.a());
  try {
    r.residuals = h2_residuals(system, r.rom);
  } catch (const Error& e) {
    r.diagnostics.push_back(std::string("residuals unavailable: ") + e.what());
  }
  return r;
}

ReductionReport tlhnoia(const LqoSystem& system, const LqoSystem& rom0,
                        const TimeInterval& interval, const IterationOptions& options) {
  if (interval.is_infinite()) {
    throw ValidationError("tlhnoia needs a finite interval; use homora for the infinite horizon");
  }
  check_initial_guess(system, rom0);

  ReductionReport r;
  r.method = Method::tlhnoia;
  r.interval = interval;
  r.rom = rom0;
  r.pole_history.push_back(sorted_poles(rom0.a()));
  r.termination = Termination::max_iterations;

  for (int it = 1; it <= options.max_iter; ++it) {
    LqoSystem next;
    ProjectionPair pair;
    try {
      const CrossGramianSet g = cross_gramians(system, r.rom, interval);
      const Matrix v = right_divide(g.pt, g.ph, "Ph");
      const Matrix w = right_divide(g.combined_tilde(), g.combined_hat(), "Yh + 2 Zh");
      pair = biorthogonalize(v, w);
      next = project(system, pair);
    } catch (const NumericalError& e) {
      r.termination = Termination::numerical_abort;
      r.diagnostics.push_back("iteration " + std::to_string(it) + ": " + e.what());
      break;
    }
    // Unstable iterates are legitimate on a finite horizon: the time-limited
    // equations only need lambda_i(A) + lambda_j(Ahat) != 0.
    if (!is_hurwitz(next.a())) r.non_hurwitz_iterations.push_back(it);
    const ComplexVector poles = sorted_poles(next.a());
    const double change = pole_change(r.pole_history.back(), poles);
    r.rom = std::move(next);
    r.projection = std::move(pair);
    r.iterations = it;
    r.pole_history.push_back(poles);
    r.convergence_metric.push_back(change);
    if (change <= options.tol) {
      r.converged = true;
      r.termination = Termination::converged;
      break;
    }
  }

  r.rom_hurwitz = is_hurwitz(r.rom.a());
  if (!r.non_hurwitz_iterations.empty()) {
    r.diagnostics.push_back(std::to_string(r.non_hurwitz_iterations.size()) +
                            " iterate(s) had a non-Hurwitz reduced A");
  }
  if (!r.rom_hurwitz) r.diagnostics.push_back("final reduced A is not Hurwitz");
  try {
    r.residuals = tl_residuals(system, r.rom, interval);
  } catch (const Error& e) {
    r.diagnostics.push_back(std::string("residuals unavailable: ") + e.what());
  }
  return r;
}

}  // namespace lqo
