#pragma once

// Linear systems with quadratic outputs:
//
//   x'(t) = A x(t) + B u(t)
//   y(t)  = C x(t) + [x(t)^T M_1 x(t), ..., x(t)^T M_p x(t)]^T

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lqo/matfun.hpp"

namespace lqo {

class LqoSystem {
 public:
  LqoSystem() = default;

  /// Checks dimensional consistency and finiteness. Stability is a separate
  /// concern (see validate()), since reduced models may legitimately be
  /// unstable. The M_i are stored verbatim.
  LqoSystem(Matrix a, Matrix b, Matrix c, std::vector<Matrix> m);

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& c() const { return c_; }
  const std::vector<Matrix>& m() const { return m_; }
  const Matrix& m(std::size_t i) const { return m_.at(i); }

  Eigen::Index states() const { return a_.rows(); }
  Eigen::Index inputs() const { return b_.cols(); }
  Eigen::Index outputs() const { return c_.rows(); }

  bool empty() const { return a_.size() == 0; }

 private:
  Matrix a_;
  Matrix b_;
  Matrix c_;
  std::vector<Matrix> m_;
};

/// Full validation: structural checks plus A Hurwitz.
LqoSystem validate(LqoSystem system);

/// Non-fatal findings, e.g. asymmetric quadratic output matrices.
std::vector<std::string> warnings(const LqoSystem& system);

/// Time horizon [start, end]; end may be infinite.
class TimeInterval {
 public:
  static constexpr double kInfinite = std::numeric_limits<double>::infinity();

  TimeInterval() = default;
  TimeInterval(double start, double end);

  static TimeInterval finite(double end) { return {0.0, end}; }
  static TimeInterval infinite() { return {0.0, kInfinite}; }

  double start() const { return start_; }
  double end() const { return end_; }
  bool is_infinite() const { return end_ == kInfinite; }
  bool starts_at_zero() const { return start_ == 0.0; }

 private:
  double start_ = 0.0;
  double end_ = kInfinite;
};

/// y = C x + [x^T M_i x]_i.
Vector eval_output(const LqoSystem& system, const Vector& x);

/// Input signal u(t) in R^m.
using InputSignal = std::function<Vector(double)>;

struct SimulationOptions {
  /// Upper bound on the RK4 step; each grid interval is split into
  /// ceil(dt / max_step) equal substeps.
  double max_step = 1e-3;
};

struct Trajectory {
  std::vector<double> times;
  Matrix states;   // one row per time
  Matrix outputs;  // one row per time, p columns
};

/// Fixed-step classical RK4 on the state equation, sampled on `grid`.
/// An empty x0 means the zero initial state.
Trajectory simulate(const LqoSystem& system, const InputSignal& u, std::span<const double> grid,
                    const Vector& x0 = Vector(), SimulationOptions options = {});

/// Uniform grid start, start + step, ..., up to and including end (within
/// rounding).
std::vector<double> uniform_grid(double start, double end, double step);

/// E = H - Hrom as a single (N + n)-state realization:
/// A_e = diag(A, Ahat), B_e = [B; Bhat], C_e = [C, -Chat], M_e,i = diag(M_i, -Mhat_i).
LqoSystem error_system(const LqoSystem& full, const LqoSystem& rom);

/// Same input and output counts.
void require_compatible(const LqoSystem& full, const LqoSystem& rom);

}  // namespace lqo
