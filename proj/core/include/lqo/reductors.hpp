#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lqo/gramians.hpp"
#include "lqo/optimality.hpp"
#include "lqo/projection.hpp"
#include "lqo/system.hpp"

namespace lqo {

enum class Method { bt, tlbt, homora, tlhnoia };

std::string to_string(Method method);
/// Accepts "bt", "tlbt", "homora", "tlhnoia"; throws ValidationError otherwise.
Method parse_method(std::string_view name);

enum class Termination {
  direct,             // non-iterative method
  converged,          // pole change fell to the tolerance
  max_iterations,
  non_hurwitz_abort,  // HOMORA iterate lost stability; last stable iterate kept
  numerical_abort,    // singular solve during iteration; last iterate kept
};

std::string to_string(Termination termination);

struct IterationOptions {
  double tol = 1e-6;
  int max_iter = 200;
};

struct ReductionReport {
  Method method = Method::bt;
  TimeInterval interval;
  LqoSystem rom;
  ProjectionPair projection;

  int iterations = 0;
  /// Sorted poles of Ahat, starting with the initial guess (iterations + 1
  /// entries for the iterative methods, one for BT/TLBT).
  std::vector<ComplexVector> pole_history;
  std::vector<double> convergence_metric;
  bool converged = false;
  Termination termination = Termination::direct;

  bool rom_hurwitz = true;
  /// Iterations (1-based) whose Ahat was not Hurwitz.
  std::vector<int> non_hurwitz_iterations;
  std::vector<std::string> diagnostics;

  std::optional<HankelSpectrum> hsv;
  std::optional<OptimalityReport> residuals;
};

/// Poles sorted lexicographically by (real, imaginary).
ComplexVector sorted_poles(const Matrix& a);

/// max_i |prev_i - next_i| / max(1, |prev_i|) after sorting both lists
/// lexicographically.
double pole_change(const ComplexVector& prev, const ComplexVector& next);

/// Square-root balanced truncation with the infinite-horizon Gramians.
ReductionReport bt(const LqoSystem& system, int order);

/// Square-root balanced truncation with the Gramians of `interval`. The ROM
/// may be unstable; that is flagged, not treated as an error.
ReductionReport tlbt(const LqoSystem& system, int order, const TimeInterval& interval);

/// Infinite-horizon fixed-point iteration V = Pt, W = K (Pt^T K)^{-1} with
/// K = Yt + 2 Zt.
ReductionReport homora(const LqoSystem& system, const LqoSystem& rom0,
                       const IterationOptions& options = {});

/// Time-limited iteration V = Pt Ph^{-1}, W = (Yt + 2 Zt)(Yh + 2 Zh)^{-1},
/// followed by biorthogonalization and projection, until the poles stagnate.
ReductionReport tlhnoia(const LqoSystem& system, const LqoSystem& rom0,
                        const TimeInterval& interval, const IterationOptions& options = {});

}  // namespace lqo
