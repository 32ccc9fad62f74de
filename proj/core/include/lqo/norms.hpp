#pragma once

#include <optional>

#include "lqo/gramians.hpp"
#include "lqo/system.hpp"

namespace lqo {

enum class NormMethod { gramian, quadrature };

/// Squared-norm terms of the error expansion
/// ||H - Hrom||^2 = full - 2 * inner + rom.
struct ErrorDecomposition {
  double full = 0.0;
  double inner = 0.0;
  double rom = 0.0;
};

struct NormReport {
  double value = 0.0;
  NormMethod method = NormMethod::gramian;
  TimeInterval interval;
  std::optional<ErrorDecomposition> decomposition;
};

/// sqrt(tr(B^T Q B)) with Q the observability Gramian over the interval.
NormReport h2tau_norm(const LqoSystem& system, const TimeInterval& interval);

/// Same quantity by composite Simpson quadrature of the impulse-response
/// kernels h1(t) = C e^{At} B and h2_i(t1, t2) = B^T e^{A^T t1} M_i e^{A t2} B,
/// the latter over the square [t1, t2]^2. `resolution` is the number of
/// subintervals per axis (bumped to the next even number).
NormReport h2tau_norm_quadrature(const LqoSystem& system, const TimeInterval& interval,
                                 int resolution = 400);

/// tr(B^T Qt Bhat).
double h2tau_inner(const LqoSystem& full, const LqoSystem& rom, const TimeInterval& interval);

NormReport h2tau_error(const LqoSystem& full, const LqoSystem& rom, const TimeInterval& interval);

/// The three-term expansion from precomputed Gramians, so all terms share one
/// CrossGramianSet.
ErrorDecomposition error_decomposition(const LqoSystem& full, const LqoSystem& rom,
                                       const GramianSet& full_gramians,
                                       const CrossGramianSet& cross);

/// sqrt of a squared norm; small negative rounding is clamped, larger
/// negatives (below -1e-12 * scale) mean a solver failure.
double checked_sqrt(double squared, double scale, std::string_view what);

}  // namespace lqo
