#pragma once

// Objective, analytic gradients and optimality-condition residuals for the
// time-limited H2 reduction problem. J is the part of ||H - Hrom||^2 that
// depends on the reduced model:
//
//   J = tr(-2 B^T Qt Bhat + Bhat^T Qh Bhat)

#include <string>
#include <vector>

#include "lqo/gramians.hpp"
#include "lqo/projection.hpp"
#include "lqo/system.hpp"

namespace lqo {

/// How the boundary term W is evaluated. `exact` is the Fréchet derivative of
/// e^{Ahat t} in direction V; `printed_integral` is
/// int_0^t e^{Ahat (t - s)} V e^{(Ahat + V) s} ds, which agrees to first order.
enum class FrechetVariant { exact, printed_integral };

std::string to_string(FrechetVariant variant);

struct Residual {
  Matrix matrix;
  double norm = 0.0;   // spectral norm
  double scale = 0.0;  // sum of the spectral norms of the two opposing terms

  double relative() const { return scale > 0.0 ? norm / scale : norm; }
};

/// Infinite-minus-finite horizon differences that make up L_tau.
struct HorizonSplits {
  Matrix p12;  // Pt(inf) - Pt
  Matrix pn;   // Ph(inf) - Ph
  Matrix z12;  // Zbar - Zt
  Matrix zn;   // Zbar_n - Zh
};

struct OptimalityReport {
  TimeInterval interval;
  bool limited = true;  // false for the infinite-horizon conditions
  FrechetVariant variant = FrechetVariant::exact;

  Residual op1;
  std::vector<Residual> op2;  // one per quadratic output
  Residual op3;
  Residual op4;

  /// op1 = petrov_galerkin_term + l_tau.
  Matrix petrov_galerkin_term;
  Matrix l_tau;
  HorizonSplits splits;
};

struct GradientReport {
  double objective = 0.0;
  Matrix grad_a;
  Matrix grad_b;
  Matrix grad_c;
  std::vector<Matrix> grad_m;
};

double objective_j(const LqoSystem& full, const LqoSystem& rom, const TimeInterval& interval);

/// Gradients of J with respect to (Ahat, Bhat, Chat, Mhat_i). Finite
/// intervals only need the Sylvester operators to be nonsingular, so an
/// unstable reduced model is allowed.
GradientReport gradients(const LqoSystem& full, const LqoSystem& rom, const TimeInterval& interval,
                         FrechetVariant variant = FrechetVariant::exact);

/// Necessary conditions for a local minimum of the time-limited error.
OptimalityReport tl_residuals(const LqoSystem& full, const LqoSystem& rom,
                              const TimeInterval& interval,
                              FrechetVariant variant = FrechetVariant::exact);

/// Infinite-horizon conditions; both systems must be Hurwitz.
OptimalityReport h2_residuals(const LqoSystem& full, const LqoSystem& rom);

/// Deviations of the premises under which Ph = I and Yh + 2 Zh = I follow for
/// the choice V = Pt, W = Yt + 2 Zt, plus the deviations of those
/// conclusions. Purely diagnostic.
struct ProjectionPremiseDiagnostic {
  double input_premise = 0.0;      // ||W^T S B - Shat Bhat||
  double output_premise = 0.0;     // ||C S V - Chat Shat||
  std::vector<double> quadratic_premise;  // ||V^T M_i S V - Mhat_i Shat||
  double controllability_conclusion = 0.0;  // ||Ph - I||
  double observability_conclusion = 0.0;    // ||Yh + 2 Zh - I||
};

ProjectionPremiseDiagnostic projection_premise_check(const LqoSystem& full, const LqoSystem& rom,
                                  const ProjectionPair& pair, const TimeInterval& interval);

}  // namespace lqo
