#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lqo/reductors.hpp"
#include "lqo/signal.hpp"
#include "lqo/system.hpp"

namespace lqo::cli {

/// Sixth-order example: three coupled masses with a quadratic output on the
/// first two positions.
LqoSystem example_system();
/// Third-order starting point for the iterative methods.
LqoSystem example_initial_guess();

/// Forced responses of a full model and a ROM on one grid.
struct OutputComparison {
  std::vector<double> times;
  Matrix y_full;
  Matrix y_rom;
  std::vector<double> rel_err;  // ||y - y_rom||_2 / max(||y||_2, 1e-12)

  /// Trapezoidal time average of rel_err.
  double mean_rel_err() const;
};

/// Input from one expression per input channel; a single expression is
/// broadcast to every channel.
InputSignal make_input(const std::vector<SignalExpr>& exprs, Eigen::Index inputs);

OutputComparison compare_outputs(const LqoSystem& full, const LqoSystem& rom, const InputSignal& u,
                                 const std::vector<double>& grid,
                                 const SimulationOptions& options = {});

/// `t,y_full_1..p,y_rom_1..p,rel_err` preceded by a comment line defining
/// rel_err. Values use 17 significant digits.
void write_comparison_csv(std::ostream& out, const OutputComparison& cmp);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

struct DemoOptions {
  double t_end = 0.5;
  double step = 1e-4;
  double tol = 1e-6;
  int max_iter = 200;
  std::string input = "0.01*cos(2*t)";
  /// Empty means no files are written.
  std::filesystem::path out_dir;
};

struct DemoResult {
  std::map<std::string, ReductionReport> reports;  // keyed by method name
  std::map<std::string, double> mean_rel_err;
  std::map<std::string, OutputComparison> comparisons;
};

/// BT, TLBT, HOMORA and TLHNOIA on the example system, then simulation of
/// each ROM against the full model.
DemoResult run_demo(const DemoOptions& options);

}  // namespace lqo::cli
