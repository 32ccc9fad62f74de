#include "lqo_cli/demo.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "lqo/errors.hpp"
#include "lqo/io.hpp"

namespace lqo::cli {

namespace {

Matrix rows(std::initializer_list<std::initializer_list<double>> data) {
  Matrix m(static_cast<Eigen::Index>(data.size()),
           static_cast<Eigen::Index>(data.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : data) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

LqoSystem example_system() {
  Matrix a = rows({{0, 0, 0, 1, 0, 0},
                   {0, 0, 0, 0, 1, 0},
                   {0, 0, 0, 0, 0, 1},
                   {-5.4545, 4.5455, 0, -0.0545, 0.0455, 0},
                   {10, -21, 11, 0.1, -0.21, 0.11},
                   {0, 5.5, -6.5, 0, 0.055, -0.065}});
  Matrix b = rows({{0}, {0}, {0}, {0.0909}, {0.4}, {-0.5}});
  Matrix c = rows({{2, -2, 3, 0, 0, 0}});
  Matrix m = Matrix::Zero(6, 6);
  m(0, 0) = 0.5;
  m(1, 1) = 0.3;
  return validate(LqoSystem(a, b, c, {m}));
}

LqoSystem example_initial_guess() {
  Matrix a = rows({{-0.0038, -0.8737, 0.0046}, {0.8737, -0.0038, 0.0053}, {0.0054, -0.0060, -0.0353}});
  Matrix b = rows({{0.3518}, {-0.3472}, {-0.2617}});
  Matrix c = rows({{-0.3454, -0.3405, 0.2479}});
  Matrix m = rows({{0.0113, 0.0114, 0.0130}, {0.0114, 0.0116, 0.0132}, {0.0130, 0.0132, 0.0271}});
  return LqoSystem(a, b, c, {m});
}

double OutputComparison::mean_rel_err() const {
  if (times.size() < 2) return rel_err.empty() ? 0.0 : rel_err.front();
  double acc = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    acc += 0.5 * (rel_err[k] + rel_err[k - 1]) * (times[k] - times[k - 1]);
  }
  return acc / (times.back() - times.front());
}

InputSignal make_input(const std::vector<SignalExpr>& exprs, Eigen::Index inputs) {
  if (exprs.empty()) throw ValidationError("no input signal given");
  if (exprs.size() != 1 && static_cast<Eigen::Index>(exprs.size()) != inputs) {
    throw ValidationError("got " + std::to_string(exprs.size()) + " input expressions for " +
                          std::to_string(inputs) + " inputs");
  }
  return [exprs, inputs](double t) {
    Vector u(inputs);
    for (Eigen::Index i = 0; i < inputs; ++i) {
      u(i) = exprs[exprs.size() == 1 ? 0 : static_cast<std::size_t>(i)](t);
    }
    return u;
  };
}

OutputComparison compare_outputs(const LqoSystem& full, const LqoSystem& rom, const InputSignal& u,
                                 const std::vector<double>& grid,
                                 const SimulationOptions& options) {
  require_compatible(full, rom);
  const Trajectory a = simulate(full, u, grid, Vector(), options);
  const Trajectory b = simulate(rom, u, grid, Vector(), options);

  OutputComparison cmp;
  cmp.times = a.times;
  cmp.y_full = a.outputs;
  cmp.y_rom = b.outputs;
  cmp.rel_err.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    const double den = std::max(a.outputs.row(r).norm(), 1e-12);
    cmp.rel_err[k] = (a.outputs.row(r) - b.outputs.row(r)).norm() / den;
  }
  return cmp;
}

void write_comparison_csv(std::ostream& out, const OutputComparison& cmp) {
  const Eigen::Index p = cmp.y_full.cols();
  out << "# rel_err = ||y_full - y_rom||_2 / max(||y_full||_2, 1e-12)\n";
  out << "t";
  for (Eigen::Index i = 1; i <= p; ++i) out << ",y_full_" << i;
  for (Eigen::Index i = 1; i <= p; ++i) out << ",y_rom_" << i;
  out << ",rel_err\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < cmp.times.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    out << cmp.times[k];
    for (Eigen::Index i = 0; i < p; ++i) out << ',' << cmp.y_full(r, i);
    for (Eigen::Index i = 0; i < p; ++i) out << ',' << cmp.y_rom(r, i);
    out << ',' << cmp.rel_err[k] << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const Eigen::Index p = traj.outputs.cols();
  out << "t";
  for (Eigen::Index i = 1; i <= p; ++i) out << ",y_full_" << i;
  out << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << traj.times[k];
    for (Eigen::Index i = 0; i < p; ++i) out << ',' << traj.outputs(static_cast<Eigen::Index>(k), i);
    out << '\n';
  }
}

DemoResult run_demo(const DemoOptions& options) {
  const LqoSystem full = example_system();
  const LqoSystem init = example_initial_guess();
  const TimeInterval interval(0.0, options.t_end);
  const int order = static_cast<int>(init.states());
  const IterationOptions iter{options.tol, options.max_iter};

  DemoResult result;
  result.reports.emplace("bt", bt(full, order));
  result.reports.emplace("tlbt", tlbt(full, order, interval));
  result.reports.emplace("homora", homora(full, init, iter));
  result.reports.emplace("tlhnoia", tlhnoia(full, init, interval, iter));

  const InputSignal u = make_input({parse_signal(options.input)}, full.inputs());
  const std::vector<double> grid = uniform_grid(0.0, options.t_end, options.step);
  SimulationOptions sim;
  sim.max_step = std::min(options.step, 1e-3);

  for (const auto& [name, report] : result.reports) {
    OutputComparison cmp = compare_outputs(full, report.rom, u, grid, sim);
    result.mean_rel_err[name] = cmp.mean_rel_err();
    if (!options.out_dir.empty()) {
      std::filesystem::create_directories(options.out_dir);
      std::ofstream csv(options.out_dir / ("outputs_" + name + ".csv"));
      if (!csv) throw ValidationError("cannot write into '" + options.out_dir.string() + "'");
      write_comparison_csv(csv, cmp);
      write_text_file(options.out_dir / ("report_" + name + ".json"), serialize_report(report));
    }
    result.comparisons.emplace(name, std::move(cmp));
  }
  return result;
}

}  // namespace lqo::cli
